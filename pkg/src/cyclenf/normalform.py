"""Normalization of gluing data to the standard model.

A neighborhood of the cycle is presented by gluing data: per edge a
constant t on the unit circle and a unit series G with

    F*(T, xi_inf) = (t xi0 / G(S, xi0),  G(S, xi0) S).

Normalizing means finding a global unit H = exp(2 pi i h) on the model
(chart forms H+ in (S, xi0), H1 in (z, w1), H- in (T, xi_inf)) so that the
rescaled coordinates S^ = S H^-1, xi0^ = xi0 H, T^ = T H, xi_inf^ =
xi_inf H^-1 carry the gluing to G == 1.  Equivalently H must solve the
multiplicative cocycle identity  F*(H-) = H+ . G,  i.e. additively

    h- o F  =  h+ + g,        g := (2 pi i)^-1 log G,  g(0,0) = 0.

Globality pins the middle-chart slices c_m(z) of h to Laurent modes
|k| <= m; grading the box monomials S^sigma xi0^alpha by total degree
makes the identity strictly triangular: each box coefficient determines
exactly one new mode.  Modes k != 0 solve divisor-free; each zero mode
divides by 1 - t^m (the small divisor of the a-priori estimate), and for a
cycle of n components the n zero modes per order couple into one n x n
system with determinant controlled by 1 - (prod t)^m.  The sweep is exact
in the truncation box, so the verified conjugacy residual is pure
round-off.

Chains (all edges but the closing one) reduce divisor-free: the dual
tree's intersection matrix is negative definite, first cohomology
vanishes, and positive/nonpositive modes route to the two sides of each
edge by back-substitution.  The closing edge then absorbs the accumulated
composition, its constant is removed by a principal n-th root rescale of
the fiber coordinates (recorded), and the node-style solve runs on the
reduced cycle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .diophantine import TOL_RESONANCE, as_unit
from .errors import BranchError, TorsionError
from .series import (
    LaurentPolynomial,
    LaurentSeries2,
    TruncatedSeries2,
    exp_laurent2,
    exp_series,
    invert_unit,
    log_unit,
)

TWO_PI_I = 2j * math.pi
_MID_ANNULUS = (4.0 * 0.2 / 3.0, 3.0 / (4.0 * 0.2))  # U_1** of the default eps


@dataclass
class NodeGluingData:
    """Gluing data for a rational curve with one node.

    The constructor rescales the defining function so that G(0, 0) = 1
    exactly; the applied scale is recorded.
    """

    t: complex
    G: TruncatedSeries2
    scale: complex = 1.0 + 0.0j

    def __post_init__(self):
        self.t = as_unit(self.t)
        c0 = self.G.value_at_origin()
        if abs(c0) < 1e-8:
            raise BranchError("G(0,0) is numerically zero; cannot rescale to 1")
        if c0 != 1.0:
            self.scale = 1.0 / c0
            self.G = self.scale * self.G
            self.G.coeffs[0, 0] = 1.0
        self.t = complex(self.t)

    @property
    def order(self):
        return self.G.order


@dataclass
class CycleGluingData:
    """Per-edge gluing data for a cycle of n >= 2 rational curves.

    Edge e runs from component e+1 (mod n) into component e; G_edges[e]
    lives in the source chart (S, xi0).  The edge-constant product is
    recorded at construction and reproduced verbatim by every pipeline
    stage.
    """

    t_edges: list
    G_edges: list
    t_product: complex | None = None
    gauges: list | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.t_edges) < 2 or len(self.t_edges) != len(self.G_edges):
            raise ValueError("need n >= 2 edges with one G per edge")
        self.t_edges = [as_unit(t) for t in self.t_edges]
        for G in self.G_edges:
            if abs(G.value_at_origin()) < 1e-8:
                raise ValueError("each G_edge(0,0) must be nonzero")
        if self.t_product is None:
            prod = 1.0 + 0.0j
            for t in self.t_edges:
                prod *= t
            self.t_product = prod

    @property
    def n(self):
        return len(self.t_edges)

    @property
    def order(self):
        return min(G.order for G in self.G_edges)


@dataclass
class NormalFormResult:
    kind: str
    residual: float
    h_plus: TruncatedSeries2 | None = None
    h_mid: LaurentSeries2 | None = None
    h_minus: TruncatedSeries2 | None = None
    H_plus: TruncatedSeries2 | None = None
    H_mid: LaurentSeries2 | None = None
    H_minus: TruncatedSeries2 | None = None
    new_coords: dict = field(default_factory=dict)
    components: list | None = None
    normalized_data: CycleGluingData | None = None
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# elementary series moves
# ---------------------------------------------------------------------------


def _shift_first(series, factor=1.0):
    """Multiply by the first chart variable (S or T)."""
    out = TruncatedSeries2.zeros(series.order)
    out.coeffs[1:, :] = factor * series.coeffs[:-1, :]
    return out


def _shift_second(series, factor=1.0):
    """Multiply by the second chart variable (xi0 or xi_inf)."""
    out = TruncatedSeries2.zeros(series.order)
    out.coeffs[:, 1:] = factor * series.coeffs[:, :-1]
    return out


_TABLE_CACHE = {}


def _pullback_table(t, G):
    """P[a, b] = box coefficients of (t xi0 / G)^a (G S)^b.

    Contracting a (T, xi_inf)-chart series against P realizes composition
    with the edge map, exactly within the box.  Cached per (t, G) so the
    verification pass reuses the normalization pass's table.
    """
    key = (t, G.coeffs.tobytes(), G.order)
    cached = _TABLE_CACHE.get(key)
    if cached is not None:
        return cached
    N = G.order
    Ginv = invert_unit(G)
    A = _shift_second(Ginv, t)  # t * xi0 * G^-1
    B = _shift_first(G)  # S * G
    A_pows = [TruncatedSeries2.constant(1.0, N)]
    B_pows = [TruncatedSeries2.constant(1.0, N)]
    for _ in range(N):
        A_pows.append(A_pows[-1] * A)
        B_pows.append(B_pows[-1] * B)
    P = np.zeros((N + 1, N + 1, N + 1, N + 1), dtype=np.complex128)
    for a in range(N + 1):
        for b in range(N + 1):
            P[a, b] = (A_pows[a] * B_pows[b]).coeffs
    if len(_TABLE_CACHE) > 64:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[key] = P
    return P


def _pullback(series, table):
    return TruncatedSeries2(np.tensordot(series.coeffs, table, axes=([0, 1], [0, 1])))


# ---------------------------------------------------------------------------
# global functions on one model component
# ---------------------------------------------------------------------------


def _theta_plus(c, N):
    """(S, xi0)-chart form: coefficient of S^(m+k) xi0^m is c[m][k]."""
    out = np.zeros((N + 1, N + 1), dtype=np.complex128)
    for m in range(N + 1):
        for idx in range(2 * m + 1):
            a = idx  # a = m + k with k = idx - m
            if a <= N:
                out[a, m] = c[m][idx]
    return TruncatedSeries2(out)


def _theta_minus(c, N):
    """(T, xi_inf)-chart form: coefficient of T^(m-k) xi_inf^m is c[m][k]."""
    out = np.zeros((N + 1, N + 1), dtype=np.complex128)
    for m in range(N + 1):
        for idx in range(2 * m + 1):
            a = 2 * m - idx  # a = m - k
            if a <= N:
                out[a, m] = c[m][idx]
    return TruncatedSeries2(out)


def _theta_mid(c, annulus=_MID_ANNULUS):
    slices = []
    for m, arr in enumerate(c):
        slices.append(LaurentPolynomial(arr.copy(), annulus))
    return LaurentSeries2(slices, annulus)


@dataclass
class _SweepEdge:
    source: int
    target: int
    tc: complex
    table: np.ndarray
    g: np.ndarray  # box coefficients of the additive RHS


def _edge_defect(edge, comps, N):
    pulled = np.tensordot(_theta_minus(comps[edge.target], N).coeffs, edge.table,
                          axes=([0, 1], [0, 1]))
    return pulled - _theta_plus(comps[edge.source], N).coeffs - edge.g


def _conjugacy_sweep(edges, n_comps, N, closed):
    """Total-degree sweep for h- o F = h+ + g over a chain or a cycle.

    Each box coefficient of the defect determines exactly one new Laurent
    mode of the middle-chart slices; zero modes of a closed cycle couple
    into one dense solve per order.  Exact in the box: the returned defect
    is round-off only.
    """
    comps = [[np.zeros(2 * m + 1, dtype=np.complex128) for m in range(N + 1)]
             for _ in range(n_comps)]
    if closed:
        for edge in edges:
            if abs(edge.g[0, 0]) > 1e-9:
                raise BranchError(
                    "closed-cycle solve needs unit edge constants (rescale first)"
                )
    else:
        # constants fold along the chain; the first component is the gauge
        for edge in edges:
            comps[edge.source][0][0] = comps[edge.target][0][0] - edge.g[0, 0]

    for tau in range(1, 2 * N + 1):
        for edge in edges:
            defect = _edge_defect(edge, comps, N)
            for sigma in range(max(0, tau - N), min(N, tau) + 1):
                alpha = tau - sigma
                if alpha > N or alpha == sigma:
                    continue
                k = sigma - alpha
                d = defect[sigma, alpha]
                if k > 0:
                    comps[edge.target][sigma][k + sigma] -= d / edge.tc**alpha
                else:
                    comps[edge.source][alpha][k + alpha] += d
        if tau % 2 == 0:
            sigma = tau // 2
            if 1 <= sigma <= N:
                if closed:
                    A = np.zeros((len(edges), n_comps), dtype=np.complex128)
                    rhs = np.zeros(len(edges), dtype=np.complex128)
                    for i, edge in enumerate(edges):
                        defect = _edge_defect(edge, comps, N)
                        A[i, edge.target] += edge.tc**sigma
                        A[i, edge.source] -= 1.0
                        rhs[i] = -defect[sigma, sigma]
                    delta = np.linalg.solve(A, rhs)
                    for j in range(n_comps):
                        comps[j][sigma][sigma] += delta[j]
                else:
                    for edge in edges:
                        defect = _edge_defect(edge, comps, N)
                        comps[edge.source][sigma][sigma] += defect[sigma, sigma]

    worst = max(float(np.max(np.abs(_edge_defect(edge, comps, N)))) for edge in edges)
    return comps, worst


def _component_gauge(c, N, annulus=_MID_ANNULUS):
    h_plus = _theta_plus(c, N)
    h_minus = _theta_minus(c, N)
    h_mid = _theta_mid(c, annulus)
    return {
        "h_plus": h_plus,
        "h_mid": h_mid,
        "h_minus": h_minus,
        "H_plus": exp_series(TWO_PI_I * h_plus),
        "H_mid": exp_laurent2(TWO_PI_I * h_mid),
        "H_minus": exp_series(TWO_PI_I * h_minus),
    }


def _new_coords(gauge):
    Hp, Hm = gauge["H_plus"], gauge["H_minus"]
    return {
        "S_hat": _shift_first(invert_unit(Hp)),
        "xi0_hat": _shift_second(Hp),
        "T_hat": _shift_first(Hm),
        "xiinf_hat": _shift_second(invert_unit(Hm)),
    }


def _guard_divisors(t, order):
    divisors = []
    for m in range(1, order + 1):
        divisor = abs(1.0 - t**m)
        if divisor < TOL_RESONANCE:
            raise TorsionError(m, divisor)
        divisors.append(divisor)
    return divisors


# ---------------------------------------------------------------------------
# node pipeline
# ---------------------------------------------------------------------------


def normalize_node(data):
    """Coordinate change carrying node gluing data to the standard model."""
    N = data.order
    t = data.t
    divisors = _guard_divisors(t, N)
    g = (1.0 / TWO_PI_I) * log_unit(data.G)
    table = _pullback_table(t, data.G)
    edges = [_SweepEdge(source=0, target=0, tc=t, table=table, g=g.coeffs)]
    comps, sweep_defect = _conjugacy_sweep(edges, 1, N, closed=True)
    gauge = _component_gauge(comps[0], N)
    result = NormalFormResult(
        kind="node",
        residual=math.nan,
        h_plus=gauge["h_plus"],
        h_mid=gauge["h_mid"],
        h_minus=gauge["h_minus"],
        H_plus=gauge["H_plus"],
        H_mid=gauge["H_mid"],
        H_minus=gauge["H_minus"],
        new_coords=_new_coords(gauge),
        diagnostics={
            "divisors": divisors,
            "sweep_defect": sweep_defect,
            "rescale": data.scale,
            "sup_h_mid": gauge["h_mid"].max_abs(),
        },
    )
    result.residual = verify_conjugacy(data, result)
    return result


def verify_conjugacy(data, result):
    """Max box-coefficient defect of the conjugacy and standardness identities.

    Checks F*(H-) = H+ . G in the (S, xi0)-chart, then that the hatted
    gluing is standard: F*(T^) = t xi0^, F*(xi_inf^) = S^.
    """
    G, t = data.G, data.t
    Ginv = invert_unit(G)
    table = _pullback_table(t, G)
    HmF = _pullback(result.H_minus, table)
    res = (HmF - result.H_plus * G).max_abs()
    t_hat_F = _shift_second(Ginv, t) * HmF  # (T o F) (H- o F)
    res = max(res, (t_hat_F - _shift_second(result.H_plus, t)).max_abs())
    xiinf_hat_F = _shift_first(G) * invert_unit(HmF)
    res = max(res, (xiinf_hat_F - _shift_first(invert_unit(result.H_plus))).max_abs())
    return res


def two_form_factor(data):
    """Ratio F* eta / eta for eta = dS ^ d xi0 / (S xi0).

    Equals 1 + (S dG/dS - xi0 dG/dxi0) / G; identically 1 exactly when the
    Euler weights a - b annihilate every coefficient (the standard model,
    and any G in the symmetric monomial S xi0).
    """
    G = data.G if isinstance(data, NodeGluingData) else data
    N = G.order
    a_idx = np.arange(N + 1)[:, None]
    b_idx = np.arange(N + 1)[None, :]
    euler = TruncatedSeries2((a_idx - b_idx) * G.coeffs)
    ratio = TruncatedSeries2.constant(1.0, N) + euler * invert_unit(G)
    return ratio


# ---------------------------------------------------------------------------
# cycle pipeline
# ---------------------------------------------------------------------------


def _edge_for(data, e, g=None):
    G = data.G_edges[e]
    t = data.t_edges[e]
    if g is None:
        g = (1.0 / TWO_PI_I) * log_unit(G, branch_ball=None)
    return _SweepEdge(
        source=(e + 1) % data.n,
        target=e,
        tc=t,
        table=_pullback_table(t, G),
        g=g.coeffs,
    )


def _edge_residual(t, G, H_plus_source, H_minus_target):
    """Residual of one normalized edge (same three checks as the node)."""
    Ginv = invert_unit(G)
    table = _pullback_table(t, G)
    HmF = _pullback(H_minus_target, table)
    res = (HmF - H_plus_source * G).max_abs()
    t_hat_F = _shift_second(Ginv, t) * HmF
    res = max(res, (t_hat_F - _shift_second(H_plus_source, t)).max_abs())
    xiinf_hat_F = _shift_first(G) * invert_unit(HmF)
    res = max(res, (xiinf_hat_F - _shift_first(invert_unit(H_plus_source))).max_abs())
    return res


def normalize_chain(data):
    """Make every non-closing edge standard; the closing edge absorbs the rest.

    The tree solve is divisor-free (negative-definite dual tree): positive
    defect modes route to the target component, the rest to the source.
    Edge constants t are untouched, so the recorded product is preserved
    exactly.
    """
    n = data.n
    N = data.order
    edges = [_edge_for(data, e) for e in range(n - 1)]
    comps, sweep_defect = _conjugacy_sweep(edges, n, N, closed=False)
    gauges = [_component_gauge(c, N) for c in comps]

    # non-closing edges become standard; record the measured deviation
    one = TruncatedSeries2.constant(1.0, N)
    tree_dev = 0.0
    for e in range(n - 1):
        G_new = data.G_edges[e] * gauges[e + 1]["H_plus"] * invert_unit(
            _pullback(gauges[e]["H_minus"], edges[e].table)
        )
        tree_dev = max(tree_dev, (G_new - one).max_abs())

    closing = n - 1
    table_cl = _pullback_table(data.t_edges[closing], data.G_edges[closing])
    G_cl = data.G_edges[closing] * gauges[0]["H_plus"] * invert_unit(
        _pullback(gauges[closing]["H_minus"], table_cl)
    )
    new_edges = [one.copy() for _ in range(n - 1)] + [G_cl]
    out = CycleGluingData(
        t_edges=list(data.t_edges),
        G_edges=new_edges,
        t_product=data.t_product,
        gauges=gauges,
        diagnostics={"tree_defect": sweep_defect, "tree_edge_deviation": tree_dev},
    )
    return out


def normalize_cycle(data):
    """Full cycle pipeline: chain reduction, root rescale, closing solve."""
    n = data.n
    N = data.order
    chained = normalize_chain(data)

    # principal n-th root rescale of the closing constant; t-edges untouched
    closing = n - 1
    c_tot = chained.G_edges[closing].value_at_origin()
    branch = 1.0 + 0.0j
    G_cl = chained.G_edges[closing]
    if abs(c_tot - 1.0) > 1e-13:
        branch = cmath.exp(-cmath.log(c_tot) / n)  # lambda = c_tot^(-1/n), principal
        scaled = G_cl.copy()
        for b in range(N + 1):
            scaled.coeffs[:, b] *= branch ** (n - b)
        scaled.coeffs[0, 0] = 1.0
        G_cl = scaled

    t_prod = data.t_product
    divisors = _guard_divisors(t_prod, N)

    one = TruncatedSeries2.constant(1.0, N)
    reduced = CycleGluingData(
        t_edges=list(data.t_edges),
        G_edges=[one.copy() for _ in range(n - 1)] + [G_cl],
        t_product=data.t_product,
    )
    zero_g = TruncatedSeries2.zeros(N)
    edges = [_edge_for(reduced, e, g=zero_g) for e in range(n - 1)]
    edges.append(_edge_for(reduced, closing))
    comps, sweep_defect = _conjugacy_sweep(edges, n, N, closed=True)
    gauges = [_component_gauge(c, N) for c in comps]

    residual = chained.diagnostics["tree_edge_deviation"]
    for e in range(n):
        residual = max(
            residual,
            _edge_residual(
                reduced.t_edges[e],
                reduced.G_edges[e],
                gauges[(e + 1) % n]["H_plus"],
                gauges[e]["H_minus"],
            ),
        )

    normalized = CycleGluingData(
        t_edges=list(data.t_edges),
        G_edges=[one.copy() for _ in range(n)],
        t_product=data.t_product,
    )
    components = []
    for j in range(n):
        entry = dict(gauges[j])
        entry["new_coords"] = _new_coords(gauges[j])
        components.append(entry)
    return NormalFormResult(
        kind="cycle",
        residual=residual,
        components=components,
        normalized_data=normalized,
        diagnostics={
            "divisors": divisors,
            "sweep_defect": max(sweep_defect, chained.diagnostics["tree_defect"]),
            "root_branch": branch,
            "closing_constant": c_tot,
            "chain_gauges": chained.gauges,
        },
    )
