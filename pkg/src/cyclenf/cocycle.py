"""Order-by-order solver for the additive Cousin-type equations.

Node case.  At each order n in the defining function we match Laurent modes
of the two overlap equations

    t_plus^-n  (p_n(z) + r_n) - a1_n(z) = b_plus,n(z)    (plus band)
    t_minus^-n (q_n(1/z) + r_n) - a1_n(z) = b_minus,n(z) (minus band)

where p_n, q_n vanish at the node and r_n is a constant.  Positive modes of
the minus equation and negative modes of the plus equation force a1
directly; the paired equation then yields the p/q coefficient; the mode-0
pair is a 2x2 system whose determinant t_plus^-n - t_minus^-n carries the
small divisor |1 - (t_plus/t_minus)^n|.  Higher orders see the lower ones
through the correction terms h^+/h^- obtained by re-expanding q_nu(y) and
p_nu(x) with the fixed chart maps (y = w1/(t_plus z), x = z w1/t_minus).

Cycle case.  The same mode-matching runs per edge of the cycle; nonzero
modes back-substitute along the edges, while the 2n mode-0 unknowns per
order (one constant per edge, one a-mode per component) form a dense system
whose determinant is controlled by 1 - (prod t)^n.

The constant K of the a-priori estimate is not computable from its proof
chain, so ``calibrate_K`` measures it: the observed amplification
sup(solution) * |1 - t^n| / sup(rhs) over random unit-sup right-hand sides,
times a safety factor 2.  Every certificate built on it is labelled
"empirical-K".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diophantine import TOL_RESONANCE, as_unit
from .errors import NotExtendableError, TorsionError
from .series import (
    ChartMap,
    LaurentPolynomial,
    TruncatedSeries1,
    TruncatedSeries2,
    compose_chart,
    sup_bound,
)


@dataclass
class DomainGeometry:
    """Radii for the model neighborhood: overlap bands, Cauchy radius R, bound M.

    R must exceed 1/delta, 1/eps and the coordinate-ratio sups; all candidate
    lower bounds are kept in ``r_candidates`` so reports can show which one
    was active.  M > 1 always (clamped).
    """

    eps: float = 0.2
    delta: float = 0.05
    R: float = 0.0
    M: float = 1.0 + 1e-6
    r_candidates: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError("need 0 < eps < 1")
        if self.delta <= 0.0:
            raise ValueError("need delta > 0")
        if self.R == 0.0:
            self.r_candidates = {
                "1/delta": 1.0 / self.delta,
                "1/eps": 1.0 / self.eps,
                "1/(2 eps)": 1.0 / (2.0 * self.eps),
                "2 eps": 2.0 * self.eps,
                # correction-term Cauchy chain: sup Q+_{nu,lam} <= A_nu R^lam
                # needs R >= 1/((5 eps/3)(4 eps/3))
                "correction chain": 9.0 / (20.0 * self.eps**2),
            }
            self.R = 1.1 * max(self.r_candidates.values())
        if self.R <= 1.0:
            raise ValueError("need R > 1")
        self.M = max(self.M, 1.0 + 1e-6)

    @classmethod
    def default(cls, eps=0.2, delta=0.05, sup_rhs=1.0):
        geom = cls(eps=eps, delta=delta)
        geom.M = max(1.1 * sup_rhs, 1.0 + 1e-6)
        return geom

    # overlap bands carrying the right-hand sides
    @property
    def band_plus(self):
        return (self.eps, 2.0 * self.eps)

    @property
    def band_minus(self):
        return (1.0 / (2.0 * self.eps), 1.0 / self.eps)

    # shrunk covering used for all solution sup bounds
    @property
    def u1_dstar(self):
        return (4.0 * self.eps / 3.0, 3.0 / (4.0 * self.eps))

    @property
    def u0_dstar_radius(self):
        return 5.0 * self.eps / 3.0


@dataclass
class CocycleRHS:
    """Per-order Laurent right-hand sides; index nu-1 holds order nu >= 1."""

    bplus: list
    bminus: list

    def __post_init__(self):
        if len(self.bplus) != len(self.bminus):
            raise ValueError("bplus/bminus order mismatch")

    @property
    def order(self):
        return len(self.bplus)

    @classmethod
    def zeros(cls, order, bandwidth, geometry):
        return cls(
            [LaurentPolynomial.zeros(bandwidth, geometry.band_plus) for _ in range(order)],
            [LaurentPolynomial.zeros(bandwidth, geometry.band_minus) for _ in range(order)],
        )

    def scaled(self, factor):
        return CocycleRHS(
            [b * factor for b in self.bplus], [b * factor for b in self.bminus]
        )

    def __add__(self, other):
        return CocycleRHS(
            [a + b for a, b in zip(self.bplus, other.bplus)],
            [a + b for a, b in zip(self.bminus, other.bminus)],
        )

    def max_sup(self):
        return max(
            max(sup_bound(b) for b in self.bplus),
            max(sup_bound(b) for b in self.bminus),
        )


@dataclass
class CocycleSolution:
    """Per-order (p_nu, q_nu, r_nu, a1_nu); p, q vanish at the node exactly."""

    p: list
    q: list
    r: list
    a1: list
    divisors: list = field(default_factory=list)

    @property
    def order(self):
        return len(self.p)

    def order_sups(self, geometry):
        """Per order: sup bounds of a1 (on U1**), p, q (on the 5eps/3 disc), |r|."""
        rho = geometry.u0_dstar_radius
        rows = []
        for nu in range(self.order):
            rows.append(
                {
                    "a1": sup_bound(self.a1[nu]),
                    "p": self.p[nu].disc_sup(rho),
                    "q": self.q[nu].disc_sup(rho),
                    "r": abs(self.r[nu]),
                }
            )
        return rows

    def scaled(self, factor):
        return CocycleSolution(
            [p * factor for p in self.p],
            [q * factor for q in self.q],
            [r * factor for r in self.r],
            [a * factor for a in self.a1],
            list(self.divisors),
        )


def _resonance_guard(t_ratio, n):
    divisor = abs(1.0 - t_ratio**n)
    if divisor < TOL_RESONANCE:
        raise TorsionError(n, divisor)
    return divisor


def solve_order(n, bplus_eff, bminus_eff, t_plus, t_minus, a1_annulus=None):
    """Solve one order of the two-band mode-matching system.

    Returns (p_n, q_n, r_n, a1_n).  The solution is the unique one with
    p_n(0) = q_n(0) = 0; the only division by a small quantity is the
    mode-0 determinant t_plus^-n - t_minus^-n.
    """
    tp = as_unit(t_plus)
    tm = as_unit(t_minus)
    divisor = _resonance_guard(tp / tm, n)
    L = max(bplus_eff.bandwidth, bminus_eff.bandwidth)
    if a1_annulus is None:
        a1_annulus = (0.5, 2.0)
    a1 = LaurentPolynomial.zeros(L, a1_annulus)
    p = TruncatedSeries1.zeros(L)
    q = TruncatedSeries1.zeros(L)
    tp_n = tp**n
    tm_n = tm**n
    for k in range(1, L + 1):
        a1.set_mode(k, -bminus_eff.mode(k))
        p.coeffs[k] = tp_n * (bplus_eff.mode(k) + a1.mode(k))
        a1.set_mode(-k, -bplus_eff.mode(-k))
        q.coeffs[k] = tm_n * (bminus_eff.mode(-k) + a1.mode(-k))
    r = (bplus_eff.mode(0) - bminus_eff.mode(0)) / (tp ** (-n) - tm ** (-n))
    a1.set_mode(0, tp ** (-n) * r - bplus_eff.mode(0))
    return p, q, r, a1, divisor


def correction_terms(m, solution, t_plus, t_minus, geometry, bandwidth=None):
    """(h^+_m, h^-_m) from orders 1..m-1 of ``solution``.

    Re-expansion through the fixed chart maps gives
    Q+_{nu,lam}(z) = q_{nu,lam} (t_plus z)^-lam and
    P-_{nu,lam}(z) = p_{nu,lam} (z/t_minus)^lam, so

        h^+_m = sum_nu t_plus^-nu  Q+_{nu, m-nu},
        h^-_m = sum_nu t_minus^-nu P-_{nu, m-nu}.
    """
    tp = as_unit(t_plus)
    tm = as_unit(t_minus)
    if bandwidth is None:
        bandwidth = max(m, max((s.order for s in solution.p), default=m))
    hplus = LaurentPolynomial.zeros(bandwidth, geometry.band_plus)
    hminus = LaurentPolynomial.zeros(bandwidth, geometry.band_minus)
    for nu in range(1, m):
        lam = m - nu
        q_c = solution.q[nu - 1].coeff(lam)
        p_c = solution.p[nu - 1].coeff(lam)
        if q_c != 0.0:
            hplus.coeffs[hplus.bandwidth - lam] += tp ** (-nu) * q_c * tp ** (-lam)
        if p_c != 0.0:
            hminus.coeffs[hminus.bandwidth + lam] += tm ** (-nu) * p_c * tm ** (-lam)
    return hplus, hminus


def solve_cousin(rhs, geometry, t_plus, t_minus, order=None):
    """Full order-by-order solve; deterministic, linear in the RHS.

    Each order m subtracts the correction terms h^+/h^- built from the
    already-solved orders and calls ``solve_order`` once.
    """
    N = rhs.order if order is None else min(order, rhs.order)
    sol = CocycleSolution([], [], [], [])
    bw = max(b.bandwidth for b in rhs.bplus + rhs.bminus)
    bw = max(bw, N)
    for m in range(1, N + 1):
        hplus, hminus = correction_terms(m, sol, t_plus, t_minus, geometry, bandwidth=bw)
        beff_plus = rhs.bplus[m - 1].resized(bw) - hplus
        beff_minus = rhs.bminus[m - 1].resized(bw) - hminus
        p, q, r, a1, divisor = solve_order(
            m, beff_plus, beff_minus, t_plus, t_minus, a1_annulus=geometry.u1_dstar
        )
        sol.p.append(p)
        sol.q.append(q)
        sol.r.append(r)
        sol.a1.append(a1)
        sol.divisors.append(divisor)
    return sol


def residual_cousin(rhs, solution, t_plus, t_minus, geometry):
    """Max mode-wise defect of the defining equations over all orders."""
    tp = as_unit(t_plus)
    tm = as_unit(t_minus)
    worst = 0.0
    bw = max(b.bandwidth for b in rhs.bplus + rhs.bminus)
    bw = max(bw, solution.order)
    for m in range(1, solution.order + 1):
        hplus, hminus = correction_terms(m, solution, tp, tm, geometry, bandwidth=bw)
        p, q, r, a1 = (
            solution.p[m - 1],
            solution.q[m - 1],
            solution.r[m - 1],
            solution.a1[m - 1],
        )
        for k in range(-bw, bw + 1):
            p_part = p.coeff(k) if k > 0 else (r if k == 0 else 0.0)
            lhs_plus = tp ** (-m) * p_part - a1.mode(k)
            target_plus = rhs.bplus[m - 1].mode(k) - hplus.mode(k)
            worst = max(worst, abs(lhs_plus - target_plus))
            q_part = q.coeff(-k) if k < 0 else (r if k == 0 else 0.0)
            lhs_minus = tm ** (-m) * q_part - a1.mode(k)
            target_minus = rhs.bminus[m - 1].mode(k) - hminus.mode(k)
            worst = max(worst, abs(lhs_minus - target_minus))
    return worst


def order_zero_extension(fplus, fminus, tol=1e-9):
    """Split matching order-0 slices into the node extension (p, q, r).

    Precondition (else ``NotExtendableError``): the order-0 slice of the
    plus side has only modes k >= 0, the minus side only k <= 0, and the
    two mode-0 constants agree.
    """
    s_plus = fplus.slices[0]
    s_minus = fminus.slices[0]
    scale = max(s_plus.max_abs(), s_minus.max_abs(), 1.0)
    for k in range(-s_plus.bandwidth, 0):
        if abs(s_plus.mode(k)) > tol * scale:
            raise NotExtendableError(
                f"plus slice 0 has a negative mode k={k}; no extension across the node"
            )
    for k in range(1, s_minus.bandwidth + 1):
        if abs(s_minus.mode(k)) > tol * scale:
            raise NotExtendableError(
                f"minus slice 0 has a positive mode k={k}; no extension across the node"
            )
    if abs(s_plus.mode(0) - s_minus.mode(0)) > tol * scale:
        raise NotExtendableError("order-0 constants of the two sides disagree")
    L = max(s_plus.bandwidth, s_minus.bandwidth)
    p = TruncatedSeries1.zeros(L)
    q = TruncatedSeries1.zeros(L)
    for k in range(1, L + 1):
        p.coeffs[k] = s_plus.mode(k)
        q.coeffs[k] = s_minus.mode(-k)
    r = s_plus.mode(0)
    return p, q, r


def reduce_to_vanishing(fplus, fminus, t_plus, t_minus, tol=1e-9):
    """Subtract the canonical node extension and return vanishing-order RHS.

    The extension G0(x, y) = p(x) + q(y) + r is re-expanded into both charts
    with the fixed maps; the resulting order-0 slices are exact zeros and the
    slices 1..N become the ``CocycleRHS`` of the vanishing-trace problem.
    """
    tp = as_unit(t_plus)
    tm = as_unit(t_minus)
    p, q, r = order_zero_extension(fplus, fminus, tol=tol)
    N = min(fplus.order, fminus.order)
    L = p.order
    g0 = TruncatedSeries2.zeros(max(N, L))
    for j in range(1, L + 1):
        g0.coeffs[j, 0] += p.coeffs[j]
        g0.coeffs[0, j] += q.coeffs[j]
    g0.coeffs[0, 0] += r
    ext_plus = compose_chart(
        g0, ChartMap.v_plus(tp), l_max=max(fplus.slices[0].bandwidth, L),
        annulus=fplus.annulus,
    )
    ext_minus = compose_chart(
        g0, ChartMap.v_minus(tm), l_max=max(fminus.slices[0].bandwidth, L),
        annulus=fminus.annulus,
    )
    new_plus = fplus - ext_plus
    new_minus = fminus - ext_minus
    # the subtraction cancels the stored slice-0 coefficients exactly
    new_plus.slices[0].coeffs[:] = 0.0
    new_minus.slices[0].coeffs[:] = 0.0
    return CocycleRHS(new_plus.slices[1 : N + 1], new_minus.slices[1 : N + 1])


# ---------------------------------------------------------------------------
# cycle version
# ---------------------------------------------------------------------------


@dataclass
class CycleCocycleSolution:
    """Per component: a[nu][m]; per edge: node data (pL, pR, r)[e][m].

    Edge e joins component e (its "plus" side, t+ = 1, local coordinate
    x_e = 1/z_e) and component e+1 mod n (its "minus" side, t- = t_e,
    x_{e+1} = z_{e+1}).  pL is the function of x_e, pR of x_{e+1}.
    """

    a: list
    pL: list
    pR: list
    r: list
    divisors: list = field(default_factory=list)

    @property
    def n_components(self):
        return len(self.a)

    @property
    def order(self):
        return len(self.r[0]) if self.r else 0


def solve_cousin_cycle(bplus_edges, bminus_edges, t_edges, n_components, order, geometry=None):
    """Cycle-indexed Cousin solver.

    ``bplus_edges[e][m-1]`` is the order-m RHS on the component-e side of
    edge e, ``bminus_edges[e][m-1]`` on the component-(e+1) side.  Nonzero
    Laurent modes back-substitute along the cycle; the 2n mode-0 unknowns
    per order (edge constants r_e and component means) are one dense solve
    whose determinant is controlled by 1 - (prod t_edges)^m.
    """
    n = int(n_components)
    if n < 2:
        raise ValueError("cycle solver needs n_components >= 2")
    if n > 16:
        raise ValueError("mode-0 dense solve supported for n <= 16")
    if len(bplus_edges) != n or len(bminus_edges) != n or len(t_edges) != n:
        raise ValueError("need one RHS pair and one constant per edge")
    if geometry is None:
        geometry = DomainGeometry()
    ts = [as_unit(t) for t in t_edges]
    t_prod = math.prod(ts)
    divisors = []
    for m in range(1, order + 1):
        divisors.append(_resonance_guard(t_prod, m))

    bw = max(
        max(b.bandwidth for b in bplus_edges[e] + bminus_edges[e]) for e in range(n)
    )
    bw = max(bw, order)
    sol = CycleCocycleSolution(
        a=[[] for _ in range(n)],
        pL=[[] for _ in range(n)],
        pR=[[] for _ in range(n)],
        r=[[] for _ in range(n)],
        divisors=divisors,
    )

    for m in range(1, order + 1):
        # corrections from orders < m (per edge, both sides)
        beff_p, beff_m = [], []
        for e in range(n):
            te = ts[e]
            hplus = LaurentPolynomial.zeros(bw, bplus_edges[e][0].annulus)
            hminus = LaurentPolynomial.zeros(bw, bminus_edges[e][0].annulus)
            for mu in range(1, m):
                lam = m - mu
                # pR (function of x_{e+1}) re-expands on the e-side via
                # x_{e+1} = z w / t-:  coefficient * (z/t-)^lam
                c = sol.pR[e][mu - 1].coeff(lam)
                if c != 0.0:
                    hplus.coeffs[bw + lam] += c * te ** (-lam)  # (t+)^-mu = 1
                # pL (function of x_e) re-expands on the (e+1)-side via
                # x_e = w/(t+ z):  coefficient * (t+ z)^-lam, t+ = 1
                c = sol.pL[e][mu - 1].coeff(lam)
                if c != 0.0:
                    hminus.coeffs[bw - lam] += te ** (-mu) * c
            beff_p.append(bplus_edges[e][m - 1].resized(bw) - hplus)
            beff_m.append(bminus_edges[e][m - 1].resized(bw) - hminus)

        # nonzero modes of the component series
        a_m = [LaurentPolynomial.zeros(bw, geometry.u1_dstar) for _ in range(n)]
        for e in range(n):
            for k in range(1, bw + 1):
                a_m[e].set_mode(k, -beff_p[e].mode(k))  # component e, plus side
            s = (e + 1) % n
            for k in range(1, bw + 1):
                a_m[s].set_mode(-k, -beff_m[e].mode(-k))

        # edge node functions
        pL_m, pR_m = [], []
        for e in range(n):
            te = ts[e]
            s = (e + 1) % n
            pl = TruncatedSeries1.zeros(bw)
            pr = TruncatedSeries1.zeros(bw)
            for j in range(1, bw + 1):
                pl.coeffs[j] = beff_p[e].mode(-j) + a_m[e].mode(-j)  # (t+)^m = 1
                pr.coeffs[j] = te**m * (beff_m[e].mode(j) + a_m[s].mode(j))
            pL_m.append(pl)
            pR_m.append(pr)

        # mode-0 dense system: unknowns [r_0..r_{n-1}, abar_0..abar_{n-1}]
        A = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        rhs_vec = np.zeros(2 * n, dtype=np.complex128)
        for e in range(n):
            s = (e + 1) % n
            A[2 * e, e] = 1.0  # (t+)^-m r_e
            A[2 * e, n + e] = -1.0
            rhs_vec[2 * e] = beff_p[e].mode(0)
            A[2 * e + 1, e] = ts[e] ** (-m)
            A[2 * e + 1, n + s] = -1.0
            rhs_vec[2 * e + 1] = beff_m[e].mode(0)
        x = np.linalg.solve(A, rhs_vec)
        for e in range(n):
            a_m[e].set_mode(0, x[n + e])

        for e in range(n):
            sol.a[e].append(a_m[e])
            sol.pL[e].append(pL_m[e])
            sol.pR[e].append(pR_m[e])
            sol.r[e].append(complex(x[e]))
    return sol


def residual_cousin_cycle(bplus_edges, bminus_edges, t_edges, solution, geometry=None):
    """Max defect of the per-edge defining equations, all orders and modes."""
    if geometry is None:
        geometry = DomainGeometry()
    n = solution.n_components
    ts = [as_unit(t) for t in t_edges]
    worst = 0.0
    bw = max(a.bandwidth for comp in solution.a for a in comp)
    for m in range(1, solution.order + 1):
        for e in range(n):
            te = ts[e]
            s = (e + 1) % n
            hplus = np.zeros(2 * bw + 1, dtype=np.complex128)
            hminus = np.zeros(2 * bw + 1, dtype=np.complex128)
            for mu in range(1, m):
                lam = m - mu
                hplus[bw + lam] += solution.pR[e][mu - 1].coeff(lam) * te ** (-lam)
                hminus[bw - lam] += te ** (-mu) * solution.pL[e][mu - 1].coeff(lam)
            for k in range(-bw, bw + 1):
                pl = solution.pL[e][m - 1].coeff(-k) if k < 0 else (
                    solution.r[e][m - 1] if k == 0 else 0.0
                )
                lhs = pl - solution.a[e][m - 1].mode(k)
                target = bplus_edges[e][m - 1].mode(k) - hplus[bw + k]
                worst = max(worst, abs(lhs - target))
                pr = solution.pR[e][m - 1].coeff(k) if k > 0 else (
                    solution.r[e][m - 1] if k == 0 else 0.0
                )
                lhs = te ** (-m) * pr - solution.a[s][m - 1].mode(k)
                target = bminus_edges[e][m - 1].mode(k) - hminus[bw + k]
                worst = max(worst, abs(lhs - target))
    return worst


def calibrate_K(geometry, t_plus, t_minus, trials, order, seed=0):
    """Empirical Lemma-type constant: observed amplification times safety 2.

    For random unit-sup single-order right-hand sides and every order
    n <= ``order``, measures sup(solution) * |1 - t^n| / sup(rhs) with the
    package's U**-sup conventions and returns twice the maximum.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tp = as_unit(t_plus)
    tm = as_unit(t_minus)
    rng = np.random.default_rng(seed)
    bw = max(order, 4)
    worst = 0.0
    rho = geometry.u0_dstar_radius
    for _ in range(trials):
        for n in range(1, order + 1):
            bp = LaurentPolynomial(
                rng.standard_normal(2 * bw + 1) + 1j * rng.standard_normal(2 * bw + 1),
                geometry.band_plus,
            )
            bm = LaurentPolynomial(
                rng.standard_normal(2 * bw + 1) + 1j * rng.standard_normal(2 * bw + 1),
                geometry.band_minus,
            )
            scale = max(sup_bound(bp), sup_bound(bm))
            bp = bp * (1.0 / scale)
            bm = bm * (1.0 / scale)
            p, q, r, a1, divisor = solve_order(
                n, bp, bm, tp, tm, a1_annulus=geometry.u1_dstar
            )
            sol_sup = max(p.disc_sup(rho), q.disc_sup(rho), abs(r), sup_bound(a1))
            worst = max(worst, sol_sup * divisor)
    return 2.0 * worst
