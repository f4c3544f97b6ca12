"""Shared fixtures and independent oracle helpers.

The dict-polynomial helpers here are deliberately separate from the package
series classes: acceptance comparisons pit the package against dense linear
solves assembled from these primitives.
"""

import math

import numpy as np
import pytest

import cyclenf as cn

GOLDEN_THETA = (math.sqrt(5.0) - 1.0) / 2.0


@pytest.fixture(scope="session")
def golden_angle():
    return cn.DiophantineAngle.golden()


@pytest.fixture(scope="session")
def golden_t(golden_angle):
    return cn.UnitCircleConstant.from_angle(golden_angle).t


@pytest.fixture(scope="session")
def geometry():
    return cn.DomainGeometry()


def random_series2(rng, order, scale, unit_constant=True):
    coeffs = scale * (
        rng.random((order + 1, order + 1)) - 0.5
        + 1j * (rng.random((order + 1, order + 1)) - 0.5)
    )
    if unit_constant:
        coeffs[0, 0] = 1.0
    return cn.TruncatedSeries2(coeffs)


def random_laurent(rng, bandwidth, annulus, scale=1.0):
    c = scale * (
        rng.standard_normal(2 * bandwidth + 1)
        + 1j * rng.standard_normal(2 * bandwidth + 1)
    )
    return cn.LaurentPolynomial(c, annulus)


def random_rhs(rng, order, bandwidth, geometry, scale=0.1):
    return cn.CocycleRHS(
        [random_laurent(rng, bandwidth, geometry.band_plus, scale) for _ in range(order)],
        [random_laurent(rng, bandwidth, geometry.band_minus, scale) for _ in range(order)],
    )


def unit_sup_rhs(rng, order, bandwidth, geometry):
    bplus, bminus = [], []
    for _ in range(order):
        bp = random_laurent(rng, bandwidth, geometry.band_plus)
        bm = random_laurent(rng, bandwidth, geometry.band_minus)
        s = max(cn.sup_bound(bp), cn.sup_bound(bm))
        bplus.append(bp * (1.0 / s))
        bminus.append(bm * (1.0 / s))
    return cn.CocycleRHS(bplus, bminus)


# ---------------------------------------------------------------------------
# dict-polynomial oracle kit (independent of the package series classes)
# ---------------------------------------------------------------------------


def dmul(x, y, order):
    out = {}
    for (a, b), u in x.items():
        for (c, d), v in y.items():
            if a + c <= order and b + d <= order:
                key = (a + c, b + d)
                out[key] = out.get(key, 0.0) + u * v
    return out


def dinv(x, order):
    """1/x for x with x[(0,0)] = 1 (Neumann series, exact in the box)."""
    u = {k: -v for k, v in x.items()}
    u[(0, 0)] = u.get((0, 0), 0.0) + 1.0
    out = {(0, 0): 1.0 + 0.0j}
    term = {(0, 0): 1.0 + 0.0j}
    for _ in range(2 * order):
        term = dmul(term, u, order)
        if not term:
            break
        for k, v in term.items():
            out[k] = out.get(k, 0.0) + v
    return out


def series2_to_dict(series):
    out = {}
    for a in range(series.order + 1):
        for b in range(series.order + 1):
            v = series.coeff(a, b)
            if v != 0.0:
                out[(a, b)] = v
    return out


def dict_max_diff(x, y):
    keys = set(x) | set(y)
    return max((abs(x.get(k, 0.0) - y.get(k, 0.0)) for k in keys), default=0.0)


# ---------------------------------------------------------------------------
# dense oracles
# ---------------------------------------------------------------------------


def oracle_dense_node(rhs, tp, tm, order, bandwidth):
    """All mode-matching equations for orders <= order as one linear solve.

    Returns a dict {(kind, m, j_or_k): value} with kinds 'p', 'q', 'r', 'a1'.
    """
    N, L = order, bandwidth
    per = 4 * L + 2

    def pidx(m, j):
        return (m - 1) * per + (j - 1)

    def qidx(m, j):
        return (m - 1) * per + L + (j - 1)

    def ridx(m):
        return (m - 1) * per + 2 * L

    def aidx(m, k):
        return (m - 1) * per + 2 * L + 1 + (k + L)

    A = np.zeros((N * per, N * per), dtype=complex)
    b = np.zeros(N * per, dtype=complex)
    row = 0
    for m in range(1, N + 1):
        for k in range(-L, L + 1):
            if k > 0:
                A[row, pidx(m, k)] += tp ** (-m)
            if k == 0:
                A[row, ridx(m)] += tp ** (-m)
            A[row, aidx(m, k)] -= 1.0
            for nu in range(1, m):
                lam = m - nu
                if k == -lam:
                    A[row, qidx(nu, lam)] += tp ** (-nu) * tp ** (-lam)
            b[row] = rhs.bplus[m - 1].mode(k)
            row += 1
        for k in range(-L, L + 1):
            if k < 0:
                A[row, qidx(m, -k)] += tm ** (-m)
            if k == 0:
                A[row, ridx(m)] += tm ** (-m)
            A[row, aidx(m, k)] -= 1.0
            for nu in range(1, m):
                lam = m - nu
                if k == lam:
                    A[row, pidx(nu, lam)] += tm ** (-nu) * tm ** (-lam)
            b[row] = rhs.bminus[m - 1].mode(k)
            row += 1
    x = np.linalg.solve(A, b)
    out = {}
    for m in range(1, N + 1):
        for j in range(1, L + 1):
            out[("p", m, j)] = x[pidx(m, j)]
            out[("q", m, j)] = x[qidx(m, j)]
        out[("r", m, 0)] = x[ridx(m)]
        for k in range(-L, L + 1):
            out[("a1", m, k)] = x[aidx(m, k)]
    return out


def oracle_dense_cycle(bplus_edges, bminus_edges, ts, n, order, bandwidth):
    """Dense assembly of the cycle system; same conventions as the solver."""
    N, L = order, bandwidth
    perE = 2 * L + 1
    perC = 2 * L + 1

    def pLi(e, m, j):
        return ((m - 1) * n + e) * perE + (j - 1)

    def pRi(e, m, j):
        return ((m - 1) * n + e) * perE + L + (j - 1)

    def ri(e, m):
        return ((m - 1) * n + e) * perE + 2 * L

    base = N * n * perE

    def ai(c, m, k):
        return base + ((m - 1) * n + c) * perC + (k + L)

    size = N * n * (perE + perC)
    A = np.zeros((size, size), dtype=complex)
    b = np.zeros(size, dtype=complex)
    row = 0
    for m in range(1, N + 1):
        for e in range(n):
            te = ts[e]
            s = (e + 1) % n
            for k in range(-L, L + 1):
                if k < 0:
                    A[row, pLi(e, m, -k)] += 1.0
                if k == 0:
                    A[row, ri(e, m)] += 1.0
                A[row, ai(e, m, k)] -= 1.0
                for mu in range(1, m):
                    lam = m - mu
                    if k == lam:
                        A[row, pRi(e, mu, lam)] += te ** (-lam)
                b[row] = bplus_edges[e][m - 1].mode(k)
                row += 1
            for k in range(-L, L + 1):
                if k > 0:
                    A[row, pRi(e, m, k)] += te ** (-m)
                if k == 0:
                    A[row, ri(e, m)] += te ** (-m)
                A[row, ai(s, m, k)] -= 1.0
                for mu in range(1, m):
                    lam = m - mu
                    if k == -lam:
                        A[row, pLi(e, mu, lam)] += te ** (-mu)
                b[row] = bminus_edges[e][m - 1].mode(k)
                row += 1
    x = np.linalg.solve(A, b)
    out = {}
    for m in range(1, N + 1):
        for e in range(n):
            for j in range(1, L + 1):
                out[("pL", e, m, j)] = x[pLi(e, m, j)]
                out[("pR", e, m, j)] = x[pRi(e, m, j)]
            out[("r", e, m, 0)] = x[ri(e, m)]
            for k in range(-L, L + 1):
                out[("a", e, m, k)] = x[ai(e, m, k)]
    return out


def oracle_normalize_node(t, g_dict, order):
    """Dense linear solve of the multiplicative cocycle identity H-oF = H+ G.

    Unknowns are the global-unit middle-chart modes C[m][k] (|k| <= m) with
    C[0][0] = 1; equations are the box coefficients of H- o F - H+ G.
    """
    N = order
    g_inv = dinv(g_dict, N)
    g_pow = {0: {(0, 0): 1.0 + 0.0j}}
    for k in range(1, N + 1):
        g_pow[k] = dmul(g_pow[k - 1], g_dict, N)
        g_pow[-k] = dmul(g_pow[-(k - 1)], g_inv, N)

    unknowns = [(m, k) for m in range(N + 1) for k in range(-m, m + 1) if (m, k) != (0, 0)]
    index = {u: i for i, u in enumerate(unknowns)}
    eqs = [(s, a) for s in range(N + 1) for a in range(N + 1) if (s, a) != (0, 0)]
    eqi = {e: i for i, e in enumerate(eqs)}
    A = np.zeros((len(eqs), len(unknowns)), dtype=complex)
    rhs = np.zeros(len(eqs), dtype=complex)

    def stamp(m, k, column):
        a_exp, b_exp = m - k, m  # (T, xi_inf) exponents of the minus chart
        if 0 <= a_exp <= N:
            for (gs, ga), gv in g_pow[b_exp - a_exp].items():
                s, a = b_exp + gs, a_exp + ga
                if s <= N and a <= N and (s, a) != (0, 0):
                    A[eqi[(s, a)], column] += (t**a_exp) * gv
        a_exp, b_exp = m + k, m  # (S, xi0) exponents of the plus chart
        if 0 <= a_exp <= N:
            for (gs, ga), gv in g_dict.items():
                s, a = a_exp + gs, b_exp + ga
                if s <= N and a <= N and (s, a) != (0, 0):
                    A[eqi[(s, a)], column] -= gv

    for (m, k), i in index.items():
        stamp(m, k, i)
    for (gs, ga), gv in g_dict.items():  # fixed C[0][0] = 1, moved to the RHS
        if (gs, ga) != (0, 0):
            rhs[eqi[(gs, ga)]] += gv
    x = np.linalg.solve(A, rhs)
    C = {(0, 0): 1.0 + 0.0j}
    for u, i in index.items():
        C[u] = x[i]
    return C


def oracle_two_form(g_dict, t, order):
    """F* eta / eta via the 2x2 Jacobian of (t xi0/G, G S): -det(J)/t.

    The shifted maps are held in an order+1 box so the derivatives feeding
    the determinant are exact on the whole comparison box.
    """
    N = order
    pad = N + 1
    g_inv = dinv(g_dict, N)

    def d_s(x):
        return {(a - 1, b): a * v for (a, b), v in x.items() if a >= 1}

    def d_xi(x):
        return {(a, b - 1): b * v for (a, b), v in x.items() if b >= 1}

    def shift(x, da, db):
        return {
            (a + da, b + db): v
            for (a, b), v in x.items()
            if a + da <= pad and b + db <= pad
        }

    t_of_f = shift({k: t * v for k, v in g_inv.items()}, 0, 1)
    xi_of_f = shift(dict(g_dict), 1, 0)
    det = dmul(d_s(t_of_f), d_xi(xi_of_f), N)
    for k, v in dmul(d_xi(t_of_f), d_s(xi_of_f), N).items():
        det[k] = det.get(k, 0.0) - v
    return {k: -v / t for k, v in det.items()}


def mid_slices_match(result_H_mid, oracle_C, order):
    err = 0.0
    for m in range(order + 1):
        sl = result_H_mid.slices[m]
        for k in range(-m, m + 1):
            err = max(err, abs(sl.mode(k) - oracle_C[(m, k)]))
    return err
