"""Constructors and calculators around the standard model.

Standard models, the nine-point normal-bundle constant on blown-up plane
cubics, first homology of the Levi-flat mapping torus, Smith normal form,
and a unit-circle orbit-density probe.  Pure functions throughout.
"""

from __future__ import annotations

import bisect
import cmath
import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .diophantine import as_unit, continued_fraction
from .normalform import CycleGluingData, NodeGluingData
from .series import TruncatedSeries2

_DEGREE_SPLITS = {1: (9,), 2: (3, 6), 3: (3, 3, 3)}


def standard_model(t, n_components, order=8):
    """Gluing data of the standard model: G == 1, constants on the closing edge."""
    t = as_unit(t)
    one = TruncatedSeries2.constant(1.0, order)
    if n_components == 1:
        return NodeGluingData(t=t, G=one)
    if n_components < 1:
        raise ValueError("n_components must be >= 1")
    t_edges = [1.0 + 0.0j] * (n_components - 1) + [t]
    return CycleGluingData(
        t_edges=t_edges, G_edges=[one.copy() for _ in range(n_components)]
    )


# ---------------------------------------------------------------------------
# nine points
# ---------------------------------------------------------------------------


@dataclass
class NinePointConfig:
    """Normalized parameters of nine blown-up points on a nodal cubic.

    ``params`` holds the nonzero normalization parameters of the points
    (the plane-cubic parametrization itself is an extension point, not
    modeled here); ``degree_split`` says how the points distribute over the
    components: (9), (3,6) or (3,3,3).
    """

    n_components: int
    params: list
    degree_split: tuple = ()

    def __post_init__(self):
        if self.n_components not in (1, 2, 3):
            raise ValueError("n_components must be 1, 2 or 3")
        self.params = [complex(p) for p in self.params]
        if len(self.params) != 9:
            raise ValueError("exactly nine parameters required")
        if any(p == 0 for p in self.params):
            raise ValueError("parameters must be nonzero")
        if not self.degree_split:
            self.degree_split = _DEGREE_SPLITS[self.n_components]
        if tuple(self.degree_split) != _DEGREE_SPLITS[self.n_components]:
            raise ValueError(
                f"degree split {self.degree_split} inconsistent with "
                f"{self.n_components} component(s)"
            )


@dataclass
class NinePointResult:
    t: complex
    t_inverse: complex
    on_unit_circle: bool
    theta: float | None = None
    cf_prefix: list = field(default_factory=list)
    torsion: bool = False
    torsion_order: int | None = None

    def as_dict(self):
        return {
            "t": [self.t.real, self.t.imag],
            "t_inverse": [self.t_inverse.real, self.t_inverse.imag],
            "on_unit_circle": self.on_unit_circle,
            "theta": self.theta,
            "cf_prefix": list(self.cf_prefix),
            "torsion": self.torsion,
            "torsion_order": self.torsion_order,
        }


def _detect_torsion(theta, q_max=64, tol=1e-9):
    """Smallest q <= q_max with dist(q theta, Z) <= tol, if any."""
    for q in range(1, q_max + 1):
        d = abs(q * theta - round(q * theta))
        if d <= tol:
            return q
    return None


def nine_point_t(config):
    """t = product of the nine normalized parameters.

    The normalization convention only fixes t up to inversion, so the
    report carries both t and 1/t.  Unit-circle results come with the
    rotation number and a continued-fraction prefix; rational angles are
    flagged torsion.
    """
    t = 1.0 + 0.0j
    for p in config.params:
        t *= p
    result = NinePointResult(
        t=t, t_inverse=1.0 / t, on_unit_circle=abs(abs(t) - 1.0) <= 1e-9
    )
    if result.on_unit_circle:
        theta = (cmath.phase(t) / (2.0 * math.pi)) % 1.0
        order = 1 if theta == 0.0 else _detect_torsion(theta)
        if order is not None:
            result.torsion = True
            result.torsion_order = order
        result.theta = theta
        if 0.0 < theta < 1.0:
            result.cf_prefix = continued_fraction(theta, 16)
    return result


def solve_ninth_point(target, params8):
    """The ninth parameter reaching a prescribed t; flags off-circle results."""
    target = complex(target)
    params8 = [complex(p) for p in params8]
    if target == 0 or any(p == 0 for p in params8):
        raise ValueError("target and all eight parameters must be nonzero")
    prod8 = 1.0 + 0.0j
    for p in params8:
        prod8 *= p
    ninth = target / prod8
    return {
        "ninth": ninth,
        "on_unit_circle": abs(abs(ninth) - 1.0) <= 1e-9,
        "modulus": abs(ninth),
    }


# ---------------------------------------------------------------------------
# Smith normal form and mapping-torus homology
# ---------------------------------------------------------------------------


def smith_normal_form(A):
    """U A V = D with U, V unimodular and d_i | d_{i+1}, d_i >= 0.

    Exact integer arithmetic (python ints internally).

    >>> import numpy as np
    >>> U, D, V = smith_normal_form(np.array([[0, 2], [0, 0]]))
    >>> [int(D[i, i]) for i in range(2)]
    [2, 0]
    """
    A = np.asarray(A)
    m, n = A.shape
    work = [[int(A[i, j]) for j in range(n)] for i in range(m)]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        work[i], work[j] = work[j], work[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, k):
        # row_i += k * row_j
        work[i] = [a + k * b for a, b in zip(work[i], work[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, k):
        # col_i += k * col_j
        for row in work:
            row[i] += k * row[j]
        for row in V:
            row[i] += k * row[j]

    def negate_row(i):
        work[i] = [-a for a in work[i]]
        U[i] = [-a for a in U[i]]

    def pivot_at(s):
        best = None
        for i in range(s, m):
            for j in range(s, n):
                if work[i][j] != 0 and (best is None or abs(work[i][j]) < best[0]):
                    best = (abs(work[i][j]), i, j)
        return best

    s = 0
    while s < min(m, n):
        best = pivot_at(s)
        if best is None:
            break
        _, pi, pj = best
        if pi != s:
            swap_rows(s, pi)
        if pj != s:
            swap_cols(s, pj)
        pivot = work[s][s]
        dirty = False
        for i in range(s + 1, m):
            if work[i][s] != 0:
                add_row(i, s, -(work[i][s] // pivot))
                dirty = dirty or work[i][s] != 0
        for j in range(s + 1, n):
            if work[s][j] != 0:
                add_col(j, s, -(work[s][j] // pivot))
                dirty = dirty or work[s][j] != 0
        if dirty:
            continue  # remainders shrank; re-pick the pivot
        bad = None
        for i in range(s + 1, m):
            for j in range(s + 1, n):
                if work[i][j] % work[s][s] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(s, bad, 1)  # drags a non-divisible entry into play
            continue
        if work[s][s] < 0:
            negate_row(s)
        s += 1

    D = np.array(work, dtype=np.int64)
    return np.array(U, dtype=np.int64), D, np.array(V, dtype=np.int64)


@dataclass
class MappingTorusClass:
    """H_1 data of the torus bundle with parabolic monodromy [[1, n], [0, 1]]."""

    n: int
    monodromy: np.ndarray
    betti: int
    torsion: list

    def group_name(self):
        parts = ["Z"] * self.betti + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts)


def h1_mapping_torus(n):
    """H_1 = Z + coker(M - I) for M = [[1, n], [0, 1]].

    Gives (betti, torsion) = (2, [n]) for n >= 2 and (2, []) for n = 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    M = np.array([[1, n], [0, 1]], dtype=np.int64)
    _, D, _ = smith_normal_form(M - np.eye(2, dtype=np.int64))
    diag = [int(D[i, i]) for i in range(2)]
    betti = 1 + sum(1 for d in diag if d == 0)
    torsion = sorted(d for d in diag if d >= 2)
    return MappingTorusClass(n=int(n), monodromy=M, betti=betti, torsion=torsion)


# ---------------------------------------------------------------------------
# Levi-flat level set
# ---------------------------------------------------------------------------


@dataclass
class LeviFlatSample:
    """Sample points (eta, lambda, band) for the level set Phi = r.

    Band nu means the point lies where charts nu and nu+1 of the covering
    both apply: 2 r^-nu < |eta| < 2 r^(-nu-1).  The admissible window for r
    is (delta/R, delta R) when delta, R are supplied.
    """

    r: float
    t: complex
    n: int
    points: list
    delta: float | None = None
    R: float | None = None

    def __post_init__(self):
        if self.r <= 0.0:
            raise ValueError("r must be positive")
        self.t = as_unit(self.t)
        if self.delta is not None and self.R is not None:
            lo, hi = self.delta / self.R, self.delta * self.R
            if not lo < self.r < hi:
                raise ValueError(f"r={self.r} outside the admissible window ({lo}, {hi})")

    @classmethod
    def random(cls, r, t, n, count, seed=0, delta=None, R=None):
        rng = np.random.default_rng(seed)
        points = []
        for _ in range(count):
            nu = int(rng.integers(0, max(n, 1)))
            lo, hi = 2.0 * r ** (-nu), 2.0 * r ** (-nu - 1)
            rad = lo + (hi - lo) * (0.1 + 0.8 * rng.random())
            eta = rad * cmath.exp(2j * math.pi * rng.random())
            lam = cmath.exp(2j * math.pi * rng.random())
            points.append((eta, lam, nu))
        return cls(r=r, t=t, n=n, points=points, delta=delta, R=R)


def _hat_chart(eta, lam, r, nu):
    """(S, xi0) of the covering chart nu at (eta, lambda)."""
    s = r**nu * lam**nu * eta
    xi0 = 1.0 / (r ** (nu - 1) * lam ** (nu - 1) * eta)
    return s, xi0


@dataclass
class GluingCheckReport:
    count: int
    max_transition_defect: float
    max_phi_defect: float
    empty: bool = False

    def as_dict(self):
        return {
            "count": self.count,
            "max_transition_defect": self.max_transition_defect,
            "max_phi_defect": self.max_phi_defect,
            "empty": self.empty,
        }


def hr_gluing_check(sample):
    """Check the level-set parametrization against the standard transitions.

    For each sample point: the chart images of g_nu and g_(nu+1) must agree
    through F (T_nu = xi0_(nu+1), xi_inf_nu = S_(nu+1)), and |S xi0| = r
    along the image.
    """
    if not sample.points:
        return GluingCheckReport(0, 0.0, 0.0, empty=True)
    max_trans = 0.0
    max_phi = 0.0
    for eta, lam, nu in sample.points:
        s_nu, xi0_nu = _hat_chart(eta, lam, sample.r, nu)
        s_next, xi0_next = _hat_chart(eta, lam, sample.r, nu + 1)
        t_nu = 1.0 / s_nu
        xiinf_nu = xi0_nu * s_nu * s_nu
        max_trans = max(max_trans, abs(t_nu - xi0_next), abs(xiinf_nu - s_next))
        max_phi = max(max_phi, abs(abs(s_nu * xi0_nu) - sample.r))
    return GluingCheckReport(len(sample.points), max_trans, max_phi)


# ---------------------------------------------------------------------------
# orbit density
# ---------------------------------------------------------------------------


@dataclass
class OrbitDensityResult:
    dense: bool
    iterations: int
    eps_net: float
    max_gap_chord: float


def orbit_density(t, eps_net, max_iter=100000):
    """First k with {t^j : 1 <= j <= k} an eps_net-net of the circle.

    Chordal metric: a gap of g turns leaves points at chord distance
    2 sin(pi g / 2), so a single point is exactly a 2-net.  Torsion t never
    becomes dense below its gap bound and exhausts ``max_iter``.
    """
    if eps_net <= 0.0:
        raise ValueError("eps_net must be positive")
    t = as_unit(t)
    theta = (cmath.phase(t) / (2.0 * math.pi)) % 1.0
    angles = []  # sorted angles in turns
    live_gaps = set()  # (left, right) pairs currently adjacent
    heap = []  # (-gap_size, left, right), stale entries skipped lazily
    chord = 2.0

    def push_gap(left, right):
        size = (right - left) % 1.0 if left != right else 1.0
        live_gaps.add((left, right))
        heapq.heappush(heap, (-size, left, right))

    current = 0.0
    for k in range(1, int(max_iter) + 1):
        current = (current + theta) % 1.0
        if not angles:
            angles.append(current)
            push_gap(current, current)  # full circle back to itself
        else:
            pos = bisect.bisect_left(angles, current)
            if pos < len(angles) and angles[pos] == current:
                pass  # exact repeat (torsion orbit); gaps unchanged
            else:
                left = angles[pos - 1] if pos > 0 else angles[-1]
                right = angles[pos] if pos < len(angles) else angles[0]
                key = (left, right) if left != right else (left, left)
                live_gaps.discard(key)
                angles.insert(pos, current)
                push_gap(left, current)
                push_gap(current, right)
        while heap and (heap[0][1], heap[0][2]) not in live_gaps:
            heapq.heappop(heap)
        max_gap = -heap[0][0]
        chord = 2.0 * math.sin(math.pi * min(max_gap, 1.0) / 2.0)
        if chord <= eps_net:
            return OrbitDensityResult(True, k, eps_net, chord)
    return OrbitDensityResult(False, int(max_iter), eps_net, chord)
