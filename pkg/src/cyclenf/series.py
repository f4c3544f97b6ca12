"""Truncated power/Laurent series kernel.

Everything downstream (the cocycle solver, the majorant recursion, the
normal-form pipeline) is exact-shape arithmetic on four containers:

* ``TruncatedSeries1``   -- univariate Taylor polynomial, degree <= N.
* ``TruncatedSeries2``   -- bivariate Taylor box, both exponents <= N.
* ``LaurentPolynomial``  -- finite Laurent expansion c_{-L}..c_{L} on an annulus.
* ``LaurentSeries2``     -- per-order Laurent slices in (z, w1)-type charts.

Coefficients are double-precision complex; all operations are exact
convolutions truncated to the common order.  No operation silently changes
a truncation order, and no NaN/Inf is admitted into a container.

The chart maps used by ``compose_chart`` are fixed once here (shared by the
whole package):

    V+ :  x = z,    y = w1/(t_plus * z)
    V- :  y = 1/z,  x = z * w1 / t_minus
    (S, xi0)  chart:  S = z,   xi0 = w1 / z   (i.e. w1 = S*xi0)
    (T, xiinf) chart: T = 1/z, xiinf = z * w1 (i.e. w1 = T*xiinf)

so a monomial with exponents (a, b) lands in a single (slice, mode) pair and
the z-bandwidth after substitution is bounded by the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BandwidthOverflowError,
    BranchError,
    NotAUnitError,
    SeriesKindError,
)

TOL_UNIT = 1e-8
BRANCH_BALL = 0.5


def _check_finite(arr):
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("non-finite coefficient admitted into a series")


def _as_complex_array(values):
    arr = np.asarray(values, dtype=np.complex128)
    _check_finite(arr)
    return arr


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


@dataclass
class TruncatedSeries1:
    """Taylor polynomial sum_k c_k x^k, k = 0..order."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _as_complex_array(self.coeffs)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")

    @property
    def order(self):
        return self.coeffs.size - 1

    @classmethod
    def zeros(cls, order):
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def from_coeffs(cls, values, order=None):
        arr = _as_complex_array(list(values))
        if order is not None:
            out = np.zeros(order + 1, dtype=np.complex128)
            out[: min(arr.size, order + 1)] = arr[: order + 1]
            arr = out
        return cls(arr)

    def coeff(self, k):
        return complex(self.coeffs[k]) if 0 <= k <= self.order else 0.0j

    def copy(self):
        return TruncatedSeries1(self.coeffs.copy())

    def _common(self, other):
        if not isinstance(other, TruncatedSeries1):
            raise SeriesKindError("expected TruncatedSeries1")
        n = min(self.order, other.order)
        return n

    def __add__(self, other):
        n = self._common(other)
        return TruncatedSeries1(self.coeffs[: n + 1] + other.coeffs[: n + 1])

    def __sub__(self, other):
        n = self._common(other)
        return TruncatedSeries1(self.coeffs[: n + 1] - other.coeffs[: n + 1])

    def __neg__(self):
        return TruncatedSeries1(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries1):
            n = self._common(other)
            full = np.convolve(self.coeffs[: n + 1], other.coeffs[: n + 1])
            return TruncatedSeries1(full[: n + 1])
        return TruncatedSeries1(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __call__(self, x):
        return complex(np.polyval(self.coeffs[::-1], x))

    def disc_sup(self, rho):
        """Coefficient-sum upper bound for the sup on the disc |x| <= rho."""
        powers = rho ** np.arange(self.coeffs.size)
        return float(np.sum(np.abs(self.coeffs) * powers))

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))


# ---------------------------------------------------------------------------
# bivariate box
# ---------------------------------------------------------------------------


@dataclass
class TruncatedSeries2:
    """Bivariate Taylor box coeffs[a, b] ~ X^a Y^b with a, b <= order.

    The variable pair (X, Y) is contextual: (S, xi0) on the plus chart,
    (T, xiinf) on the minus chart, (x, y) near the node.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.array(self.coeffs, dtype=np.complex128)
        _check_finite(self.coeffs)
        if self.coeffs.ndim != 2 or self.coeffs.shape[0] != self.coeffs.shape[1]:
            raise ValueError("coeffs must be a square 2-d array")

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @classmethod
    def zeros(cls, order):
        return cls(np.zeros((order + 1, order + 1), dtype=np.complex128))

    @classmethod
    def constant(cls, value, order):
        out = cls.zeros(order)
        out.coeffs[0, 0] = value
        return out

    @classmethod
    def from_monomials(cls, monomials, order):
        """Build from an iterable of (a, b, value)."""
        out = cls.zeros(order)
        for a, b, value in monomials:
            if not (0 <= a <= order and 0 <= b <= order):
                raise ValueError(f"monomial ({a},{b}) outside truncation box")
            out.coeffs[a, b] += value
        _check_finite(out.coeffs)
        return out

    def coeff(self, a, b):
        n = self.order
        return complex(self.coeffs[a, b]) if 0 <= a <= n and 0 <= b <= n else 0.0j

    def value_at_origin(self):
        return complex(self.coeffs[0, 0])

    def copy(self):
        return TruncatedSeries2(self.coeffs.copy())

    def truncate(self, order):
        out = TruncatedSeries2.zeros(order)
        m = min(order, self.order) + 1
        out.coeffs[:m, :m] = self.coeffs[:m, :m]
        return out

    def _common(self, other):
        if not isinstance(other, TruncatedSeries2):
            raise SeriesKindError("expected TruncatedSeries2")
        return min(self.order, other.order)

    def __add__(self, other):
        n = self._common(other)
        return TruncatedSeries2(self.coeffs[: n + 1, : n + 1] + other.coeffs[: n + 1, : n + 1])

    def __sub__(self, other):
        n = self._common(other)
        return TruncatedSeries2(self.coeffs[: n + 1, : n + 1] - other.coeffs[: n + 1, : n + 1])

    def __neg__(self):
        return TruncatedSeries2(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries2):
            n = self._common(other)
            return TruncatedSeries2(
                _conv2_truncated(self.coeffs[: n + 1, : n + 1], other.coeffs[: n + 1, : n + 1])
            )
        return TruncatedSeries2(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __call__(self, x, y):
        xp = x ** np.arange(self.order + 1)
        yp = y ** np.arange(self.order + 1)
        return complex(xp @ self.coeffs @ yp)

    def derivative_x(self):
        """d/dX, exact, degree drops by one in X (top row padded with zero)."""
        out = np.zeros_like(self.coeffs)
        n = self.order
        mult = np.arange(1, n + 1)[:, None]
        out[:n, :] = self.coeffs[1:, :] * mult
        return TruncatedSeries2(out)

    def derivative_y(self):
        out = np.zeros_like(self.coeffs)
        n = self.order
        mult = np.arange(1, n + 1)[None, :]
        out[:, :n] = self.coeffs[:, 1:] * mult
        return TruncatedSeries2(out)

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))


def _conv2_truncated(x, y):
    # 2-d convolution as one 1-d convolution: rows padded to width 2n-1 so
    # column sums cannot carry between rows.  Exact (direct multiply-add),
    # and exact zeros stay exact zeros.
    n = x.shape[0]
    width = 2 * n - 1
    xf = np.zeros((n, width), dtype=np.complex128)
    yf = np.zeros((n, width), dtype=np.complex128)
    xf[:, :n] = x
    yf[:, :n] = y
    full = np.convolve(xf.ravel(), yf.ravel())
    out = np.zeros(width * n, dtype=np.complex128)
    out[: full.size if full.size < width * n else width * n] = full[: width * n]
    return out.reshape(n, width)[:, :n].copy()


# ---------------------------------------------------------------------------
# Laurent containers
# ---------------------------------------------------------------------------


@dataclass
class LaurentPolynomial:
    """Finite Laurent expansion sum_{k=-L..L} c_k z^k on a fixed annulus."""

    coeffs: np.ndarray
    annulus: tuple = (0.5, 2.0)

    def __post_init__(self):
        self.coeffs = _as_complex_array(self.coeffs)
        if self.coeffs.ndim != 1 or self.coeffs.size % 2 != 1:
            raise ValueError("coeffs must be odd-length (modes -L..L)")
        rho_in, rho_out = self.annulus
        if not (0.0 < rho_in < rho_out):
            raise ValueError("annulus must satisfy 0 < rho_in < rho_out")
        self.annulus = (float(rho_in), float(rho_out))

    @property
    def bandwidth(self):
        return self.coeffs.size // 2

    @classmethod
    def zeros(cls, bandwidth, annulus=(0.5, 2.0)):
        return cls(np.zeros(2 * bandwidth + 1, dtype=np.complex128), annulus)

    @classmethod
    def from_modes(cls, modes, bandwidth, annulus=(0.5, 2.0)):
        out = cls.zeros(bandwidth, annulus)
        for k, value in dict(modes).items():
            out.set_mode(k, value)
        return out

    def mode(self, k):
        L = self.bandwidth
        return complex(self.coeffs[k + L]) if -L <= k <= L else 0.0j

    def set_mode(self, k, value):
        L = self.bandwidth
        if not -L <= k <= L:
            raise BandwidthOverflowError(f"mode {k} outside bandwidth {L}")
        self.coeffs[k + L] = value

    def copy(self):
        return LaurentPolynomial(self.coeffs.copy(), self.annulus)

    def resized(self, bandwidth):
        out = LaurentPolynomial.zeros(bandwidth, self.annulus)
        L, M = self.bandwidth, bandwidth
        lo = min(L, M)
        out.coeffs[M - lo : M + lo + 1] = self.coeffs[L - lo : L + lo + 1]
        if L > M and np.any(self.coeffs[: L - M]) or L > M and np.any(self.coeffs[L + M + 1 :]):
            raise BandwidthOverflowError("nonzero modes dropped during resize")
        return out

    def _common(self, other):
        if not isinstance(other, LaurentPolynomial):
            raise SeriesKindError("expected LaurentPolynomial")
        if self.annulus != other.annulus:
            raise SeriesKindError("annulus mismatch in Laurent arithmetic")

    def __add__(self, other):
        self._common(other)
        L = max(self.bandwidth, other.bandwidth)
        out = LaurentPolynomial.zeros(L, self.annulus)
        for src in (self, other):
            s = src.bandwidth
            out.coeffs[L - s : L + s + 1] += src.coeffs
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LaurentPolynomial(-self.coeffs, self.annulus)

    def __mul__(self, other):
        if isinstance(other, LaurentPolynomial):
            self._common(other)
            full = np.convolve(self.coeffs, other.coeffs)
            return LaurentPolynomial(full, self.annulus)
        return LaurentPolynomial(self.coeffs * complex(other), self.annulus)

    __rmul__ = __mul__

    def __call__(self, z):
        L = self.bandwidth
        return complex(sum(self.coeffs[k + L] * z**k for k in range(-L, L + 1)))

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self, tol=0.0):
        return bool(np.all(np.abs(self.coeffs) <= tol))


def sup_bound(f):
    """Upper bound for sup_annulus |f|: sum_k |c_k| max(rho_in^k, rho_out^k).

    Subadditive, and exact for monomials.
    """
    if not isinstance(f, LaurentPolynomial):
        raise SeriesKindError("sup_bound expects a LaurentPolynomial (or slice)")
    rho_in, rho_out = f.annulus
    L = f.bandwidth
    ks = np.arange(-L, L + 1, dtype=float)
    weights = np.maximum(rho_in**ks, rho_out**ks)
    return float(np.sum(np.abs(f.coeffs) * weights))


@dataclass
class LaurentSeries2:
    """Middle-chart object: per w-order nu a Laurent polynomial in z."""

    slices: list
    annulus: tuple = (0.5, 2.0)

    def __post_init__(self):
        for s in self.slices:
            if not isinstance(s, LaurentPolynomial):
                raise SeriesKindError("slices must be LaurentPolynomials")
            if s.annulus != tuple(self.annulus):
                raise SeriesKindError("inconsistent annulus across slices")

    @property
    def order(self):
        return len(self.slices) - 1

    @classmethod
    def zeros(cls, order, bandwidth=0, annulus=(0.5, 2.0)):
        return cls(
            [LaurentPolynomial.zeros(bandwidth, annulus) for _ in range(order + 1)],
            annulus,
        )

    def slice(self, nu):
        return self.slices[nu]

    def copy(self):
        return LaurentSeries2([s.copy() for s in self.slices], self.annulus)

    def _common(self, other):
        if not isinstance(other, LaurentSeries2):
            raise SeriesKindError("expected LaurentSeries2")
        if tuple(self.annulus) != tuple(other.annulus):
            raise SeriesKindError("annulus mismatch")
        return min(self.order, other.order)

    def __add__(self, other):
        n = self._common(other)
        return LaurentSeries2(
            [self.slices[i] + other.slices[i] for i in range(n + 1)], self.annulus
        )

    def __sub__(self, other):
        n = self._common(other)
        return LaurentSeries2(
            [self.slices[i] - other.slices[i] for i in range(n + 1)], self.annulus
        )

    def __neg__(self):
        return LaurentSeries2([-s for s in self.slices], self.annulus)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries2):
            n = self._common(other)
            out = []
            for nu in range(n + 1):
                acc = None
                for i in range(nu + 1):
                    term = self.slices[i] * other.slices[nu - i]
                    acc = term if acc is None else acc + term
                out.append(acc)
            return LaurentSeries2(out, self.annulus)
        return LaurentSeries2([s * complex(other) for s in self.slices], self.annulus)

    __rmul__ = __mul__

    def max_abs(self):
        return max(s.max_abs() for s in self.slices)


# ---------------------------------------------------------------------------
# unit-series calculus
# ---------------------------------------------------------------------------


def invert_unit(a, tol_unit=TOL_UNIT):
    """Multiplicative inverse of a unit TruncatedSeries2, exact to order N."""
    if not isinstance(a, TruncatedSeries2):
        raise SeriesKindError("invert_unit expects TruncatedSeries2")
    c0 = a.value_at_origin()
    if abs(c0) <= tol_unit:
        raise NotAUnitError(f"constant term {c0!r} below tol_unit={tol_unit}")
    n = a.order
    inv = np.zeros_like(a.coeffs)
    inv[0, 0] = 1.0 / c0
    # graded recursion: coefficient (p, q) depends on strictly smaller boxes
    for tau in range(1, 2 * n + 1):
        for p in range(max(0, tau - n), min(n, tau) + 1):
            q = tau - p
            acc = 0.0j
            sub = a.coeffs[: p + 1, : q + 1] * inv[p::-1, q::-1]
            acc = np.sum(sub) - a.coeffs[0, 0] * inv[p, q]
            inv[p, q] = -acc / c0
    return TruncatedSeries2(inv)


def exp_series(a):
    """exp of a TruncatedSeries2 (any constant term), exact to order N."""
    if not isinstance(a, TruncatedSeries2):
        raise SeriesKindError("exp_series expects TruncatedSeries2")
    n = a.order
    c0 = a.value_at_origin()
    u = a.copy()
    u.coeffs[0, 0] = 0.0
    out = TruncatedSeries2.constant(1.0, n)
    term = TruncatedSeries2.constant(1.0, n)
    # u has no constant term, so u^k vanishes in the box for k > 2N
    for k in range(1, 2 * n + 1):
        term = term * u
        term = term * (1.0 / k)
        out = out + term
        if term.max_abs() == 0.0:
            break
    return np.exp(c0) * out


def log_unit(a, branch_ball=BRANCH_BALL):
    """Principal log of a with a(0,0) in ball(1, branch_ball); log(a)(0,0)=log a(0,0).

    The normal-form pipeline rescales so a(0,0) = 1 exactly, making the
    branch with value 0 at the origin.  ``branch_ball=None`` skips the ball
    check and takes the principal branch at any nonzero constant term
    (used by the chain reduction, whose edge constants are arbitrary units).
    """
    if not isinstance(a, TruncatedSeries2):
        raise SeriesKindError("log_unit expects TruncatedSeries2")
    c0 = a.value_at_origin()
    if abs(c0) <= TOL_UNIT:
        raise BranchError(f"constant term {c0!r} is numerically zero; no logarithm")
    if branch_ball is not None and abs(c0 - 1.0) > branch_ball:
        raise BranchError(
            f"constant term {c0!r} outside ball(1, {branch_ball}); rescale first"
        )
    n = a.order
    u = (1.0 / c0) * a
    u.coeffs[0, 0] = 0.0  # u = a/c0 - 1
    out = TruncatedSeries2.zeros(n)
    term = TruncatedSeries2.constant(1.0, n)
    for k in range(1, 2 * n + 1):
        term = term * u
        out = out + ((-1.0) ** (k + 1) / k) * term
        if term.max_abs() == 0.0:
            break
    out.coeffs[0, 0] = np.log(c0)  # principal branch; 0 when c0 == 1
    return out


def exp_laurent2(a):
    """exp of a LaurentSeries2 whose slice 0 is a pure constant.

    Global functions on the model neighborhood have constant slice-0 terms,
    so this covers every exponentiation the pipeline needs.
    """
    if not isinstance(a, LaurentSeries2):
        raise SeriesKindError("exp_laurent2 expects LaurentSeries2")
    s0 = a.slices[0]
    L0 = s0.bandwidth
    body = s0.coeffs.copy()
    body[L0] = 0.0
    if np.any(body):
        raise BranchError("slice-0 must be constant to exponentiate a middle-chart series")
    c0 = s0.mode(0)
    n = a.order
    u = a.copy()
    u.slices[0] = LaurentPolynomial.zeros(s0.bandwidth, a.annulus)
    out = LaurentSeries2.zeros(n, 0, a.annulus)
    out.slices[0].set_mode(0, 1.0)
    term = out.copy()
    for k in range(1, n + 1):  # u has w-valuation >= 1
        term = term * u
        term = term * (1.0 / k)
        out = out + term
    return np.exp(c0) * out


# ---------------------------------------------------------------------------
# chart substitution
# ---------------------------------------------------------------------------

CHART_V_PLUS = "v_plus"
CHART_V_MINUS = "v_minus"
CHART_FROM_S_XI0 = "from_s_xi0"
CHART_FROM_T_XIINF = "from_t_xiinf"


@dataclass
class ChartMap:
    """One of the fixed chart substitutions (see module docstring)."""

    kind: str
    t: complex = 1.0 + 0.0j

    @classmethod
    def v_plus(cls, t_plus):
        return cls(CHART_V_PLUS, complex(t_plus))

    @classmethod
    def v_minus(cls, t_minus):
        return cls(CHART_V_MINUS, complex(t_minus))

    @classmethod
    def from_s_xi0(cls):
        return cls(CHART_FROM_S_XI0)

    @classmethod
    def from_t_xiinf(cls):
        return cls(CHART_FROM_T_XIINF)

    def monomial_image(self, a, b):
        """(slice, mode, factor) for the image of X^a Y^b."""
        if self.kind == CHART_V_PLUS:
            # x=z, y=w1/(t z):  x^a y^b -> t^-b z^(a-b) w1^b
            return b, a - b, self.t ** (-b)
        if self.kind == CHART_V_MINUS:
            # y=1/z, x=z w1/t:  x^a y^b -> t^-a z^(a-b) w1^a
            return a, a - b, self.t ** (-a)
        if self.kind == CHART_FROM_S_XI0:
            # S=z, xi0=w1/z
            return b, a - b, 1.0 + 0.0j
        if self.kind == CHART_FROM_T_XIINF:
            # T=1/z, xiinf=z w1
            return b, b - a, 1.0 + 0.0j
        raise SeriesKindError(f"unknown chart map {self.kind!r}")


def compose_chart(f, substitution, l_max=None, annulus=(0.5, 2.0)):
    """Monomial-exact re-expansion of a bivariate box into (z, w1)-slices.

    Linear in ``f``; slice nu of the output only receives monomials whose
    image w-order is nu (the w-grading is preserved).  Raises
    ``BandwidthOverflowError`` if any image mode exceeds ``l_max``
    (default: the truncation order of ``f``).
    """
    if not isinstance(f, TruncatedSeries2):
        raise SeriesKindError("compose_chart expects TruncatedSeries2")
    if not isinstance(substitution, ChartMap):
        raise SeriesKindError("substitution must be a ChartMap")
    n = f.order
    if l_max is None:
        l_max = n
    out = LaurentSeries2.zeros(n, l_max, annulus)
    rows, cols = np.nonzero(f.coeffs)
    for a, b in zip(rows, cols):
        nu, k, factor = substitution.monomial_image(int(a), int(b))
        if abs(k) > l_max:
            raise BandwidthOverflowError(
                f"monomial ({a},{b}) maps to mode {k} > L_max={l_max}"
            )
        if nu <= n:
            out.slices[nu].coeffs[k + l_max] += factor * f.coeffs[a, b]
    return out


def max_coeff_diff(a, b):
    """Max coefficient-magnitude difference (shared-kind containers)."""
    if isinstance(a, TruncatedSeries2) and isinstance(b, TruncatedSeries2):
        return (a - b).max_abs()
    if isinstance(a, TruncatedSeries1) and isinstance(b, TruncatedSeries1):
        return (a - b).max_abs()
    if isinstance(a, LaurentPolynomial) and isinstance(b, LaurentPolynomial):
        return (a - b).max_abs()
    if isinstance(a, LaurentSeries2) and isinstance(b, LaurentSeries2):
        return (a - b).max_abs()
    raise SeriesKindError("max_coeff_diff expects matching series kinds")
