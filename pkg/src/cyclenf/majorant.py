"""Majorant series for the small-divisor recursion.

B(X) = X + sum_{nu>=2} B_nu X^nu is defined coefficientwise by

    sum_{nu>=2} |1 - t^{nu-1}| B_nu X^nu  =  K R M B(X)^2 / (1 - R B(X)),

whose right side has total degree >= 2 in B-factors, so [X^nu] of it uses
only B_1..B_{nu-1} and the recursion is well founded.  A_n := B_{n+1}
dominates the solver's order-n coefficients (sup bounds on the U** radii),
with the factor-3 allowance for the two-variable node extension
p_nu(x) + q_nu(y) + r_nu.

K here is always the empirical constant of ``cocycle.calibrate_K``; every
verdict issued by this module is phrased "dominated under empirical K",
never "proved convergent".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diophantine import TOL_RESONANCE, as_unit
from .errors import TorsionError

EMPIRICAL_K_LABEL = "empirical-K"


@dataclass
class MajorantSeries:
    """Coefficients B[1..N] (B[0] unused, B[1] = 1) plus the build inputs."""

    B: np.ndarray
    K: float
    R: float
    M: float
    t: complex
    radius_estimate: float = math.inf
    radius_window: tuple = (0, 0)
    label: str = EMPIRICAL_K_LABEL
    divisors: list = field(default_factory=list)

    @property
    def order(self):
        return self.B.size - 1

    def A(self, n):
        """A_n = B_{n+1}; +inf past the computed range."""
        return float(self.B[n + 1]) if n + 1 <= self.order else math.inf

    def partial_sum(self, delta, terms=None):
        """sum_{nu<=terms} A_nu delta^nu (the convergence proxy for F_0)."""
        terms = self.order - 1 if terms is None else terms
        return float(
            sum(self.A(nu) * delta**nu for nu in range(1, terms + 1))
        )


def _rhs_coefficient(B, nu, R):
    """[X^nu] of B^2/(1 - R B) using B[1..nu-1] only."""
    b = np.zeros(nu + 1)
    b[1 : min(nu, B.size)] = B[1 : min(nu, B.size)]
    b2 = np.convolve(b, b)[: nu + 1]
    # T = B^2 + R * B * T, solved degree by degree
    T = np.zeros(nu + 1)
    for m in range(2, nu + 1):
        acc = b2[m]
        for j in range(1, m - 1):
            acc += R * b[j] * T[m - j]
        T[m] = acc
    return float(T[nu])


def solve_majorant(K, R, M, theta, order):
    """Solve the majorant functional equation coefficientwise.

    B_1 = 1 and, for nu >= 2,
    B_nu = K R M [X^nu](B^2/(1-RB)) / |1 - t^{nu-1}|.
    """
    if K < 0.0 or R <= 0.0 or M <= 0.0:
        raise ValueError("need K >= 0 and R, M > 0")
    if order < 1:
        raise ValueError("order must be >= 1")
    t = as_unit(theta) if not isinstance(theta, complex) else theta
    B = np.zeros(order + 1)
    B[1] = 1.0
    divisors = []
    for nu in range(2, order + 1):
        divisor = abs(1.0 - t ** (nu - 1))
        if divisor < TOL_RESONANCE:
            raise TorsionError(nu - 1, divisor)
        divisors.append(divisor)
        B[nu] = K * R * M * _rhs_coefficient(B, nu, R) / divisor
    series = MajorantSeries(B=B, K=float(K), R=float(R), M=float(M), t=t, divisors=divisors)
    est, window = radius_estimate(B)
    series.radius_estimate = est
    series.radius_window = window
    return series


def radius_estimate(B, window=None):
    """Cauchy-Hadamard estimate 1/limsup B_nu^(1/nu) over a tail window.

    Returns (estimate, (lo, hi)) where the minimum of B_nu^(-1/nu) was taken
    over nu in [lo, hi].  Small-divisor sequences make pointwise ratio tests
    noisy, hence the windowed min over the last quarter of the coefficients.
    All-zero tails give +inf.
    """
    B = np.asarray(B, dtype=float)
    order = B.size - 1
    if window is None:
        lo = max(2, order - max(4, order // 4) + 1)
    else:
        lo = max(2, order - window + 1)
    hi = order
    tail = B[lo : hi + 1]
    if hi < lo or np.all(tail == 0.0):
        return math.inf, (lo, hi)
    nus = np.arange(lo, hi + 1, dtype=float)
    mask = tail > 0.0
    estimates = tail[mask] ** (-1.0 / nus[mask])
    return float(np.min(estimates)), (lo, hi)


@dataclass
class DominationReport:
    ok: bool
    first_violation_order: int | None
    checked_orders: int
    label: str
    details: list = field(default_factory=list)

    def as_dict(self):
        return {
            "ok": self.ok,
            "first_violation_order": self.first_violation_order,
            "checked_orders": self.checked_orders,
            "label": self.label,
        }


def check_domination(solution, majorant, geometry):
    """Compare solver sup bounds with A_nu (and 3 A_nu for the extension).

    Per order nu the middle-chart coefficient a_{1,nu} must satisfy
    sup <= A_nu on U_1**, and the node extension p+q+r must satisfy the
    triangle bound sup(p)+sup(q)+|r| <= 3 A_nu.  Report-valued: the first
    violating order (if any) is recorded, nothing is raised.
    """
    rows = solution.order_sups(geometry)
    first_violation = None
    details = []
    for nu0, row in enumerate(rows):
        nu = nu0 + 1
        a_bound = majorant.A(nu)
        ext = row["p"] + row["q"] + row["r"]
        ok_a1 = row["a1"] <= a_bound
        ok_ext = ext <= 3.0 * a_bound
        details.append(
            {
                "order": nu,
                "a1_sup": row["a1"],
                "extension_sup": ext,
                "A": a_bound,
                "ok": ok_a1 and ok_ext,
            }
        )
        if first_violation is None and not (ok_a1 and ok_ext):
            first_violation = nu
    return DominationReport(
        ok=first_violation is None,
        first_violation_order=first_violation,
        checked_orders=len(rows),
        label=majorant.label,
        details=details,
    )
