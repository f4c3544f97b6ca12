"""Rotation numbers, small divisors, and Diophantine certificates.

The solver only ever divides by |1 - t^n| for finitely many n, so all
guarantees here are of the form "validated for every n <= n_max".  To make
those statements exact we treat the stored double ``theta`` as the rational
number it literally is (every float is p / 2^k) and reduce n*theta mod 1 in
integer arithmetic; no accumulated floating-point drift enters the scan.

A certificate (A, alpha) asserts dist(n*theta, Z) >= A * n^-alpha for all
n >= 1.  ``check_certificate`` verifies it up to n_max and reports the
minimizing n of n^alpha * dist(n*theta, Z); ``certificate_from_cf`` builds
the standard bounded-quotient certificate alpha = 1, A = 1/(B+2) from a
continued-fraction prefix with quotients bounded by B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TOL_RESONANCE = 1e-10
_UNBOUNDED_QUOTIENT = 50


def _theta_as_integer_ratio(theta):
    """Exact (num, den) with den a power of two, 0 < num < den."""
    frac = theta - math.floor(theta)
    if frac == 0.0:
        return 0, 1
    num, den = float(frac).as_integer_ratio()
    return num, den


def continued_fraction(x, depth=32):
    """Partial quotients [a1, a2, ...] of x in (0,1): x = 1/(a1 + 1/(a2 + ...)).

    Exact on the float via integer arithmetic; stops at ``depth`` quotients
    or when the expansion of the underlying rational terminates.
    """
    num, den = _theta_as_integer_ratio(x)
    if num == 0:
        return []
    # x = num/den in (0,1); expand 1/x
    quotients = []
    p, q = den, num
    for _ in range(depth):
        a, r = divmod(p, q)
        quotients.append(int(a))
        if r == 0:
            break
        p, q = q, r
    return quotients


def convergents(cf):
    """Convergents p_k/q_k of [0; a1, a2, ...]."""
    out = []
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for a in cf:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return out


def value_from_cf(cf):
    """Value of the finite continued fraction [0; a1, a2, ...] as a float."""
    if not cf:
        raise ValueError("empty continued fraction")
    p, q = convergents(cf)[-1]
    return p / q


@dataclass
class DiophantineAngle:
    """Rotation number theta in (0,1) with continued-fraction data.

    ``certificate`` is (A, alpha), present only after validation; the
    validation range is recorded in ``certificate_n_max``.
    """

    theta: float
    cf: list = field(default_factory=list)
    certificate: tuple | None = None
    certificate_n_max: int = 0

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0,1)")
        if not self.cf:
            self.cf = continued_fraction(self.theta)

    @classmethod
    def from_theta(cls, theta, cf_depth=32):
        return cls(float(theta), continued_fraction(theta, cf_depth))

    @classmethod
    def from_cf(cls, quotients):
        return cls(value_from_cf(quotients), list(quotients))

    @classmethod
    def golden(cls):
        """theta = (sqrt(5)-1)/2, the golden rotation number, cf [1,1,1,...]."""
        return cls((math.sqrt(5.0) - 1.0) / 2.0, [1] * 40)

    def convergents(self):
        return convergents(self.cf)

    def convergent_residuals(self):
        """|theta - p_k/q_k| for the stored prefix (invariant check)."""
        return [abs(self.theta - p / q) for p, q in self.convergents()]

    def with_certificate(self, A, alpha, n_max):
        report = check_certificate(self, A, alpha, n_max)
        if not report.ok:
            raise ValueError(
                f"certificate (A={A}, alpha={alpha}) fails at n={report.worst_n}"
            )
        self.certificate = (float(A), float(alpha))
        self.certificate_n_max = int(n_max)
        return self


@dataclass
class UnitCircleConstant:
    """t on the unit circle, optionally tagged with its rotation number."""

    t: complex
    theta: DiophantineAngle | None = None

    def __post_init__(self):
        self.t = complex(self.t)
        if abs(abs(self.t) - 1.0) > 1e-12:
            raise ValueError(f"|t| = {abs(self.t)!r} is not 1 within 1e-12")

    @classmethod
    def from_angle(cls, theta):
        if not isinstance(theta, DiophantineAngle):
            theta = DiophantineAngle.from_theta(theta)
        t = complex(math.cos(2.0 * math.pi * theta.theta), math.sin(2.0 * math.pi * theta.theta))
        return cls(t, theta)

    def __complex__(self):
        return self.t


def as_unit(t):
    """Coerce UnitCircleConstant | complex | DiophantineAngle to complex t."""
    if isinstance(t, UnitCircleConstant):
        return t.t
    if isinstance(t, DiophantineAngle):
        return UnitCircleConstant.from_angle(t).t
    return complex(t)


def _dist_to_int_exact(n, num, den):
    """Exact integer pair (r, den): dist(n*theta, Z) = min(r, den-r)/den."""
    r = (n * num) % den
    return min(r, den - r), den


def small_divisor(theta, n):
    """|1 - e^{2 pi i n theta}| = 2 |sin(pi n theta)|, reduced exactly.

    >>> round(small_divisor(0.25, 2), 12)
    2.0
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    th = theta.theta if isinstance(theta, DiophantineAngle) else float(theta)
    num, den = _theta_as_integer_ratio(th)
    r, den = _dist_to_int_exact(int(n), num, den)
    return 2.0 * math.sin(math.pi * (r / den))


@dataclass
class CertificateReport:
    ok: bool
    worst_n: int
    worst_margin: float
    n_max: int
    A: float
    alpha: float
    degenerate: bool = False

    def as_dict(self):
        return {
            "ok": self.ok,
            "worst_n": self.worst_n,
            "worst_margin": self.worst_margin,
            "n_max": self.n_max,
            "A": self.A,
            "alpha": self.alpha,
            "degenerate": self.degenerate,
        }


def check_certificate(theta, A, alpha, n_max):
    """Verify dist(n theta, Z) >= A n^-alpha for all 1 <= n <= n_max.

    Failure is a report, not an exception.  The scan is exact in the float
    theta: n*theta is reduced mod 1 in integer arithmetic.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    th = theta.theta if isinstance(theta, DiophantineAngle) else float(theta)
    num, den = _theta_as_integer_ratio(th)
    A = float(A)
    alpha = float(alpha)
    if A <= 0.0:
        return CertificateReport(True, 0, math.inf, int(n_max), A, alpha, degenerate=True)

    worst_n = 0
    worst_margin = math.inf
    r = 0
    for n in range(1, int(n_max) + 1):
        r = (r + num) % den
        dist = min(r, den - r) / den
        margin = dist * n**alpha
        if margin < worst_margin:
            worst_margin = margin
            worst_n = n
            if margin == 0.0:
                break
    return CertificateReport(worst_margin >= A, worst_n, worst_margin, int(n_max), A, alpha)


@dataclass
class CfCertificate:
    ok: bool
    A: float = 0.0
    alpha: float = 0.0
    quotient_bound: int = 0
    validated_to: int = 0
    reason: str = ""


def certificate_from_cf(cf, depth):
    """Bounded-quotient certificate from a continued-fraction prefix.

    If the first ``depth`` quotients are bounded by B, theta satisfies
    dist(n theta, Z) >= 1/((B+2) n); the certificate (A, alpha) = (1/(B+2), 1)
    is then validated by brute force up to the prefix's last convergent
    denominator.  Quotients above the unbounded-looking threshold return a
    failure indicator instead.
    """
    cf = list(cf)
    if len(cf) < depth:
        raise ValueError(f"cf prefix has {len(cf)} quotients, need depth={depth}")
    prefix = cf[:depth]
    B = max(prefix)
    if B > _UNBOUNDED_QUOTIENT:
        return CfCertificate(False, quotient_bound=B, reason="unbounded-looking partial quotient")
    A = 1.0 / (B + 2.0)
    theta = DiophantineAngle.from_cf(cf)
    q_last = convergents(prefix)[-1][1]
    report = check_certificate(theta, A, 1.0, q_last)
    if not report.ok:
        return CfCertificate(
            False, A=A, alpha=1.0, quotient_bound=B, validated_to=q_last,
            reason=f"brute-force check failed at n={report.worst_n}",
        )
    theta.certificate = (A, 1.0)
    theta.certificate_n_max = q_last
    return CfCertificate(True, A=A, alpha=1.0, quotient_bound=B, validated_to=q_last)
