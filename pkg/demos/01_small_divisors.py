"""Rotation numbers, small divisors, and Diophantine certificates.

The whole solver hinges on dividing by |1 - t^n| once per order.  This
script shows how fast those divisors shrink for the golden rotation number
versus how catastrophically they vanish for a rational angle, and validates
the golden certificate A = 0.38, alpha = 1 by exact integer arithmetic up
to n = 10^6.
"""

import cyclenf as cn

golden = cn.DiophantineAngle.golden()
print(f"theta = {golden.theta!r}")
print(f"continued fraction prefix: {golden.cf[:12]} ...")

print("\nsmall divisors |1 - t^n| along Fibonacci orders:")
for n in (1, 2, 3, 5, 8, 13, 21, 34, 55, 89):
    print(f"  n = {n:3d}:  {cn.small_divisor(golden, n):.6f}")

print("\nthe same for theta = 1/4 (torsion):")
for n in (1, 2, 3, 4):
    print(f"  n = {n}:  {cn.small_divisor(0.25, n):.6f}")

print("\ncertificate check, dist(n theta, Z) >= A / n for all n <= 10^6:")
report = cn.check_certificate(golden, A=0.38, alpha=1.0, n_max=10**6)
print(f"  ok = {report.ok}, worst n = {report.worst_n}, "
      f"worst margin = {report.worst_margin:.10f}")

print("\nbuilding a certificate from bounded partial quotients:")
for cf, name in (([1] * 40, "golden"), ([2] * 30, "sqrt(2)-1")):
    cert = cn.certificate_from_cf(cf, depth=20)
    print(f"  {name}: A = {cert.A:.4f}, alpha = {cert.alpha}, "
          f"validated to n = {cert.validated_to}")

cert = cn.certificate_from_cf([1, 10**6] + [1] * 20, depth=2)
print(f"  huge quotient: ok = {cert.ok} ({cert.reason})")
