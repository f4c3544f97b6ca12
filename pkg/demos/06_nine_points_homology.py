"""The surrounding geometry: nine points, mapping-torus homology, level sets.

Blowing up nine points on a nodal plane cubic produces a surface where the
normal-bundle constant of the transformed curve is the product of the nine
normalized point parameters; every target constant is reachable by choosing
the ninth point.  The boundary level sets Phi = r are Levi-flat mapping
tori of T^2 with parabolic monodromy [[1, n], [0, 1]] whose first homology
Z + Z + Z/n distinguishes them from the 3-torus.
"""

import cmath
import math

import cyclenf as cn

golden = cn.DiophantineAngle.golden()

print("nine points, all parameters e^(2 pi i theta/9):")
params = [cmath.exp(2j * math.pi * golden.theta / 9.0)] * 9
res = cn.nine_point_t(cn.NinePointConfig(n_components=3, params=params))
print(f"  t = {res.t:.6f}, 1/t = {res.t_inverse:.6f}")
print(f"  rotation number {res.theta:.10f}, cf prefix {res.cf_prefix[:8]}")
print(f"  torsion: {res.torsion}")

print("\nhitting a prescribed constant with the ninth point:")
eight = [cmath.exp(2j * math.pi * 0.07)] * 8
target = cmath.exp(2j * math.pi * golden.theta)
out = cn.solve_ninth_point(target, eight)
print(f"  ninth parameter: {out['ninth']:.6f} (|.| = {out['modulus']:.6f})")

print("\nfirst homology of the mapping torus T^2_(g_n):")
for n in range(1, 8):
    cls = cn.h1_mapping_torus(n)
    print(f"  n = {n}: {cls.group_name()}")
print("  (H1(T^3) = Z + Z + Z: never matches for n >= 2)")

print("\nLevi-flat level set |S xi0| = r as a quotient of C* x U(1):")
t = cn.UnitCircleConstant.from_angle(golden).t
sample = cn.LeviFlatSample.random(r=0.05, t=t, n=2, count=1000, seed=0)
report = cn.hr_gluing_check(sample)
print(f"  {report.count} samples: transition defect {report.max_transition_defect:.2e}, "
      f"|S xi0| - r defect {report.max_phi_defect:.2e}")

print("\norbit density of t on the circle (why leaves are dense):")
for eps in (0.5, 0.1, 0.05, 0.01):
    r = cn.orbit_density(t, eps)
    print(f"  eps = {eps}: first {eps}-net after k = {r.iterations} steps")
r4 = cn.orbit_density(1j, 0.1, max_iter=2000)
print(f"  torsion t = i, eps = 0.1: dense = {r4.dense} after {r4.iterations} steps")
