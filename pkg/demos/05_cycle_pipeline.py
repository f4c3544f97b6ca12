"""Cycles of several components: chain reduction, root rescale, closing solve.

For n >= 2 components the edges form a cycle.  All edges but one trivialize
without any small divisor (the dual tree has negative-definite intersection
matrix, so its first cohomology vanishes); the closing edge then absorbs the
accumulated composition, loses its constant to a principal n-th root
rescale, and is solved like a node with the product constant prod(t_e)
controlling the divisors.
"""

import cmath
import math

import numpy as np

import cyclenf as cn

golden = cn.DiophantineAngle.golden()
t = cn.UnitCircleConstant.from_angle(golden).t
N = 5
n = 3

rng = np.random.default_rng(5)
shift = cmath.exp(2j * math.pi * 0.21)
t_edges = [shift, shift, t * shift ** (-2)]  # product is exactly t


def random_edge(scale):
    c = scale * (rng.random((N + 1, N + 1)) - 0.5
                 + 1j * (rng.random((N + 1, N + 1)) - 0.5))
    c[0, 0] = 1.0
    return cn.TruncatedSeries2(c)


data = cn.CycleGluingData(
    t_edges=t_edges, G_edges=[random_edge(0.05) for _ in range(n)]
)
print(f"cycle of {n} components, product constant arg/2pi = "
      f"{cmath.phase(data.t_product) / (2 * math.pi) % 1.0:.6f} (golden)")

chained = cn.normalize_chain(data)
one = cn.TruncatedSeries2.constant(1.0, N)
print("\nafter chain reduction:")
for e, G in enumerate(chained.G_edges):
    dev = cn.max_coeff_diff(G, one)
    print(f"  edge {e}: max |G - 1| = {dev:.2e}"
          + ("  (closing edge, absorbs the rest)" if e == n - 1 else ""))
print(f"  t_product preserved exactly: {chained.t_product == data.t_product}")

result = cn.normalize_cycle(data)
print(f"\nfull cycle normalization residual: {result.residual:.2e}")
print(f"divisors |1 - (prod t)^m|: {[round(d, 4) for d in result.diagnostics['divisors']]}")

# a closing edge with a non-unit constant exercises the root rescale
c = cmath.exp(1j * math.pi / 7.0)
G_cl = cn.TruncatedSeries2.from_monomials([(0, 0, c), (1, 1, 0.05)], N)
data2 = cn.CycleGluingData(
    t_edges=[1.0, 1.0, t], G_edges=[one.copy(), one.copy(), G_cl]
)
result2 = cn.normalize_cycle(data2)
branch = result2.diagnostics["root_branch"]
print(f"\nclosing constant e^(i pi/7): principal 3rd-root branch {branch:.6f}")
print(f"  branch^3 * constant = {branch**3 * c:.12f} (should be 1)")
print(f"  residual: {result2.residual:.2e}")
