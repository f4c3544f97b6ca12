"""The order-by-order Cousin solver on the node overlap bands.

We manufacture a solution (p_nu, q_nu, r_nu, a_{1,nu}), generate the
two-band right-hand sides through the defining equations, then hand only
the right-hand sides to the solver and watch it recover everything.  The
mode-0 constants r_nu are the only place a small divisor enters.
"""

import numpy as np

import cyclenf as cn

geometry = cn.DomainGeometry()
golden = cn.DiophantineAngle.golden()
t_plus = cn.UnitCircleConstant.from_angle(golden).t
t_minus = 1.0

rng = np.random.default_rng(7)
N = L = 6

truth = cn.CocycleSolution([], [], [], [])
for _ in range(N):
    p = cn.TruncatedSeries1.zeros(L)
    q = cn.TruncatedSeries1.zeros(L)
    p.coeffs[1:] = 0.1 * (rng.standard_normal(L) + 1j * rng.standard_normal(L))
    q.coeffs[1:] = 0.1 * (rng.standard_normal(L) + 1j * rng.standard_normal(L))
    truth.p.append(p)
    truth.q.append(q)
    truth.r.append(0.1 * complex(rng.standard_normal(), rng.standard_normal()))
    truth.a1.append(cn.LaurentPolynomial(
        0.1 * (rng.standard_normal(2 * L + 1) + 1j * rng.standard_normal(2 * L + 1)),
        geometry.u1_dstar,
    ))

# forward-generate the right-hand sides b_plus/b_minus order by order
bplus, bminus = [], []
for m in range(1, N + 1):
    hp, hm = cn.correction_terms(m, truth, t_plus, t_minus, geometry, bandwidth=L)
    bp = cn.LaurentPolynomial.zeros(L, geometry.band_plus)
    bm = cn.LaurentPolynomial.zeros(L, geometry.band_minus)
    for k in range(-L, L + 1):
        p_part = truth.p[m - 1].coeff(k) if k > 0 else (truth.r[m - 1] if k == 0 else 0.0)
        bp.set_mode(k, t_plus ** (-m) * p_part - truth.a1[m - 1].mode(k) + hp.mode(k))
        q_part = truth.q[m - 1].coeff(-k) if k < 0 else (truth.r[m - 1] if k == 0 else 0.0)
        bm.set_mode(k, t_minus ** (-m) * q_part - truth.a1[m - 1].mode(k) + hm.mode(k))
    bplus.append(bp)
    bminus.append(bm)

rhs = cn.CocycleRHS(bplus, bminus)
solution = cn.solve_cousin(rhs, geometry, t_plus, t_minus)

err = 0.0
for m in range(N):
    err = max(err, (solution.p[m] - truth.p[m]).max_abs())
    err = max(err, (solution.q[m] - truth.q[m]).max_abs())
    err = max(err, abs(solution.r[m] - truth.r[m]))
print(f"manufactured solution recovered to {err:.2e}")
print(f"defining-equation residual: "
      f"{cn.residual_cousin(rhs, solution, t_plus, t_minus, geometry):.2e}")

print("\nper-order sup bounds (U** radii) and divisors:")
for m, (row, div) in enumerate(zip(solution.order_sups(geometry), solution.divisors), 1):
    print(f"  order {m}: a1 {row['a1']:.3f}, p {row['p']:.3f}, q {row['q']:.3f}, "
          f"|r| {row['r']:.3f}   divisor |1-t^{m}| = {div:.3f}")
