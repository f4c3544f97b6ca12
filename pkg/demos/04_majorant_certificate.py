"""Convergence certification by majorant series.

The estimate chain bounds every solver coefficient by the coefficients of
the series B(X) solving

    sum |1 - t^(nu-1)| B_nu X^nu = K R M B^2 / (1 - R B),

so a positive radius of convergence for B certifies that the formal
coordinate change converges on a polydisc.  The constant K is calibrated
empirically (the proof's constant chain is not computable), so the verdict
is always "dominated under empirical K", never "proved convergent".
"""

import numpy as np

import cyclenf as cn

geometry = cn.DomainGeometry()
golden = cn.DiophantineAngle.golden()
t = cn.UnitCircleConstant.from_angle(golden).t

print(f"domain geometry: eps = {geometry.eps}, delta = {geometry.delta}, "
      f"R = {geometry.R}, M = {geometry.M}")
print(f"R candidate lower bounds: { {k: round(v, 3) for k, v in geometry.r_candidates.items()} }")

K = cn.calibrate_K(geometry, t, 1.0, trials=40, order=12, seed=0)
print(f"\nempirical K (40 trials, orders <= 12, safety factor 2): {K:.4f}")

maj = cn.solve_majorant(K, geometry.R, 1.1, t, 64)
print(f"B_2..B_6: {[f'{b:.4g}' for b in maj.B[2:7]]}")
print(f"radius estimate {maj.radius_estimate:.5f} over tail window {maj.radius_window}")
print(f"label: {maj.label}")

delta = 0.5 * maj.radius_estimate
tail = abs(maj.partial_sum(delta, 63) - maj.partial_sum(delta, 48))
print(f"\ndelta-contract at delta = {delta:.5f}: partial-sum tail (orders 49..63) = {tail:.2e}")

print("\ndomination check on random unit-sup right-hand sides:")
rng = np.random.default_rng(1)
passed = 0
trials = 50
for _ in range(trials):
    bplus, bminus = [], []
    for _ in range(12):
        bp = cn.LaurentPolynomial(
            rng.standard_normal(25) + 1j * rng.standard_normal(25), geometry.band_plus)
        bm = cn.LaurentPolynomial(
            rng.standard_normal(25) + 1j * rng.standard_normal(25), geometry.band_minus)
        s = max(cn.sup_bound(bp), cn.sup_bound(bm))
        bplus.append(bp * (1 / s))
        bminus.append(bm * (1 / s))
    rhs = cn.CocycleRHS(bplus, bminus)
    sol = cn.solve_cousin(rhs, geometry, t, 1.0)
    report = cn.check_domination(sol, cn.solve_majorant(K, geometry.R, 1.1, t, 12), geometry)
    passed += report.ok
print(f"  dominated under empirical K: {passed}/{trials}")
