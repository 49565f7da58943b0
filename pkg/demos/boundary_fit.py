"""
Correctability boundary
=======================

Thresholds fitted at several loss rates are joined by a quadratic. With
synthetic thresholds on a known curve, the fit recovers the curve and its
p_t = 0 intercept exactly. Replace ``fits`` by real ``fit_scaling`` output
(see threshold_sweep.py) to draw the boundary from simulation.
"""

from lossy_toric import ScalingFit, fit_boundary

truth = lambda x: 0.104 * (1 - 2 * x) * (1 + 0.5 * x)
fits = [ScalingFit(x, truth(x), 1.5, 0.3, 1.0, 0.0, True) for x in (0.0, 0.1, 0.2, 0.3, 0.4)]

curve = fit_boundary(fits)
print("coefficients c0, c1, c2:", [round(c, 6) for c in curve.coefficients])
print("p_t at p_loss=0.25:", round(float(curve(0.25)), 6), "vs", round(truth(0.25), 6))
print("p_t = 0 at p_loss =", round(curve.intercept, 6))
