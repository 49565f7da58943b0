"""
Failure-rate sweep and scaling fit
==================================

A small loss-free sweep: failure rates rise with p_com, and curves for
different L cross near the threshold. The scaling fit extracts p_t and
nu0. Trial counts here are small for speed; the acceptance suite uses
2000 per point.
"""

import numpy as np

from lossy_toric import GridPoint, fit_scaling, run_grid

sizes = (8, 12, 16)
p_coms = np.round(np.arange(0.08, 0.1301, 0.01), 3)
points = [GridPoint(0.0, float(p), L, 300) for L in sizes for p in p_coms]
results = run_grid(points, master_seed=11)

print("p_com  " + "  ".join(f"L={L:<3d}" for L in sizes))
for p in p_coms:
    row = [r.p_fail for r in results if r.p_com == p]
    print(f"{p:.3f}  " + "  ".join(f"{x:.3f}" for x in row))

fit = fit_scaling(results)
print(f"p_t = {fit.p_t:.4f}, nu0 = {fit.nu0:.3f}, converged = {fit.converged}")
