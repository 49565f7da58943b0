"""
Pure-loss recovery and bond percolation
=======================================

Without bit-flips, a trial fails only when lost qubits form a
superplaquette winding the torus. The recovery probability drops sharply
at the square-lattice bond percolation threshold p_loss = 1/2.
"""

from lossy_toric import run_percolation

p_losses = [0.40, 0.45, 0.50, 0.55, 0.60]
sizes = (8, 16, 32)
results = run_percolation(p_losses, sizes, trials=500, master_seed=5)

print("p_loss " + " ".join(f"L={L:<4d}" for L in sizes))
for p in p_losses:
    row = [r.recovery_fraction for r in results if r.p_loss == p]
    print(f"{p:.2f}   " + " ".join(f"{x:.3f} " for x in row))
