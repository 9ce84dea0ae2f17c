"""
Persistent random walk
======================

Walkers move at speed c and reverse at rate lambda. Their histogram follows
the same master equation that the spectral solver integrates.
"""
import math

from dirac_positivity.spectral_solver import GridSpec
from dirac_positivity.trotter_prw import PRWConfig, l1_distance, per_bin_masses, prw_simulate

grid = GridSpec(1, 256, 5.12)
for n in (1000, 10000, 100000):
    ens = prw_simulate(PRWConfig(lam=1.0, c=1.0, n_walkers=n, seed=7, dt=0.004), 1.0)
    l1 = l1_distance(ens, grid, 1.0, 1.0)
    print(f"{n:>6} walkers  L1={l1:.4f}  L1*sqrt(n)={l1 * math.sqrt(n):.2f}")

# a coarse text plot of the + state; the walkers that never reversed sit in
# a single bin at x = ct and are drawn clipped
ens = prw_simulate(PRWConfig(1.0, 1.0, 100000, 7, 0.004), 1.0)
emp = ens.histogram(grid).values[0] * grid.dx
ref = per_bin_masses(grid, 1.0, 1.0, 1.0)[0]
for j in list(range(80, 152, 6)) + [153]:
    x = grid.axis()[j]
    bar = "#" * min(int(3000 * emp[j]), 40)
    print(f"{x:6.2f} {bar:<40s} {emp[j]:.4f} {ref[j]:.4f}")
