"""
Breaking positivity in two dimensions
=====================================

For d=2 a spatial generator links components that e0 keeps apart. Put a
shifted Cauchy bump into one of them and another goes negative.
"""
from dirac_positivity.clifford_reps import build_generators, detect_reducibility
from dirac_positivity.positivity_witness import analytic_candidates, find_counterexample
from dirac_positivity.spectral_solver import GridSpec

g = build_generators(2)
perm = detect_reducibility(g.e[0]).permutation
print("permutation", perm)
for w in analytic_candidates(g, perm):
    print(f"analytic: p={w.p} q={w.q} nu={w.nu} K={w.K:+.1f} rhs={w.value:.4f}")

for n in (128, 256):
    w = find_counterexample(g, 1.0, GridSpec(2, n, 20.0))
    print(f"n={n}: most negative entry {w.value:.5f} at t={w.t}, component {w.location[0]}")
