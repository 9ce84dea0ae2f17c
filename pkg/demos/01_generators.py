"""
Generators and the structural test
==================================

Build the symmetric real generators for a few dimensions, check their
anticommutators, and ask which systems pass the structural test.
"""
import numpy as np

from dirac_positivity.clifford_reps import (build_generators, canonical_1d,
                                            detect_reducibility, theorem_check, verify_clifford)

# one spatial dimension: e0 = sigma_1, e1 = sigma_3
g = build_generators(1)
print(g.e[0])
print(g.e[1])

# in higher d the size doubles per dimension
for d in (1, 2, 3):
    g = build_generators(d)
    print(f"d={d}  S={g.S}  clifford violations: {len(verify_clifford(g))}")

# e0 for d=2 splits into two sigma_1 blocks after a permutation
e0 = build_generators(2).e[0]
bs = detect_reducibility(e0)
perm = list(bs.permutation)
print("blocks", bs.blocks)
print(e0[np.ix_(perm, perm)])

# only the d=1 systems with alpha = 1 survive
for label, g, alpha in [("sigma1/sigma3", canonical_1d(1), 1.0),
                        ("two copies", canonical_1d(2), 1.0),
                        ("alpha=2", canonical_1d(1), 2.0),
                        ("d=2", build_generators(2), 1.0)]:
    v = theorem_check(g, alpha)
    print(f"{label:14s} preserves={v.preserves}  failed={v.failed_conditions}")
