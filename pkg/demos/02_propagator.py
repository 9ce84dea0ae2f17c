"""
The mode propagator
===================

Compare the closed form against a direct matrix exponential, then look at
the zero mode, which has to be a stochastic matrix.
"""
import math

import numpy as np

from dirac_positivity.clifford_reps import build_generators, canonical_1d
from dirac_positivity.propagator import (EvolutionParams, expm_oracle, propagator,
                                         zero_mode_stochasticity)

P = EvolutionParams(1.0, build_generators(2))
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(500):
    k, t = rng.normal(size=2), rng.uniform(0, 5)
    worst = max(worst, np.abs(propagator(P, k, t).M - expm_oracle(P, k, t).M).max())
print(f"closed form vs exponential: {worst:.2e}")

# |k| = 1 is where beta vanishes; nothing blows up there
print(propagator(P, [1.0, 0.0], 2.0).M.round(4))

# zero mode: columns sum to 1 only when alpha = 1
for alpha in (0.5, 1.0, 2.0):
    r = zero_mode_stochasticity(EvolutionParams(alpha, canonical_1d(1)), 1.0)
    print(f"alpha={alpha}: column sums {r.column_sums}, expected {math.exp(1 - alpha):.4f}")
