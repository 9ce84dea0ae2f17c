"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""
import math

import numpy as np

from dirac_positivity.clifford_reps import (build_generators, canonical_1d, detect_reducibility,
                                            theorem_check, verify_clifford)
from dirac_positivity.positivity_witness import (
    bochner_matrix_check, e0_entry_constraints, f_ineq_witness, find_counterexample,
    grid_transform_lookup, ineq_necessary_check,
)
from dirac_positivity.propagator import EvolutionParams, expm_oracle, propagator, zero_mode_stochasticity
from dirac_positivity.spectral_solver import DensityField, GridSpec, cauchy_initial, evolve
from dirac_positivity.trotter_prw import (LatticeField, PRWConfig, l1_distance, prw_simulate,
                                          trotter_evolve)

SEED = 20240101


def _int_product(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(a))) for j in range(len(a))]
            for i in range(len(a))]


def test_criterion_1_algebra_exactness(record):
    sets = [build_generators(d) for d in (1, 2, 3)] + [canonical_1d(m) for m in range(1, 5)]
    for g in sets:
        assert verify_clifford(g, tol=0.0) == []
        mats = [m.tolist() for m in g.e]
        for mu, a in enumerate(mats):
            assert np.trace(g.e[mu]) == 0 and np.array_equal(g.e[mu], g.e[mu].T)
            for nu, b in enumerate(mats):
                ab, ba = _int_product(a, b), _int_product(b, a)
                want = 2 * np.eye(g.S, dtype=int) if mu == nu else np.zeros((g.S, g.S), int)
                assert np.array_equal(np.array(ab) + np.array(ba), want)
    record(f"{len(sets)} generator sets, integer arithmetic, zero error")


def test_criterion_2_propagator(record):
    rng = np.random.default_rng(SEED)
    worst = worst_semi = worst_conj = 0.0
    n = 0
    for d in (1, 2, 3):
        P = EvolutionParams(1.0, build_generators(d))
        for i in range(400):
            k = rng.normal(size=d) * rng.uniform(0, 2)
            if i % 4 == 0:
                k *= rng.uniform(0.99, 1.01) / np.linalg.norm(k)
            t1, t2 = rng.uniform(0, 4, 2)
            M = propagator(P, k, t1).M
            worst = max(worst, np.abs(M - expm_oracle(P, k, t1).M).max())
            semi = M @ propagator(P, k, t2).M - propagator(P, k, t1 + t2).M
            worst_semi = max(worst_semi, np.abs(semi).max())
            worst_conj = max(worst_conj, np.abs(propagator(P, -k, t1).M - M.conj()).max())
            n += 1
    assert worst <= 1e-10 and worst_semi <= 1e-10 and worst_conj <= 1e-14
    record(f"n={n} oracle={worst:.1e} semigroup={worst_semi:.1e} conj={worst_conj:.1e}")


def test_criterion_3_zero_mode(record):
    worst_sum, worst_min = 0.0, 1.0
    for m in range(1, 5):
        P = EvolutionParams(1.0, canonical_1d(m))
        for t in np.linspace(0, 10, 201):
            r = zero_mode_stochasticity(P, float(t))
            worst_sum = max(worst_sum, np.abs(r.column_sums - 1).max())
            worst_min = min(worst_min, r.min_entry)
    assert worst_sum <= 1e-12 and worst_min >= -1e-15
    record(f"max|colsum-1|={worst_sum:.1e} min entry={worst_min:.1e}")


def _initial_fields(grid):
    x = grid.axis()
    gauss = lambda c, s: np.exp(-(x - c) ** 2 / (2 * s * s))
    raw = [
        np.stack([gauss(0, 0.5), np.zeros_like(x)]),
        np.stack([np.zeros_like(x), gauss(1.0, 1.0)]),
        np.stack([gauss(-2, 0.4), 0.5 * gauss(2, 0.8)]),
        np.stack([1 / np.cosh(x), 1 / np.cosh(x - 1) ** 2]),
        np.stack([1 / (1 + x * x), np.zeros_like(x)]),
        np.stack([gauss(0, 0.3) * (1 + np.sin(3 * x)), gauss(0, 2.0)]),
    ]
    return [DensityField(grid, v / (v.sum() * grid.dx)) for v in raw]


def test_criterion_4_d1_preservation(record):
    grid = GridSpec(1, 1024, 40.0)
    P = EvolutionParams(1.0, canonical_1d(1))
    fields = _initial_fields(grid)
    worst_min, worst_mass = np.inf, 0.0
    for p0 in fields:
        assert p0.values.min() >= 0
        for t in (0.5, 1.0, 2.0, 5.0):
            p = evolve(P, p0, t)
            worst_min = min(worst_min, p.min_entry()[0])
            worst_mass = max(worst_mass, abs(p.mass() - 1))
    assert worst_min >= -1e-8 and worst_mass <= 1e-10

    errs, trotter_min = [], np.inf
    for N in (64, 128, 256, 512, 1024):
        g = GridSpec(1, 16 * N, 8.0)
        x = g.axis()
        v = np.stack([np.exp(-x**2 / 0.5), 0.5 * np.exp(-(x - 1) ** 2 / 0.18)])
        p0 = DensityField(g, v / (v.sum() * g.dx))
        out = trotter_evolve(LatticeField.from_density(p0), 1.0, N)
        trotter_min = min(trotter_min, out.values.min())
        errs.append(g.dx * np.abs(out.values - evolve(P, p0, 1.0).values).sum())
    ratios = np.array(errs[1:]) / np.array(errs[:-1])
    assert trotter_min >= 0.0
    assert np.all(np.abs(ratios - 0.5) <= 0.15)
    record(f"{len(fields)} fields min={worst_min:.1e} mass err={worst_mass:.1e}; "
           f"trotter min={trotter_min:.1e} ratios={np.round(ratios, 3).tolist()}")


def test_criterion_5_violation(record):
    out = []
    for d, n, fine in ((2, 256, 512), (3, 64, 128)):
        g = build_generators(d)
        w = find_counterexample(g, 1.0, GridSpec(d, n, 20.0))
        assert w.value <= -1e-4
        w_fine = find_counterexample(g, 1.0, GridSpec(d, fine, 20.0))
        assert abs(w_fine.value - w.value) <= 0.25 * abs(w.value)
        perm = detect_reducibility(g.e[0]).permutation
        analytic = f_ineq_witness(g, perm, w.p, w.q, w.nu, w.K, w.t)
        assert analytic is not None and (analytic.p, analytic.q, analytic.nu) == (w.p, w.q, w.nu)
        out.append(f"d={d} n={n}: {w.value:.3e} (n={fine}: {w_fine.value:.3e}) "
                   f"(p,q,nu)=({w.p},{w.q},{w.nu})")
    record("; ".join(out))


def test_criterion_6_alpha_necessity(record):
    drift = {}
    for alpha in (0.5, 2.0, 0.999, 1.5):
        assert "alpha" in theorem_check(canonical_1d(1), alpha).failed_conditions
    for alpha in (0.5, 2.0):
        r = zero_mode_stochasticity(EvolutionParams(alpha, canonical_1d(1)), 1.0)
        np.testing.assert_allclose(r.column_sums, math.exp(1 - alpha), rtol=1e-13)
        drift[alpha] = float(np.abs(r.column_sums - 1).min())
        assert drift[alpha] >= 1e-3
    assert theorem_check(canonical_1d(1), 1.0).preserves
    record(f"column-sum drift at t=1: {drift}")


def test_criterion_7_prw(record):
    grid = GridSpec(1, 256, 5.12)
    l1 = {}
    for n in (1000, 10000, 100000):
        ens = prw_simulate(PRWConfig(1.0, 1.0, n, SEED, 0.004), 1.0)
        l1[n] = l1_distance(ens, grid, 1.0, 1.0)
    assert l1[100000] <= 0.03
    scaled = [l1[n] * math.sqrt(n) for n in l1]
    assert max(scaled) <= 2 * min(scaled)
    record(f"L1={ {n: round(v, 4) for n, v in l1.items()} } L1*sqrt(n)={np.round(scaled, 2).tolist()}")


def test_criterion_8_no_false_positives(record):
    checks = 0
    for m in range(1, 5):
        assert e0_entry_constraints(canonical_1d(m).e[0], 1.0, times=np.linspace(0, 10, 41)) == []
        checks += 1
    grid = GridSpec(1, 256, 20.0)
    P = EvolutionParams(1.0, canonical_1d(1))
    kk = grid.wave_numbers()
    point_sets = [kk[:24], kk[::11], kk[np.abs(kk) < 1.2], kk]
    for p0 in _initial_fields(grid)[:3] + [cauchy_initial(grid, 2, 0, [0.7])]:
        for t in (0.0, 0.5, 1.0, 2.0, 5.0):
            look = grid_transform_lookup(evolve(P, p0, t))
            phi0 = look([0.0]).real
            for k in kk:
                assert ineq_necessary_check(phi0, look([k]).real).all()
                checks += 1
            for pts in point_sets:
                for comp in (0, 1):
                    r = bochner_matrix_check(look, pts, component=comp)
                    assert r.is_psd, (t, comp, r.min_eigenvalue)
                    checks += 1
    record(f"{checks} checks, zero violations")
