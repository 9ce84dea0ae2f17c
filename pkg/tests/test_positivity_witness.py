import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, strategies as st

from dirac_positivity.clifford_reps import (SIGMA1, SIGMA3, build_generators, canonical_1d,
                                            detect_reducibility)
from dirac_positivity.propagator import EvolutionParams
from dirac_positivity.positivity_witness import (
    WITNESS_SCHEMA, MissingDifferenceError, Witness, WitnessPreconditionError,
    alpha_eq_residual, analytic_candidates, aux_functions, bochner_matrix_check,
    e0_entry_constraints, f_ineq_rhs, f_ineq_witness, find_counterexample,
    grid_transform_lookup, ineq_necessary_check,
)
from dirac_positivity.spectral_solver import DensityField, GridSpec, cauchy_initial, evolve

G2 = build_generators(2)
PERM2 = detect_reducibility(G2.e[0]).permutation


def test_bochner_gaussian_psd():
    pts = np.linspace(-3, 3, 25)
    r = bochner_matrix_check(lambda k: math.exp(-k[0] ** 2 / 2), pts)
    assert r.is_psd and r.min_eigenvalue > -1e-12


def test_bochner_cosine_is_psd_but_singular():
    # transform of two point masses at +-v
    v = np.array([0.7, -0.2])
    pts = np.random.default_rng(0).normal(size=(12, 2))
    r = bochner_matrix_check(lambda k: math.cos(k @ v), pts)
    assert r.is_psd
    assert abs(r.min_eigenvalue) < 1e-10


def test_bochner_rejects_non_pd():
    # 1_{|k|<1} is not the transform of a nonnegative function
    r = bochner_matrix_check(lambda k: float(abs(k[0]) < 1), [0.0, 0.9, 1.8])
    assert not r.is_psd and r.min_eigenvalue == pytest.approx(1 - math.sqrt(2))


def test_bochner_eigenvalues_are_grid_values():
    # over all lattice wave numbers the matrix is n dx diag(p) in a unitary basis
    g = GridSpec(1, 32, 4.0)
    rng = np.random.default_rng(3)
    v = rng.normal(size=(2, 32))
    look = grid_transform_lookup(DensityField(g, v))
    r = bochner_matrix_check(look, g.wave_numbers(), component=1)
    assert r.min_eigenvalue == pytest.approx(32 * g.dx * v[1].min(), abs=1e-12)


def test_bochner_flags_d2_violation_field():
    grid = GridSpec(2, 16, 20.0)
    w = find_counterexample(G2, 1.0, grid)
    p = evolve(EvolutionParams(1.0, G2), cauchy_initial(grid, 4, w.q, w.a, PERM2), w.t)
    kk = grid.wave_numbers()
    pts = [(a, b) for a in kk for b in kk]
    r = bochner_matrix_check(grid_transform_lookup(p), pts, component=w.location[0])
    assert not r.is_psd
    assert r.min_eigenvalue == pytest.approx(grid.n**2 * grid.dx**2 * w.value, rel=1e-9)


def test_bochner_missing_difference():
    table = {(0.0,): 1.0, (1.0,): 0.5}
    with pytest.raises(MissingDifferenceError):
        bochner_matrix_check(table, [0.0, 1.0])
    table[(-1.0,)] = 0.5
    assert bochner_matrix_check(table, [0.0, 1.0]).is_psd
    look = grid_transform_lookup(cauchy_initial(GridSpec(1, 16, 2.0), 2, 0))
    with pytest.raises(MissingDifferenceError):
        look([0.1])


def test_ineq_examples():
    np.testing.assert_array_equal(ineq_necessary_check([1, 1], [0.5, -0.5]), [True, True])
    np.testing.assert_array_equal(ineq_necessary_check([1, 0.2], [-1.2, 0.0]), [False, True])
    with pytest.raises(ValueError):
        ineq_necessary_check([1, 1], [1])


def test_e0_constraints():
    assert e0_entry_constraints(SIGMA1) == []
    kinds = {v["kind"] for v in e0_entry_constraints(SIGMA3)}
    assert kinds == {"column_sum"}
    neg = e0_entry_constraints(-SIGMA1)
    assert {"kind": "offdiagonal", "index": [0, 1], "value": -1.0} in neg
    assert any(v["kind"] == "column_sum" for v in neg)
    assert any(v["kind"] == "diagonal" for v in e0_entry_constraints(np.diag([-2.0, 0.0])))
    assert e0_entry_constraints(canonical_1d(3).e[0]) == []


def test_e0_constraints_alpha():
    assert [v["kind"] for v in e0_entry_constraints(SIGMA1, alpha=2.0)] == ["column_sum"] * 2


@given(st.floats(0, 10))
def test_alpha_eq_identity(t):
    u = np.array([1.0, 1.0]) / math.sqrt(2)
    assert abs(alpha_eq_residual(u, 0, t, 1.0)) <= 1e-12 * math.exp(t)
    assert alpha_eq_residual(u, 1, t, 2.0) <= 0


def test_aux_functions():
    t = 1.3
    sh = math.sinh(t)
    assert aux_functions(1.0, 0.0, 5.0, t) == pytest.approx((sh, 0.0))
    K = 0.5
    B, C = aux_functions(0.8, K, math.pi / (2 * K), t)
    assert abs(B) < 1e-15
    b = math.sqrt(1 - K * K)
    assert C == pytest.approx(-0.8 * math.sinh(b * t) / b, rel=1e-14)
    with pytest.raises(ValueError):
        aux_functions(0.0, K, 1.0, t)


def test_f_ineq_d2_value():
    w = f_ineq_witness(G2, PERM2, 0, 2, 1, K=0.5, t=1.0)
    assert w is not None and (w.p, w.q, w.nu) == (0, 2, 1)
    b = math.sqrt(0.75)
    expected = -math.exp(-0.5) * math.sinh(b) / b * 0.5
    assert w.value == pytest.approx(expected, rel=1e-14)
    assert w.a == [math.pi, 0.0]


def test_f_ineq_odd_in_K():
    for K in (0.2, 0.5, 1.5):
        a = f_ineq_rhs(G2, PERM2, 0, 2, 1, K, 0.7)
        assert f_ineq_rhs(G2, PERM2, 0, 2, 1, -K, 0.7) == pytest.approx(-a, rel=1e-15)


def test_f_ineq_none_cases():
    assert f_ineq_witness(G2, PERM2, 0, 2, 1, K=0.0) is None
    # direction 2 is diagonal, so never couples different components
    assert f_ineq_witness(G2, PERM2, 0, 2, 2) is None
    assert analytic_candidates(canonical_1d(2), (0, 1, 2, 3)) == []


def test_f_ineq_preconditions():
    with pytest.raises(WitnessPreconditionError):
        f_ineq_witness(G2, PERM2, 1, 1, 1)
    with pytest.raises(WitnessPreconditionError):
        f_ineq_witness(G2, PERM2, 0, 1, 1)  # same e_0 block
    with pytest.raises(WitnessPreconditionError):
        f_ineq_witness(G2, PERM2, 0, 2, 3)


def test_witness_must_be_negative():
    with pytest.raises(ValueError):
        Witness("analytic_F_INEQ", 0, 1, 1, 0.5, [0.0], 1.0, 0.0)


def test_find_counterexample_d2():
    grid = GridSpec(2, 256, 20.0)
    w = find_counterexample(G2, 1.0, grid)
    assert w.kind == "grid_violation" and w.value <= -1e-4
    jsonschema.validate(w.to_dict(), WITNESS_SCHEMA)
    assert f_ineq_witness(G2, PERM2, w.p, w.q, w.nu, w.K, w.t) is not None
    assert set(w.to_dict()) == {"kind", "p", "q", "nu", "K", "a", "t", "value", "grid"}
    # the reported entry is a real grid entry of the evolved field
    comp, site = w.location
    p = evolve(EvolutionParams(1.0, G2), cauchy_initial(grid, 4, w.q, w.a, PERM2), w.t)
    assert p.values[(comp,) + site] == w.value
    assert PERM2.index(comp) == w.p


def test_find_counterexample_grid_stable():
    a = find_counterexample(G2, 1.0, GridSpec(2, 128, 20.0)).value
    b = find_counterexample(G2, 1.0, GridSpec(2, 256, 20.0)).value
    assert abs(a - b) <= 0.25 * abs(b)


def test_find_counterexample_refuses_preserving():
    with pytest.raises(WitnessPreconditionError):
        find_counterexample(canonical_1d(1), 1.0, GridSpec(1, 64, 10.0))
    with pytest.raises(WitnessPreconditionError):
        find_counterexample(canonical_1d(1), 2.0, GridSpec(1, 64, 10.0))


def test_find_counterexample_grid_dim_mismatch():
    with pytest.raises(ValueError):
        find_counterexample(G2, 1.0, GridSpec(3, 8, 10.0))


def test_find_counterexample_d3():
    g = build_generators(3)
    w = find_counterexample(g, 1.0, GridSpec(3, 64, 20.0))
    assert w.value <= -1e-4
    perm = detect_reducibility(g.e[0]).permutation
    assert f_ineq_witness(g, perm, w.p, w.q, w.nu, w.K, w.t) is not None


def test_preserving_system_passes_necessary_checks():
    grid = GridSpec(1, 256, 20.0)
    params = EvolutionParams(1.0, canonical_1d(1))
    p0 = cauchy_initial(grid, 2, 0, [0.5])
    kk = grid.wave_numbers()
    pts = kk[np.abs(kk) < 1.5][::3]
    for t in (0.0, 0.5, 2.0):
        p = evolve(params, p0, t)
        look = grid_transform_lookup(p)
        for comp in (0, 1):
            assert bochner_matrix_check(look, pts, component=comp).is_psd
        for k in kk[:40]:
            assert ineq_necessary_check(look([0.0]).real, look([k]).real).all()
