import numpy as np
import pytest

from src.core import matcore
from src.core.errors import AlphaOutOfRange, NotQubit, UnknownMeasure
from src.core.measures import (
    MEASURES,
    Method,
    c_s,
    c_s1,
    c_s1_pure,
    c_s_pure,
    geometric_coherence,
    l1_coherence_qubit,
    measure_by_name,
    measure_closed_form,
    non_equivalence_witness,
)
from src.core.simplexopt import OptimizerConfig, Sense, SimplexObjective, grid_search
from src.core.states import PureState, basis_state, maximally_coherent, permute_basis, random_density, random_pure


def test_c_s1_plus_state_at_half(plus_state):
    result = c_s1(plus_state, 0.5)
    assert result.value == pytest.approx(0.5, abs=1e-8)
    assert result.method is Method.OPTIMIZER
    assert result.converged


def test_c_s1_boundary_optimum():
    psi = PureState([np.sqrt(0.8), np.sqrt(0.2)])
    result = c_s1(psi, 0.5)
    assert result.value == pytest.approx(0.2, abs=1e-6)
    assert result.optimal_sigma.probs[0] == pytest.approx(1.0, abs=1e-6)
    assert result.report.at_boundary


def test_c_s_plus_state():
    plus = maximally_coherent(2)
    assert c_s(plus, 2.0).value == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-7)
    assert c_s(plus, 0.5).value == pytest.approx(1.0, abs=1e-7)
    assert c_s_pure(plus, 2.0) == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-12)
    assert c_s_pure(plus, 0.5) == pytest.approx(1.0, abs=1e-12)


def test_c_s_pure_is_continuous_at_half():
    psi = random_pure(3, 4)
    assert c_s_pure(psi, 0.5 + 1e-4) == pytest.approx(c_s_pure(psi, 0.5), abs=1e-3)


def test_pure_closed_forms_at_half_differ_by_two():
    psi = random_pure(4, 12)
    assert c_s_pure(psi, 0.5) == pytest.approx(2.0 * c_s1_pure(psi, 0.5), abs=1e-12)


@pytest.mark.parametrize('seed', [1, 2, 3])
@pytest.mark.parametrize('alpha', [0.6, 0.8])
def test_c_s1_optimizer_matches_closed_form(seed, alpha, fast_cfg):
    psi = random_pure(3, seed)
    assert c_s1(psi, alpha, cfg=fast_cfg).value == pytest.approx(c_s1_pure(psi, alpha), abs=1e-6)


@pytest.mark.parametrize('seed', [1, 2, 3])
@pytest.mark.parametrize('alpha', [0.75, 2.0])
def test_c_s_optimizer_matches_closed_form(seed, alpha, fast_cfg):
    psi = random_pure(3, seed)
    assert c_s(psi, alpha, cfg=fast_cfg).value == pytest.approx(c_s_pure(psi, alpha), abs=1e-6)


@pytest.mark.parametrize('seed', [5, 6])
def test_c_s_at_half_is_twice_c_s1_on_mixed_states(seed, conditioned_state, fast_cfg):
    rho = conditioned_state(3, seed)
    s = c_s(rho, 0.5, cfg=fast_cfg).value
    s1 = c_s1(rho, 0.5, cfg=fast_cfg).value
    assert s == pytest.approx(2.0 * s1, abs=1e-6)


def test_geometric_coherence_at_reported_sigma(conditioned_state, fast_cfg):
    rho = conditioned_state(3, 9)
    result = geometric_coherence(rho, cfg=fast_cfg)
    fid = matcore.fidelity(rho, np.diag(result.optimal_sigma.probs))
    assert result.value == pytest.approx(1.0 - fid ** 2, abs=1e-8)


def test_geometric_coherence_of_pure_state():
    psi = random_pure(3, 21)
    expected = 1.0 - np.max(np.abs(psi.amplitudes) ** 2)
    assert geometric_coherence(psi).value == pytest.approx(expected, abs=1e-6)


def test_grid_oracle_agrees_on_qubits(conditioned_state):
    rho = conditioned_state(2, 13)
    assert c_s1(rho, 0.7, oracle='grid').value == pytest.approx(c_s1(rho, 0.7).value, abs=1e-6)
    assert c_s(rho, 2.0, oracle='grid').value == pytest.approx(c_s(rho, 2.0).value, abs=1e-6)


def test_grid_oracle_agrees_in_three_dimensions(conditioned_state):
    rho = conditioned_state(3, 14)
    grid = c_s1(rho, 0.7, oracle='grid')
    assert grid.method is Method.GRID_ORACLE
    assert grid.report.iterations == 20301
    assert grid.value == pytest.approx(c_s1(rho, 0.7).value, abs=5e-4)


def test_grid_oracle_skips_unsupported_points():
    result = c_s(maximally_coherent(2), 2.0, oracle='grid', resolution=100)
    assert result.value == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-9)
    assert np.allclose(result.optimal_sigma.probs, 0.5)


@pytest.mark.parametrize('measure, alpha', [(c_s1, 0.7), (c_s, 0.7), (c_s, 2.0)])
def test_incoherent_states_have_zero_coherence(measure, alpha, fast_cfg):
    assert measure(np.diag([0.2, 0.3, 0.5]), alpha, cfg=fast_cfg).value == pytest.approx(0.0, abs=1e-8)


def test_basis_state_has_zero_coherence(fast_cfg):
    assert c_s1(basis_state(3, 1), 0.7, cfg=fast_cfg).value == pytest.approx(0.0, abs=1e-8)
    assert c_s(basis_state(3, 1), 2.0, cfg=fast_cfg).value == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize('measure, alpha', [(c_s1, 0.7), (c_s, 2.0)])
def test_measures_are_permutation_invariant(measure, alpha, conditioned_state, fast_cfg):
    rho = conditioned_state(3, 31)
    permuted = permute_basis(rho, [2, 0, 1])
    assert measure(permuted, alpha, cfg=fast_cfg).value == pytest.approx(
        measure(rho, alpha, cfg=fast_cfg).value, abs=1e-7
    )


def test_seed_reproducibility(conditioned_state):
    rho = conditioned_state(3, 40)
    first = c_s(rho, 1.5, seed=7)
    second = c_s(rho, 1.5, seed=7)
    assert first.value == second.value
    assert np.array_equal(first.optimal_sigma.probs, second.optimal_sigma.probs)


def test_alpha_ranges_are_enforced(plus_state):
    with pytest.raises(AlphaOutOfRange):
        c_s1(plus_state, 1.5)
    with pytest.raises(AlphaOutOfRange):
        c_s(plus_state, 0.4)
    with pytest.raises(AlphaOutOfRange):
        c_s_pure(maximally_coherent(2), 1.0)


def test_non_equivalence_witness():
    plus = maximally_coherent(2)
    assert c_s1_pure(plus, 0.75) == pytest.approx(0.875)
    assert c_s_pure(plus, 0.75) == pytest.approx((1.0 - 2 ** (-1 / 3)) / 0.25)
    assert non_equivalence_witness(plus, 0.75) == pytest.approx(0.0498, abs=1e-4)


def test_measure_closed_form_optimal_sigma():
    plus = maximally_coherent(2)
    result = measure_closed_form(plus, 's', 2.0)
    assert result.method is Method.PURE_CLOSED_FORM
    assert result.report is None and result.converged
    assert np.allclose(result.optimal_sigma.probs, [0.5, 0.5])

    psi = PureState([np.sqrt(0.2), np.sqrt(0.8)])
    s1 = measure_closed_form(psi, 's1', 0.7)
    assert np.array_equal(s1.optimal_sigma.probs, [0.0, 1.0])
    s = measure_closed_form(psi, 's', 0.75)
    weights = np.array([0.2, 0.8]) ** 1.5
    assert np.allclose(s.optimal_sigma.probs, weights / weights.sum())


def test_measure_closed_form_unknown_family():
    with pytest.raises(UnknownMeasure):
        measure_closed_form(maximally_coherent(2), 'geometric', 0.5)


def test_l1_coherence_qubit(plus_state):
    assert l1_coherence_qubit(plus_state) == pytest.approx(1.0)
    assert l1_coherence_qubit(np.diag([0.4, 0.6])) == 0.0
    with pytest.raises(NotQubit):
        l1_coherence_qubit(np.eye(3) / 3)


def test_broken_measure_is_nonzero_on_diagonal_states():
    assert MEASURES['broken'].compute(np.diag([0.4, 0.6])).value == pytest.approx(0.12)


def test_measure_registry():
    assert measure_by_name('s1') is MEASURES['s1']
    assert MEASURES['s1'].accepts(0.7) and not MEASURES['s1'].accepts(1.5)
    assert MEASURES['s'].accepts(1.5) and not MEASURES['s'].accepts(0.2)
    assert MEASURES['geometric'].accepts(3.0)
    with pytest.raises(UnknownMeasure):
        measure_by_name('relative-entropy')


def test_named_measure_scalar_callback(plus_state):
    evaluate = MEASURES['l1-qubit'].scalar()
    assert evaluate(plus_state, None) == pytest.approx(1.0)
    assert MEASURES['geometric'].scalar()(plus_state, None) == pytest.approx(0.5, abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize('measure, alpha', [(c_s1, 0.7), (c_s, 2.0), (c_s, 0.75)])
def test_optimizer_converges_on_random_states(measure, alpha):
    for seed in range(100):
        rho = random_density(3, 3, seed)
        result = measure(rho, alpha, seed=seed)
        assert result.converged, seed
        assert result.value >= -1e-9


@pytest.mark.slow
@pytest.mark.parametrize('d', [2, 3, 4])
def test_pure_state_closed_forms_on_many_states(d):
    cfg = OptimizerConfig(restarts=2)
    for seed in range(100):
        psi = random_pure(d, seed)
        for alpha in (0.5, 0.6, 0.75, 0.9):
            assert c_s1(psi, alpha, cfg=cfg).value == pytest.approx(c_s1_pure(psi, alpha), abs=1e-6)
        for alpha in (0.6, 0.75, 1.5, 2.0, 3.0):
            assert c_s(psi, alpha, cfg=cfg).value == pytest.approx(c_s_pure(psi, alpha), abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize('d', [2, 3])
def test_grid_oracle_on_many_mixed_states(d):
    for seed in range(50):
        rho = random_density(d, d, 1000 + seed)
        for measure, alpha in ((c_s1, 0.5), (c_s1, 0.75), (c_s, 0.75), (c_s, 2.0)):
            assert measure(rho, alpha, oracle='grid').value == pytest.approx(
                measure(rho, alpha).value, abs=1e-4
            )


def _squared_fidelity_objective(rho):
    return SimplexObjective(
        rho.dim,
        evaluate=None,
        sense=Sense.MAXIMIZE,
        value=lambda x: matcore.fidelity(rho, np.diag(x)) ** 2,
        name='F²',
    )


@pytest.mark.slow
@pytest.mark.parametrize('d, resolution', [(2, 10000), (3, 200)])
def test_geometric_coherence_against_fidelity_grid(d, resolution):
    for seed in range(50):
        rho = random_density(d, d, 3000 + seed)
        best = grid_search(_squared_fidelity_objective(rho), resolution)
        assert geometric_coherence(rho, seed=seed).value == pytest.approx(
            1.0 - best.best_value, abs=1e-4
        ), seed
