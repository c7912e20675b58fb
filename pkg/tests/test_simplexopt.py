import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import (
    AlphaOutOfRange,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidConfig,
    InvalidWeights,
    NonFiniteObjective,
    NonPositiveEntry,
    NonPositiveT,
)
from src.core.simplexopt import (
    OptimizerConfig,
    Sense,
    SimplexObjective,
    grid_search,
    holder_check,
    holder_two_block,
    kkt_residual,
    mirror_ascend,
    simplex_lattice,
)


def log_objective(weights):
    weights = np.asarray(weights, dtype=float)
    return SimplexObjective(
        weights.size,
        evaluate=lambda x: (float(weights @ np.log(x)), weights / x),
        sense=Sense.MAXIMIZE,
        name='log',
    )


def linear_objective(c, sense=Sense.MAXIMIZE):
    c = np.asarray(c, dtype=float)
    return SimplexObjective(c.size, evaluate=lambda x: (float(c @ x), c), sense=sense, name='linear')


def test_simplex_lattice_is_lexicographic():
    assert list(simplex_lattice(3, 2)) == [
        (0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0)
    ]
    assert sum(1 for _ in simplex_lattice(4, 40)) == 12341


def test_mirror_ascend_interior_maximum():
    weights = [0.2, 0.3, 0.5]
    report = mirror_ascend(log_objective(weights), OptimizerConfig(), seed=1)
    assert report.converged
    assert np.allclose(report.best_point.probs, weights, atol=1e-6)
    assert report.restarts == 4
    assert report.restarts_agreeing == 4
    assert not report.at_boundary


def test_mirror_ascend_minimization():
    obj = SimplexObjective(
        3, evaluate=lambda x: (float(x @ x), 2 * x), sense=Sense.MINIMIZE, name='norm'
    )
    report = mirror_ascend(obj, OptimizerConfig(restarts=3), seed=2)
    assert report.best_value == pytest.approx(1 / 3, abs=1e-9)
    assert np.allclose(report.best_point.probs, 1 / 3, atol=1e-6)


def test_mirror_ascend_boundary_maximum():
    report = mirror_ascend(linear_objective([1.0, 3.0, 2.0]), OptimizerConfig(restarts=2), seed=0)
    assert report.best_value == pytest.approx(3.0, abs=1e-8)
    assert report.best_point.probs[1] == pytest.approx(1.0, abs=1e-8)
    assert report.at_boundary


def test_mirror_ascend_uses_warm_start():
    weights = [0.1, 0.6, 0.3]
    report = mirror_ascend(log_objective(weights), OptimizerConfig(restarts=2), seed=0, starts=[weights])
    assert np.allclose(report.best_point.probs, weights, atol=1e-6)


def test_fixed_step_rule_also_converges():
    cfg = OptimizerConfig(restarts=1, step_rule='fixed', initial_step=0.5, max_iters=20000)
    report = mirror_ascend(log_objective([0.25, 0.75]), cfg, seed=0)
    assert np.allclose(report.best_point.probs, [0.25, 0.75], atol=1e-6)


def test_mirror_ascend_rejects_non_finite_objective():
    obj = SimplexObjective(2, evaluate=lambda x: (float('nan'), np.zeros(2)))
    with pytest.raises(NonFiniteObjective):
        mirror_ascend(obj, OptimizerConfig(restarts=1), seed=0)


@pytest.mark.parametrize('changes', [
    {'tol': 0.0},
    {'interior_floor': 0.5},
    {'restarts': 0},
    {'max_iters': 0},
    {'step_rule': 'newton'},
])
def test_optimizer_config_validation(changes):
    with pytest.raises(InvalidConfig):
        mirror_ascend(log_objective([0.5, 0.5]), OptimizerConfig().replace(**changes), seed=0)


def test_optimizer_config_from_settings():
    cfg = OptimizerConfig.from_settings({'tol': 1e-8, 'restarts': 6, 'unused': 1}, restarts=None, max_iters=10)
    assert cfg.tol == 1e-8
    assert cfg.restarts == 6
    assert cfg.max_iters == 10
    assert cfg.step_rule == 'backtracking'


def test_kkt_residual_ignores_floor_coordinates_pushing_out():
    x = np.array([1.0 - 1e-9, 1e-9])
    assert kkt_residual(x, np.array([1.0, 0.2]), 1e-9) < 1e-8
    assert kkt_residual(x, np.array([1.0, 2.0]), 1e-9) > 0.5


def test_grid_search_finds_vertex():
    report = grid_search(linear_objective([1.0, 3.0, 2.0]), 10)
    assert report.best_value == 3.0
    assert np.array_equal(report.best_point.probs, [0.0, 1.0, 0.0])
    assert report.iterations == 66
    assert report.at_boundary


def test_grid_search_tie_breaks_lexicographically():
    report = grid_search(linear_objective([1.0, 1.0]), 4)
    assert np.array_equal(report.best_point.probs, [0.0, 1.0])


def test_grid_search_minimizes_and_skips_infeasible():
    def value(x):
        return float('inf') if x[0] == 0.0 else float(np.sum((x - [0.25, 0.75]) ** 2))

    obj = SimplexObjective(2, evaluate=None, sense=Sense.MINIMIZE, value=value)
    report = grid_search(obj, 4)
    assert np.array_equal(report.best_point.probs, [0.25, 0.75])


def test_grid_search_dimension_limit():
    with pytest.raises(DimensionTooLarge):
        grid_search(linear_objective(np.ones(5)), 2)


def _two_block_grid_max(t1, t2, p1, alpha, points=1_000_001):
    q = np.linspace(0.0, 1.0, points)
    p2 = 1.0 - p1
    values = p1 ** (1 - alpha) * q ** alpha * t1 + p2 ** (1 - alpha) * (1 - q) ** alpha * t2
    return float(values.max())


def test_holder_two_block_matches_one_dimensional_grid():
    alpha, t1, t2, p1 = 0.7, 0.8, 0.5, 0.3
    grid = _two_block_grid_max(t1, t2, p1, alpha, points=200001)
    assert holder_two_block(t1, t2, p1, 1 - p1, alpha) == pytest.approx(grid, abs=1e-6)


@given(
    t1=st.floats(0.1, 10.0), t2=st.floats(0.1, 10.0),
    p1=st.floats(0.05, 0.95), alpha=st.floats(0.5, 0.95),
)
@settings(max_examples=100, deadline=None)
def test_holder_two_block_is_symmetric_under_block_swap(t1, t2, p1, alpha):
    p2 = 1.0 - p1
    assert holder_two_block(t1, t2, p1, p2, alpha) == pytest.approx(
        holder_two_block(t2, t1, p2, p1, alpha), rel=1e-12
    )


@pytest.mark.slow
def test_holder_two_block_on_random_parameters():
    rng = np.random.default_rng(77)
    for _ in range(100):
        t1, t2 = rng.uniform(0.5, 1.0, size=2)
        p1 = rng.uniform(0.1, 0.9)
        alpha = rng.uniform(0.5, 0.9)
        exact = holder_two_block(t1, t2, p1, 1.0 - p1, alpha)
        grid = _two_block_grid_max(t1, t2, p1, alpha)
        assert grid <= exact + 1e-12
        assert exact == pytest.approx(grid, abs=1e-9)


def test_holder_two_block_errors():
    with pytest.raises(NonPositiveT):
        holder_two_block(0.0, 1.0, 0.5, 0.5, 0.7)
    with pytest.raises(InvalidWeights):
        holder_two_block(1.0, 1.0, 0.5, 0.6, 0.7)
    with pytest.raises(AlphaOutOfRange):
        holder_two_block(1.0, 1.0, 0.5, 0.5, 1.5)


positive_vectors = st.lists(st.floats(0.01, 10.0), min_size=2, max_size=6)


@given(a=positive_vectors, b=positive_vectors, alpha=st.sampled_from([0.3, 0.5, 0.7, 0.9]))
@settings(max_examples=100, deadline=None)
def test_holder_inequality(a, b, alpha):
    n = min(len(a), len(b))
    assert holder_check(a[:n], b[:n], alpha).regime_satisfied


@given(a=positive_vectors, b=positive_vectors, alpha=st.sampled_from([-0.5, 1.5, 2.0, 3.0]))
@settings(max_examples=100, deadline=None)
def test_reverse_holder_inequality(a, b, alpha):
    n = min(len(a), len(b))
    assert holder_check(a[:n], b[:n], alpha).regime_satisfied


def test_holder_equality_condition():
    result = holder_check([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 0.5)
    assert result.lhs == pytest.approx(14.0)
    assert result.equality
    assert not holder_check([1.0, 2.0], [2.0, 1.0], 0.5).equality


def test_holder_rejects_non_positive_entries():
    with pytest.raises(NonPositiveEntry):
        holder_check([1.0, 0.0], [1.0, 1.0], 0.5)


def test_holder_rejects_mismatched_shapes_and_degenerate_alpha():
    with pytest.raises(DimensionMismatch):
        holder_check([1.0, 2.0], [1.0, 2.0, 3.0], 0.5)
    with pytest.raises(AlphaOutOfRange):
        holder_check([1.0, 2.0], [1.0, 2.0], 1.0)
    with pytest.raises(AlphaOutOfRange):
        holder_check([1.0, 2.0], [1.0, 2.0], 0.0)
