import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core import matcore
from src.core.errors import AlphaOutOfRange, DimensionMismatch, NotHermitian, NotPSD, SupportViolation
from src.core.states import mix, random_density, random_probs, random_pure

seeds = st.integers(min_value=0, max_value=2 ** 32)


def test_herm_eig_sorted_and_unitary():
    rho = random_density(4, 4, 11).mat
    eigenvalues, vectors = matcore.herm_eig(rho)
    assert np.all(np.diff(eigenvalues) >= 0)
    assert np.allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)
    assert np.allclose((vectors * eigenvalues) @ vectors.conj().T, rho, atol=1e-12)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        matcore.herm_eig(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_as_matrix_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        matcore.as_matrix(np.zeros((2, 3)))


def test_frac_power_restricted_to_support():
    m = np.diag([0.25, 0.0])
    assert np.allclose(matcore.frac_power(m, 0.5), np.diag([0.5, 0.0]))
    assert np.allclose(matcore.frac_power(m, -0.5), np.diag([2.0, 0.0]))
    assert np.allclose(matcore.support_projector(m), np.diag([1.0, 0.0]))


def test_frac_power_clamps_rounding_noise():
    m = np.diag([1.0, -1e-14])
    assert np.allclose(matcore.frac_power(m, 0.5), np.diag([1.0, 0.0]))


def test_frac_power_rejects_negative_matrix():
    with pytest.raises(NotPSD):
        matcore.frac_power(np.diag([1.0, -0.1]), 0.5)


@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_square_root_squares_back(seed):
    rho = random_density(3, 3, seed).mat
    root = matcore.frac_power(rho, 0.5)
    assert np.allclose(root @ root, rho, atol=1e-12)


@given(seed=seeds)
@settings(max_examples=30, deadline=None)
def test_frac_power_identity_and_composition(seed):
    m = mix([0.7, 0.3], [random_density(3, 3, seed), np.eye(3) / 3]).mat
    assert np.allclose(matcore.frac_power(m, 1.0), m, atol=1e-12)
    for p, q in ((0.5, 2.0), (0.3, -1.5), (2.0, 0.25), (-0.5, -2.0)):
        composed = matcore.frac_power(matcore.frac_power(m, p), q)
        assert np.allclose(composed, matcore.frac_power(m, p * q), atol=1e-10)


def test_sandwich_trace_of_diagonal():
    assert matcore.sandwich_trace(np.diag([0.25, 0.25, 0.5]), 0.5) == pytest.approx(0.5 + 0.5 + 0.5 ** 0.5)


@pytest.mark.parametrize('alpha', [0.5, 0.6, 0.75, 0.9])
def test_q_rho_is_one_at_own_diagonal(alpha):
    probs = np.array([0.3, 0.7])
    assert matcore.q_rho_sandwich(np.diag(probs), probs, alpha) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('alpha', [0.5, 0.75, 1.5, 2.0, 3.0])
def test_q_sigma_is_one_at_own_diagonal(alpha):
    probs = np.array([0.2, 0.3, 0.5])
    assert matcore.q_sigma_sandwich(probs, np.diag(probs), alpha) == pytest.approx(1.0, abs=1e-12)


@given(rho_seed=seeds, sigma_seed=seeds, alpha=st.sampled_from([0.5, 0.6, 0.75, 0.9]))
@settings(max_examples=30, deadline=None)
def test_q_rho_bounded_by_one(rho_seed, sigma_seed, alpha):
    rho = random_density(3, 2, rho_seed)
    sigma = random_probs(3, sigma_seed)
    value = matcore.q_rho_sandwich(rho, sigma, alpha)
    assert -1e-12 <= value <= 1.0 + 1e-12


@pytest.mark.parametrize('alpha', [0.5, 0.6, 0.75, 0.9])
def test_q_rho_strictly_below_one_for_distinct_states(alpha):
    for seed in range(100):
        rho = random_density(3, 3, seed)
        sigma = random_probs(3, 10_000 + seed)
        assert matcore.q_rho_sandwich(rho, sigma, alpha) < 1.0 - 1e-12, seed


@given(rho_seed=seeds, sigma_seed=seeds)
@settings(max_examples=50, deadline=None)
def test_q_rho_at_half_is_fidelity(rho_seed, sigma_seed):
    rho = random_density(3, 2, rho_seed)
    sigma = random_probs(3, sigma_seed)
    assert matcore.q_rho_sandwich(rho, sigma, 0.5) == pytest.approx(
        matcore.fidelity(rho, np.diag(sigma.probs)), abs=1e-9
    )


def _finite_difference(f, x, h=1e-6):
    grad = np.zeros_like(x)
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        grad[j] = (f(x + step) - f(x - step)) / (2 * h)
    return grad


@pytest.mark.parametrize('alpha', [0.5, 0.7, 0.9])
def test_q_rho_gradient_matches_finite_difference(alpha):
    rho = random_density(3, 3, 5)
    sigma = np.array([0.2, 0.3, 0.5])
    _, grad = matcore.q_rho_sandwich_grad(rho, sigma, alpha)
    numeric = _finite_difference(lambda x: matcore.q_rho_sandwich(rho, x, alpha), sigma)
    assert np.allclose(grad, numeric, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize('alpha', [0.5, 0.75, 1.5, 2.0, 3.0])
def test_q_sigma_gradient_matches_finite_difference(alpha):
    rho = random_density(3, 3, 8)
    sigma = np.array([0.25, 0.35, 0.4])
    _, grad = matcore.q_sigma_sandwich_grad(sigma, rho, alpha)
    numeric = _finite_difference(lambda x: matcore.q_sigma_sandwich(x, rho, alpha), sigma)
    assert np.allclose(grad, numeric, rtol=1e-5, atol=1e-7)


def _interior_point(d, seed):
    return 0.8 * random_probs(d, seed).probs + 0.2 / d


@pytest.mark.slow
@pytest.mark.parametrize('d', [2, 3, 4])
def test_gradients_at_random_interior_points(d, conditioned_state):
    rng = np.random.default_rng(d)
    for seed in range(100):
        rho = conditioned_state(d, seed)
        sigma = _interior_point(d, 500 + seed)

        a = float(rng.choice([0.5, 0.6, 0.75, 0.9]))
        _, grad = matcore.q_rho_sandwich_grad(rho, sigma, a)
        numeric = _finite_difference(lambda x: matcore.q_rho_sandwich(rho, x, a), sigma)
        assert np.allclose(grad, numeric, rtol=1e-5, atol=1e-7), (seed, a)

        a = float(rng.choice([0.5, 0.75, 1.5, 2.0, 3.0]))
        _, grad = matcore.q_sigma_sandwich_grad(sigma, rho, a)
        numeric = _finite_difference(lambda x: matcore.q_sigma_sandwich(x, rho, a), sigma)
        assert np.allclose(grad, numeric, rtol=1e-5, atol=1e-7), (seed, a)


def test_q_sigma_support_condition_above_one(plus_state):
    with pytest.raises(SupportViolation):
        matcore.q_sigma_sandwich(np.array([1.0, 0.0]), plus_state, 2.0)
    # α < 1 時沒有支撐條件
    assert matcore.q_sigma_sandwich(np.array([1.0, 0.0]), plus_state, 0.75) > 0.0


def test_trace_functionals_check_alpha_range():
    rho = np.eye(2) / 2
    with pytest.raises(AlphaOutOfRange):
        matcore.q_rho_sandwich(rho, np.array([0.5, 0.5]), 1.5)
    with pytest.raises(AlphaOutOfRange):
        matcore.q_sigma_sandwich(np.array([0.5, 0.5]), rho, 1.0005)
    with pytest.raises(AlphaOutOfRange):
        matcore.q_sigma_sandwich(np.array([0.5, 0.5]), rho, 0.4)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        matcore.q_rho_sandwich(np.eye(2) / 2, np.array([0.2, 0.3, 0.5]), 0.7)


def test_fidelity_of_pure_states():
    psi = random_pure(3, 1)
    phi = random_pure(3, 2)
    overlap = abs(np.vdot(psi.amplitudes, phi.amplitudes))
    assert matcore.fidelity(psi.to_density(), phi.to_density()) == pytest.approx(overlap, abs=1e-7)
    rho = random_density(3, 3, 4)
    assert matcore.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)


@given(s1=seeds, s2=seeds, rank=st.integers(1, 3))
@settings(max_examples=50, deadline=None)
def test_fidelity_is_symmetric(s1, s2, rank):
    rho = random_density(3, rank, s1)
    sigma = random_density(3, 3, s2)
    assert matcore.fidelity(rho, sigma) == pytest.approx(matcore.fidelity(sigma, rho), abs=1e-8)
