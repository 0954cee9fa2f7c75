import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.errors import DomainError, InvalidMatrixError, InvalidStateError
from src.qubit_core import (
    BlochState,
    DensityMatrix,
    binary_entropy,
    bloch_to_matrix,
    eigendecompose,
    fidelity,
    fidelity_batch,
    matrix_power,
    matrix_to_bloch,
    random_bloch_arrays,
    von_neumann_entropy,
)

H_QUARTER = 0.8112781244591328

bloch_states = st.builds(
    BlochState.from_angles,
    st.one_of(st.just(0.0), st.floats(min_value=1e-2, max_value=1.0)),
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=2 * math.pi),
)


def definitional_fidelity(rho, sigma):
    root = scipy.linalg.sqrtm(sigma)
    return float(np.real(np.trace(scipy.linalg.sqrtm(root @ rho @ root))) ** 2)


@pytest.mark.parametrize(
    "state, expected",
    [
        (BlochState(0.0), [[0.5, 0], [0, 0.5]]),
        (BlochState(1.0, (1.0, 0.0, 0.0)), [[0.5, 0.5], [0.5, 0.5]]),
        (BlochState(1.0, (0.0, 0.0, 1.0)), [[1, 0], [0, 0]]),
    ],
)
def test_bloch_to_matrix(state, expected):
    assert np.allclose(bloch_to_matrix(state).entries, expected, atol=1e-15)


def test_bloch_to_matrix_off_diagonal_sign():
    rho = bloch_to_matrix(BlochState(0.8, (0.0, 1.0, 0.0)))
    assert rho[0, 1] == pytest.approx(-0.4j)
    assert rho[1, 0] == pytest.approx(0.4j)


@pytest.mark.parametrize(
    "t, n",
    [(1.1, (0, 0, 1)), (-0.1, (0, 0, 1)), (0.5, (1, 1, 0)), (0.5, (0, 0, 0.9)), (float("nan"), (0, 0, 1))],
)
def test_invalid_bloch_state(t, n):
    with pytest.raises(InvalidStateError):
        BlochState(t, n)


def test_zero_radius_direction_convention():
    assert BlochState(0.0, (0.3, 0.2, 0.1)).n == (0.0, 0.0, 1.0)
    assert BlochState(1.0 + 5e-13, (0, 0, 1)).t == 1.0


@pytest.mark.parametrize(
    "entries, t, n",
    [
        ([[0.5, 0], [0, 0.5]], 0.0, (0, 0, 1)),
        ([[0.5, 0.5], [0.5, 0.5]], 1.0, (1, 0, 0)),
        ([[0.75, 0], [0, 0.25]], 0.5, (0, 0, 1)),
    ],
)
def test_matrix_to_bloch(entries, t, n):
    state = matrix_to_bloch(DensityMatrix(entries))
    assert state.t == pytest.approx(t, abs=1e-15)
    assert np.allclose(state.n, n, atol=1e-15)


@pytest.mark.parametrize(
    "entries",
    [
        [[0.5, 0.1], [0.2, 0.5]],
        [[0.5 + 0.1j, 0], [0, 0.5]],
        [[1.0, 0], [0, 1.0]],
        [[1.2, 0], [0, -0.2]],
        [[0.5, 0.6], [0.6, 0.5]],
        [[1, 0, 0], [0, 0, 0]],
    ],
)
def test_invalid_density_matrix(entries):
    with pytest.raises(InvalidMatrixError):
        DensityMatrix(entries)


@pytest.mark.parametrize(
    "state, eigenvalues",
    [
        (BlochState(0.0), (0.5, 0.5)),
        (BlochState(1.0, (1, 0, 0)), (1.0, 0.0)),
        (BlochState.from_angles(0.6, -0.3, 1.1), (0.8, 0.2)),
    ],
)
def test_eigendecompose(state, eigenvalues):
    spectral = eigendecompose(bloch_to_matrix(state))
    assert spectral.eigenvalues == pytest.approx(eigenvalues, abs=1e-15)
    vectors = spectral.eigenvectors
    assert np.allclose(vectors.conj().T @ vectors, np.eye(2), atol=1e-14)


def test_matrix_power_examples():
    half = DensityMatrix([[0.5, 0], [0, 0.5]])
    assert np.allclose(matrix_power(half, 2.0), 0.25 * np.eye(2), atol=1e-15)

    pure = bloch_to_matrix(BlochState.from_angles(1.0, 0.3, 0.7))
    for alpha in (0.25, 0.5, 1.5, 2.0):
        assert np.allclose(matrix_power(pure, alpha), pure.entries, atol=1e-14)

    diagonal = DensityMatrix([[0.8, 0], [0, 0.2]])
    assert np.allclose(matrix_power(diagonal, 0.5), np.diag([math.sqrt(0.8), math.sqrt(0.2)]), atol=1e-15)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.0, 2.5, float("nan")])
def test_matrix_power_domain(alpha):
    with pytest.raises(DomainError):
        matrix_power(DensityMatrix([[0.5, 0], [0, 0.5]]), alpha)


@pytest.mark.parametrize("x, expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0), (0.25, H_QUARTER), (1.0 + 1e-13, 0.0)])
def test_binary_entropy(x, expected):
    assert binary_entropy(x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [-0.1, 1.5])
def test_binary_entropy_domain(x):
    with pytest.raises(DomainError):
        binary_entropy(x)


def test_binary_entropy_is_vectorized():
    values = binary_entropy(np.array([0.0, 0.25, 0.5]))
    assert np.allclose(values, [0.0, H_QUARTER, 1.0])


@pytest.mark.parametrize(
    "state, expected",
    [
        (BlochState(0.0), 1.0),
        (BlochState.from_angles(1.0, 0.2, 2.0), 0.0),
        (BlochState.from_angles(0.5, 0.9, 0.4), H_QUARTER),
    ],
)
def test_von_neumann_entropy(state, expected):
    assert von_neumann_entropy(bloch_to_matrix(state)) == pytest.approx(expected, abs=1e-12)


def test_fidelity_examples():
    plus = DensityMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert fidelity(plus, plus) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(DensityMatrix([[1, 0], [0, 0]]), DensityMatrix([[0, 0], [0, 1]])) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(plus, DensityMatrix([[0.5, 0], [0, 0.5]])) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_matches_matrix_square_root_route(rng):
    t, n_x, n_y, n_z = random_bloch_arrays(rng, 40)
    states = [bloch_to_matrix(BlochState.from_vector(ti * np.array([x, y, z]))) for ti, x, y, z in zip(t, n_x, n_y, n_z)]
    for rho, sigma in zip(states[:20], states[20:]):
        assert fidelity(rho, sigma) == pytest.approx(definitional_fidelity(rho.entries, sigma.entries), abs=1e-6)


def test_random_bloch_arrays_inside_ball(rng):
    t, n_x, n_y, n_z = random_bloch_arrays(rng, 500)
    assert np.all((t >= 0) & (t <= 1))
    assert np.allclose(n_x ** 2 + n_y ** 2 + n_z ** 2, 1.0, atol=1e-14)


@seed(1)
@settings(max_examples=1000, deadline=None)
@given(state=bloch_states)
def test_round_trip(state):
    back = matrix_to_bloch(bloch_to_matrix(state))
    assert abs(back.t - state.t) <= 1e-12
    assert np.allclose(back.n, state.n, atol=1e-12, rtol=0)


@seed(2)
@settings(max_examples=1000, deadline=None)
@given(state=bloch_states)
def test_spectral_reconstruction(state):
    rho = bloch_to_matrix(state)
    spectral = eigendecompose(rho)
    assert sum(spectral.eigenvalues) == pytest.approx(1.0, abs=1e-12)
    assert spectral.eigenvalues[1] >= -1e-12
    assert np.allclose(spectral.reconstruct(), rho.entries, atol=1e-10, rtol=0)


@seed(3)
@settings(max_examples=500, deadline=None)
@given(state=bloch_states)
def test_square_equals_matrix_product(state):
    rho = bloch_to_matrix(state)
    assert np.allclose(matrix_power(rho, 2.0), rho.entries @ rho.entries, atol=1e-12, rtol=0)


@seed(4)
@settings(max_examples=500, deadline=None)
@given(first=bloch_states, second=bloch_states)
def test_fidelity_symmetric_and_bounded(first, second):
    rho, sigma = bloch_to_matrix(first), bloch_to_matrix(second)
    forward = fidelity(rho, sigma)
    assert forward == pytest.approx(fidelity(sigma, rho), abs=1e-10)
    assert -1e-10 <= forward <= 1 + 1e-10


@seed(5)
@settings(max_examples=500, deadline=None)
@given(state=bloch_states)
def test_entropy_is_binary_entropy_of_eigenvalue(state):
    rho = bloch_to_matrix(state)
    assert von_neumann_entropy(rho) == pytest.approx(binary_entropy((1 + state.t) / 2), abs=1e-10)


def test_fidelity_batch_shape(random_matrices):
    values = fidelity_batch(random_matrices, random_matrices[::-1])
    assert values.shape == (1000,)
    assert np.all((values >= 0) & (values <= 1))
