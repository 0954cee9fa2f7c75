import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.errors import DomainError
from src.measures import (
    CoherenceMeasureId,
    MeasureKind,
    c_alpha,
    c_g,
    c_l1,
    c_r,
    evaluate,
    evaluate_batch,
    geometric_batch,
    geometric_qubit_formula,
    l1_batch,
    relative_entropy_batch,
)
from src.qubit_core import (
    BlochState,
    DensityMatrix,
    binary_entropy,
    bloch_to_matrix,
    fidelity_batch,
    matrices_from_bloch,
    off_diagonal,
)

MAXIMALLY_COHERENT = DensityMatrix([[0.5, 0.5], [0.5, 0.5]])

ALL_MEASURES = [
    CoherenceMeasureId.l1(),
    CoherenceMeasureId.relative_entropy(),
    CoherenceMeasureId.geometric(),
    CoherenceMeasureId.tsallis(0.25),
    CoherenceMeasureId.tsallis(0.5),
    CoherenceMeasureId.tsallis(0.75),
    CoherenceMeasureId.tsallis(1.5),
    CoherenceMeasureId.tsallis(2.0),
]


def diagonal_state(q):
    return DensityMatrix(np.diag([q, 1.0 - q]))


@pytest.mark.parametrize("q", [0.0, 0.3, 0.5, 1.0])
def test_l1_examples(q):
    assert c_l1(diagonal_state(q)) == 0.0
    assert c_l1(MAXIMALLY_COHERENT) == pytest.approx(1.0)
    assert c_l1(bloch_to_matrix(BlochState(0.8, (0.6, 0.0, 0.8)))) == pytest.approx(0.48, abs=1e-15)


def test_relative_entropy_examples():
    assert c_r(diagonal_state(0.3)) == pytest.approx(0.0, abs=1e-12)
    assert c_r(MAXIMALLY_COHERENT) == pytest.approx(1.0, abs=1e-12)

    state = BlochState.from_angles(0.9, 0.3, 0.0)
    expected = binary_entropy((1 + 0.27) / 2) - binary_entropy(0.95)
    assert c_r(bloch_to_matrix(state)) == pytest.approx(expected, abs=1e-12)


def test_geometric_examples():
    assert c_g(diagonal_state(0.7)) == pytest.approx(0.0, abs=1e-10)
    assert c_g(MAXIMALLY_COHERENT) == pytest.approx(0.5, abs=1e-10)
    assert c_g(bloch_to_matrix(BlochState(0.6, (1.0, 0.0, 0.0)))) == pytest.approx(0.1, abs=1e-9)


def test_geometric_matches_brute_force_search():
    rho = bloch_to_matrix(BlochState.from_angles(0.7, 0.4, 0.9))
    q = np.linspace(0.0, 1.0, 100001)
    candidates = np.zeros((q.size, 2, 2), dtype=np.complex128)
    candidates[:, 0, 0] = q
    candidates[:, 1, 1] = 1.0 - q
    brute = 1.0 - np.max(fidelity_batch(np.broadcast_to(rho.entries, candidates.shape), candidates))
    assert c_g(rho) == pytest.approx(brute, abs=1e-9)


def test_tsallis_examples():
    assert c_alpha(diagonal_state(0.2), 0.5) == pytest.approx(0.0, abs=1e-12)
    assert c_alpha(MAXIMALLY_COHERENT, 2.0) == pytest.approx(1.0, abs=1e-12)
    # 纯态 |+⟩: r = 2·(1/2)^{1/α}，C_α = (2^α·(1/2) − 1)/(α − 1)
    for alpha in (0.25, 0.75, 1.5):
        expected = (2.0 ** alpha / 2.0 - 1.0) / (alpha - 1.0)
        assert c_alpha(MAXIMALLY_COHERENT, alpha) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5, -1.0])
def test_tsallis_domain(alpha):
    with pytest.raises(DomainError):
        c_alpha(MAXIMALLY_COHERENT, alpha)
    with pytest.raises(DomainError):
        CoherenceMeasureId.tsallis(alpha)


@pytest.mark.parametrize(
    "text, alpha, kind, expected_alpha",
    [
        ("l1", None, MeasureKind.L1, None),
        ("L1", 0.5, MeasureKind.L1, None),
        ("relative_entropy", None, MeasureKind.RELATIVE_ENTROPY, None),
        ("geometric", None, MeasureKind.GEOMETRIC, None),
        ("tsallis", 0.75, MeasureKind.TSALLIS, 0.75),
        ("tsallis:1.25", None, MeasureKind.TSALLIS, 1.25),
    ],
)
def test_measure_id_parse(text, alpha, kind, expected_alpha):
    measure = CoherenceMeasureId.parse(text, alpha)
    assert measure.kind is kind
    assert measure.alpha == expected_alpha


@pytest.mark.parametrize("text, alpha", [("unknown", None), ("tsallis", None), ("tsallis:abc", None), ("tsallis:1", None)])
def test_measure_id_parse_errors(text, alpha):
    with pytest.raises(DomainError):
        CoherenceMeasureId.parse(text, alpha)


def test_measure_labels():
    assert CoherenceMeasureId.tsallis(0.75).label == "tsallis(alpha=0.75)"
    assert CoherenceMeasureId.l1().to_dict() == {"measure": "l1", "alpha": None}


@pytest.mark.parametrize("measure", ALL_MEASURES, ids=lambda m: m.label)
def test_zero_on_incoherent_states(measure):
    q = np.linspace(0.0, 1.0, 11)
    mats = np.zeros((q.size, 2, 2), dtype=np.complex128)
    mats[:, 0, 0] = q
    mats[:, 1, 1] = 1.0 - q
    assert np.all(np.abs(evaluate_batch(measure, mats)) <= 1e-10)


@pytest.mark.parametrize("measure", ALL_MEASURES, ids=lambda m: m.label)
def test_positive_on_coherent_states(measure, random_matrices):
    coherent = random_matrices[np.abs(off_diagonal(random_matrices)) > 1e-2]
    values = evaluate_batch(measure, coherent)
    assert np.all(values > 1e-6)


@pytest.mark.parametrize("measure", ALL_MEASURES, ids=lambda m: m.label)
def test_invariant_under_diagonal_unitaries(measure, random_matrices, rng):
    phases = rng.uniform(0.0, 2 * math.pi, size=(random_matrices.shape[0], 2))
    unitary = np.zeros_like(random_matrices)
    unitary[:, 0, 0] = np.exp(1j * phases[:, 0])
    unitary[:, 1, 1] = np.exp(1j * phases[:, 1])
    rotated = unitary @ random_matrices @ np.conj(np.swapaxes(unitary, -1, -2))
    assert np.allclose(evaluate_batch(measure, rotated), evaluate_batch(measure, random_matrices), atol=1e-10, rtol=0)


@pytest.mark.parametrize("measure", ALL_MEASURES, ids=lambda m: m.label)
def test_bounded_by_maximally_coherent_state(measure, random_matrices):
    ceiling = evaluate(measure, MAXIMALLY_COHERENT)
    assert np.all(evaluate_batch(measure, random_matrices) <= ceiling + 1e-10)


def test_geometric_matches_qubit_formula(random_matrices):
    assert np.allclose(geometric_batch(random_matrices), geometric_qubit_formula(random_matrices), atol=1e-8, rtol=0)


def test_geometric_preserves_batch_shape(random_matrices):
    grid = random_matrices[:24].reshape((2, 3, 4, 2, 2))
    assert geometric_batch(grid).shape == (2, 3, 4)


def test_l1_and_geometric_orderings_agree(rng):
    t = rng.random(20000) ** (1.0 / 3.0)
    direction = rng.normal(size=(20000, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    mats = matrices_from_bloch(t, *direction.T)
    l1 = l1_batch(mats)
    geometric = geometric_batch(mats)

    l1_gap = l1[:10000] - l1[10000:]
    geometric_gap = geometric[:10000] - geometric[10000:]
    decided = np.abs(geometric_gap) > 1e-8
    assert np.all(np.sign(l1_gap[decided]) == np.sign(geometric_gap[decided]))


@pytest.mark.parametrize("alpha", [1.0 - 1e-4, 1.0 + 1e-4])
def test_tsallis_approaches_relative_entropy_in_nats(alpha, random_matrices):
    tsallis = evaluate_batch(CoherenceMeasureId.tsallis(alpha), random_matrices)
    relative = relative_entropy_batch(random_matrices) * math.log(2.0)
    assert np.max(np.abs(tsallis - relative)) < 1e-3


@seed(7)
@settings(max_examples=300, deadline=None)
@given(
    t=st.floats(min_value=0.0, max_value=1.0),
    n_z=st.floats(min_value=-1.0, max_value=1.0),
    azimuth=st.floats(min_value=0.0, max_value=2 * math.pi),
)
def test_scalar_matches_batch(t, n_z, azimuth):
    rho = bloch_to_matrix(BlochState.from_angles(t, n_z, azimuth))
    for measure in ALL_MEASURES:
        assert evaluate(measure, rho) == pytest.approx(float(evaluate_batch(measure, rho.entries[None])[0]), abs=1e-15)
