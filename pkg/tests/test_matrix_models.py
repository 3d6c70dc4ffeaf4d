"""Tests for dense-matrix samplers."""

import numpy as np
import pytest

from specmeas.exceptions import CyclicityWarning
from specmeas.matrix_models import (
    dual_compose,
    haar_special_orthogonal,
    haar_unitary,
    sample_dual_spectral,
    sample_haar_spectral,
    spectral_measure,
    symplectic_unit,
    unitarity_defect,
)
from specmeas.measures import is_symmetric, moments_circle


def test_haar_unitary(rng):
    """Haar draws are unitary."""
    U = haar_unitary(rng, 6)
    assert unitarity_defect(U) < 1e-12
    with pytest.raises(ValueError):
        haar_unitary(rng, 0)


def test_haar_special_orthogonal(rng):
    """SO(2n) draws are orthogonal with determinant one."""
    g = haar_special_orthogonal(rng, 6)
    assert unitarity_defect(g) < 1e-12
    assert np.linalg.det(g) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="even"):
        haar_special_orthogonal(rng, 3)


def test_dual_composition(rng):
    """g^D g is unitary for orthogonal g."""
    J = symplectic_unit(2)
    np.testing.assert_array_equal(J @ J, -np.eye(4))
    g = haar_special_orthogonal(rng, 4)
    assert unitarity_defect(dual_compose(g)) < 1e-12
    with pytest.raises(ValueError):
        dual_compose(np.eye(3))


def test_moments_are_matrix_entries(rng):
    """t_k = (U**k)[0, 0]."""
    U = haar_unitary(rng, 5)
    t = moments_circle(spectral_measure(U), 4).entries
    powers = [np.linalg.matrix_power(U, k)[0, 0] for k in range(1, 5)]
    np.testing.assert_allclose(t, powers, atol=1e-12)


def test_haar_spectral_measure(rng):
    """A Haar draw has N atoms with unit mass."""
    measure = sample_haar_spectral(rng, 7)
    assert len(measure) == 7
    assert measure.weights.sum() == pytest.approx(1.0)


def test_repeated_eigenvalues_merge(rng):
    """A double eigenvalue becomes one atom carrying the projected weight."""
    Q = haar_unitary(rng, 3)
    M = Q @ np.diag([1j, 1j, 1.0]) @ Q.conj().T
    measure = spectral_measure(M)
    assert len(measure) == 2
    order = np.argsort(measure.angles)
    np.testing.assert_allclose(measure.angles[order], [0.0, np.pi / 2], atol=1e-9)
    expected = [abs(Q[0, 2]) ** 2, abs(Q[0, 0]) ** 2 + abs(Q[0, 1]) ** 2]
    np.testing.assert_allclose(measure.weights[order], expected, atol=1e-10)


def test_dual_spectrum_is_symmetric(rng):
    """Eigenvalues of g^D g are doubly degenerate and come in conjugate pairs."""
    measure = sample_dual_spectral(rng, 4)
    assert len(measure) == 4
    assert is_symmetric(measure)


def test_non_cyclic_vector_warns():
    """A missed eigenspace warns and gets zero weight."""
    with pytest.warns(CyclicityWarning):
        measure = spectral_measure(np.diag([1.0, -1.0]))
    np.testing.assert_allclose(measure.weights, [0.0, 1.0])


def test_rejects_non_unitary():
    """Only unitary matrices have a spectral measure here."""
    with pytest.raises(ValueError, match="not unitary"):
        spectral_measure(np.array([[2.0, 0.0], [0.0, 0.5]]))
