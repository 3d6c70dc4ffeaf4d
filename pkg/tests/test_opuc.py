"""Tests for orthogonal polynomials on the unit circle."""

import numpy as np
import pytest

from specmeas.exceptions import CoefficientOutOfDisk, Degenerate, MomentSpaceViolation
from specmeas.measures import (
    CircleAtomicMeasure,
    MomentVectorT,
    VerblunskyVector,
    moments_circle,
)
from specmeas.opuc import (
    MonicPolynomial,
    leading_moments,
    moment_disk,
    moments_to_verblunsky,
    reversed,
    szego_polynomials,
    szego_step,
    verblunsky_to_measure,
    verblunsky_to_moments,
)
from specmeas.samplers import EnsembleSpec, sample_coefficients


def test_szego_step():
    """One recursion step from z - 1/2."""
    phi = MonicPolynomial(np.array([-0.5, 1.0]))
    result = szego_step(phi, 0.25j)
    np.testing.assert_allclose(result.coefficients, [0.25j, -0.5 - 0.125j, 1.0])
    with pytest.raises(CoefficientOutOfDisk):
        szego_step(phi, 1.5)


def test_reversed_polynomial():
    """Phi* conjugates and reverses the coefficient list."""
    phi = MonicPolynomial(np.array([1j, 2.0, 1.0]))
    np.testing.assert_array_equal(reversed(phi), [1.0, 2.0, -1j])
    with pytest.raises(ValueError, match="leading coefficient"):
        MonicPolynomial(np.array([1.0, 2.0]))


def test_first_coefficient_is_conjugate_moment():
    """c_1 is the conjugate of t_1."""
    c = moments_to_verblunsky(MomentVectorT([0.3 + 0.4j]))
    np.testing.assert_allclose(c.interior, [0.3 - 0.4j])


def test_uniform_measure_has_zero_coefficients():
    """Vanishing moments give vanishing coefficients."""
    c = moments_to_verblunsky(MomentVectorT(np.zeros(4)))
    np.testing.assert_array_equal(c.interior, np.zeros(4))
    assert not c.is_terminated


def test_round_trip(rng):
    """Coefficients -> moments -> coefficients on uniform interior draws."""
    worst = 0.0
    for _ in range(100):
        c = sample_coefficients(rng, EnsembleSpec("uniform-circle", 8), 1)[0]
        t = verblunsky_to_moments(VerblunskyVector(c))
        recovered = moments_to_verblunsky(t).interior
        worst = max(worst, np.abs(recovered - c).max())
    assert worst < 1e-9


def test_moment_round_trip(rng):
    """Moments -> coefficients -> moments stays within 1e-10 up to N = 20."""
    for N in (5, 12, 20):
        for _ in range(20):
            c = sample_coefficients(rng, EnsembleSpec("uniform-circle", N), 1)[0]
            t = verblunsky_to_moments(VerblunskyVector(c))
            again = verblunsky_to_moments(moments_to_verblunsky(t))
            np.testing.assert_allclose(again.entries, t.entries, atol=1e-10)


def test_leading_moments_batches(rng):
    """Batched moments agree with the single-vector path."""
    c = sample_coefficients(rng, EnsembleSpec("uniform-circle", 5), 10)
    batch = leading_moments(c)
    assert batch.shape == (10, 5)
    for row, t in zip(c, batch):
        np.testing.assert_allclose(
            verblunsky_to_moments(VerblunskyVector(row)).entries, t, atol=1e-14
        )


def test_rotation_changes_phases():
    """Rotating the measure by alpha multiplies c_j by exp(-i j alpha)."""
    c = np.array([0.3 + 0.1j, -0.2j, 0.5, 0.1 - 0.4j])
    alpha = 0.7
    t = verblunsky_to_moments(VerblunskyVector(c)).entries
    rotated = t * np.exp(1j * alpha * np.arange(1, 5))
    recovered = moments_to_verblunsky(MomentVectorT(rotated)).interior
    np.testing.assert_allclose(
        recovered, c * np.exp(-1j * alpha * np.arange(1, 5)), atol=1e-12
    )


def test_boundary_moments():
    """A unimodular coefficient terminates the vector or signals degeneracy."""
    single = moments_to_verblunsky(MomentVectorT([1.0]))
    assert single.terminal == pytest.approx(1.0)
    with pytest.raises(Degenerate):
        moments_to_verblunsky(MomentVectorT([1.0, 1.0, 1.0]))
    with pytest.raises(MomentSpaceViolation):
        moments_to_verblunsky(MomentVectorT([0.9, -0.9]))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fewer_atoms_than_moments_is_degenerate(k):
    """Moments of a k-atom measure stop at coefficient k when more are asked."""
    for seed in range(50):
        rng = np.random.default_rng(seed)
        angles = (
            rng.uniform(0.0, 2.0 * np.pi)
            + 2.0 * np.pi * np.arange(k) / k
            + rng.uniform(-0.4, 0.4, k)
        )
        weights = (1.0 + rng.dirichlet(np.ones(k))) / (k + 1)
        measure = CircleAtomicMeasure(angles, weights)
        with pytest.raises(Degenerate) as info:
            moments_to_verblunsky(moments_circle(measure, k + 3))
        assert info.value.index == k


def test_violation_after_collapsed_norm_is_degenerate():
    """A bad moment after a vanishing norm points back at the collapse."""
    c = VerblunskyVector([0.3, 0.2j, (1.0 - 1e-10) * np.exp(0.4j), 0.0])
    t = np.array(verblunsky_to_moments(c).entries)
    clean = moments_to_verblunsky(MomentVectorT(t))
    assert len(clean.interior) == 4
    assert abs(clean.interior[3]) < 1e-3

    t[3] += 1e-6
    with pytest.raises(Degenerate) as info:
        moments_to_verblunsky(MomentVectorT(t))
    assert info.value.index == 3


def test_szego_polynomial_norms():
    """Squared norms are cumulative products of 1 - |c_j|**2."""
    polys, norms = szego_polynomials(VerblunskyVector([0.5, 0.5j]))
    assert [p.degree for p in polys] == [0, 1, 2]
    np.testing.assert_allclose(norms, [1.0, 0.75, 0.5625])


def test_moment_disk():
    """The next moment ranges over a disk centered at the c = 0 continuation."""
    disk = moment_disk(MomentVectorT([0.5]))
    assert disk.center == pytest.approx(0.25)
    assert disk.radius == pytest.approx(0.75)
    assert disk.contains(1.0)
    assert not disk.contains(-0.6)
    assert disk.relative_position(0.25 + 0.375j) == pytest.approx(0.5j)


def test_two_point_reconstruction():
    """Phi_2 = z**2 + 1 has zeros at +-i with equal weights."""
    measure = verblunsky_to_measure(VerblunskyVector([0.0], -1.0))
    np.testing.assert_allclose(np.sort(measure.angles), [-np.pi / 2, np.pi / 2])
    np.testing.assert_allclose(measure.weights, [0.5, 0.5])


def test_dirac_reconstruction():
    """A single terminal coefficient gives one atom."""
    measure = verblunsky_to_measure(VerblunskyVector([], 1.0))
    np.testing.assert_allclose(measure.angles, [0.0], atol=1e-15)
    np.testing.assert_allclose(measure.weights, [1.0])
    with pytest.raises(ValueError, match="terminated"):
        verblunsky_to_measure(VerblunskyVector([0.2]))


def test_reconstruction_consistency(rng):
    """measure -> moments -> coefficients recovers the interior coefficients."""
    for N in (3, 8, 16):
        for _ in range(30):
            c = sample_coefficients(rng, EnsembleSpec("cbe", N, 2.0), 1)[0]
            v = VerblunskyVector(c[:-1], c[-1] / abs(c[-1]))
            measure = verblunsky_to_measure(v)
            assert len(measure) == N
            assert measure.weights.sum() == pytest.approx(1.0, abs=1e-12)
            recovered = moments_to_verblunsky(moments_circle(measure, N - 1))
            np.testing.assert_allclose(recovered.interior, v.interior, atol=1e-8)


def test_full_moment_vector_terminates():
    """N moments of an N-atom measure end in its unimodular coefficient."""
    measure = CircleAtomicMeasure([0.5, 2.0, -1.0], [0.2, 0.3, 0.5])
    c = moments_to_verblunsky(moments_circle(measure, 3))
    assert c.is_terminated
    assert abs(c.terminal) == pytest.approx(1.0)
