"""Orthogonal polynomials on the unit circle.

Monic orthogonal polynomials ``Phi_j`` of a probability measure on the circle
obey the Szego recursion ``Phi_j = z Phi_{j-1} - conj(c_j) Phi*_{j-1}`` with
Verblunsky coefficients ``c_j = -conj(Phi_j(0))``. This module moves between
moment vectors, Verblunsky coefficients and atomic measures.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.typing import ArrayLike, NDArray

from .config import DEFAULT_TOLERANCES
from .exceptions import (
    CoefficientOutOfDisk,
    Degenerate,
    MomentSpaceViolation,
    RootFindingFailure,
)
from .measures import CircleAtomicMeasure, MomentVectorT, VerblunskyVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """Polynomial with complex coefficients, lowest degree first, leading 1."""

    coefficients: NDArray[np.complex128]

    def __post_init__(self):
        coefficients = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if coefficients[-1] != 1:
            raise ValueError(
                f"leading coefficient must be 1, got {coefficients[-1]!r}"
            )
        coefficients = coefficients.copy()
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return P.polyval(z, self.coefficients)

    @classmethod
    def one(cls) -> "MonicPolynomial":
        return cls(np.ones(1, dtype=complex))


@dataclass(frozen=True)
class MomentDisk:
    """Admissible region ``{center + radius * w : |w| <= 1}`` of the next moment."""

    center: complex
    radius: float

    def relative_position(self, t_next: complex) -> complex:
        """``(t_next - center) / radius``, the conjugate of the next coefficient."""
        if self.radius <= 0:
            raise Degenerate("the moment disk has collapsed to a point")
        return (t_next - self.center) / self.radius

    def contains(self, t_next: complex) -> bool:
        return abs(t_next - self.center) <= self.radius * (1 + 1e-12)


def reversed(phi: MonicPolynomial) -> NDArray[np.complex128]:  # noqa: A001
    """Coefficients of ``Phi*(z) = z**n conj(Phi(1 / conj(z)))``."""
    return np.conj(phi.coefficients[::-1])


def szego_step(phi: MonicPolynomial, c: complex) -> MonicPolynomial:
    """Return ``z * phi - conj(c) * reversed(phi)``.

    Raises
    ------
    CoefficientOutOfDisk
        If ``|c|`` exceeds one by more than the boundary tolerance.
    """
    if abs(c) > 1 + DEFAULT_TOLERANCES.boundary:
        raise CoefficientOutOfDisk(f"|c| = {abs(c)!r} is larger than 1")
    shifted = np.concatenate([[0.0], phi.coefficients])
    rev = np.concatenate([reversed(phi), [0.0]])
    return MonicPolynomial(shifted - np.conj(c) * rev)


def _step_batch(phi, c):
    shifted = np.concatenate([np.zeros((phi.shape[0], 1)), phi], axis=1)
    rev = np.concatenate(
        [np.conj(phi[:, ::-1]), np.zeros((phi.shape[0], 1))], axis=1
    )
    return shifted - np.conj(c)[:, None] * rev


def leading_moments(coefficients: ArrayLike) -> NDArray[np.complex128]:
    """Moments ``t_1..t_K`` for a batch of coefficient vectors.

    Parameters
    ----------
    coefficients : array-like of complex, shape (..., K)
        Leading Verblunsky coefficients. By triangularity the first ``K``
        moments depend only on them, so truncated vectors are allowed.

    Returns
    -------
    numpy.ndarray of complex, shape (..., K)
    """
    c = np.asarray(coefficients, dtype=complex)
    batch_shape, K = c.shape[:-1], c.shape[-1]
    c = c.reshape(-1, K)
    S = c.shape[0]
    phi = np.ones((S, 1), dtype=complex)
    norm = np.ones(S)
    t = np.zeros((S, K), dtype=complex)
    for j in range(1, K + 1):
        cj = c[:, j - 1]
        partial = np.einsum("sk,sk->s", phi[:, : j - 1], t[:, : j - 1])
        t[:, j - 1] = np.conj(cj) * norm - partial
        phi = _step_batch(phi, cj)
        norm = norm * (1.0 - np.abs(cj) ** 2)
    return t.reshape(batch_shape + (K,))


def szego_polynomials(
    c: VerblunskyVector,
) -> Tuple[List[MonicPolynomial], NDArray[np.float64]]:
    """Polynomials ``Phi_0..Phi_K`` and their squared norms ``prod(1 - |c_j|**2)``."""
    polys = [MonicPolynomial.one()]
    for cj in c.coefficients:
        polys.append(szego_step(polys[-1], cj))
    factors = 1.0 - np.abs(c.coefficients) ** 2
    norms = np.concatenate([[1.0], np.cumprod(factors)])
    return polys, norms


def moments_to_verblunsky(t: MomentVectorT) -> VerblunskyVector:
    """Verblunsky coefficients of a moment vector (Levinson-type recursion).

    Each step orthogonalizes ``Phi_j`` against the constant function under the
    Toeplitz form ``<z**a, z**b> = t_{b-a}`` and tracks the squared norm
    ``||Phi_j||**2 = prod_{i <= j} (1 - |c_i|**2)``. A coefficient within the
    boundary tolerance of the circle, or a norm in ``[-1e-10, 1e-12)``,
    terminates the vector.

    Raises
    ------
    MomentSpaceViolation
        If a norm falls below ``-1e-10``.
    Degenerate
        If the vector terminates before the last index; ``index`` is the
        number of atoms of the measure. A violation that follows a norm below
        the collapse tolerance is reported as degeneracy at that index.
    """
    tol = DEFAULT_TOLERANCES
    entries = t.entries
    N = len(entries)
    phi = np.ones(1, dtype=complex)
    norm = 1.0
    collapsed_at = None
    interior = []

    def degenerate(j):
        return Degenerate(
            f"moments determine a measure with {j} atoms, {N} moments requested",
            index=j,
        )

    for j in range(1, N + 1):
        s = np.dot(phi, entries[:j])
        c = np.conj(s / norm)
        next_norm = norm * (1.0 - abs(c) ** 2)
        if next_norm < -tol.norm_negative:
            if collapsed_at is not None:
                raise degenerate(collapsed_at)
            raise MomentSpaceViolation(
                f"coefficient {j} has modulus {abs(c)!r}; moments are not attainable"
            )
        if abs(1.0 - abs(c)) < tol.boundary or next_norm < tol.norm_floor:
            if j < N:
                raise degenerate(j)
            return VerblunskyVector(np.array(interior), c / abs(c))
        if collapsed_at is None and next_norm < tol.norm_collapse:
            collapsed_at = j
        interior.append(c)
        phi = _step_batch(phi[None, :], np.array([c]))[0]
        norm = next_norm
    return VerblunskyVector(np.array(interior, dtype=complex))


def verblunsky_to_moments(c: VerblunskyVector) -> MomentVectorT:
    """Inverse of :func:`moments_to_verblunsky`."""
    coefficients = c.coefficients
    if len(coefficients) == 0:
        return MomentVectorT(np.zeros(0, dtype=complex))
    return MomentVectorT(leading_moments(coefficients[None, :])[0])


def moment_disk(t: MomentVectorT) -> MomentDisk:
    """Disk of admissible values of ``t_{N+1}`` given ``t_1..t_N``.

    The center is the next moment produced by ``c_{N+1} = 0`` and the radius is
    ``prod(1 - |c_j|**2)``.
    """
    c = moments_to_verblunsky(t)
    if c.is_terminated:
        raise Degenerate("moment vector lies on the boundary of the moment space")
    polys, norms = szego_polynomials(c)
    phi = polys[-1].coefficients
    center = -np.dot(phi[:-1], t.entries) if len(t) else 0.0
    return MomentDisk(complex(center), float(norms[-1]))


def _evaluate(coefficients, z):
    """Values of ``Phi_0..Phi_{K-1}`` at ``z`` (rows) and ``Phi_K(z)``."""
    K = len(coefficients)
    values = np.empty((K, len(z)), dtype=complex)
    phi = np.ones_like(z)
    phi_star = np.ones_like(z)
    for j, cj in enumerate(coefficients):
        values[j] = phi
        phi, phi_star = (
            z * phi - np.conj(cj) * phi_star,
            phi_star - cj * z * phi,
        )
    return values, phi


def verblunsky_to_measure(c: VerblunskyVector) -> CircleAtomicMeasure:
    """Atomic measure whose coefficients are ``c`` (terminal coefficient required).

    Atoms are the zeros of ``Phi_K``; the weight at ``z_k`` is the Christoffel
    weight ``1 / sum_j |Phi_j(z_k)|**2 / ||Phi_j||**2``.

    Raises
    ------
    RootFindingFailure
        If a computed zero is farther than the root tolerance from the circle.
    """
    if not c.is_terminated:
        raise ValueError("reconstruction needs a terminated coefficient vector")
    coefficients = c.coefficients
    polys, norms = szego_polynomials(c)
    phi_k = polys[-1].coefficients
    if not np.any(phi_k.imag):
        # real polynomial: zeros come back in exact conjugate pairs
        phi_k = phi_k.real
    if len(phi_k) == 2:
        roots = np.array([-phi_k[0]])
    else:
        roots = P.polyroots(phi_k)
        derivative = P.polyder(phi_k)
        for _ in range(3):
            slope = P.polyval(roots, derivative)
            safe = np.abs(slope) > 0
            roots[safe] -= P.polyval(roots[safe], phi_k) / slope[safe]
    drift = np.abs(np.abs(roots) - 1.0)
    if drift.max() > DEFAULT_TOLERANCES.root_modulus:
        raise RootFindingFailure(
            f"zero of Phi_{len(coefficients)} at distance {drift.max():.3g} "
            "from the unit circle"
        )
    roots = roots / np.abs(roots)
    values, _ = _evaluate(coefficients, roots)
    kernel = (np.abs(values) ** 2 / norms[:-1, None]).sum(axis=0)
    weights = 1.0 / kernel
    total = weights.sum()
    if abs(total - 1.0) > 1e-10:
        logger.warning("Christoffel weights sum to %.15g; renormalizing", total)
    return CircleAtomicMeasure(np.angle(roots), weights / total)
