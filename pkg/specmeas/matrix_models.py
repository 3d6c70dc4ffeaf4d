"""Dense-matrix samplers and spectral measures of unitary matrices."""

import logging
import warnings

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import schur

from .config import DEFAULT_TOLERANCES
from .exceptions import CyclicityWarning, EigensolverFailure
from .measures import TWO_PI, CircleAtomicMeasure, canonical_angles

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
CYCLIC_WEIGHT_FLOOR = 1e-12


def unitarity_defect(M: ArrayLike) -> float:
    """``max |M* M - I|``."""
    M = np.asarray(M)
    return float(np.abs(M.conj().T @ M - np.eye(M.shape[0])).max())


def haar_unitary(rng: np.random.Generator, N: int) -> NDArray[np.complex128]:
    """Haar-distributed element of U(N).

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` moved into Q
    so the factorization is unique.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_special_orthogonal(rng: np.random.Generator, n2: int) -> NDArray[np.float64]:
    """Haar-distributed element of SO(n2) for even ``n2``."""
    if n2 < 2 or n2 % 2:
        raise ValueError(f"n2 must be an even integer >= 2, got {n2}")
    q, r = np.linalg.qr(rng.standard_normal((n2, n2)))
    q = q * np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def symplectic_unit(n: int) -> NDArray[np.float64]:
    """``J = [[0, -I_n], [I_n, 0]]``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def dual_compose(g: ArrayLike) -> NDArray[np.float64]:
    """``g^D g`` with the dual ``H^D = J H^T J^T``."""
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise ValueError(f"g must be a square matrix of even size, got {g.shape}")
    J = symplectic_unit(g.shape[0] // 2)
    return J @ g.T @ J.T @ g


def _modified_gram_schmidt(vectors):
    q = np.array(vectors, dtype=complex)
    for k in range(q.shape[1]):
        for j in range(k):
            q[:, k] -= np.vdot(q[:, j], q[:, k]) * q[:, j]
        q[:, k] /= np.linalg.norm(q[:, k])
    return q


def _merge_clusters(angles, weights, tol):
    order = np.argsort(angles)
    angles, weights = angles[order], weights[order]
    labels = np.cumsum(np.concatenate([[True], np.diff(angles) >= tol])) - 1
    if labels[-1] > 0 and angles[0] + TWO_PI - angles[-1] < tol:
        labels[labels == labels[-1]] = 0
    unique, first = np.unique(labels, return_index=True)
    merged = np.bincount(labels, weights=weights)[unique]
    if len(unique) < len(angles):
        logger.debug(
            "merged %d eigenvalues into %d atoms", len(angles), len(unique)
        )
    return angles[first], merged


def spectral_measure(
    M: ArrayLike, merge_tol: float = DEFAULT_TOLERANCES.dedup
) -> CircleAtomicMeasure:
    """Spectral measure of a unitary matrix at the first basis vector.

    Atoms are the eigenvalue arguments and the weight of an eigenvalue is
    ``|<e_1, v>|**2`` for its unit eigenvector ``v``. Eigenvalues closer than
    ``merge_tol`` form one atom whose weight is the squared norm of the
    projection of ``e_1`` onto the eigenspace.

    Raises
    ------
    EigensolverFailure
        If ``max |M v - lambda v|`` exceeds the eigen residual tolerance.

    Warns
    -----
    CyclicityWarning
        If some atom carries a weight below ``1e-12``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"M must be a square matrix, got shape {M.shape}")
    defect = unitarity_defect(M)
    if defect > DEFAULT_TOLERANCES.eigen_residual:
        raise ValueError(f"M is not unitary, |M*M - I| = {defect:.3g}")
    T, Z = schur(M, output="complex")
    eigenvalues = np.diagonal(T).copy()
    Z = _modified_gram_schmidt(Z)
    residual = np.abs(M @ Z - Z * eigenvalues).max()
    if residual > DEFAULT_TOLERANCES.eigen_residual:
        raise EigensolverFailure(f"eigenvector residual {residual:.3g}")
    angles, weights = _merge_clusters(
        canonical_angles(np.angle(eigenvalues)), np.abs(Z[0]) ** 2, merge_tol
    )
    if weights.min() < CYCLIC_WEIGHT_FLOOR:
        warnings.warn(
            f"e_1 is not cyclic: smallest spectral weight {weights.min():.3g}",
            CyclicityWarning,
            stacklevel=2,
        )
    return CircleAtomicMeasure(angles, weights / weights.sum())


def sample_haar_spectral(rng: np.random.Generator, N: int) -> CircleAtomicMeasure:
    """Spectral measure of a Haar unitary matrix (the CUE oracle)."""
    return spectral_measure(haar_unitary(rng, N))


def sample_dual_spectral(rng: np.random.Generator, n: int) -> CircleAtomicMeasure:
    """Spectral measure of ``g^D g`` for a Haar ``g`` in SO(2n)."""
    return spectral_measure(dual_compose(haar_special_orthogonal(rng, 2 * n)))
