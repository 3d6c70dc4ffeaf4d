"""Canonical moments of probability measures on [0, 1].

The i-th canonical moment is the relative position of ``m_i`` inside its range
``[m_i^-, m_i^+]`` given ``m_1..m_{i-1}``. Moments, canonical moments, the
three-term recurrence of the measure and its principal representations are
linked through the chain sequence ``zeta_k = (1 - p_{k-1}) p_k`` (``p_0 = 0``),
whose Jacobi matrix has diagonal ``zeta_{2j-2} + zeta_{2j-1}`` and squared
off-diagonal ``zeta_{2j-1} zeta_{2j}``.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.typing import NDArray
from scipy.linalg import eigh_tridiagonal

from .config import DEFAULT_TOLERANCES
from .exceptions import Degenerate, EigensolverFailure, MomentSpaceViolation
from .measures import (
    IntervalAtomicMeasure,
    MomentVectorI,
    MomentVectorT,
    RealCanonicalVector,
    VerblunskyVector,
)
from .opuc import moments_to_verblunsky

logger = logging.getLogger(__name__)

Side = Literal["lower", "upper"]
Parity = Literal["odd", "even"]

UNDERFLOW = 1e-300


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Symmetric tridiagonal (Jacobi) matrix data.

    ``offdiag`` holds the plain sub-diagonal entries, i.e. square roots of the
    recurrence coefficients ``b_j``.
    """

    diag: NDArray[np.float64]
    offdiag: NDArray[np.float64]

    @property
    def size(self) -> int:
        return len(self.diag)

    def matrix(self) -> NDArray[np.float64]:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, k=1)
            + np.diag(self.offdiag, k=-1)
        )


@dataclass(frozen=True)
class PrincipalRepSpec:
    """One of the four principal-representation cases.

    ``odd`` covers moment vectors of length ``2N - 1`` and ``even`` those of
    length ``2N``; ``lower`` pads the canonical moments with 0 and ``upper``
    with 1.
    """

    parity: Parity
    side: Side

    @classmethod
    def for_moments(cls, n: int, side: Side) -> "PrincipalRepSpec":
        if side not in ("lower", "upper"):
            raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
        return cls("odd" if n % 2 == 1 else "even", side)

    @property
    def terminal(self) -> float:
        return 0.0 if self.side == "lower" else 1.0

    @property
    def endpoint_atoms(self) -> Tuple[float, ...]:
        """Endpoints of [0, 1] carrying an atom in this case."""
        return {
            ("odd", "lower"): (),
            ("odd", "upper"): (0.0, 1.0),
            ("even", "lower"): (0.0,),
            ("even", "upper"): (1.0,),
        }[(self.parity, self.side)]

    def interior_atoms(self, n: int) -> int:
        """Number of atoms strictly inside (0, 1) for a moment vector of length n."""
        N = (n + 1) // 2 if self.parity == "odd" else n // 2
        if (self.parity, self.side) == ("odd", "upper"):
            return N - 1
        return N


def _chain_sequence(values):
    values = np.asarray(values, dtype=float)
    previous = np.concatenate([[0.0], values[:-1]])
    return (1.0 - previous) * values


def _jacobi_from_zeta(zeta, size):
    z = np.zeros(2 * size + 2)
    z[1 : len(zeta) + 1] = zeta
    j = np.arange(1, size + 1)
    diag = z[2 * j - 2] + z[2 * j - 1]
    offdiag = np.sqrt(z[2 * j[:-1] - 1] * z[2 * j[:-1]])
    return diag, offdiag


def _moments_from_canonical(values, n):
    # m_k depends on p_1..p_k only, so missing chain entries are set to zero.
    size = n // 2 + 1
    diag, offdiag = _jacobi_from_zeta(_chain_sequence(values[:n]), size)
    vector = np.zeros(size)
    vector[0] = 1.0
    moments = np.empty(n)
    for k in range(n):
        shifted = diag * vector
        shifted[:-1] += offdiag * vector[1:]
        shifted[1:] += offdiag * vector[:-1]
        vector = shifted
        moments[k] = vector[0]
    return moments


def canonical_to_moments_real(p: RealCanonicalVector) -> MomentVectorI:
    """Moments ``m_1..m_n`` of a canonical moment vector (terminal value included)."""
    values = p.values
    if len(values) == 0:
        return MomentVectorI(np.zeros(0))
    return MomentVectorI(np.clip(_moments_from_canonical(values, len(values)), 0, 1))


def moments_to_canonical_real(m: MomentVectorI) -> RealCanonicalVector:
    """Canonical moments ``p_i = (m_i - m_i^-) / (m_i^+ - m_i^-)``.

    The range width is ``prod_{j<i} p_j (1 - p_j)``; the lower end is the
    i-th moment of the canonical vector padded with 0.

    Raises
    ------
    MomentSpaceViolation
        If some ``m_i`` falls outside its range.
    Degenerate
        If a canonical moment reaches 0 or 1 before the last index, or the
        range width underflows.
    """
    entries = m.entries
    n = len(entries)
    tol = DEFAULT_TOLERANCES
    values = np.zeros(n)
    width = 1.0
    for i in range(n):
        if width < UNDERFLOW:
            raise Degenerate(f"range of m_{i + 1} has collapsed")
        values[i] = 0.0
        lower = _moments_from_canonical(values[: i + 1], i + 1)[-1]
        offset = entries[i] - lower
        if offset < -tol.norm_negative or offset > width + tol.norm_negative:
            raise MomentSpaceViolation(
                f"m_{i + 1} = {entries[i]!r} lies outside "
                f"[{lower!r}, {lower + width!r}]"
            )
        p_i = min(max(offset / width, 0.0), 1.0)
        on_boundary = min(offset, width - offset) <= tol.boundary * width
        if on_boundary or p_i in (0.0, 1.0):
            if i < n - 1:
                raise Degenerate(
                    f"moments determine a measure on the boundary at index {i + 1}"
                )
            return RealCanonicalVector(values[:i], float(round(p_i)))
        values[i] = p_i
        width *= p_i * (1.0 - p_i)
    return RealCanonicalVector(values)


def extreme_moments(m: MomentVectorI) -> Tuple[float, float]:
    """Range ``(m_{n+1}^-, m_{n+1}^+)`` of the next moment.

    Raises
    ------
    MomentSpaceViolation
        If ``m`` is not an interior point of the moment space.
    """
    p = moments_to_canonical_real(m)
    if p.terminal is not None:
        raise MomentSpaceViolation("moment vector lies on the boundary")
    lower = canonical_to_moments_real(p.padded(0.0)).entries[-1]
    upper = canonical_to_moments_real(p.padded(1.0)).entries[-1]
    return float(lower), float(upper)


def hankel_extreme_moments(m: MomentVectorI) -> Tuple[float, float]:
    """Next-moment range from Hankel determinants (reference route, n <= 8).

    Each bound makes one Hankel-type determinant vanish; the unknown moment
    sits in its last corner so the determinant is affine in it.
    """
    n = len(m)
    if n > 8:
        raise ValueError("Hankel determinants are too ill-conditioned beyond n = 8")
    base = np.concatenate([[1.0], m.entries])

    def solve(build):
        d0 = np.linalg.det(build(0.0))
        d1 = np.linalg.det(build(1.0))
        return -d0 / (d1 - d0)

    def moments_with(x):
        return np.append(base, x)

    if (n + 1) % 2 == 0:
        k = (n + 1) // 2
        idx = np.add.outer(np.arange(k + 1), np.arange(k + 1))
        lower = solve(lambda x: moments_with(x)[idx])
        inner = np.add.outer(np.arange(k), np.arange(k))
        upper = solve(
            lambda x: moments_with(x)[inner + 1] - moments_with(x)[inner + 2]
        )
    else:
        k = n // 2
        idx = np.add.outer(np.arange(k + 1), np.arange(k + 1))
        lower = solve(lambda x: moments_with(x)[idx + 1])
        upper = solve(lambda x: moments_with(x)[idx] - moments_with(x)[idx + 1])
    return float(lower), float(upper)


def reflect_canonical(p: RealCanonicalVector) -> RealCanonicalVector:
    """Canonical moments of the pushforward under ``x -> 1 - x``.

    Odd-indexed entries become ``1 - p_k``; even-indexed ones are unchanged.
    """
    values = p.values.copy()
    values[0::2] = 1.0 - values[0::2]
    if p.terminal is None:
        return RealCanonicalVector(values)
    return RealCanonicalVector(values[:-1], values[-1])


def chebyshev_lift(gamma_moments: MomentVectorI) -> MomentVectorT:
    """Circle moments ``t_k = int T_k(2x - 1) dgamma`` of the symmetric lift.

    The conversion from power moments is exact in exact arithmetic but loses
    roughly ``k * log10(5.8)`` digits at order ``k``.
    """
    entries = np.concatenate([[1.0], gamma_moments.entries])
    t = np.empty(len(gamma_moments))
    for k in range(1, len(entries)):
        power = Chebyshev.basis(k, domain=[0, 1]).convert(kind=Polynomial).coef
        t[k - 1] = np.dot(power, entries[: len(power)])
    if np.any(np.abs(t) > 1 + DEFAULT_TOLERANCES.norm_negative):
        raise MomentSpaceViolation("lifted moments leave the unit disk")
    return MomentVectorT(np.clip(t, -1.0, 1.0))


def lift_canonical(p: RealCanonicalVector) -> VerblunskyVector:
    """Verblunsky coefficients ``c_k = 2 p_k - 1`` of the symmetric lift."""
    terminal = None if p.terminal is None else 2.0 * p.terminal - 1.0
    return VerblunskyVector(2.0 * p.interior - 1.0, terminal)


def canonical_from_lift(c: VerblunskyVector) -> RealCanonicalVector:
    """Inverse of :func:`lift_canonical`, ``p_k = (1 + c_k) / 2``."""
    if not c.is_real(DEFAULT_TOLERANCES.symmetry):
        raise MomentSpaceViolation("coefficients of a symmetric lift must be real")
    interior = np.clip(0.5 * (1.0 + c.interior.real), 0.0, 1.0)
    terminal = None
    if c.terminal is not None:
        terminal = 0.0 if c.terminal.real < 0 else 1.0
    return RealCanonicalVector(interior, terminal)


def canonical_moments_of(measure: IntervalAtomicMeasure, n: int) -> RealCanonicalVector:
    """First ``n`` canonical moments of an atomic measure.

    Computed from the atoms through the symmetric lift and the circle
    recursion, which avoids forming power moments.
    """
    theta = np.arccos(np.clip(2.0 * measure.points - 1.0, -1.0, 1.0))
    k = np.arange(1, n + 1)
    t = np.cos(np.outer(k, theta)) @ measure.weights
    return canonical_from_lift(moments_to_verblunsky(MomentVectorT(t)))


def recurrence_from_canonical(p: RealCanonicalVector) -> RecurrenceCoefficients:
    """Jacobi matrix whose spectral measure has canonical moments ``p``.

    A terminal 0 or 1 closes the chain and fixes the matrix size; an open
    vector is closed with ``zeta_{n+1} = 0``.

    Raises
    ------
    Degenerate
        If a product ``zeta_{2j-1} zeta_{2j}`` underflows.
    """
    values = p.values
    L = len(values)
    zeta = _chain_sequence(values)
    z = np.zeros(L + 2)
    z[1 : L + 1] = zeta
    diag, offdiag = [], []
    j = 1
    while 2 * j - 1 <= L + 1:
        diag.append(z[2 * j - 2] + z[2 * j - 1])
        if 2 * j > L + 1:
            break
        product = z[2 * j - 1] * z[2 * j]
        if product == 0.0:
            break
        if product < UNDERFLOW:
            raise Degenerate(f"chain product {j} underflows")
        offdiag.append(np.sqrt(product))
        j += 1
    return RecurrenceCoefficients(np.array(diag), np.array(offdiag))


def gauss_quadrature(p: RealCanonicalVector) -> IntervalAtomicMeasure:
    """Atomic measure of a terminated canonical vector (Golub-Welsch).

    Atoms are the eigenvalues of the Jacobi matrix and weights the squared
    first components of its normalized eigenvectors. Atoms within the snap
    tolerance of 0 or 1 are placed exactly on the endpoint.

    Raises
    ------
    EigensolverFailure
        If the eigen-decomposition residual exceeds its tolerance.
    """
    if p.terminal not in (0.0, 1.0):
        raise ValueError("quadrature needs a canonical vector terminated by 0 or 1")
    rec = recurrence_from_canonical(p)
    if rec.size == 1:
        points, vectors = rec.diag.copy(), np.ones((1, 1))
    else:
        points, vectors = eigh_tridiagonal(rec.diag, rec.offdiag)
    residual = np.abs(rec.matrix() @ vectors - vectors * points).max()
    if residual > DEFAULT_TOLERANCES.eigen_residual:
        raise EigensolverFailure(f"tridiagonal eigen residual {residual:.3g}")
    snap = DEFAULT_TOLERANCES.endpoint_snap
    points = np.where(np.abs(points) < snap, 0.0, points)
    points = np.where(np.abs(points - 1.0) < snap, 1.0, points)
    weights = vectors[0] ** 2
    return IntervalAtomicMeasure(np.clip(points, 0.0, 1.0), weights / weights.sum())


def principal_representation(m: MomentVectorI, side: Side) -> IntervalAtomicMeasure:
    """Lower or upper principal representation of an interior moment vector."""
    spec = PrincipalRepSpec.for_moments(len(m), side)
    p = moments_to_canonical_real(m)
    if p.terminal is not None:
        raise MomentSpaceViolation("moment vector lies on the boundary")
    return gauss_quadrature(p.padded(spec.terminal))
