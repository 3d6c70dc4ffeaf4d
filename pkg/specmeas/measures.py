"""Atomic measures on the unit circle and on [0, 1], with their moment vectors."""

import json
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import comb

from .config import DEFAULT_TOLERANCES
from .exceptions import InvalidMeasure, MomentSpaceViolation, NotSymmetric

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def canonical_angles(angles: ArrayLike) -> NDArray[np.float64]:
    """Map angles into [-pi, pi)."""
    return np.mod(np.asarray(angles, dtype=float) + np.pi, TWO_PI) - np.pi


def _circular_distance(a, b):
    return np.abs(np.mod(a - b + np.pi, TWO_PI) - np.pi)


def _frozen(array):
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _check_weights(weights, tol):
    if weights.ndim != 1:
        raise InvalidMeasure("weights must be one-dimensional")
    if not np.all(np.isfinite(weights)):
        raise InvalidMeasure("weights must be finite")
    if np.any(weights < 0):
        raise InvalidMeasure(f"weights must be nonnegative, got min {weights.min()}")
    total = weights.sum()
    if abs(total - 1.0) > tol:
        raise InvalidMeasure(f"weights must sum to 1, got {total!r}")


@dataclass(frozen=True, eq=False)
class CircleAtomicMeasure:
    """Probability measure with finitely many atoms on the unit circle.

    Parameters
    ----------
    angles : array-like of float
        Atom positions as angles. They are canonicalized to [-pi, pi).
    weights : array-like of float
        Nonnegative weights summing to one.

    Raises
    ------
    InvalidMeasure
        If the lengths differ, the weights are not a probability vector or two
        atoms coincide within the dedup tolerance.
    """

    angles: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __post_init__(self):
        angles = canonical_angles(self.angles)
        weights = np.asarray(self.weights, dtype=float)
        if angles.ndim != 1 or angles.shape != weights.shape:
            raise InvalidMeasure(
                f"angles and weights must have equal length, got {angles.shape} "
                f"and {weights.shape}"
            )
        if len(angles) == 0:
            raise InvalidMeasure("a measure needs at least one atom")
        _check_weights(weights, DEFAULT_TOLERANCES.weight_sum)
        if len(angles) > 1:
            ordered = np.sort(angles)
            gaps = np.diff(np.append(ordered, ordered[0] + TWO_PI))
            if gaps.min() < DEFAULT_TOLERANCES.dedup:
                raise InvalidMeasure(
                    f"atoms closer than {DEFAULT_TOLERANCES.dedup} in angle"
                )
        object.__setattr__(self, "angles", _frozen(angles))
        object.__setattr__(self, "weights", _frozen(weights))

    def __len__(self):
        return len(self.angles)

    @property
    def atoms(self) -> NDArray[np.complex128]:
        """Atoms as points of the unit circle."""
        return np.exp(1j * self.angles)

    def integrate(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integral of a function of the angle against the measure."""
        return float(np.dot(self.weights, func(self.angles)))

    def to_dict(self):
        return {"angles": self.angles.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["angles"]), np.asarray(data["weights"]))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class IntervalAtomicMeasure:
    """Probability measure with finitely many atoms in [0, 1]."""

    points: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if points.ndim != 1 or points.shape != weights.shape:
            raise InvalidMeasure(
                f"points and weights must have equal length, got {points.shape} "
                f"and {weights.shape}"
            )
        if len(points) == 0:
            raise InvalidMeasure("a measure needs at least one atom")
        slack = DEFAULT_TOLERANCES.endpoint_snap
        if np.any(points < -slack) or np.any(points > 1 + slack):
            raise InvalidMeasure("points must lie in [0, 1]")
        points = np.clip(points, 0.0, 1.0)
        _check_weights(weights, DEFAULT_TOLERANCES.weight_sum)
        order = np.argsort(points, kind="stable")
        points, weights = points[order], weights[order]
        if len(points) > 1 and np.diff(points).min() < DEFAULT_TOLERANCES.dedup:
            raise InvalidMeasure(
                f"points closer than {DEFAULT_TOLERANCES.dedup} to each other"
            )
        object.__setattr__(self, "points", _frozen(points))
        object.__setattr__(self, "weights", _frozen(weights))

    def __len__(self):
        return len(self.points)

    def integrate(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, func(self.points)))

    def has_atom_at(self, point: float, tol: float = 0.0) -> bool:
        """Whether the support contains ``point`` (within ``tol``)."""
        return bool(np.any(np.abs(self.points - point) <= tol))

    def to_dict(self):
        return {"points": self.points.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["points"]), np.asarray(data["weights"]))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class MomentVectorT:
    """Moments ``t_1..t_N`` of a probability measure on the unit circle."""

    entries: NDArray[np.complex128]

    def __post_init__(self):
        entries = np.atleast_1d(np.asarray(self.entries, dtype=complex))
        if entries.ndim != 1:
            raise MomentSpaceViolation("moment vector must be one-dimensional")
        if np.any(np.abs(entries) > 1 + DEFAULT_TOLERANCES.norm_negative):
            raise MomentSpaceViolation("circle moments must have modulus <= 1")
        object.__setattr__(self, "entries", _frozen(entries))

    def __len__(self):
        return len(self.entries)

    def truncate(self, k: int) -> "MomentVectorT":
        return MomentVectorT(self.entries[:k])

    def to_dict(self):
        return {"entries": [[z.real, z.imag] for z in self.entries]}

    @classmethod
    def from_dict(cls, data):
        return cls(np.array([complex(re, im) for re, im in data["entries"]]))


@dataclass(frozen=True, eq=False)
class MomentVectorI:
    """Moments ``m_1..m_n`` of a probability measure on [0, 1]."""

    entries: NDArray[np.float64]

    def __post_init__(self):
        entries = np.atleast_1d(np.asarray(self.entries, dtype=float))
        if entries.ndim != 1:
            raise MomentSpaceViolation("moment vector must be one-dimensional")
        slack = DEFAULT_TOLERANCES.norm_negative
        if np.any(entries < -slack) or np.any(entries > 1 + slack):
            raise MomentSpaceViolation("interval moments must lie in [0, 1]")
        object.__setattr__(self, "entries", _frozen(entries))

    def __len__(self):
        return len(self.entries)

    def truncate(self, k: int) -> "MomentVectorI":
        return MomentVectorI(self.entries[:k])

    def to_dict(self):
        return {"entries": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["entries"]))


@dataclass(frozen=True, eq=False)
class VerblunskyVector:
    """Verblunsky coefficients ``c_1..c_{K-1}`` with an optional unimodular ``c_K``.

    Parameters
    ----------
    interior : array-like of complex
        Coefficients strictly inside the unit disk.
    terminal : complex, optional
        Final coefficient on the unit circle; present when the vector describes
        a measure with finitely many atoms.
    """

    interior: NDArray[np.complex128]
    terminal: Optional[complex] = None

    def __post_init__(self):
        interior = np.atleast_1d(np.asarray(self.interior, dtype=complex))
        if interior.ndim != 1:
            raise MomentSpaceViolation("coefficients must be one-dimensional")
        if np.any(np.abs(interior) >= 1.0):
            raise MomentSpaceViolation(
                "interior coefficients must lie in the open unit disk"
            )
        terminal = self.terminal
        if terminal is not None:
            terminal = complex(terminal)
            if abs(abs(terminal) - 1.0) > DEFAULT_TOLERANCES.boundary:
                raise MomentSpaceViolation(
                    f"terminal coefficient must be unimodular, got |c| = "
                    f"{abs(terminal)!r}"
                )
        object.__setattr__(self, "interior", _frozen(interior))
        object.__setattr__(self, "terminal", terminal)

    def __len__(self):
        return len(self.interior) + (self.terminal is not None)

    @property
    def is_terminated(self) -> bool:
        return self.terminal is not None

    @property
    def coefficients(self) -> NDArray[np.complex128]:
        """All coefficients, terminal one last when present."""
        if self.terminal is None:
            return np.array(self.interior)
        return np.append(self.interior, self.terminal)

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.coefficients.imag) <= tol))

    def to_dict(self):
        terminal = None
        if self.terminal is not None:
            terminal = [self.terminal.real, self.terminal.imag]
        return {
            "interior": [[z.real, z.imag] for z in self.interior],
            "terminal": terminal,
        }

    @classmethod
    def from_dict(cls, data):
        interior = np.array([complex(re, im) for re, im in data["interior"]])
        terminal = data.get("terminal")
        if terminal is not None:
            terminal = complex(*terminal)
        return cls(interior, terminal)


@dataclass(frozen=True, eq=False)
class RealCanonicalVector:
    """Canonical moments ``p_1..p_{n-1}`` in (0, 1) and an optional terminal value."""

    interior: NDArray[np.float64]
    terminal: Optional[float] = None

    def __post_init__(self):
        interior = np.atleast_1d(np.asarray(self.interior, dtype=float))
        if interior.ndim != 1:
            raise MomentSpaceViolation("canonical moments must be one-dimensional")
        if np.any(interior <= 0.0) or np.any(interior >= 1.0):
            raise MomentSpaceViolation(
                "interior canonical moments must lie in the open interval (0, 1)"
            )
        terminal = self.terminal
        if terminal is not None:
            terminal = float(terminal)
            if not 0.0 <= terminal <= 1.0:
                raise MomentSpaceViolation(
                    f"terminal canonical moment must lie in [0, 1], got {terminal}"
                )
        object.__setattr__(self, "interior", _frozen(interior))
        object.__setattr__(self, "terminal", terminal)

    def __len__(self):
        return len(self.interior) + (self.terminal is not None)

    @property
    def values(self) -> NDArray[np.float64]:
        """All canonical moments, terminal value last when present."""
        if self.terminal is None:
            return np.array(self.interior)
        return np.append(self.interior, self.terminal)

    def padded(self, terminal: float) -> "RealCanonicalVector":
        """Same interior with ``terminal`` appended (0 lower, 1 upper)."""
        return RealCanonicalVector(self.values, terminal)

    def to_dict(self):
        return {"interior": self.interior.tolist(), "terminal": self.terminal}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["interior"]), data.get("terminal"))


def moments_circle(measure: CircleAtomicMeasure, K: int) -> MomentVectorT:
    """Moments ``t_k = sum_j w_j exp(i k theta_j)`` for ``k = 1..K``."""
    if K < 1:
        raise ValueError(f"K must be a positive integer, got {K}")
    k = np.arange(1, K + 1)
    entries = np.exp(1j * np.outer(k, measure.angles)) @ measure.weights
    return MomentVectorT(entries)


def moments_interval(measure: IntervalAtomicMeasure, K: int) -> MomentVectorI:
    """Moments ``m_k = sum_j w_j x_j**k`` for ``k = 1..K``."""
    if K < 1:
        raise ValueError(f"K must be a positive integer, got {K}")
    k = np.arange(1, K + 1)
    entries = np.power.outer(measure.points, k).T @ measure.weights
    return MomentVectorI(np.clip(entries, 0.0, 1.0))


def _conjugate_partners(measure, tol):
    angles, weights = measure.angles, measure.weights
    targets = canonical_angles(-angles)
    distance = _circular_distance(angles[None, :], targets[:, None])
    partners = distance.argmin(axis=1)
    rows = np.arange(len(angles))
    if np.any(distance[rows, partners] > tol):
        return None
    if np.any(np.abs(weights - weights[partners]) > tol):
        return None
    if np.any(partners[partners] != rows):
        return None
    return partners


def is_symmetric(
    measure: CircleAtomicMeasure, tol: float = DEFAULT_TOLERANCES.symmetry
) -> bool:
    """Whether the measure is invariant under complex conjugation."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return _conjugate_partners(measure, tol) is not None


def project_R(
    measure: CircleAtomicMeasure, tol: float = DEFAULT_TOLERANCES.symmetry
) -> IntervalAtomicMeasure:
    """Push a symmetric circle measure to [0, 1] through ``x = (1 + cos t) / 2``.

    Conjugate atoms ``+-theta`` merge into one atom carrying their joint weight;
    atoms at angle 0 or pi keep their own weight.

    Raises
    ------
    NotSymmetric
        If the measure is not invariant under conjugation within ``tol``.
    """
    partners = _conjugate_partners(measure, tol)
    if partners is None:
        raise NotSymmetric("measure is not invariant under complex conjugation")
    points, weights = [], []
    for i, j in enumerate(partners):
        if j < i:
            continue
        points.append(0.5 * (1.0 + np.cos(measure.angles[i])))
        weight = measure.weights[i]
        if j != i:
            weight = weight + measure.weights[j]
        weights.append(weight)
    return IntervalAtomicMeasure(np.array(points), np.array(weights))


def folded_moments(t: MomentVectorT) -> MomentVectorI:
    """Moments of ``project_R(mu)`` computed from the circle moments of ``mu``.

    Uses ``((2 + z + 1/z) / 4)**k = 4**-k * sum_j C(2k, j) z**(j - k)``; the
    input is assumed to be the moment vector of a symmetric measure.
    """
    n = len(t)
    full = np.concatenate([np.conj(t.entries[::-1]), [1.0], t.entries])
    entries = np.empty(n)
    for k in range(1, n + 1):
        j = np.arange(2 * k + 1)
        window = full[n - k : n + k + 1]
        entries[k - 1] = (comb(2 * k, j) @ window).real / 4.0**k
    return MomentVectorI(np.clip(entries, 0.0, 1.0))
