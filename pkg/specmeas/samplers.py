"""Random spectral measures built from independent coefficient laws.

Every sampler takes an explicit :class:`numpy.random.Generator`; there is no
module-level random state. Circle ensembles are drawn through their Verblunsky
coefficients and reconstructed with :func:`specmeas.opuc.verblunsky_to_measure`;
interval ensembles go through canonical moments.
"""

import logging
from dataclasses import asdict, dataclass
from typing import List, Literal, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .canonical import canonical_to_moments_real, gauss_quadrature
from .exceptions import ConfigError
from .measures import (
    TWO_PI,
    CircleAtomicMeasure,
    IntervalAtomicMeasure,
    MomentVectorI,
    MomentVectorT,
    RealCanonicalVector,
    VerblunskyVector,
    canonical_angles,
    project_R,
)
from .opuc import verblunsky_to_measure, verblunsky_to_moments

logger = logging.getLogger(__name__)

RngStream = np.random.Generator

FAMILIES = (
    "cbe",
    "sun",
    "so2n",
    "jtilde",
    "jacobi",
    "uniform-circle",
    "uniform-interval",
    "bizth",
    "dirichlet",
)

_EPS = np.finfo(float).eps


def spawn_streams(rng: RngStream, n: int) -> List[RngStream]:
    """Split ``rng`` into ``n`` independent child generators."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return rng.spawn(n)


def _check_shape(name, value):
    if not np.all(np.asarray(value) > 0):
        raise ValueError(f"{name} must be positive, got {value}")


def sample_gamma(rng: RngStream, shape: float, size=None):
    """Gamma(shape, 1) draws."""
    _check_shape("shape", shape)
    return rng.standard_gamma(shape, size)


def sample_dirichlet(rng: RngStream, params: Sequence[float], size=None):
    """Dirichlet draws as normalized independent gamma variables.

    Returns an array of shape ``(len(params),)`` or ``(size, len(params))``.
    """
    params = np.asarray(params, dtype=float)
    if params.ndim != 1 or len(params) == 0:
        raise ValueError("params must be a non-empty one-dimensional sequence")
    _check_shape("params", params)
    shape = params.shape if size is None else (size,) + params.shape
    y = rng.standard_gamma(np.broadcast_to(params, shape))
    return y / y.sum(axis=-1, keepdims=True)


def sample_beta(rng: RngStream, a: float, b: float, size=None):
    """Beta(a, b) draws as ``G_a / (G_a + G_b)``."""
    _check_shape("a", a)
    _check_shape("b", b)
    ga = rng.standard_gamma(a, size)
    gb = rng.standard_gamma(b, size)
    return ga / (ga + gb)


def sample_beta_s(rng: RngStream, a: float, b: float, size=None):
    """Symmetrized Beta on (-1, 1): ``1 - 2 * Beta(a, b)``.

    The density is proportional to ``(1 - y)**(a - 1) * (1 + y)**(b - 1)``, so
    ``(1 + y) / 2`` is Beta(b, a) distributed.
    """
    x = np.clip(sample_beta(rng, a, b, size), _EPS, 1.0 - _EPS)
    return 1.0 - 2.0 * x


def uniform_circle(rng: RngStream, size=None):
    """Uniform points of the unit circle."""
    return np.exp(1j * rng.uniform(0.0, TWO_PI, size))


def sample_eta(rng: RngStream, r: float, size=None):
    """Draws from ``eta_r(z) = (r + 1) / pi * (1 - |z|**2)**r`` on the disk.

    ``|z|**2`` is Beta(1, r + 1) and the argument is uniform and independent.
    """
    if r <= -1:
        raise ValueError(f"r must be larger than -1, got {r}")
    modulus2 = np.clip(sample_beta(rng, 1.0, r + 1.0, size), 0.0, 1.0 - _EPS)
    return np.sqrt(modulus2) * uniform_circle(rng, size)


def _jtilde_shapes(N, beta, a, b, k):
    if k % 2 == 1:
        base = (2 * N - k - 1) * beta / 4.0
        return base + a, base + b
    return (2 * N - k - 2) * beta / 4.0 + a + b, (2 * N - k) * beta / 4.0


@dataclass(frozen=True)
class EnsembleSpec:
    """Random measure family with its parameters.

    Parameters
    ----------
    family : str
        One of :data:`FAMILIES`.
    N : int
        Ensemble size. For ``uniform-interval`` and ``uniform-circle`` it is the
        dimension of the moment space.
    beta : float
        Dyson index for ``cbe``, ``jtilde`` and ``jacobi``.
    a, b : float, optional
        Jacobi exponents. For ``dirichlet`` only ``a`` is used, as the common
        weight parameter.
    case : int, optional
        Case 1..4 of the ``bizth`` family.
    """

    family: str
    N: int
    beta: float = 2.0
    a: Optional[float] = None
    b: Optional[float] = None
    case: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(
                f"unknown ensemble {self.family!r}; expected one of {FAMILIES}"
            )
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if self.family in ("jtilde", "jacobi"):
            if self.a is None or self.b is None or self.a <= 0 or self.b <= 0:
                raise ConfigError(
                    f"{self.family} needs positive a and b, got a={self.a}, b={self.b}"
                )
        if self.family == "dirichlet" and (self.a is None or self.a <= 0):
            raise ConfigError(f"dirichlet needs a positive a, got {self.a}")
        if self.family == "bizth":
            if self.case not in (1, 2, 3, 4):
                raise ConfigError(f"bizth case must be 1..4, got {self.case!r}")
            if self.case == 3 and self.N < 2:
                raise ConfigError("bizth case 3 needs N >= 2")

    @property
    def on_interval(self) -> bool:
        """Whether the natural output is a measure on [0, 1]."""
        return self.family in ("jacobi", "uniform-interval", "bizth")

    @property
    def moment_dimension(self) -> int:
        """Dimension of the uniform moment space behind interval families."""
        if self.family == "bizth":
            return 2 * self.N - 1 if self.case in (1, 3) else 2 * self.N
        return self.N

    @property
    def terminal_canonical(self) -> Optional[float]:
        if self.family != "bizth":
            return None
        return 0.0 if self.case in (1, 2) else 1.0

    @property
    def n_coefficients(self) -> int:
        """Number of (lifted) Verblunsky coefficients of one draw."""
        if self.family in ("cbe", "sun", "uniform-circle", "uniform-interval"):
            return self.N
        if self.family in ("so2n", "jtilde", "jacobi"):
            return 2 * self.N
        if self.family == "bizth":
            return self.moment_dimension + 1
        raise ValueError("the dirichlet family has no coefficient representation")

    def to_dict(self):
        return asdict(self)


def _constant(value, size):
    return np.full(size, value, dtype=complex)


def _draw_coefficient(rng, spec, k, size):
    N, family = spec.N, spec.family
    if family == "cbe":
        if k < N:
            return sample_eta(rng, spec.beta * (N - k) / 2.0 - 1.0, size)
        return uniform_circle(rng, size)
    if family == "sun":
        if k < N:
            return sample_eta(rng, N - k - 1.0, size)
        return _constant((-1.0) ** (N + 1), size)
    if family == "uniform-circle":
        return sample_eta(rng, N - k, size)
    if family in ("so2n", "jtilde", "jacobi"):
        if k == 2 * N:
            return _constant(-1.0, size)
        if family == "so2n":
            shape = (2 * N - k) / 2.0
            return sample_beta_s(rng, shape, shape, size).astype(complex)
        shapes = _jtilde_shapes(N, spec.beta, spec.a, spec.b, k)
        return sample_beta_s(rng, *shapes, size).astype(complex)
    # uniform moment spaces on [0, 1], lifted through c_k = 2 p_k - 1
    n = spec.moment_dimension
    if k <= n:
        p = np.clip(sample_beta(rng, n - k + 1.0, n - k + 1.0, size), _EPS, 1 - _EPS)
        return (2.0 * p - 1.0).astype(complex)
    return _constant(2.0 * spec.terminal_canonical - 1.0, size)


def sample_coefficients(
    rng: RngStream, spec: EnsembleSpec, size: int, count: Optional[int] = None
) -> NDArray[np.complex128]:
    """Leading coefficients of ``size`` independent draws, shape ``(size, count)``.

    Coefficients of every family are independent, so the first ``count`` of
    them are drawn column by column without reconstructing any measure.
    Interval families report the coefficients of the symmetric lift,
    ``c_k = 2 p_k - 1``.
    """
    K = spec.n_coefficients
    count = K if count is None else count
    if not 1 <= count <= K:
        raise ValueError(f"count must lie in [1, {K}], got {count}")
    out = np.empty((size, count), dtype=complex)
    for k in range(1, count + 1):
        out[:, k - 1] = _draw_coefficient(rng, spec, k, size)
    return out


def _verblunsky(rng, spec):
    c = sample_coefficients(rng, spec, 1)[0]
    if spec.family in ("so2n", "jtilde", "jacobi"):
        c = c.real.astype(complex)
    if spec.family == "uniform-circle":
        return VerblunskyVector(c)
    return VerblunskyVector(c[:-1], c[-1])


@dataclass(frozen=True, eq=False)
class SpectralSample:
    """One draw: the measure with its ground-truth coefficients when known."""

    measure: Optional[Union[CircleAtomicMeasure, IntervalAtomicMeasure]] = None
    coefficients: Optional[Union[VerblunskyVector, RealCanonicalVector]] = None
    moments: Optional[Union[MomentVectorT, MomentVectorI]] = None

    def to_dict(self):
        record = {}
        for name in ("measure", "coefficients", "moments"):
            value = getattr(self, name)
            if value is not None:
                record[name] = value.to_dict()
        return record


def sample_cbe_spectral(rng: RngStream, N: int, beta: float) -> SpectralSample:
    """Spectral measure of the circular beta ensemble and its coefficients.

    ``c_j ~ eta_{beta (N - j) / 2 - 1}`` for ``j < N`` and ``c_N`` is uniform on
    the circle, all independent.
    """
    c = _verblunsky(rng, EnsembleSpec("cbe", N, beta))
    return SpectralSample(verblunsky_to_measure(c), c)


def sample_coe_spectral(rng: RngStream, N: int) -> SpectralSample:
    return sample_cbe_spectral(rng, N, 1.0)


def sample_cse_spectral(rng: RngStream, N: int) -> SpectralSample:
    return sample_cbe_spectral(rng, N, 4.0)


def sample_sun_spectral(rng: RngStream, N: int) -> CircleAtomicMeasure:
    """CUE conditioned on ``c_N = (-1)**(N + 1)``, i.e. Haar measure on SU(N)."""
    return verblunsky_to_measure(_verblunsky(rng, EnsembleSpec("sun", N)))


def sample_so2n_spectral(rng: RngStream, N: int) -> CircleAtomicMeasure:
    """Spectral measure of a Haar element of SO(2N); conjugation symmetric."""
    return verblunsky_to_measure(_verblunsky(rng, EnsembleSpec("so2n", N)))


def sample_jtilde_spectral(
    rng: RngStream, N: int, beta: float, a: float, b: float
) -> CircleAtomicMeasure:
    """Symmetric circle measure whose projection is the Jacobi ensemble.

    Odd coefficients follow ``Beta_s((2N-k-1) beta/4 + a, (2N-k-1) beta/4 + b)``,
    even ones ``Beta_s((2N-k-2) beta/4 + a + b, (2N-k) beta/4)``, and
    ``c_{2N} = -1``.
    """
    spec = EnsembleSpec("jtilde", N, beta, a, b)
    return verblunsky_to_measure(_verblunsky(rng, spec))


def sample_jacobi_gamma(
    rng: RngStream, N: int, beta: float, a: float, b: float
) -> IntervalAtomicMeasure:
    """Jacobi ensemble atoms with Dir_N(beta / 2) weights on [0, 1]."""
    return project_R(sample_jtilde_spectral(rng, N, beta, a, b))


def sample_uniform_moments(
    rng: RngStream, space: Literal["circle", "interval"], n: int
) -> Union[MomentVectorT, MomentVectorI]:
    """Uniform point of the interior of the moment space of dimension ``n``.

    On the circle ``c_j ~ eta_{n-j}``; on [0, 1] ``p_j ~ Beta(n-j+1, n-j+1)``.
    """
    if space == "circle":
        c = _verblunsky(rng, EnsembleSpec("uniform-circle", n))
        return verblunsky_to_moments(c)
    if space == "interval":
        return canonical_to_moments_real(_uniform_canonical(rng, n))
    raise ValueError(f"space must be 'circle' or 'interval', got {space!r}")


def _uniform_canonical(rng, n):
    c = sample_coefficients(rng, EnsembleSpec("uniform-interval", n), 1)[0].real
    return RealCanonicalVector(0.5 * (1.0 + c))


def _canonical_draw(rng, spec):
    c = sample_coefficients(rng, spec, 1)[0].real
    p = 0.5 * (1.0 + c)
    return RealCanonicalVector(p[:-1], spec.terminal_canonical)


def sample_bizth(rng: RngStream, case: int, N: int) -> IntervalAtomicMeasure:
    """Principal representation of a uniform moment vector.

    Cases 1 and 3 use moment vectors of length ``2N - 1``, cases 2 and 4 of
    length ``2N``; cases 1 and 2 pad with 0 (lower), 3 and 4 with 1 (upper).
    """
    spec = EnsembleSpec("bizth", N, case=case)
    return gauss_quadrature(_canonical_draw(rng, spec))


def sample_dirichlet_spectral(rng: RngStream, N: int, a: float) -> CircleAtomicMeasure:
    """``N`` fixed equispaced atoms carrying Dir_N(a) weights."""
    angles = canonical_angles(TWO_PI * np.arange(N) / N)
    return CircleAtomicMeasure(angles, sample_dirichlet(rng, np.full(N, a)))


def sample_jbeta_rejection(
    rng: RngStream,
    N: int,
    beta: float,
    a: float,
    b: float,
    size: int,
    batch: int = 100_000,
) -> NDArray[np.float64]:
    """Atoms of J(beta, a, b, N) by rejection, shape ``(size, N)``, rows sorted.

    Proposals are iid Beta(b, a); a proposal is kept with probability
    ``|Vandermonde|**beta``, which is at most one on [0, 1]**N. Only practical
    for small ``N``.
    """
    accepted = []
    total, proposals = 0, 0
    i, j = np.triu_indices(N, k=1)
    while total < size:
        x = sample_beta(rng, b, a, (batch, N))
        vandermonde = np.prod(np.abs(x[:, i] - x[:, j]), axis=1) ** beta
        keep = rng.uniform(size=batch) < vandermonde
        accepted.append(x[keep])
        total += int(keep.sum())
        proposals += batch
    logger.debug("rejection acceptance rate %.4g", total / proposals)
    return np.sort(np.concatenate(accepted)[:size], axis=1)


def sample_ensemble(rng: RngStream, spec: EnsembleSpec) -> SpectralSample:
    """One draw of ``spec`` with whatever ground truth the route provides."""
    family = spec.family
    if family == "dirichlet":
        return SpectralSample(sample_dirichlet_spectral(rng, spec.N, spec.a))
    if family == "uniform-circle":
        c = _verblunsky(rng, spec)
        return SpectralSample(coefficients=c, moments=verblunsky_to_moments(c))
    if family == "uniform-interval":
        p = _uniform_canonical(rng, spec.N)
        return SpectralSample(coefficients=p, moments=canonical_to_moments_real(p))
    if family == "bizth":
        p = _canonical_draw(rng, spec)
        return SpectralSample(gauss_quadrature(p), p)
    c = _verblunsky(rng, spec)
    measure = verblunsky_to_measure(c)
    if family == "jacobi":
        p = RealCanonicalVector(0.5 * (1.0 + c.interior.real), 0.0)
        return SpectralSample(project_R(measure), p)
    return SpectralSample(measure, c)
