"""Large deviations of random spectral measures.

Rates of linear statistics are obtained by contracting the reversed Kullback
information ``(beta / 2) K(lambda | mu)`` with ``lambda`` the uniform
probability on the circle, and compared against Monte Carlo tail estimates.
The second half of the module evaluates the limit of the spherical integral
``(1/N) log E exp(N mu(phi))`` through the Stieltjes and R transforms of
``phi`` under ``lambda``.

All circle integrals use the periodic trapezoidal rule on the shifted grid
``theta_j = -pi + 2 pi (j + 1/2) / M``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq
from scipy.special import comb, logsumexp

from .config import DEFAULT_TOLERANCES, thread_count
from .exceptions import (
    ConfigError,
    GridMismatch,
    InsideSpectrum,
    NewtonDivergence,
    OutOfRange,
    ZeroHits,
)
from .measures import CircleAtomicMeasure, IntervalAtomicMeasure
from .opuc import leading_moments
from .samplers import (
    EnsembleSpec,
    sample_coefficients,
    sample_dirichlet,
    sample_ensemble,
    spawn_streams,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 4096
DEFAULT_BATCHES = 20
MIN_TAIL_SAMPLES = 10_000
MAX_NEWTON_ITERATIONS = 500
INFINITY = math.inf


def circle_grid(size: int) -> NDArray[np.float64]:
    """Shifted periodic grid on [-pi, pi)."""
    return -np.pi + 2.0 * np.pi * (np.arange(size) + 0.5) / size


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Bounded continuous function of the angle.

    Parameters
    ----------
    func : callable
        Vectorized map from angles to real values.
    name : str
        Descriptor used in experiment records.
    grid_size : int
        Number of quadrature nodes on the circle.
    fourier : array-like of complex, optional
        ``alpha_0..alpha_K`` with ``f = alpha_0 + 2 Re sum_k alpha_k e^{ik theta}``;
        when present, integrals against a measure are read off its moments.
    bounds : pair of float, optional
        Exact ``(inf f, sup f)``. Defaults to the extremes over the grid.
    """

    __test__ = False

    func: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    grid_size: int = DEFAULT_GRID_SIZE
    fourier: Optional[NDArray[np.complex128]] = None
    bounds: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.grid_size < 16:
            raise ValueError(f"grid_size must be at least 16, got {self.grid_size}")
        if self.fourier is not None:
            fourier = np.atleast_1d(np.asarray(self.fourier, dtype=complex))
            if fourier.imag[0] != 0:
                raise ValueError("alpha_0 must be real")
            object.__setattr__(self, "fourier", fourier)
        if self.bounds is not None:
            lo, hi = float(self.bounds[0]), float(self.bounds[1])
            values = self.values
            slack = 1e-12 * max(1.0, abs(lo), abs(hi))
            if values.min() < lo - slack or values.max() > hi + slack:
                raise ValueError(
                    f"bounds {self.bounds} do not bracket the sampled values "
                    f"[{values.min()}, {values.max()}]"
                )
            object.__setattr__(self, "bounds", (lo, hi))

    def __call__(self, theta):
        return self.func(np.asarray(theta, dtype=float))

    @cached_property
    def grid(self) -> NDArray[np.float64]:
        return circle_grid(self.grid_size)

    @cached_property
    def values(self) -> NDArray[np.float64]:
        values = np.asarray(self.func(self.grid), dtype=float)
        if values.shape != self.grid.shape or not np.all(np.isfinite(values)):
            raise ValueError(f"test function {self.name!r} is not finite on the grid")
        return values

    @property
    def minimum(self) -> float:
        return self.bounds[0] if self.bounds is not None else float(self.values.min())

    @property
    def maximum(self) -> float:
        return self.bounds[1] if self.bounds is not None else float(self.values.max())

    @property
    def mean(self) -> float:
        """``lambda(f)``, the law-of-large-numbers value."""
        if self.fourier is not None:
            return float(self.fourier[0].real)
        return float(self.values.mean())

    @property
    def degree(self) -> Optional[int]:
        return None if self.fourier is None else len(self.fourier) - 1

    def integrate(self, density: ArrayLike) -> float:
        """``int f m dlambda`` for a density sampled on the grid."""
        density = np.asarray(density, dtype=float)
        if density.shape != self.values.shape:
            raise GridMismatch(
                f"density has shape {density.shape}, grid has {self.values.shape}"
            )
        return float(np.mean(self.values * density))

    def from_moments(self, t: ArrayLike) -> NDArray[np.float64]:
        """``mu(f)`` from the moments ``t_1..t_K`` of ``mu`` (shape ``(..., K)``)."""
        if self.fourier is None:
            raise ValueError("moment evaluation needs a trigonometric polynomial")
        t = np.asarray(t, dtype=complex)
        K = self.degree
        if t.shape[-1] < K:
            raise ValueError(f"need {K} moments, got {t.shape[-1]}")
        head = t[..., :K] @ self.fourier[1:]
        return self.fourier[0].real + 2.0 * head.real

    def of_measure(
        self, measure: Union[CircleAtomicMeasure, IntervalAtomicMeasure]
    ) -> float:
        """``mu(f)``; interval measures are read through ``x = (1 + cos t) / 2``.

        An interval measure stands for its symmetric lift, so ``f`` is averaged
        over ``+-theta``.
        """
        if isinstance(measure, IntervalAtomicMeasure):
            theta = np.arccos(np.clip(2.0 * measure.points - 1.0, -1.0, 1.0))
            values = 0.5 * (self(theta) + self(-theta))
            return float(np.dot(measure.weights, values))
        return measure.integrate(self)

    def shifted(self, c: float) -> "TestFunction":
        fourier = None
        if self.fourier is not None:
            fourier = self.fourier.copy()
            fourier[0] += c
        bounds = None
        if self.bounds is not None:
            bounds = (self.bounds[0] + c, self.bounds[1] + c)
        return TestFunction(
            lambda theta: self.func(theta) + c,
            f"{self.name}+{c:g}",
            self.grid_size,
            fourier,
            bounds,
        )

    def symmetrized(self) -> "TestFunction":
        """``(f(theta) + f(-theta)) / 2``."""
        fourier = None
        if self.fourier is not None:
            fourier = self.fourier.real.astype(complex)
        return TestFunction(
            lambda theta: 0.5 * (self.func(theta) + self.func(-theta)),
            self.name,
            self.grid_size,
            fourier,
            self.bounds,
        )

    def with_grid(self, grid_size: int) -> "TestFunction":
        return replace(self, grid_size=grid_size)

    @classmethod
    def trigonometric(
        cls, fourier: Sequence[complex], name: str = "trig", **kwargs
    ) -> "TestFunction":
        """``alpha_0 + 2 Re sum_k alpha_k e^{ik theta}``."""
        fourier = np.asarray(fourier, dtype=complex)
        k = np.arange(1, len(fourier))

        def func(theta):
            theta = np.asarray(theta, dtype=float)
            waves = np.exp(1j * np.multiply.outer(theta, k)) @ fourier[1:]
            return fourier[0].real + 2.0 * waves.real

        return cls(func, name, fourier=fourier, **kwargs)

    @classmethod
    def real_part(cls, **kwargs) -> "TestFunction":
        """``Re z = cos theta``."""
        return cls.trigonometric([0.0, 0.5], name="re", bounds=(-1.0, 1.0), **kwargs)

    @classmethod
    def cosine(cls, k: int = 1, **kwargs) -> "TestFunction":
        fourier = np.zeros(k + 1, dtype=complex)
        fourier[k] = 0.5
        return cls.trigonometric(fourier, name=f"cos{k}", bounds=(-1.0, 1.0), **kwargs)

    @classmethod
    def constant(cls, c: float, **kwargs) -> "TestFunction":
        return cls.trigonometric([c], name=f"const{c:g}", bounds=(c, c), **kwargs)

    @classmethod
    def from_callable(
        cls, func: Callable[[np.ndarray], np.ndarray], name: str = "f", **kwargs
    ) -> "TestFunction":
        return cls(func, name, **kwargs)

    @classmethod
    def pullback_interval(
        cls, g: Callable[[np.ndarray], np.ndarray], name: str = "g", **kwargs
    ) -> "TestFunction":
        """Symmetric circle function ``g((1 + cos theta) / 2)``."""
        return cls(lambda theta: g(0.5 * (1.0 + np.cos(theta))), name, **kwargs)

    @classmethod
    def pullback_polynomial(
        cls, coefficients: Sequence[float], name: str = "poly", **kwargs
    ) -> "TestFunction":
        """Pullback of ``sum_k a_k x**k`` as an exact trigonometric polynomial.

        Uses ``x**k = 4**-k sum_j C(2k, j) e^{i (j - k) theta}``.
        """
        coefficients = np.asarray(coefficients, dtype=float)
        n = len(coefficients) - 1
        fourier = np.zeros(n + 1, dtype=complex)
        for k, a_k in enumerate(coefficients):
            m = np.arange(k + 1)
            fourier[: k + 1] += a_k * comb(2 * k, k + m) / 4.0**k
        return cls.trigonometric(fourier, name=name, **kwargs)


def _quadrature_weights(size, domain):
    if domain == "circle":
        return np.full(size, 1.0 / size)
    if domain == "interval":
        weights = np.full(size, 1.0 / (size - 1))
        weights[[0, -1]] *= 0.5
        return weights
    raise ValueError(f"domain must be 'circle' or 'interval', got {domain!r}")


def reversed_kullback(
    reference: ArrayLike,
    mu: ArrayLike,
    domain: Literal["circle", "interval"] = "circle",
) -> float:
    """``K(reference | mu) = int log(reference / mu) reference``.

    Both arguments are densities sampled on the same grid: the shifted circle
    grid against ``dtheta / (2 pi)``, or the uniform grid of [0, 1] including
    both endpoints. Returns :data:`INFINITY` when ``mu`` vanishes somewhere
    ``reference`` does not.

    Raises
    ------
    GridMismatch
        If the two densities are not sampled on the same grid.
    """
    reference = np.asarray(reference, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if reference.ndim != 1 or reference.shape != mu.shape:
        raise GridMismatch(
            f"densities sampled on different grids: {reference.shape} vs {mu.shape}"
        )
    if np.any(reference < 0) or np.any(mu < 0):
        raise ValueError("densities must be nonnegative")
    weights = _quadrature_weights(len(reference), domain)
    total = float(weights @ reference)
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"reference density integrates to {total!r}, not 1")
    support = reference > 0
    if np.any(mu[support] == 0):
        return INFINITY
    ratio = np.log(reference[support] / mu[support])
    return float(weights[support] @ (reference[support] * ratio))


def duality_objective(
    g: ArrayLike,
    mu_density: ArrayLike,
    domain: Literal["circle", "interval"] = "circle",
) -> float:
    """``int g dmu + int log(1 - g) dlambda`` on a grid; ``-inf`` where ``g >= 1``."""
    g = np.asarray(g, dtype=float)
    mu_density = np.asarray(mu_density, dtype=float)
    if g.shape != mu_density.shape:
        raise GridMismatch(f"grids differ: {g.shape} vs {mu_density.shape}")
    if np.any(g >= 1.0):
        return -INFINITY
    weights = _quadrature_weights(len(g), domain)
    return float(weights @ (g * mu_density) + weights @ np.log1p(-g))


@dataclass(frozen=True)
class Tilt:
    """Minimizing density ``1 / (a f + b)`` of the contracted rate."""

    a: float
    b: float
    iterations: int

    def density(self, f: TestFunction) -> NDArray[np.float64]:
        return 1.0 / (self.a * f.values + self.b)


def solve_tilt(f: TestFunction, x: float) -> Tilt:
    """Find ``(a, b)`` with ``int dlambda / (a f + b) = 1`` and mean ``x``.

    Damped Newton on the convex function
    ``a x + b - int log(a f + b) dlambda``, whose gradient is the residual of
    the two moment conditions.

    Raises
    ------
    OutOfRange
        If ``x`` is not strictly inside ``(inf f, sup f)``.
    NewtonDivergence
        If the residual stays above ``1e-10`` for 500 iterations.
    """
    if not f.minimum < x < f.maximum:
        raise OutOfRange(
            f"x = {x} is outside the open range ({f.minimum}, {f.maximum}) of "
            f"{f.name}"
        )
    phi = f.values
    tol = DEFAULT_TOLERANCES.newton_residual
    a, b = 0.0, 1.0

    def objective(a, b):
        h = a * phi + b
        if h.min() <= 0:
            return INFINITY
        return a * x + b - np.mean(np.log(h))

    value = objective(a, b)
    for iteration in range(MAX_NEWTON_ITERATIONS):
        m = 1.0 / (a * phi + b)
        grad = np.array([x - np.mean(phi * m), 1.0 - np.mean(m)])
        if np.abs(grad).max() < tol:
            return Tilt(float(a), float(b), iteration)
        m2 = m * m
        fm2 = np.mean(phi * m2)
        hessian = np.array([[np.mean(phi * phi * m2), fm2], [fm2, np.mean(m2)]])
        step = -np.linalg.solve(hessian, grad)
        slope = float(grad @ step)
        t = 1.0
        while True:
            candidate = objective(a + t * step[0], b + t * step[1])
            if candidate <= value + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-14:
                # no further decrease available in floating point
                break
        a, b, value = a + t * step[0], b + t * step[1], candidate
        logger.debug("tilt iteration %d: a=%.12g b=%.12g step=%g", iteration, a, b, t)
    raise NewtonDivergence(
        f"tilt for x = {x} did not converge in {MAX_NEWTON_ITERATIONS} iterations"
    )


def rate_linear_statistic(f: TestFunction, x: float, beta: float) -> float:
    """``(beta / 2) inf {K(lambda | mu) : mu(f) = x}``.

    The infimum is attained at ``dmu = dlambda / (a f + b)`` and equals
    ``int log(a f + b) dlambda``.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if x == f.mean and f.minimum < x < f.maximum:
        return 0.0
    tilt = solve_tilt(f, x)
    return 0.5 * beta * float(np.mean(np.log(tilt.a * f.values + tilt.b)))


def theoretical_rate(spec: EnsembleSpec, f: TestFunction, x: float) -> Optional[float]:
    """Rate of ``P(mu_N(f) >= x)`` for the families with a known LDP.

    Returns ``None`` for families without one.
    """
    if spec.family in ("cbe", "sun"):
        beta, g = (spec.beta if spec.family == "cbe" else 2.0), f
    elif spec.family == "so2n":
        beta, g = 2.0, f.symmetrized()
    elif spec.family in ("jtilde", "jacobi"):
        beta, g = spec.beta, f.symmetrized()
    elif spec.family == "dirichlet":
        beta, g = 2.0 * spec.a, f
    else:
        return None
    return rate_linear_statistic(g, max(x, g.mean), beta)


def linear_statistics(
    rng: np.random.Generator, spec: EnsembleSpec, f: TestFunction, size: int
) -> NDArray[np.float64]:
    """``mu(f)`` for ``size`` independent draws of ``spec``.

    Trigonometric test functions of degree at most the number of coefficients
    only need the leading coefficients of each draw.
    """
    if spec.family == "dirichlet":
        weights = sample_dirichlet(rng, np.full(spec.N, spec.a), size)
        angles = 2.0 * np.pi * np.arange(spec.N) / spec.N
        return weights @ f(angles)
    if f.degree is not None and 1 <= f.degree <= spec.n_coefficients:
        c = sample_coefficients(rng, spec, size, f.degree)
        return f.from_moments(leading_moments(c))
    if f.degree == 0:
        return np.full(size, f.mean)
    if spec.family in ("uniform-circle", "uniform-interval"):
        raise ConfigError(
            f"{spec.family} draws moment vectors; {f.name} must be a trigonometric "
            f"polynomial of degree at most {spec.N}"
        )
    return np.array(
        [f.of_measure(sample_ensemble(rng, spec).measure) for _ in range(size)]
    )


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo tail estimates across ``N`` and their extrapolated rate.

    ``log_prob[i]`` estimates ``log P(mu_N(f) >= x)`` at ``N = N_values[i]``;
    ``ci_low``/``ci_high`` bound it at 95% from batch means. The rate is the
    intercept of the least-squares fit of ``-log_prob / N`` against ``1 / N``.
    """

    ensemble: dict
    test_function: str
    x: float
    N_values: Tuple[int, ...]
    hits: Tuple[int, ...]
    samples: Tuple[int, ...]
    log_prob: Tuple[float, ...]
    ci_low: Tuple[float, ...]
    ci_high: Tuple[float, ...]
    rate: float
    rate_se: float
    slope: float
    theoretical: Optional[float] = None
    seed: Optional[int] = None
    dropped: Tuple[int, ...] = field(default_factory=tuple)

    def rate_interval(self, z: float = 1.96) -> Tuple[float, float]:
        return self.rate - z * self.rate_se, self.rate + z * self.rate_se

    def ci_contains(self, value: float, atol: float = 0.0, z: float = 1.96) -> bool:
        low, high = self.rate_interval(z)
        return low - atol <= value <= high + atol

    @property
    def relative_error(self) -> Optional[float]:
        if not self.theoretical:
            return None
        return abs(self.rate - self.theoretical) / self.theoretical

    def to_records(self) -> List[dict]:
        """One JSON-ready record per ``N``."""
        return [
            {
                "ensemble": self.ensemble,
                "f": self.test_function,
                "x": self.x,
                "N": N,
                "hits": hits,
                "samples": samples,
                "log_prob": log_prob,
                "ci_low": low,
                "ci_high": high,
                "seed": self.seed,
            }
            for N, hits, samples, log_prob, low, high in zip(
                self.N_values,
                self.hits,
                self.samples,
                self.log_prob,
                self.ci_low,
                self.ci_high,
            )
        ]

    def to_frame(self) -> pd.DataFrame:
        """Per-``N`` table with the plot-ready columns ``inv_N`` and ``estimate``."""
        frame = pd.DataFrame(self.to_records()).drop(columns=["ensemble"])
        N = frame["N"].astype(float)
        frame["inv_N"] = 1.0 / N
        frame["estimate"] = -frame["log_prob"] / N
        frame["estimate_low"] = -frame["ci_high"] / N
        frame["estimate_high"] = -frame["ci_low"] / N
        return frame

    def summary(self) -> dict:
        low, high = self.rate_interval()
        return {
            "rate": self.rate,
            "rate_se": self.rate_se,
            "rate_ci": [low, high],
            "slope": self.slope,
            "theoretical": self.theoretical,
            "relative_error": self.relative_error,
            "dropped": list(self.dropped),
        }


def _count_hits(rng, spec, f, x, size):
    return int(np.count_nonzero(linear_statistics(rng, spec, f, size) >= x))


def _fit_rate(N_values, y, se):
    inv = 1.0 / np.asarray(N_values, dtype=float)
    X = np.column_stack([np.ones_like(inv), inv])
    XtX_inv = np.linalg.inv(X.T @ X)
    coef = XtX_inv @ X.T @ y
    row = (XtX_inv @ X.T)[0]
    variance = float(np.sum(row**2 * se**2))
    dof = len(y) - 2
    if dof > 0:
        residual = y - X @ coef
        variance += float(residual @ residual) / dof * XtX_inv[0, 0]
    return float(coef[0]), float(coef[1]), math.sqrt(variance)


def mc_tail(
    rng: np.random.Generator,
    ensemble: EnsembleSpec,
    f: TestFunction,
    x: float,
    N_list: Sequence[int],
    samples: int,
    batches: int = DEFAULT_BATCHES,
    seed: Optional[int] = None,
) -> RateEstimate:
    """Estimate ``-(1/N) log P(mu_N(f) >= x)`` for each ``N`` and extrapolate.

    Each ``N`` gets its own substream, split into ``batches`` independent
    batch streams evaluated on a thread pool and merged in batch order.

    Raises
    ------
    ZeroHits
        If fewer than two values of ``N`` saw any exceedance.
    """
    N_list = [int(N) for N in N_list]
    if samples < MIN_TAIL_SAMPLES:
        raise ConfigError(f"samples must be at least {MIN_TAIL_SAMPLES}, got {samples}")
    if len(N_list) < 2 or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ConfigError(f"N_list must be increasing with two entries, got {N_list}")
    if batches < 2:
        raise ConfigError(f"batches must be at least 2, got {batches}")
    sizes = np.full(batches, samples // batches)
    sizes[: samples % batches] += 1
    kept, dropped = [], []
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        for N, stream in zip(N_list, spawn_streams(rng, len(N_list))):
            spec = replace(ensemble, N=N)
            substreams = spawn_streams(stream, batches)
            hits = np.array(
                list(
                    pool.map(
                        lambda args: _count_hits(args[0], spec, f, x, args[1]),
                        zip(substreams, sizes),
                    )
                )
            )
            total = int(hits.sum())
            if total == 0:
                logger.warning("no exceedances of x=%g at N=%d; dropping N", x, N)
                dropped.append(N)
                continue
            p = total / samples
            batch_p = hits / sizes
            se_p = float(np.std(batch_p, ddof=1) / math.sqrt(batches))
            se_log = se_p / p
            logger.info(
                "N=%d: %d/%d hits, log p = %.6g +- %.3g",
                N,
                total,
                samples,
                math.log(p),
                se_log,
            )
            kept.append((N, total, math.log(p), se_log))
    if len(kept) < 2:
        raise ZeroHits(
            f"only {len(kept)} of {len(N_list)} sizes saw exceedances of x={x}",
            n=dropped[0] if dropped else None,
        )
    N_values = np.array([k[0] for k in kept])
    log_prob = np.array([k[2] for k in kept])
    se_log = np.array([k[3] for k in kept])
    rate, slope, rate_se = _fit_rate(N_values, -log_prob / N_values, se_log / N_values)
    theoretical = None
    if f.minimum < x < f.maximum or x <= f.mean:
        theoretical = theoretical_rate(ensemble, f, x)
    return RateEstimate(
        ensemble=ensemble.to_dict(),
        test_function=f.name,
        x=float(x),
        N_values=tuple(int(N) for N in N_values),
        hits=tuple(k[1] for k in kept),
        samples=tuple(samples for _ in kept),
        log_prob=tuple(float(v) for v in log_prob),
        ci_low=tuple(float(v) for v in log_prob - 1.96 * se_log),
        ci_high=tuple(float(v) for v in np.minimum(log_prob + 1.96 * se_log, 0.0)),
        rate=rate,
        rate_se=rate_se,
        slope=slope,
        theoretical=theoretical,
        seed=seed,
        dropped=tuple(dropped),
    )


def stieltjes_transform(f: TestFunction, x: float) -> float:
    """``H(x) = int dlambda / (x - f)`` for ``x`` outside ``[inf f, sup f]``.

    Raises
    ------
    InsideSpectrum
        If ``x`` lies in ``[inf f, sup f]``.
    """
    if f.minimum <= x <= f.maximum:
        raise InsideSpectrum(
            f"x = {x} lies inside [{f.minimum}, {f.maximum}] for {f.name}"
        )
    return float(np.mean(1.0 / (x - f.values)))


def _endpoint_limit(f, sign):
    edge = f.maximum if sign > 0 else f.minimum
    span = f.maximum - f.minimum
    if span == 0:
        return sign * INFINITY
    gaps = np.sort(np.abs(f.values - edge))
    delta_min = max(gaps[min(3, len(gaps) - 1)], 1e-12 * span)
    delta = 0.5 * span
    history = []
    while delta >= delta_min or len(history) < 4:
        history.append(np.mean(1.0 / (edge + sign * delta - f.values)))
        delta *= 0.5
    h = np.array(history)
    d = np.diff(h)
    if abs(d[-1]) >= 0.9 * abs(d[-2]) or d[-1] == d[-2]:
        return sign * INFINITY
    return float(h[-1] - d[-1] ** 2 / (d[-1] - d[-2]))


def stieltjes_limits(f: TestFunction) -> Tuple[float, float]:
    """Limits ``(H_up, H_down)`` of ``H`` at ``inf f`` and ``sup f``.

    ``H_up`` is negative and ``H_down`` positive; either may be infinite. They
    come from geometric one-sided sequences ``x = edge +- delta``, read as
    divergent when successive increments stop shrinking and extrapolated with
    Aitken's process otherwise.
    """
    return _endpoint_limit(f, -1.0), _endpoint_limit(f, 1.0)


def r_transform(f: TestFunction, y: float) -> float:
    """``R(y)`` defined by ``H(R(y) + 1/y) = y``.

    Raises
    ------
    OutOfRange
        If ``y`` is zero or outside ``(H_up, H_down)``.
    """
    if y == 0:
        raise OutOfRange("the R-transform is not defined at y = 0")
    if f.maximum == f.minimum:
        return f.maximum
    h_up, h_down = stieltjes_limits(f)
    if not h_up < y < h_down:
        raise OutOfRange(f"y = {y} is outside ({h_up}, {h_down})")
    gaps = np.sort(np.abs(f.values - (f.maximum if y > 0 else f.minimum)))
    inner = max(gaps[min(3, len(gaps) - 1)], 1e-12)

    def residual(x):
        return np.mean(1.0 / (x - f.values)) - y

    if y > 0:
        lo, hi = f.maximum + inner, f.maximum + 1.0 / y
    else:
        lo, hi = f.minimum + 1.0 / y, f.minimum - inner
    if residual(lo) * residual(hi) > 0:
        raise OutOfRange(f"y = {y} is too close to the end of the range of H")
    x = brentq(residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    for _ in range(2):
        derivative = -np.mean(1.0 / (x - f.values) ** 2)
        x -= residual(x) / derivative
    if abs(residual(x)) > DEFAULT_TOLERANCES.newton_residual:
        raise NewtonDivergence(f"R-transform residual {abs(residual(x)):.3g}")
    return float(x - 1.0 / y)


def spherical_limit(f: TestFunction) -> float:
    """Limit of ``(1/N) log E exp(N mu_N(f))`` under the CUE.

    ``F = v - int log(1 + v - f) dlambda`` with ``v = R(1)`` when
    ``H_up <= 1 <= H_down``, ``v = sup f - 1`` when ``1 > H_down``, and
    ``v = inf f - 1`` when ``1 < H_up``.
    """
    h_up, h_down = stieltjes_limits(f)
    if h_up <= 1.0 <= h_down:
        v = r_transform(f, 1.0) if h_down > 1.0 else f.maximum - 1.0
    elif 1.0 > h_down:
        v = f.maximum - 1.0
    else:
        v = f.minimum - 1.0
    return float(v - np.mean(np.log(1.0 + v - f.values)))


def spherical_integral_mc(
    rng: np.random.Generator,
    N: int,
    f: TestFunction,
    samples: int,
    beta: float = 2.0,
) -> float:
    """Monte Carlo value of ``(1/N) log E exp(N mu_N(f))`` under CbetaE."""
    stats = linear_statistics(rng, EnsembleSpec("cbe", N, beta), f, samples)
    return float((logsumexp(N * stats) - math.log(samples)) / N)
