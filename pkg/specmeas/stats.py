"""Goodness-of-fit and independence tests used by the acceptance suites."""

import logging
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import ArrayLike
from scipy import special, stats

from .exceptions import BinUnderflow

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 1e-3
MIN_SAMPLE_SIZE = 100
MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistical test."""

    __test__ = False

    name: str
    statistic: float
    p_value: float
    sample_size: int
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must lie in [0, 1], got {self.p_value}")

    @property
    def passed(self) -> bool:
        return self.p_value > self.alpha

    def to_dict(self):
        record = asdict(self)
        record["passed"] = self.passed
        return record


def bonferroni_alpha(family_alpha: float, count: int) -> float:
    """Per-test level for a family of ``count`` tests."""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    return family_alpha / count


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """``I_x(a, b)``, the Beta(a, b) distribution function at ``x``."""
    if a <= 0 or b <= 0:
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return float(special.betainc(a, b, x))


def regularized_incomplete_gamma(a: float, x: float) -> float:
    """``P(a, x)``, the Gamma(a, 1) distribution function at ``x``."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    return float(special.gammainc(a, max(x, 0.0)))


def _check_size(samples):
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < MIN_SAMPLE_SIZE:
        raise ValueError(
            f"at least {MIN_SAMPLE_SIZE} samples are required, got {samples.size}"
        )
    return samples


def ks_test(
    samples: ArrayLike,
    cdf: Callable[[np.ndarray], np.ndarray],
    name: str = "ks",
    alpha: float = DEFAULT_ALPHA,
) -> TestReport:
    """One-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    samples = _check_size(samples)
    result = stats.kstest(samples, cdf, method="asymp")
    return TestReport(
        name, float(result.statistic), float(result.pvalue), samples.size, alpha
    )


def two_sample_ks(
    a_samples: ArrayLike,
    b_samples: ArrayLike,
    name: str = "ks2",
    alpha: float = DEFAULT_ALPHA,
) -> TestReport:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    a_samples = _check_size(a_samples)
    b_samples = _check_size(b_samples)
    result = stats.ks_2samp(a_samples, b_samples, method="asymp")
    return TestReport(
        name,
        float(result.statistic),
        float(result.pvalue),
        min(a_samples.size, b_samples.size),
        alpha,
    )


def _cell_probabilities(density, x_edges, y_edges, order=4):
    nodes, weights = leggauss(order)
    xl, xr = x_edges[:-1], x_edges[1:]
    yl, yr = y_edges[:-1], y_edges[1:]
    xs = 0.5 * (xr - xl)[:, None] * nodes[None, :] + 0.5 * (xr + xl)[:, None]
    ys = 0.5 * (yr - yl)[:, None] * nodes[None, :] + 0.5 * (yr + yl)[:, None]
    values = density(xs[:, None, :, None], ys[None, :, None, :])
    integral = np.einsum("ijkl,k,l->ij", values, weights, weights)
    return integral * 0.25 * np.outer(xr - xl, yr - yl)


def chi2_2d(
    samples_2d: ArrayLike,
    density: Callable[[np.ndarray, np.ndarray], np.ndarray],
    bins: Union[int, Tuple[Sequence[float], Sequence[float]]],
    domain: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None,
    name: str = "chi2_2d",
    alpha: float = DEFAULT_ALPHA,
) -> TestReport:
    """Pearson chi-square test of 2-D samples against a density.

    Parameters
    ----------
    samples_2d : array-like, shape (n, 2)
    density : callable
        Vectorized joint density ``f(x, y)``; cell probabilities come from a
        tensor Gauss-Legendre rule on each cell.
    bins : int or pair of edge arrays
        Number of bins per axis over ``domain``, or explicit edges.
    domain : pair of (low, high), optional
        Required when ``bins`` is an integer.

    Raises
    ------
    BinUnderflow
        If some expected count is below 5.
    """
    samples_2d = np.asarray(samples_2d, dtype=float)
    if samples_2d.ndim != 2 or samples_2d.shape[1] != 2:
        raise ValueError("samples_2d must have shape (n, 2)")
    n = samples_2d.shape[0]
    if isinstance(bins, int):
        if domain is None:
            raise ValueError("domain is required when bins is an integer")
        x_edges = np.linspace(*domain[0], bins + 1)
        y_edges = np.linspace(*domain[1], bins + 1)
    else:
        x_edges, y_edges = (np.asarray(e, dtype=float) for e in bins)
    observed, _, _ = np.histogram2d(
        samples_2d[:, 0], samples_2d[:, 1], bins=[x_edges, y_edges]
    )
    probabilities = _cell_probabilities(density, x_edges, y_edges)
    probabilities = probabilities / probabilities.sum()
    expected = n * probabilities
    if expected.min() < MIN_EXPECTED_COUNT:
        raise BinUnderflow(
            f"expected count {expected.min():.3g} is below {MIN_EXPECTED_COUNT}"
        )
    statistic = float(((observed - expected) ** 2 / expected).sum())
    dof = observed.size - 1
    p_value = float(special.gammaincc(dof / 2.0, statistic / 2.0))
    return TestReport(name, statistic, p_value, n, alpha)


def spearman(a: ArrayLike, b: ArrayLike) -> float:
    """Spearman rank correlation."""
    return float(stats.spearmanr(np.asarray(a), np.asarray(b))[0])


def max_pairwise_spearman(columns: np.ndarray) -> float:
    """Largest absolute Spearman correlation between distinct columns."""
    columns = np.asarray(columns)
    if columns.shape[1] < 2:
        return 0.0
    matrix = np.atleast_2d(stats.spearmanr(columns)[0])
    np.fill_diagonal(matrix, 0.0)
    return float(np.abs(matrix).max())


def spearman_test(
    a: ArrayLike, b: ArrayLike, name: str = "spearman", alpha: float = DEFAULT_ALPHA
) -> TestReport:
    """Test of zero rank correlation between two samples."""
    a = _check_size(a)
    result = stats.spearmanr(a, np.asarray(b, dtype=float).ravel())
    return TestReport(name, float(result[0]), float(result[1]), a.size, alpha)


def threshold_report(
    name: str,
    statistic: float,
    ok: bool,
    sample_size: int,
    alpha: float = DEFAULT_ALPHA,
) -> TestReport:
    """Deterministic check reported alongside the statistical ones."""
    return TestReport(name, float(statistic), 1.0 if ok else 0.0, sample_size, alpha)


def beta_cdf(a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: special.betainc(a, b, np.clip(x, 0.0, 1.0))


def beta_s_cdf(a: float, b: float) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of ``1 - 2 X`` with ``X ~ Beta(a, b)``."""
    return lambda y: 1.0 - special.betainc(a, b, np.clip((1.0 - y) / 2.0, 0.0, 1.0))


def gamma_cdf(a: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: special.gammainc(a, np.maximum(x, 0.0))


def uniform_cdf(low: float, high: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.clip((np.asarray(x) - low) / (high - low), 0.0, 1.0)
