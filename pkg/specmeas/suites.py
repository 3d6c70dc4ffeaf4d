"""Named statistical suites run by ``specmeas verify``.

Each suite draws ``samples`` random measures, extracts the coordinates whose
laws are known in closed form and tests them. Reports within a suite share a
Bonferroni-adjusted level.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List

import numpy as np

from .canonical import canonical_moments_of
from .measures import is_symmetric, moments_circle, project_R
from .matrix_models import haar_unitary, sample_dual_spectral, spectral_measure
from .opuc import moments_to_verblunsky
from .samplers import (
    sample_bizth,
    sample_cbe_spectral,
    sample_eta,
    sample_jacobi_gamma,
    sample_jbeta_rejection,
    sample_jtilde_spectral,
    sample_so2n_spectral,
    sample_sun_spectral,
)
from .stats import (
    DEFAULT_ALPHA,
    TestReport,
    beta_cdf,
    beta_s_cdf,
    bonferroni_alpha,
    chi2_2d,
    ks_test,
    max_pairwise_spearman,
    threshold_report,
    two_sample_ks,
    uniform_cdf,
)

logger = logging.getLogger(__name__)

INDEPENDENCE_THRESHOLD = 0.05
ETA_PARAMETERS = (0.0, 1.0, 2.5)
ONEOF_BETAS = (1.0, 2.0, 4.0)


@dataclass(frozen=True)
class SuiteConfig:
    """Size parameters shared by every suite."""

    n: int
    samples: int
    negative_control: bool = False


@dataclass(frozen=True)
class SuiteReport:
    name: str
    reports: List[TestReport]
    family_alpha: float

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    def to_dict(self):
        return {
            "suite": self.name,
            "family_alpha": self.family_alpha,
            "passed": self.passed,
            "reports": [report.to_dict() for report in self.reports],
        }


def _coefficients(measure, count):
    return moments_to_verblunsky(moments_circle(measure, count)).coefficients


def _eta_reports(label, c, first_r):
    """KS reports for ``c_j ~ eta_{first_r - j + 1}`` plus independence."""
    reports = []
    for j in range(c.shape[1]):
        r = first_r - j
        modulus = np.abs(c[:, j]) ** 2
        reports.append(
            ks_test(modulus, beta_cdf(1.0, r + 1.0), f"{label}:|c{j + 1}|^2")
        )
        phase = np.angle(c[:, j])
        reports.append(
            ks_test(phase, uniform_cdf(-np.pi, np.pi), f"{label}:arg c{j + 1}")
        )
    rho = max_pairwise_spearman(np.abs(c) ** 2)
    reports.append(
        threshold_report(
            f"{label}:independence", rho, rho < INDEPENDENCE_THRESHOLD, len(c)
        )
    )
    return reports


def uniform_moments_circle(rng, config):
    """CUE spectral measures: their first ``n - 1`` moments are uniform."""
    n = config.n
    beta = 4.0 if config.negative_control else 2.0
    c = np.array(
        [
            _coefficients(sample_cbe_spectral(rng, n, beta).measure, n - 1)
            for _ in range(config.samples)
        ]
    )
    return _eta_reports("cbe", c, n - 2)


def cue_coefficients(rng, config):
    """Coefficients extracted from Haar unitary matrices."""
    n = config.n
    size = n + 1 if config.negative_control else n
    c = np.array(
        [
            _coefficients(spectral_measure(haar_unitary(rng, size)), n - 1)
            for _ in range(config.samples)
        ]
    )
    return _eta_reports("haar", c, n - 2)


def cbe_vs_cue(rng, config):
    """Coefficient route against the matrix route, coordinate by coordinate."""
    n = config.n
    beta = 4.0 if config.negative_control else 2.0
    streams = rng.spawn(2)
    coefficient_route = np.array(
        [
            _coefficients(sample_cbe_spectral(streams[0], n, beta).measure, n - 1)
            for _ in range(config.samples)
        ]
    )
    matrix_route = np.array(
        [
            _coefficients(spectral_measure(haar_unitary(streams[1], n)), n - 1)
            for _ in range(config.samples)
        ]
    )
    reports = []
    for j in range(n - 1):
        reports.append(
            two_sample_ks(
                np.abs(coefficient_route[:, j]),
                np.abs(matrix_route[:, j]),
                f"|c{j + 1}|",
            )
        )
        reports.append(
            two_sample_ks(
                np.angle(coefficient_route[:, j]),
                np.angle(matrix_route[:, j]),
                f"arg c{j + 1}",
            )
        )
    return reports


def sun(rng, config):
    """SU(N): uniform first moments and unit determinant."""
    n = config.n
    measures = [
        sample_cbe_spectral(rng, n, 4.0).measure
        if config.negative_control
        else sample_sun_spectral(rng, n)
        for _ in range(config.samples)
    ]
    c = np.array([_coefficients(measure, n - 1) for measure in measures])
    reports = _eta_reports("sun", c, n - 2) if n > 1 else []
    products = np.array([np.prod(measure.atoms) for measure in measures])
    worst = float(np.abs(products - 1.0).max())
    reports.append(
        threshold_report("sun:determinant", worst, worst <= 1e-8, len(measures))
    )
    return reports


def so2n(rng, config):
    """SO(2N): symmetric Beta laws of the coefficients and Dir_N(1) weights."""
    n = config.n
    measures = [
        sample_jtilde_spectral(rng, n, 2.0, 1.5, 1.5)
        if config.negative_control
        else sample_so2n_spectral(rng, n)
        for _ in range(config.samples)
    ]
    asymmetric = sum(not is_symmetric(measure) for measure in measures)
    reports = [
        threshold_report("so2n:symmetry", asymmetric, asymmetric == 0, len(measures))
    ]
    c = np.array([_coefficients(measure, 2 * n - 1).real for measure in measures])
    for k in range(1, 2 * n):
        shape = (2 * n - k) / 2.0
        reports.append(ks_test(c[:, k - 1], beta_s_cdf(shape, shape), f"so2n:c{k}"))
    if n > 1:
        first_weight = np.array([project_R(m).weights[0] for m in measures])
        reports.append(
            ks_test(first_weight, beta_cdf(1.0, n - 1.0), "so2n:projected weight")
        )
    return reports


def jacobi_oneof(rng, config):
    """Jacobi ensembles with ``a = b = beta / 4`` for beta in 1, 2, 4."""
    n = config.n
    shift = 1.0 if config.negative_control else 0.0
    reports = []
    for beta in ONEOF_BETAS:
        a = beta / 4.0 + shift
        p = np.array(
            [
                canonical_moments_of(
                    sample_jacobi_gamma(rng, n, beta, a, a), 2 * n - 1
                ).values
                for _ in range(config.samples)
            ]
        )
        for k in range(1, 2 * n):
            shape = (2 * n - k) * beta / 4.0
            reports.append(
                ks_test(p[:, k - 1], beta_cdf(shape, shape), f"beta={beta:g}:p{k}")
            )
    return reports


_ENDPOINTS = {1: (), 2: (0.0,), 3: (0.0, 1.0), 4: (1.0,)}


def bizth(rng, config):
    """Principal representations of uniform moment vectors, all four cases."""
    n = config.n
    shift = 1.0 if config.negative_control else 0.0
    reports = []
    for case in (1, 2, 3, 4):
        if case == 3 and n < 2:
            continue
        dimension = 2 * n - 1 if case in (1, 3) else 2 * n
        measures = [sample_bizth(rng, case, n) for _ in range(config.samples)]
        endpoints = _ENDPOINTS[case]
        wrong = sum(
            tuple(x for x in (0.0, 1.0) if m.has_atom_at(x)) != endpoints
            for m in measures
        )
        reports.append(
            threshold_report(f"case{case}:support", wrong, wrong == 0, len(measures))
        )
        p = np.array([canonical_moments_of(m, dimension).values for m in measures])
        for j in range(1, dimension + 1):
            shape = dimension - j + 1.0 + shift
            reports.append(
                ks_test(p[:, j - 1], beta_cdf(shape, shape), f"case{case}:p{j}")
            )
        if case == 2 and n == 2:
            interior = np.array([m.points[1:] for m in measures])
            oracle = sample_jbeta_rejection(rng, 2, 4.0, 1.0, 3.0, config.samples)
            for i in range(2):
                reports.append(
                    two_sample_ks(interior[:, i], oracle[:, i], f"case2:x{i + 1}")
                )
    return reports


def unif2(rng, config):
    """``g^D g`` for Haar ``g`` in SO(2n): uniform projected moments."""
    n = config.n
    shift = 1.0 if config.negative_control else 0.0
    measures = [sample_dual_spectral(rng, n) for _ in range(config.samples)]
    asymmetric = sum(not is_symmetric(measure) for measure in measures)
    reports = [
        threshold_report("unif2:symmetry", asymmetric, asymmetric == 0, len(measures))
    ]
    p = np.array(
        [canonical_moments_of(project_R(m), n - 1).values for m in measures]
    )
    for j in range(1, n):
        shape = n - j + shift
        reports.append(ks_test(p[:, j - 1], beta_cdf(shape, shape), f"unif2:p{j}"))
    return reports


def eta(rng, config):
    """Joint law of ``(|z|**2, arg z)`` under ``eta_r``."""
    shift = 1.0 if config.negative_control else 0.0
    reports = []
    for r in ETA_PARAMETERS:
        z = sample_eta(rng, r + shift, config.samples)
        q = np.linspace(0.0, 1.0, 11)
        radial_edges = 1.0 - (1.0 - q) ** (1.0 / (r + 1.0))
        angle_edges = np.linspace(-np.pi, np.pi, 9)

        def density(b, t, r=r):
            return (r + 1.0) * (1.0 - b) ** r / (2.0 * np.pi) + 0.0 * t

        reports.append(
            chi2_2d(
                np.column_stack([np.abs(z) ** 2, np.angle(z)]),
                density,
                (radial_edges, angle_edges),
                name=f"eta_{r:g}",
            )
        )
    return reports


SUITES: Dict[str, Callable[[np.random.Generator, SuiteConfig], List[TestReport]]] = {
    "uniform-moments-circle": uniform_moments_circle,
    "cue-coefficients": cue_coefficients,
    "cbe-vs-cue": cbe_vs_cue,
    "sun": sun,
    "so2n": so2n,
    "jacobi-oneof": jacobi_oneof,
    "bizth": bizth,
    "unif2": unif2,
    "eta": eta,
}


def run_suite(
    name: str,
    rng: np.random.Generator,
    config: SuiteConfig,
    family_alpha: float = DEFAULT_ALPHA,
) -> SuiteReport:
    """Run a named suite; every report is judged at ``family_alpha / count``."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    reports = SUITES[name](rng, config)
    alpha = bonferroni_alpha(family_alpha, len(reports))
    reports = [replace(report, alpha=alpha) for report in reports]
    for report in reports:
        if not report.passed:
            logger.warning(
                "%s: %s failed (statistic %.4g, p = %.3g)",
                name,
                report.name,
                report.statistic,
                report.p_value,
            )
    logger.info(
        "suite %s: %d/%d passed",
        name,
        sum(report.passed for report in reports),
        len(reports),
    )
    return SuiteReport(name, reports, family_alpha)
