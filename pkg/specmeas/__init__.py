"""Random moment problems and spectral measures of random matrices."""

from importlib.metadata import PackageNotFoundError, version

from .canonical import (
    canonical_moments_of,
    canonical_to_moments_real,
    extreme_moments,
    gauss_quadrature,
    lift_canonical,
    moments_to_canonical_real,
    principal_representation,
)
from .config import DEFAULT_TOLERANCES, rate_chart_configuration
from .exceptions import (
    ConfigError,
    CyclicityWarning,
    NumericalError,
    SpecmeasError,
    StatisticalFailure,
)
from .ldp import (
    TestFunction,
    mc_tail,
    r_transform,
    rate_linear_statistic,
    reversed_kullback,
    spherical_limit,
    stieltjes_transform,
)
from .matrix_models import haar_unitary, spectral_measure
from .measures import (
    CircleAtomicMeasure,
    IntervalAtomicMeasure,
    MomentVectorI,
    MomentVectorT,
    RealCanonicalVector,
    VerblunskyVector,
    is_symmetric,
    moments_circle,
    moments_interval,
    project_R,
)
from .opuc import (
    moments_to_verblunsky,
    szego_step,
    verblunsky_to_measure,
    verblunsky_to_moments,
)
from .samplers import EnsembleSpec, sample_ensemble
from .stats import TestReport, chi2_2d, ks_test

try:
    __version__ = version("specmeas")
except PackageNotFoundError:
    __version__ = "0+unknown"

__all__ = [
    "DEFAULT_TOLERANCES",
    "CircleAtomicMeasure",
    "ConfigError",
    "CyclicityWarning",
    "EnsembleSpec",
    "IntervalAtomicMeasure",
    "MomentVectorI",
    "MomentVectorT",
    "NumericalError",
    "RealCanonicalVector",
    "SpecmeasError",
    "StatisticalFailure",
    "TestFunction",
    "TestReport",
    "VerblunskyVector",
    "canonical_moments_of",
    "canonical_to_moments_real",
    "chi2_2d",
    "extreme_moments",
    "gauss_quadrature",
    "haar_unitary",
    "is_symmetric",
    "ks_test",
    "lift_canonical",
    "mc_tail",
    "moments_circle",
    "moments_interval",
    "moments_to_canonical_real",
    "moments_to_verblunsky",
    "principal_representation",
    "project_R",
    "r_transform",
    "rate_chart_configuration",
    "rate_linear_statistic",
    "reversed_kullback",
    "sample_ensemble",
    "spectral_measure",
    "spherical_limit",
    "stieltjes_transform",
    "szego_step",
    "verblunsky_to_measure",
    "verblunsky_to_moments",
]
