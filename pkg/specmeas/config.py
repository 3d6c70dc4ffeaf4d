import os
from dataclasses import dataclass

from .exceptions import ConfigError

THREADS_ENV_VAR = "SPECMEAS_THREADS"


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the deterministic modules."""

    dedup: float = 1e-10
    weight_sum: float = 1e-12
    boundary: float = 1e-12
    norm_floor: float = 1e-12
    norm_negative: float = 1e-10
    norm_collapse: float = 1e-8
    root_modulus: float = 1e-6
    eigen_residual: float = 1e-8
    newton_residual: float = 1e-10
    symmetry: float = 1e-8
    endpoint_snap: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


def thread_count():
    """Number of worker threads allowed for Monte Carlo loops.

    Reads ``SPECMEAS_THREADS``; falls back to ``min(4, os.cpu_count())``.
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return max(1, min(4, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(
            f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {value}")
    return value


def rate_chart_configuration(base, legend_orient="top-right", point_size=60):
    """Theme of :func:`specmeas.charts.rate_chart`: plain view, no grid."""
    return (
        base.configure_view(stroke=None)
        .configure_axis(grid=False, titleFontWeight=400)
        .configure_legend(orient=legend_orient)
        .configure_point(size=point_size)
    )
