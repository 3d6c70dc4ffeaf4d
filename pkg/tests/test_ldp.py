"""Tests for rate functions, tail estimates and the spherical integral."""

import math

import numpy as np
import pytest
from scipy.optimize import minimize

from specmeas.canonical import chebyshev_lift
from specmeas.exceptions import (
    ConfigError,
    GridMismatch,
    InsideSpectrum,
    OutOfRange,
    ZeroHits,
)
from specmeas.ldp import (
    INFINITY,
    TestFunction,
    circle_grid,
    duality_objective,
    linear_statistics,
    mc_tail,
    r_transform,
    rate_linear_statistic,
    reversed_kullback,
    solve_tilt,
    spherical_integral_mc,
    spherical_limit,
    stieltjes_limits,
    stieltjes_transform,
    theoretical_rate,
)
from specmeas.measures import IntervalAtomicMeasure, moments_interval
from specmeas.samplers import EnsembleSpec

SPHERICAL_COSINE = math.sqrt(2) - 1 - math.log((math.sqrt(2) + 1) / 2)


def cosine_rate(x):
    """Contracted rate of Re t_1 for the CUE."""
    return -math.log(1 - x * x)


def test_grid_avoids_endpoints():
    """The shifted grid never hits -pi or pi."""
    grid = circle_grid(8)
    assert grid[0] == pytest.approx(-np.pi + np.pi / 8)
    assert np.all(np.abs(grid) < np.pi)


def test_test_function_validation():
    """Small grids and wrong bounds are rejected."""
    with pytest.raises(ValueError, match="at least 16"):
        TestFunction.real_part(grid_size=8)
    with pytest.raises(ValueError, match="bracket"):
        TestFunction.from_callable(np.cos, bounds=(0.0, 1.0))


def test_pullback_polynomial(three_point_measure):
    """x = (1 + cos t) / 2 as a degree-one trigonometric polynomial."""
    f = TestFunction.pullback_polynomial([0.0, 1.0])
    np.testing.assert_allclose(f.values, 0.5 * (1 + np.cos(f.grid)), atol=1e-15)
    assert f.mean == pytest.approx(0.5)
    assert f.of_measure(three_point_measure) == pytest.approx(0.51)


def test_evaluation_from_moments(symmetric_measure, cosine):
    """Moment-based evaluation matches direct integration."""
    t = np.exp(1j * symmetric_measure.angles) @ symmetric_measure.weights
    assert cosine.from_moments([t]) == pytest.approx(
        cosine.of_measure(symmetric_measure)
    )
    with pytest.raises(ValueError, match="trigonometric"):
        TestFunction.from_callable(np.cos).from_moments([t])


def test_interval_measures_use_the_symmetric_lift():
    """Odd parts of f drop out on interval measures, matching the moment route."""
    measure = IntervalAtomicMeasure([0.2, 0.7], [0.4, 0.6])
    f = TestFunction.trigonometric([0.1, 0.3 + 0.4j])
    assert f.of_measure(measure) == pytest.approx(0.1)
    callable_f = TestFunction.from_callable(f.func)
    assert callable_f.of_measure(measure) == pytest.approx(0.1)
    t = chebyshev_lift(moments_interval(measure, 1)).entries
    assert f.from_moments(t) == pytest.approx(f.of_measure(measure))


def test_reversed_kullback():
    """K(lambda | 1 + cos / 2) has a closed form."""
    grid = circle_grid(4096)
    ones = np.ones_like(grid)
    assert reversed_kullback(ones, ones) == pytest.approx(0.0)
    expected = -math.log((1 + math.sqrt(0.75)) / 2)
    assert reversed_kullback(ones, 1 + 0.5 * np.cos(grid)) == pytest.approx(
        expected, abs=1e-10
    )
    holes = ones.copy()
    holes[0] = 0.0
    assert reversed_kullback(ones, holes) == INFINITY
    assert reversed_kullback(np.ones(101), np.ones(101), "interval") == 0.0
    with pytest.raises(GridMismatch):
        reversed_kullback(ones, ones[:-1])


def test_tilt(cosine):
    """The tilt for cos at x = 0.4 matches the closed form."""
    tilt = solve_tilt(cosine, 0.4)
    assert tilt.a == pytest.approx(-0.8 / 0.84, abs=1e-8)
    assert tilt.b == pytest.approx(1.16 / 0.84, abs=1e-8)
    density = tilt.density(cosine)
    assert density.mean() == pytest.approx(1.0)
    assert cosine.integrate(density) == pytest.approx(0.4)
    with pytest.raises(OutOfRange):
        solve_tilt(cosine, 1.0)


def test_contracted_rate(cosine):
    """The contracted rate is -log(1 - x**2) scaled by beta / 2."""
    assert rate_linear_statistic(cosine, 0.4, 2.0) == pytest.approx(
        cosine_rate(0.4), abs=1e-8
    )
    assert rate_linear_statistic(cosine, 0.4, 4.0) == pytest.approx(
        2 * cosine_rate(0.4), abs=1e-8
    )
    assert rate_linear_statistic(cosine, 0.0, 2.0) == 0.0


def test_rate_matches_direct_minimization():
    """Minimizing K(lambda | mu) over densities with mu(cos) = x."""
    f = TestFunction.real_part(grid_size=256)
    size = f.grid_size

    def objective(m):
        return -np.mean(np.log(m))

    def gradient(m):
        return -1.0 / (size * m)

    result = minimize(
        objective,
        np.ones(size),
        jac=gradient,
        method="SLSQP",
        bounds=[(1e-9, None)] * size,
        constraints=[
            {"type": "eq", "fun": lambda m: np.mean(m) - 1.0},
            {"type": "eq", "fun": lambda m: np.mean(f.values * m) - 0.4},
        ],
        options={"ftol": 1e-12, "maxiter": 500},
    )
    assert result.fun == pytest.approx(rate_linear_statistic(f, 0.4, 2.0), abs=1e-4)


def test_duality(cosine):
    """The dual objective peaks at the tilt and equals the rate there."""
    tilt = solve_tilt(cosine, 0.4)
    h = tilt.a * cosine.values + tilt.b

    def dual(s):
        return duality_objective(s * (1 - h), 1 / h)

    assert dual(1.0) == pytest.approx(cosine_rate(0.4), abs=1e-8)
    assert dual(0.9) < dual(1.0)
    assert dual(1.1) < dual(1.0)
    assert duality_objective(np.full(4, 1.0), np.ones(4)) == -INFINITY


def test_theoretical_rates(cosine):
    """Families with a known rate report it; the others return None."""
    assert theoretical_rate(EnsembleSpec("uniform-circle", 8), cosine, 0.3) is None
    one = theoretical_rate(EnsembleSpec("dirichlet", 8, a=1.0), cosine, 0.3)
    two = theoretical_rate(EnsembleSpec("dirichlet", 8, a=2.0), cosine, 0.3)
    assert two == pytest.approx(2 * one)
    below = theoretical_rate(EnsembleSpec("cbe", 8), cosine, -0.5)
    assert below == 0.0


def test_linear_statistics(rng, cosine):
    """Linear statistics of CUE draws are centered and bounded."""
    stats = linear_statistics(rng, EnsembleSpec("cbe", 8), cosine, 20_000)
    assert stats.shape == (20_000,)
    assert abs(stats.mean()) < 0.01
    assert np.all(np.abs(stats) <= 1)
    with pytest.raises(ConfigError, match="trigonometric"):
        linear_statistics(
            rng,
            EnsembleSpec("uniform-circle", 4),
            TestFunction.from_callable(np.cos, "cos-callable"),
            10,
        )


def test_linear_statistics_agree_across_routes(rng):
    """The coefficient shortcut and full reconstruction give the same law."""
    f = TestFunction.cosine(2)
    spec = EnsembleSpec("cbe", 4)
    fast = linear_statistics(rng, spec, f, 2000)
    slow = linear_statistics(
        rng, spec, TestFunction.from_callable(lambda t: np.cos(2 * t)), 2000
    )
    assert abs(fast.mean() - slow.mean()) < 0.06
    assert abs(fast.std() - slow.std()) < 0.05


def test_mc_tail_below_the_mean(rng, cosine):
    """A typical event has rate zero."""
    estimate = mc_tail(rng, EnsembleSpec("cbe", 4), cosine, -0.9, [4, 8], 10_000)
    assert estimate.ci_contains(0.0, atol=1e-3)
    assert estimate.theoretical == 0.0
    frame = estimate.to_frame()
    assert list(frame["N"]) == [4, 8]
    assert {"inv_N", "estimate", "estimate_low", "estimate_high"} <= set(frame)


def test_mc_tail_errors(rng, cosine):
    """Unreachable thresholds and small budgets are rejected."""
    spec = EnsembleSpec("cbe", 4)
    with pytest.raises(ZeroHits):
        mc_tail(rng, spec, cosine, 0.99, [4, 8], 10_000)
    with pytest.raises(ConfigError, match="samples"):
        mc_tail(rng, spec, cosine, 0.4, [4, 8], 5_000)
    with pytest.raises(ConfigError, match="increasing"):
        mc_tail(rng, spec, cosine, 0.4, [8, 4], 10_000)


def test_stieltjes_transform(cosine):
    """Stieltjes transform of cos outside its range."""
    assert stieltjes_transform(cosine, 2.0) == pytest.approx(1 / math.sqrt(3))
    assert stieltjes_transform(cosine, -2.0) == pytest.approx(-1 / math.sqrt(3))
    with pytest.raises(InsideSpectrum):
        stieltjes_transform(cosine, 0.5)
    assert stieltjes_limits(cosine) == (-INFINITY, INFINITY)


def test_r_transform(cosine):
    """R transform of cos at 1 is sqrt(2) - 1."""
    assert r_transform(cosine, 1.0) == pytest.approx(math.sqrt(2) - 1, abs=1e-10)
    with pytest.raises(OutOfRange):
        r_transform(cosine, 0.0)


def test_spherical_limit(cosine):
    """Spherical limits for cos, constants and shifts."""
    assert spherical_limit(cosine) == pytest.approx(SPHERICAL_COSINE, abs=1e-9)
    assert spherical_limit(TestFunction.constant(0.7)) == pytest.approx(0.7)
    assert spherical_limit(cosine.shifted(0.3)) == pytest.approx(
        SPHERICAL_COSINE + 0.3, abs=1e-9
    )


def test_spherical_limit_with_finite_stieltjes_edge():
    """A cusp at the maximum keeps H bounded, so v sticks to sup f - 1."""
    cusp = TestFunction.from_callable(
        lambda t: -4.0 * np.sqrt(np.abs(t) / np.pi), "cusp", bounds=(-4.0, 0.0)
    )
    assert stieltjes_limits(cusp)[1] == pytest.approx(0.5, abs=0.05)
    assert spherical_limit(cusp) == pytest.approx(-0.5 - math.log(4), abs=5e-3)


@pytest.mark.slow
def test_cbe_tail_rate(rng, cosine):
    """CUE tail estimates approach the contracted rate."""
    estimate = mc_tail(
        rng, EnsembleSpec("cbe", 8), cosine, 0.4, [8, 16, 32], 400_000
    )
    assert estimate.theoretical == pytest.approx(cosine_rate(0.4), abs=1e-8)
    assert estimate.relative_error < 0.25


@pytest.mark.slow
def test_jacobi_tail_rate(rng):
    """Jacobi tail estimates approach the pulled-back rate."""
    f = TestFunction.pullback_polynomial([0.0, 1.0])
    spec = EnsembleSpec("jacobi", 16, 2.0, 0.5, 0.5)
    estimate = mc_tail(rng, spec, f, 0.65, [16, 32, 64], 100_000)
    assert estimate.theoretical == pytest.approx(0.0943, abs=1e-3)
    assert estimate.relative_error < 0.25


@pytest.mark.slow
def test_dirichlet_rate_scales_with_weight_shape(rng, cosine):
    """Doubling the weight shape doubles the rate."""
    rates = [
        mc_tail(
            rng, EnsembleSpec("dirichlet", 8, a=a), cosine, 0.3, [8, 16, 32], 200_000
        ).rate
        for a in (1.0, 2.0)
    ]
    assert 1.4 < rates[1] / rates[0] < 2.6


@pytest.mark.slow
def test_spherical_integral_converges(rng, cosine):
    """Monte Carlo spherical integral at N = 32 is near the limit."""
    value = spherical_integral_mc(rng, 32, cosine, 200_000)
    assert value == pytest.approx(SPHERICAL_COSINE, rel=0.1)
