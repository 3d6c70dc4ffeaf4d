import altair as alt
import numpy as np
import pandas as pd

from .config import rate_chart_configuration
from .ldp import RateEstimate


def create_estimate_points(base, main_color, tooltip):
    """Per-``N`` estimates of ``-(1/N) log P`` with their confidence bars."""
    x = alt.X(
        "inv_N:Q",
        axis=alt.Axis(grid=False, tickCount=4, format=".3f"),
        scale=alt.Scale(zero=True),
        title="1 / N",
    )
    errorbar = base.mark_rule(color=main_color, strokeWidth=1.5).encode(
        x=x,
        y=alt.Y("estimate_low:Q", title="-(1/N) log P"),
        y2=alt.Y2("estimate_high:Q"),
    )
    points = base.mark_point(color=main_color, filled=True, opacity=1).encode(
        x=x,
        y=alt.Y("estimate:Q", axis=alt.Axis(grid=False, tickCount=4)),
        tooltip=tooltip,
    )
    return errorbar, points


def create_fit_line(estimate, main_color):
    """The fitted line ``rate + slope / N`` drawn from ``1/N = 0``."""
    inv_N = np.linspace(0.0, 1.0 / min(estimate.N_values), 2)
    fitted = estimate.rate + estimate.slope * inv_N
    data = pd.DataFrame({"inv_N": inv_N, "estimate": fitted})
    return (
        alt.Chart(data)
        .mark_line(color=main_color, strokeDash=[4, 2])
        .encode(x="inv_N:Q", y="estimate:Q")
    )


def create_theory_rule(value, theory_color):
    data = pd.DataFrame({"theoretical": [value]})
    return (
        alt.Chart(data)
        .mark_rule(color=theory_color, strokeWidth=1.5)
        .encode(y="theoretical:Q", tooltip=[alt.Tooltip("theoretical:Q", format=".4f")])
    )


def rate_chart(
    estimate: RateEstimate,
    main_color: str = "#3A3A3A",
    theory_color: str = "#D62728",
    width: int = 400,
    height: int = 300,
    title: str = "",
    legend_orient: str = "top-right",
) -> alt.LayerChart:
    """Plot Monte Carlo rate estimates against ``1/N``.

    Parameters
    ----------
    estimate : RateEstimate
        Output of :func:`specmeas.ldp.mc_tail`.
    main_color : str, default "#3A3A3A"
        Color of the estimates and the fitted line.
    theory_color : str, default "#D62728"
        Color of the horizontal rule at the theoretical rate, drawn only when
        the estimate carries one.
    width, height : int
        Chart size in pixels.
    title : str, default ""
        Chart title; defaults to the test function and threshold.

    Returns
    -------
    altair.LayerChart
    """
    if not title:
        title = f"{estimate.test_function} >= {estimate.x:g}"
    frame = estimate.to_frame()
    tooltip = [
        alt.Tooltip("N:Q"),
        alt.Tooltip("hits:Q"),
        alt.Tooltip("estimate:Q", format=".4f"),
    ]
    base = alt.Chart(frame)
    errorbar, points = create_estimate_points(base, main_color, tooltip)
    layers = [errorbar, points, create_fit_line(estimate, main_color)]
    if estimate.theoretical is not None:
        layers.append(create_theory_rule(estimate.theoretical, theory_color))
    chart = alt.layer(*layers).properties(width=width, height=height, title=title)
    return rate_chart_configuration(chart, legend_orient=legend_orient)
