"""Static SVG figures for the report path.

Figures are rendered with the Agg backend and written as SVG with the date
metadata stripped and a fixed hash salt, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sarimacast"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .diagnostics import DiagnosticsReport  # noqa: E402
from .forecasting import ForecastResult  # noqa: E402
from .series import TimeSeries  # noqa: E402


def _time_axis(series: TimeSeries) -> np.ndarray:
    start = series.start
    return np.array(
        [start.year + (start.month - 1 + i) / 12.0 for i in range(len(series))]
    )


def save_svg(fig, path: Path) -> None:
    fig.savefig(Path(path), format="svg", metadata={"Date": None})
    plt.close(fig)


def series_figure(series_by_category: dict[str, TimeSeries]):
    """All category series on one axis (the overview plot)."""
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for name in sorted(series_by_category):
        ts = series_by_category[name]
        ax.plot(_time_axis(ts), ts.values, label=name, linewidth=1.0)
    ax.set_xlabel("year")
    ax.set_ylabel("monthly count")
    ax.legend(loc="upper left", ncol=2, fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def residual_figure(category: str, residuals: TimeSeries, report: DiagnosticsReport):
    """Histogram plus normal QQ plot of the standardized residuals."""
    fig, (ax_hist, ax_qq) = plt.subplots(1, 2, figsize=(9, 3.6))
    values = residuals.values
    ax_hist.hist(values, bins=20, density=True, color="#4878a8", alpha=0.85)
    grid = np.linspace(values.min() - 0.5, values.max() + 0.5, 200)
    ax_hist.plot(grid, np.exp(-0.5 * grid**2) / np.sqrt(2 * np.pi), "k--", linewidth=1)
    ax_hist.set_title(f"{category}: residual histogram", fontsize=9)
    theo = report.qq[:, 0]
    emp = report.qq[:, 1]
    ax_qq.scatter(theo, emp, s=8, color="#4878a8")
    lo, hi = theo.min(), theo.max()
    ax_qq.plot([lo, hi], [lo, hi], "k--", linewidth=1)
    ax_qq.set_xlabel("theoretical quantile")
    ax_qq.set_ylabel("sample quantile")
    ax_qq.set_title("normal QQ", fontsize=9)
    fig.tight_layout()
    return fig


def forecast_figure(
    category: str,
    history: TimeSeries,
    result: ForecastResult,
    actual: TimeSeries | None,
    tail_months: int = 36,
):
    """Recent history, forecast path and the prediction-interval band."""
    fig, ax = plt.subplots(figsize=(9, 4))
    tail = min(tail_months, len(history))
    hist = TimeSeries(history.start.advance(len(history) - tail), history.values[-tail:])
    ax.plot(_time_axis(hist), hist.values, color="#333333", linewidth=1.2, label="observed")
    fx = np.array(
        [result.start.year + (result.start.month - 1 + i) / 12.0 for i in range(result.horizon)]
    )
    ax.fill_between(
        fx,
        result.lower,
        result.upper,
        color="#4878a8",
        alpha=0.25,
        label=f"{int(round(result.level * 100))}% prediction interval",
    )
    ax.plot(fx, result.point, color="#4878a8", marker="o", markersize=3, label="forecast")
    if actual is not None:
        ax.plot(
            _time_axis(actual)[: result.horizon],
            actual.values[: result.horizon],
            color="#a84848",
            marker="x",
            linestyle="none",
            label="actual",
        )
    ax.set_xlabel("year")
    ax.set_ylabel("monthly count")
    ax.set_title(category, fontsize=10)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig
