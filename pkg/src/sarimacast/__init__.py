"""Seasonal ARIMA forecasting engine and pipeline for monthly count series."""

from .series import (
    DifferencedSeries,
    MonthStamp,
    TimeSeries,
    TransformSpec,
    apply_transform,
    difference,
    integrate_transform,
    log_transform,
    train_test_split,
    undifference,
)
from .model import CoefficientSet, ModelOrder, RootReport, check_roots, expand_polynomials, psi_weights
from .kalman import StateSpaceForm, build_statespace, kalman_filter, kalman_loglik
from .fitting import FittedModel, fit_mle
from .simulate import simulate
from .selection import SearchBounds, choose_differencing, grid_search, select_best
from .forecasting import (
    EvaluationReport,
    ForecastResult,
    RollingOriginConfig,
    evaluate,
    forecast,
    rolling_origin,
)
from .diagnostics import (
    AcfResult,
    DiagnosticsReport,
    DiagnosticTest,
    TestOutcome,
    box_pierce,
    diagnose_residuals,
    ljung_box,
    qq_points,
    sample_acf,
    sample_pacf,
    shapiro_wilk,
)
from .distributions import chi_square_sf, normal_quantile

__version__ = "0.1.0"

__all__ = [
    "MonthStamp",
    "TimeSeries",
    "TransformSpec",
    "DifferencedSeries",
    "log_transform",
    "difference",
    "apply_transform",
    "integrate_transform",
    "undifference",
    "train_test_split",
    "ModelOrder",
    "CoefficientSet",
    "RootReport",
    "expand_polynomials",
    "check_roots",
    "psi_weights",
    "StateSpaceForm",
    "build_statespace",
    "kalman_filter",
    "kalman_loglik",
    "FittedModel",
    "fit_mle",
    "simulate",
    "AcfResult",
    "DiagnosticTest",
    "TestOutcome",
    "DiagnosticsReport",
    "sample_acf",
    "sample_pacf",
    "ljung_box",
    "box_pierce",
    "shapiro_wilk",
    "qq_points",
    "diagnose_residuals",
    "normal_quantile",
    "chi_square_sf",
    "SearchBounds",
    "choose_differencing",
    "grid_search",
    "select_best",
    "ForecastResult",
    "EvaluationReport",
    "RollingOriginConfig",
    "forecast",
    "evaluate",
    "rolling_origin",
    "__version__",
]
