"""h-step forecasts with prediction intervals and holdout evaluation.

Point forecasts come from the state-space prediction recursion on the
differenced (log) scale and are carried back through the differencing by
``undifference``.  Interval half-widths are built on the log scale before
exponentiation: the forecast-error variance of the undifferenced process is
accumulated from the moving-average weights of the integrated ARMA
representation, so bounds are exp(mean +/- z * se).  The back-transform is
plain exponentiation (the median forecast); the lognormal mean correction
exp(m + s^2/2) is available behind a flag and labeled in output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import normal_quantile
from .errors import (
    HorizonZero,
    InvalidLevel,
    MisalignedCalendar,
    NonPositiveValue,
    SeriesTooShort,
)
from .fitting import FittedModel, fit_mle
from .kalman import forecast_state
from .model import psi_weights
from .selection import SearchBounds, choose_differencing, grid_search, select_best
from .series import (
    DifferencedSeries,
    MonthStamp,
    TimeSeries,
    TransformSpec,
    apply_transform,
    train_test_split,
    undifference,
)


@dataclass(frozen=True, eq=False)
class ForecastResult:
    """Per-step forecasts on the count scale plus the transformed-scale audit trail.

    ``log_scale_point``/``log_scale_se`` are the undifferenced values before
    exponentiation; for models without the log transform they coincide with
    the output scale.  These are prediction intervals for future
    observations (the bands around forecasts), not confidence intervals for
    the mean path.
    """

    start: MonthStamp
    horizon: int
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    log_scale_point: np.ndarray
    log_scale_se: np.ndarray
    mean_corrected: bool = False

    def months(self) -> list[MonthStamp]:
        return [self.start.advance(i) for i in range(self.horizon)]


@dataclass(frozen=True)
class StepEvaluation:
    month: MonthStamp
    actual: float
    forecast: float
    lower: float
    upper: float
    relative_error: float
    inside_interval: bool


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Holdout comparison: per-step rows and the summary accuracy measures."""

    steps: tuple[StepEvaluation, ...]
    max_relative_error: float
    mape: float
    coverage: float


def forecast(
    model: FittedModel,
    transform: TransformSpec,
    initials: DifferencedSeries,
    h: int,
    level: float = 0.90,
    mean_corrected: bool = False,
) -> ForecastResult:
    """Forecast ``h`` months past the end of the training sample.

    ``initials`` is the differenced training series the model was fitted
    on; it supplies both the filter data and the seeds for inverting the
    differencing.  ``mean_corrected`` switches the back-transform from the
    median exp(m) to the lognormal mean exp(m + s^2/2).
    """
    if h < 1:
        raise HorizonZero(f"forecast horizon must be >= 1, got {h}")
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f"interval level must be in (0, 1), got {level}")

    order = model.order
    coeffs = model.coefficients
    diff_means, _ = forecast_state(initials.core.values, order, coeffs, h)

    path = undifference(initials, future=diff_means)
    log_point = path[-h:]

    psi = psi_weights(order, coeffs, h)
    log_var = coeffs.sigma2 * np.cumsum(psi * psi)
    log_se = np.sqrt(log_var)

    z = normal_quantile(0.5 * (1.0 + level))
    lower_log = log_point - z * log_se
    upper_log = log_point + z * log_se

    if transform.apply_log:
        shift = 0.5 * log_var if mean_corrected else 0.0
        point = np.exp(log_point + shift)
        lower = np.exp(lower_log)
        upper = np.exp(upper_log)
    else:
        point = log_point.copy()
        lower = lower_log
        upper = upper_log

    start = initials.core.end.advance(1)
    return ForecastResult(
        start=start,
        horizon=h,
        point=point,
        lower=lower,
        upper=upper,
        level=level,
        log_scale_point=log_point,
        log_scale_se=log_se,
        mean_corrected=mean_corrected,
    )


def evaluate(result: ForecastResult, actual: TimeSeries) -> EvaluationReport:
    """Relative errors and interval coverage against realized values."""
    if actual.start != result.start:
        raise MisalignedCalendar(
            f"actuals start at {actual.start}, forecasts at {result.start}"
        )
    if len(actual) < result.horizon:
        raise SeriesTooShort(
            f"{len(actual)} actual values for a horizon of {result.horizon}"
        )
    steps = []
    for i in range(result.horizon):
        a = float(actual.values[i])
        if a <= 0.0:
            raise NonPositiveValue(i, a)
        f = float(result.point[i])
        lo = float(result.lower[i])
        hi = float(result.upper[i])
        steps.append(
            StepEvaluation(
                month=result.start.advance(i),
                actual=a,
                forecast=f,
                lower=lo,
                upper=hi,
                relative_error=abs(f - a) / a,
                inside_interval=lo <= a <= hi,
            )
        )
    rel = np.array([s.relative_error for s in steps])
    inside = np.array([s.inside_interval for s in steps], dtype=float)
    return EvaluationReport(
        steps=tuple(steps),
        max_relative_error=float(rel.max()),
        mape=float(rel.mean()),
        coverage=float(inside.mean()),
    )


@dataclass(frozen=True)
class RollingOriginConfig:
    """Controls for repeated train/forecast splits (origin advances monthly)."""

    horizon: int = 6
    folds: int = 3
    bounds: SearchBounds = field(default_factory=SearchBounds)
    apply_log: bool = True
    level: float = 0.90
    include_constant: bool = True


def rolling_origin(series: TimeSeries, config: RollingOriginConfig) -> list[EvaluationReport]:
    """Refit and evaluate at each of ``folds`` consecutive forecast origins.

    The last origin trains on all but the final ``horizon`` points; earlier
    folds shrink the training window by one month each.  Every fold reruns
    differencing choice, grid search and selection from scratch.
    """
    n = len(series)
    first_origin = n - config.horizon - config.folds + 1
    if config.folds < 1:
        raise ValueError("folds must be >= 1")
    if first_origin < config.bounds.s * 2 + 2:
        raise SeriesTooShort(
            f"series of length {n} cannot support {config.folds} folds at horizon "
            f"{config.horizon}"
        )
    reports = []
    for i in range(config.folds):
        origin = first_origin + i
        head = TimeSeries(series.start, series.values[: origin + config.horizon])
        train, test = train_test_split(head, config.horizon)
        transformed = (
            TimeSeries(train.start, np.log(train.values)) if config.apply_log else train
        )
        d, D = choose_differencing(transformed, config.bounds)
        spec = TransformSpec(apply_log=config.apply_log, d=d, D=D, s=config.bounds.s)
        ranking = grid_search(train, config.bounds, spec, config.include_constant)
        model = select_best(ranking)
        diffed = apply_transform(train, spec)
        result = forecast(model, spec, diffed, config.horizon, config.level)
        reports.append(evaluate(result, test))
    return reports


def fit_and_forecast(
    train: TimeSeries,
    order,
    spec: TransformSpec,
    h: int,
    level: float = 0.90,
    include_constant: bool = False,
) -> tuple[FittedModel, ForecastResult]:
    """Convenience: transform, fit one order, forecast h steps."""
    diffed = apply_transform(train, spec)
    model = fit_mle(diffed, order, include_constant=include_constant)
    return model, forecast(model, spec, diffed, h, level)
