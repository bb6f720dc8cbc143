import numpy as np
import pytest

from sarimacast.errors import (
    HorizonZero,
    InvalidLevel,
    MisalignedCalendar,
    SeriesTooShort,
)
from sarimacast.fitting import fit_mle
from sarimacast.forecasting import (
    RollingOriginConfig,
    evaluate,
    forecast,
    rolling_origin,
)
from sarimacast.model import CoefficientSet, ModelOrder
from sarimacast.selection import SearchBounds
from sarimacast.series import (
    DifferencedSeries,
    MonthStamp,
    TimeSeries,
    TransformSpec,
    apply_transform,
)
from sarimacast.simulate import simulate

START = MonthStamp(2005, 1)
PLAIN = TransformSpec(apply_log=False, d=0, D=0, s=12)


def plain_diffed(values) -> DifferencedSeries:
    return DifferencedSeries(TimeSeries(START, values), PLAIN, ())


class TestForecastIdentities:
    def test_random_walk_forecasts_last_value(self, rng):
        x = np.cumsum(rng.normal(0, 1, 90)) + 50.0
        spec = TransformSpec(False, 1, 0, 12)
        dd = apply_transform(TimeSeries(START, x), spec)
        model = fit_mle(dd, ModelOrder(0, 1, 0, 0, 0, 0, 12))
        fr = forecast(model, spec, dd, 5)
        assert np.allclose(fr.point, x[-1], atol=1e-10)

    def test_seasonal_naive_reuses_last_cycle(self, rng):
        x = np.tile(np.arange(12.0) + 1.0, 6) + 100.0 + rng.normal(0, 1e-5, 72)
        spec = TransformSpec(False, 0, 1, 12)
        dd = apply_transform(TimeSeries(START, x), spec)
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 1, 0, 12))
        fr = forecast(model, spec, dd, 6)
        assert np.allclose(fr.point, x[-12:-6], atol=1e-3)

    def test_ar1_geometric_decay_on_differenced_scale(self, rng):
        y = np.concatenate([rng.normal(0, 1, 80), [1.0]])
        dd = plain_diffed(y)
        model = fit_mle(dd, ModelOrder(1, 0, 0, 0, 0, 0, 12))
        phi = model.coefficients.phi[0]
        fr = forecast(model, PLAIN, dd, 3)
        expected = [phi * 1.0, phi**2, phi**3]
        assert np.allclose(fr.point, expected, atol=1e-10)

    def test_white_noise_without_constant_forecasts_zero(self, rng):
        dd = plain_diffed(rng.normal(0, 1, 60))
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 0, 0, 12))
        fr = forecast(model, PLAIN, dd, 4)
        assert np.allclose(fr.point, 0.0, atol=1e-10)

    def test_white_noise_with_constant_forecasts_training_mean(self, rng):
        y = rng.normal(5.0, 1.0, 60)
        dd = plain_diffed(y)
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 0, 0, 12), include_constant=True)
        fr = forecast(model, PLAIN, dd, 4)
        assert np.allclose(fr.point, float(y.mean()), atol=1e-10)

    def test_forecast_months_follow_training_end(self, rng):
        y = rng.normal(0, 1, 36)
        dd = plain_diffed(y)
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 0, 0, 12))
        fr = forecast(model, PLAIN, dd, 2)
        assert fr.start == START.advance(36)
        assert fr.months() == [START.advance(36), START.advance(37)]


class TestIntervalGeometry:
    @pytest.fixture
    def log_forecast(self, rng):
        values = np.exp(rng.normal(7.0, 0.15, 120))
        spec = TransformSpec(True, 0, 0, 12)
        dd = apply_transform(TimeSeries(START, values), spec)
        model = fit_mle(dd, ModelOrder(1, 0, 0, 0, 0, 0, 12), include_constant=True)
        return forecast(model, spec, dd, 6, level=0.90)

    def test_strict_ordering(self, log_forecast):
        assert np.all(log_forecast.lower < log_forecast.point)
        assert np.all(log_forecast.point < log_forecast.upper)

    def test_bounds_are_exp_of_log_bounds(self, log_forecast):
        fr = log_forecast
        z_half_width = np.log(fr.upper) - np.log(fr.point)
        assert np.allclose(np.exp(np.log(fr.point) - z_half_width), fr.lower, rtol=1e-12)

    def test_log_scale_symmetry(self, log_forecast):
        fr = log_forecast
        up = np.log(fr.upper) - np.log(fr.point)
        down = np.log(fr.point) - np.log(fr.lower)
        assert np.allclose(up, down, atol=1e-10)

    def test_se_positive(self, log_forecast):
        assert np.all(log_forecast.log_scale_se > 0.0)

    def test_mean_correction_raises_point_only(self, rng):
        values = np.exp(rng.normal(7.0, 0.15, 120))
        spec = TransformSpec(True, 0, 0, 12)
        dd = apply_transform(TimeSeries(START, values), spec)
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 0, 0, 12), include_constant=True)
        plain = forecast(model, spec, dd, 3)
        corrected = forecast(model, spec, dd, 3, mean_corrected=True)
        assert np.all(corrected.point > plain.point)
        assert np.allclose(corrected.lower, plain.lower)
        assert np.allclose(corrected.upper, plain.upper)

    def test_horizon_consistency(self, rng):
        y = rng.normal(0, 1, 100)
        dd = plain_diffed(y)
        model = fit_mle(dd, ModelOrder(1, 0, 0, 0, 0, 0, 12))
        long = forecast(model, PLAIN, dd, 6)
        short = forecast(model, PLAIN, dd, 2)
        assert np.array_equal(long.point[:2], short.point)
        assert np.array_equal(long.lower[:2], short.lower)
        assert np.array_equal(long.upper[:2], short.upper)

    def test_validation_errors(self, rng):
        dd = plain_diffed(rng.normal(0, 1, 40))
        model = fit_mle(dd, ModelOrder(0, 0, 0, 0, 0, 0, 12))
        with pytest.raises(HorizonZero):
            forecast(model, PLAIN, dd, 0)
        with pytest.raises(InvalidLevel):
            forecast(model, PLAIN, dd, 3, level=1.0)


class TestEvaluate:
    def test_ten_percent_relative_error(self):
        result = _make_result([110.0], [100.0], [120.0])
        actual = TimeSeries(START, [100.0])
        report = evaluate(result, actual)
        assert report.steps[0].relative_error == pytest.approx(0.10, abs=1e-12)

    def test_perfect_forecast(self):
        result = _make_result([100.0, 50.0], [90.0, 45.0], [110.0, 55.0])
        actual = TimeSeries(START, [100.0, 50.0])
        report = evaluate(result, actual)
        assert report.max_relative_error == 0.0
        assert report.coverage == 1.0
        assert report.mape == 0.0

    def test_coverage_counts_interval_membership(self):
        result = _make_result([10.0, 10.0], [9.0, 9.0], [11.0, 11.0])
        actual = TimeSeries(START, [10.5, 20.0])
        report = evaluate(result, actual)
        assert report.coverage == 0.5
        assert report.steps[1].inside_interval is False

    def test_misaligned_calendar(self):
        result = _make_result([10.0], [9.0], [11.0])
        with pytest.raises(MisalignedCalendar):
            evaluate(result, TimeSeries(START.advance(1), [10.0]))

    def test_short_actuals(self):
        result = _make_result([10.0, 11.0], [9.0, 10.0], [11.0, 12.0])
        with pytest.raises(SeriesTooShort):
            evaluate(result, TimeSeries(START, [10.0]))


def _make_result(points, lower, upper, start=START):
    from sarimacast.forecasting import ForecastResult

    points = np.asarray(points, dtype=float)
    return ForecastResult(
        start=start,
        horizon=points.size,
        point=points,
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
        level=0.9,
        log_scale_point=np.log(points),
        log_scale_se=np.full(points.size, 0.05),
    )


class TestRollingOrigin:
    def test_origin_arithmetic(self, rng):
        # 180 points, horizon 6, 3 folds: origins at 172, 173, 174
        series = TimeSeries(START, np.exp(rng.normal(7.0, 0.1, 180)))
        config = RollingOriginConfig(
            horizon=6,
            folds=3,
            bounds=SearchBounds(max_p=1, max_q=0, max_P=0, max_Q=0, d_choices=(0,), D_choices=(0,)),
        )
        reports = rolling_origin(series, config)
        assert len(reports) == 3
        first_months = [r.steps[0].month for r in reports]
        assert first_months == [START.advance(172), START.advance(173), START.advance(174)]
        assert all(len(r.steps) == 6 for r in reports)

    def test_deterministic_across_runs(self, rng):
        series = TimeSeries(START, np.exp(rng.normal(7.0, 0.1, 140)))
        config = RollingOriginConfig(
            horizon=3,
            folds=2,
            bounds=SearchBounds(max_p=1, max_q=0, max_P=0, max_Q=0, d_choices=(0,), D_choices=(0,)),
        )
        a = rolling_origin(series, config)
        b = rolling_origin(series, config)
        for ra, rb in zip(a, b):
            assert ra.steps == rb.steps

    def test_mape_improves_with_training_length(self):
        # longer training windows forecast a known AR(1) better on average
        order = ModelOrder(1, 0, 0, 0, 0, 0, 12)
        truth = CoefficientSet(phi=(0.7,), sigma2=0.04, const=7.0)
        bounds = SearchBounds(max_p=1, max_q=0, max_P=0, max_Q=0, d_choices=(0,), D_choices=(0,))
        short_mapes, long_mapes = [], []
        for seed in range(20):
            series = simulate(order, truth, 192 + 6, seed=seed, start=START)
            series = TimeSeries(series.start, np.exp(series.values / 10.0))
            short = TimeSeries(series.start.advance(96), series.values[96:])
            config = RollingOriginConfig(horizon=6, folds=1, bounds=bounds)
            short_mapes.append(rolling_origin(short, config)[0].mape)
            long_mapes.append(rolling_origin(series, config)[0].mape)
        assert float(np.mean(long_mapes)) < float(np.mean(short_mapes))
