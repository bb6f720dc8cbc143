import numpy as np
import pytest

from sarimacast.distributions import normal_sf
from sarimacast.errors import SeriesTooShort, ShapeMismatch
from sarimacast.fitting import fit_mle
from sarimacast.model import CoefficientSet, ModelOrder
from sarimacast.series import MonthStamp, TimeSeries, TransformSpec, apply_transform
from sarimacast.simulate import simulate

START = MonthStamp(2005, 1)
WHITE = ModelOrder(0, 0, 0, 0, 0, 0, 12)
AR1 = ModelOrder(1, 0, 0, 0, 0, 0, 12)


class TestWhiteNoiseClosedForms:
    def test_sigma2_is_mean_square(self, rng):
        y = rng.normal(0, 2.0, 120)
        model = fit_mle(TimeSeries(START, y), WHITE)
        assert model.coefficients.sigma2 == pytest.approx(float(np.mean(y * y)), abs=1e-8)
        assert model.converged
        assert model.iterations == 0

    def test_constant_model_mean_exact(self, rng):
        y = rng.normal(7.5, 0.3, 150)
        model = fit_mle(TimeSeries(START, y), WHITE, include_constant=True)
        assert model.coefficients.const == pytest.approx(float(y.mean()), abs=1e-12)
        variance = float(np.mean((y - y.mean()) ** 2))
        assert model.coefficients.sigma2 == pytest.approx(variance, abs=1e-10)

    def test_aic_identity(self, rng):
        y = rng.normal(0, 1, 100)
        model = fit_mle(TimeSeries(START, y), WHITE)
        assert model.aic == pytest.approx(2 * 1 - 2 * model.loglik, abs=1e-12)
        ar = fit_mle(TimeSeries(START, y), AR1)
        assert ar.aic == pytest.approx(2 * 2 - 2 * ar.loglik, abs=1e-12)


class TestTStatistics:
    def test_t_and_p_definitions(self):
        ts = simulate(AR1, CoefficientSet(phi=(0.6,)), 400, seed=3, start=START)
        model = fit_mle(ts, AR1)
        assert model.stderr is not None
        flat = model.coefficients.flat()
        for i in range(flat.size):
            assert model.t_stats[i] == pytest.approx(flat[i] / model.stderr[i], abs=1e-12)
            assert model.p_values[i] == pytest.approx(
                2.0 * normal_sf(abs(model.t_stats[i])), abs=1e-12
            )

    def test_residuals_standardized(self):
        ts = simulate(AR1, CoefficientSet(phi=(0.6,)), 300, seed=4, start=START)
        model = fit_mle(ts, AR1)
        assert model.residuals.start == START
        assert len(model.residuals) == 300
        # standardized innovations have unit sample second moment by the
        # concentration identity
        assert float(np.mean(model.residuals.values**2)) == pytest.approx(1.0, abs=1e-8)


class TestFitValidation:
    def test_rejects_mismatched_differencing(self, rng):
        series = TimeSeries(START, np.exp(rng.normal(5, 0.1, 60)))
        diffed = apply_transform(series, TransformSpec(True, 1, 0, 12))
        with pytest.raises(ShapeMismatch):
            fit_mle(diffed, ModelOrder(1, 0, 0, 0, 0, 0, 12))

    def test_rejects_constant_with_differencing(self, rng):
        series = TimeSeries(START, np.exp(rng.normal(5, 0.1, 60)))
        diffed = apply_transform(series, TransformSpec(True, 1, 0, 12))
        with pytest.raises(ValueError):
            fit_mle(diffed, ModelOrder(0, 1, 0, 0, 0, 0, 12), include_constant=True)

    def test_rejects_too_short(self, rng):
        y = rng.normal(size=10)
        with pytest.raises(SeriesTooShort):
            fit_mle(TimeSeries(START, y), ModelOrder(2, 0, 2, 0, 0, 0, 12))


class TestRecoverySmoke:
    # the full 50-replication recovery study lives in the acceptance suite
    def test_sarima_parameters_recovered_within_three_stderr(self):
        order = ModelOrder(1, 0, 0, 1, 0, 0, 12)
        truth = CoefficientSet(phi=(0.5,), sphi=(0.3,), sigma2=1.0)
        hits = 0
        for seed in range(5):
            ts = simulate(order, truth, 600, seed=seed, start=START)
            model = fit_mle(ts, order)
            assert model.converged
            est = model.coefficients
            ok = abs(est.phi[0] - 0.5) <= 3 * model.stderr[0]
            ok &= abs(est.sphi[0] - 0.3) <= 3 * model.stderr[1]
            hits += ok
        assert hits >= 4

    def test_ma_fit_recovers_sign(self):
        order = ModelOrder(0, 0, 1, 0, 0, 0, 12)
        ts = simulate(order, CoefficientSet(theta=(-0.5,)), 800, seed=9, start=START)
        model = fit_mle(ts, order)
        assert model.coefficients.theta[0] == pytest.approx(-0.5, abs=0.1)


class TestSimulate:
    def test_deterministic_per_seed(self):
        order = ModelOrder(1, 0, 0, 1, 0, 0, 12)
        coeffs = CoefficientSet(phi=(0.5,), sphi=(0.3,))
        a = simulate(order, coeffs, 200, seed=77)
        b = simulate(order, coeffs, 200, seed=77)
        assert np.array_equal(a.values, b.values)
        c = simulate(order, coeffs, 200, seed=78)
        assert not np.array_equal(a.values, c.values)

    def test_white_noise_variance(self):
        ts = simulate(WHITE, CoefficientSet(sigma2=1.0), 100_000, seed=5)
        assert float(np.var(ts.values)) == pytest.approx(1.0, rel=0.05)

    def test_ar1_lag_one_autocorrelation(self):
        from sarimacast.diagnostics import sample_acf

        ts = simulate(AR1, CoefficientSet(phi=(0.5,)), 100_000, seed=6)
        rho1 = sample_acf(ts.values, 1).rho[1]
        assert rho1 == pytest.approx(0.5, abs=0.02)

    def test_nonstationary_rejected(self):
        from sarimacast.errors import NonStationaryCoefficients

        with pytest.raises(NonStationaryCoefficients):
            simulate(AR1, CoefficientSet(phi=(1.01,)), 100, seed=0)

    def test_integration_applied(self):
        order = ModelOrder(0, 1, 0, 0, 0, 0, 12)
        ts = simulate(order, CoefficientSet(), 5000, seed=8)
        # a random walk wanders: variance of the level far exceeds the
        # innovation variance
        assert float(np.var(ts.values)) > 50.0
