import numpy as np
import pytest

from sarimacast.errors import ShapeMismatch
from sarimacast.model import (
    CoefficientSet,
    ModelOrder,
    check_roots,
    coefficients_from_flat,
    expand_polynomials,
    psi_weights,
)
from sarimacast.series import difference_polynomial


class TestModelOrder:
    def test_string_form(self):
        assert str(ModelOrder(1, 0, 2, 1, 1, 0, 12)) == "(1,0,2)(1,1,0)[12]"

    def test_parse_forms(self):
        assert ModelOrder.parse("(1,0,2)(1,1,0)[12]") == ModelOrder(1, 0, 2, 1, 1, 0, 12)
        assert ModelOrder.parse("2,1,1") == ModelOrder(2, 1, 1, 0, 0, 0, 12)

    def test_counts(self):
        order = ModelOrder(2, 1, 1, 1, 1, 2, 12)
        assert order.n_coef == 6
        assert order.n_seasonal_coef == 3
        assert order.ar_degree == 2 + 12
        assert order.ma_degree == 1 + 24

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ModelOrder(-1, 0, 0, 0, 0, 0, 12)


class TestExpandPolynomials:
    def test_plain_ar1(self):
        ar, ma = expand_polynomials(
            ModelOrder(1, 0, 0, 0, 0, 0, 12), CoefficientSet(phi=(0.5,))
        )
        assert np.allclose(ar, [1.0, -0.5])
        assert np.allclose(ma, [1.0])

    def test_multiplicative_cross_term(self):
        order = ModelOrder(1, 0, 0, 1, 0, 0, 12)
        coeffs = CoefficientSet(phi=(0.5,), sphi=(0.3,))
        ar, _ = expand_polynomials(order, coeffs)
        assert ar[1] == pytest.approx(-0.5)
        assert ar[12] == pytest.approx(-0.3)
        assert ar[13] == pytest.approx(0.15)
        assert ar.size == 14

    def test_ma_uses_plus_signs(self):
        order = ModelOrder(0, 0, 1, 0, 0, 1, 12)
        coeffs = CoefficientSet(theta=(0.4,), stheta=(0.2,))
        _, ma = expand_polynomials(order, coeffs)
        assert ma[1] == pytest.approx(0.4)
        assert ma[12] == pytest.approx(0.2)
        assert ma[13] == pytest.approx(0.08)

    def test_zero_coefficients_give_unit_polynomials(self):
        order = ModelOrder(2, 0, 2, 1, 0, 1, 12)
        coeffs = CoefficientSet(phi=(0.0, 0.0), theta=(0.0, 0.0), sphi=(0.0,), stheta=(0.0,))
        ar, ma = expand_polynomials(order, coeffs)
        assert ar[0] == 1.0 and ma[0] == 1.0
        assert np.allclose(ar[1:], 0.0) and np.allclose(ma[1:], 0.0)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            expand_polynomials(ModelOrder(2, 0, 0, 0, 0, 0, 12), CoefficientSet(phi=(0.5,)))


class TestCoefficientsFromFlat:
    def test_round_trip(self):
        order = ModelOrder(2, 0, 1, 1, 0, 1, 12)
        coeffs = CoefficientSet(
            phi=(0.2, 0.1), theta=(-0.3,), sphi=(0.4,), stheta=(0.1,), sigma2=2.0
        )
        rebuilt = coefficients_from_flat(order, coeffs.flat(), sigma2=2.0)
        assert rebuilt == coeffs

    def test_constant_goes_last(self):
        order = ModelOrder(1, 0, 0, 0, 0, 0, 12)
        c = coefficients_from_flat(order, [0.5, 3.25], has_const=True)
        assert c.phi == (0.5,)
        assert c.const == 3.25
        assert c.labels() == ["ar1", "const"]


class TestCheckRoots:
    def test_stable_ar1(self):
        report = check_roots(ModelOrder(1, 0, 0, 0, 0, 0, 12), CoefficientSet(phi=(0.5,)))
        assert report.min_ar_modulus == pytest.approx(2.0, abs=1e-12)
        assert report.ok

    def test_unit_root_fails(self):
        report = check_roots(ModelOrder(1, 0, 0, 0, 0, 0, 12), CoefficientSet(phi=(1.0,)))
        assert report.min_ar_modulus == pytest.approx(1.0, abs=1e-12)
        assert not report.ok

    def test_multiplicative_min_modulus_against_companion_oracle(self):
        order = ModelOrder(1, 0, 0, 1, 0, 0, 12)
        coeffs = CoefficientSet(phi=(0.5,), sphi=(0.3,))
        ar, _ = expand_polynomials(order, coeffs)
        # independent oracle: eigenvalues of the explicitly built companion
        # matrix of z^13 ar(1/z), largest |eig| = 1 / (smallest root modulus)
        monic = (ar / ar[0])[1:]
        dim = monic.size
        companion = np.zeros((dim, dim))
        companion[0, :] = -monic
        companion[1:, :-1] = np.eye(dim - 1)
        eigs = np.linalg.eigvals(companion)
        expected_min = 1.0 / np.max(np.abs(eigs))
        report = check_roots(order, coeffs)
        assert report.min_ar_modulus == pytest.approx(expected_min, rel=1e-10)
        assert report.min_ar_modulus == pytest.approx(min(2.0, 0.3 ** (-1 / 12)), rel=1e-10)

    def test_ma_side_gates_too(self):
        report = check_roots(ModelOrder(0, 0, 1, 0, 0, 0, 12), CoefficientSet(theta=(-1.0,)))
        assert not report.ma_ok

    def test_degenerate_polynomials_pass_vacuously(self):
        report = check_roots(ModelOrder(0, 0, 0, 0, 0, 0, 12), CoefficientSet())
        assert report.ok
        assert report.min_ar_modulus == float("inf")


class TestPsiWeights:
    def _impulse_response_oracle(self, order, coeffs, count):
        """Independent oracle: push a unit impulse through the difference
        equation of the integrated ARMA recursion."""
        ar, ma = expand_polynomials(order, coeffs)
        full_ar = np.convolve(ar, difference_polynomial(order.d, order.D, order.s))
        eps = np.zeros(count)
        eps[0] = 1.0
        y = np.zeros(count)
        for t in range(count):
            acc = 0.0
            for j in range(ma.size):
                if t - j >= 0:
                    acc += ma[j] * eps[t - j]
            for i in range(1, full_ar.size):
                if t - i >= 0:
                    acc -= full_ar[i] * y[t - i]
            y[t] = acc
        return y

    def test_ar1_geometric(self):
        psi = psi_weights(ModelOrder(1, 0, 0, 0, 0, 0, 12), CoefficientSet(phi=(0.5,)), 6)
        assert np.allclose(psi, [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125])

    def test_random_walk_all_ones(self):
        psi = psi_weights(ModelOrder(0, 1, 0, 0, 0, 0, 12), CoefficientSet(), 5)
        assert np.allclose(psi, 1.0)

    def test_matches_impulse_response_oracle(self):
        order = ModelOrder(2, 1, 1, 1, 1, 1, 12)
        coeffs = CoefficientSet(
            phi=(0.3, -0.2), theta=(0.25,), sphi=(0.4,), stheta=(-0.3,)
        )
        psi = psi_weights(order, coeffs, 30)
        oracle = self._impulse_response_oracle(order, coeffs, 30)
        assert np.allclose(psi, oracle, atol=1e-12)
