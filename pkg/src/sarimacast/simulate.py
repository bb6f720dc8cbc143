"""Seeded SARIMA data generator backing the Monte-Carlo test harness."""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

from .errors import NonStationaryCoefficients
from .model import CoefficientSet, ModelOrder, check_roots, expand_polynomials
from .series import MonthStamp, TimeSeries, difference_polynomial

DEFAULT_START = MonthStamp(2000, 1)


def simulate(
    order: ModelOrder,
    coeffs: CoefficientSet,
    n: int,
    seed: int,
    start: MonthStamp = DEFAULT_START,
    burn_in: int | None = None,
) -> TimeSeries:
    """Generate ``n`` observations from the model, deterministically per seed.

    Gaussian innovations drive the expanded SARMA recursion; a burn-in of
    10 * (p + sP + q + sQ + 1) steps (by default) washes out the zero start
    state, and inverse differencing with zero seeds is applied afterwards
    when d or D is positive.
    """
    if n < 1:
        raise ValueError("n must be positive")
    report = check_roots(order, coeffs)
    if not report.ok:
        raise NonStationaryCoefficients(
            f"min AR root modulus {report.min_ar_modulus:.6g}, "
            f"min MA root modulus {report.min_ma_modulus:.6g}"
        )
    if coeffs.const is not None and (order.d > 0 or order.D > 0):
        raise ValueError("a constant term is only meaningful when d = D = 0")

    ar_poly, ma_poly = expand_polynomials(order, coeffs)
    if burn_in is None:
        burn_in = 10 * (ar_poly.size + ma_poly.size - 1)
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, np.sqrt(coeffs.sigma2), n + burn_in)
    values = lfilter(ma_poly, ar_poly, eps)[burn_in:]
    if coeffs.const is not None:
        values = values + coeffs.const
    if order.d > 0 or order.D > 0:
        delta = difference_polynomial(order.d, order.D, order.s)
        values = lfilter([1.0], delta, values)
    return TimeSeries(start, values)
