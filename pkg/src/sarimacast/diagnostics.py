"""Sample autocorrelation machinery and residual diagnostic tests.

Provides the biased-denominator sample ACF, Durbin-Levinson partial
autocorrelations, the Ljung-Box and Box-Pierce portmanteau tests, the
Shapiro-Wilk normality test (Royston's AS R94 approximation, 3 <= n <= 5000)
and normal QQ plotting positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import chi_square_sf, normal_quantile, normal_sf
from .errors import (
    DegenerateSeries,
    InvalidDf,
    NumericalBreakdown,
    SampleSizeOutOfRange,
)


class DiagnosticTest(str, Enum):
    LJUNG_BOX = "ljung_box"
    BOX_PIERCE = "box_pierce"
    SHAPIRO_WILK = "shapiro_wilk"


@dataclass(frozen=True)
class TestOutcome:
    """One diagnostic test result.

    ``df_or_n`` is the chi-square degrees of freedom for the portmanteau
    tests and the sample size for the normality test.
    """

    test_name: DiagnosticTest
    statistic: float
    df_or_n: int
    p_value: float

    def __post_init__(self):
        if not math.isfinite(self.statistic):
            raise ValueError("test statistic must be finite")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class AcfResult:
    """Sample autocorrelations rho[0..L] (rho[0] == 1) and the sample size."""

    rho: np.ndarray
    n: int

    @property
    def max_lag(self) -> int:
        return int(self.rho.size - 1)


def sample_acf(x, max_lag: int) -> AcfResult:
    """Biased-denominator sample ACF up to ``max_lag``.

    rho[k] = sum_t (x_t - xbar)(x_{t+k} - xbar) / sum_t (x_t - xbar)^2,
    the Box-Jenkins convention assumed by both portmanteau statistics.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    centered = x - x.mean()
    denom = float(np.dot(centered, centered))
    if denom <= 0.0:
        raise DegenerateSeries("series has zero variance")
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for k in range(1, max_lag + 1):
        rho[k] = float(np.dot(centered[:-k], centered[k:])) / denom
    return AcfResult(rho=rho, n=n)


def pacf_from_acf(rho) -> np.ndarray:
    """Durbin-Levinson partial autocorrelations from rho[0..L].

    Returns the PACF at lags 1..L.  Feeding the exact autocorrelations of an
    AR(p) process yields zeros beyond lag p.
    """
    rho = np.asarray(rho, dtype=float)
    L = rho.size - 1
    if L < 1:
        raise ValueError("need rho up to at least lag 1")
    pacf = np.empty(L)
    phi_prev = np.empty(L)
    phi_curr = np.empty(L)
    pacf[0] = rho[1]
    phi_prev[0] = rho[1]
    v = 1.0 - rho[1] ** 2
    for k in range(2, L + 1):
        if abs(v) < 1e-14:
            raise NumericalBreakdown(
                f"Durbin-Levinson prediction variance underflowed at lag {k}"
            )
        num = rho[k] - float(np.dot(phi_prev[: k - 1], rho[k - 1 : 0 : -1]))
        a = num / v
        phi_curr[: k - 1] = phi_prev[: k - 1] - a * phi_prev[k - 2 :: -1]
        phi_curr[k - 1] = a
        phi_prev[:k] = phi_curr[:k]
        pacf[k - 1] = a
        v *= 1.0 - a * a
    return pacf


def sample_pacf(x, max_lag: int) -> np.ndarray:
    """Sample partial autocorrelations at lags 1..max_lag."""
    if max_lag < 1:
        raise ValueError(f"max_lag must be >= 1, got {max_lag}")
    acf = sample_acf(x, max_lag)
    return pacf_from_acf(acf.rho)


def default_portmanteau_lags(n: int, fitted_params: int = 0) -> int:
    """Default lag count L = min(24, n // 5), floored above fitted_params."""
    return max(min(24, n // 5), fitted_params + 1)


def _portmanteau(x, lags: int, fitted_params: int, weighted: bool):
    x = np.asarray(x, dtype=float)
    n = x.size
    if fitted_params < 0:
        raise ValueError("fitted_params must be non-negative")
    if lags <= fitted_params:
        raise InvalidDf(
            f"lags ({lags}) must exceed the number of fitted parameters ({fitted_params})"
        )
    if n <= lags:
        raise ValueError(f"need more than {lags} residuals, got {n}")
    rho = sample_acf(x, lags).rho
    k = np.arange(1, lags + 1)
    if weighted:
        stat = n * (n + 2.0) * float(np.sum(rho[1:] ** 2 / (n - k)))
    else:
        stat = n * float(np.sum(rho[1:] ** 2))
    df = lags - fitted_params
    return stat, df


def ljung_box(residuals, lags: int, fitted_params: int = 0) -> TestOutcome:
    """Ljung-Box portmanteau test: Q = n(n+2) sum rho_k^2 / (n-k)."""
    stat, df = _portmanteau(residuals, lags, fitted_params, weighted=True)
    return TestOutcome(DiagnosticTest.LJUNG_BOX, stat, df, chi_square_sf(stat, df))


def box_pierce(residuals, lags: int, fitted_params: int = 0) -> TestOutcome:
    """Box-Pierce portmanteau test: Q* = n sum rho_k^2."""
    stat, df = _portmanteau(residuals, lags, fitted_params, weighted=False)
    return TestOutcome(DiagnosticTest.BOX_PIERCE, stat, df, chi_square_sf(stat, df))


# Royston (1995) polynomial coefficients, constant term last.
_SW_C1 = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157, 0.0)
_SW_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_SW_C3 = (-0.0006714, 0.025054, -0.39978, 0.544)
_SW_C4 = (-0.0020322, 0.062767, -0.77857, 1.3822)
_SW_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_SW_C6 = (0.0030302, -0.082676, -0.4803)


def _poly(coeffs, x: float) -> float:
    out = 0.0
    for c in coeffs:
        out = out * x + c
    return out


def _shapiro_weights(n: int) -> np.ndarray:
    """Lower-half AS R94 weights (negative); antisymmetric completion implied."""
    n2 = n // 2
    m = np.array(
        [normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, n2 + 1)]
    )
    if n == 3:
        return np.array([-math.sqrt(0.5)])
    msq = 2.0 * float(np.dot(m, m))
    rsn = 1.0 / math.sqrt(n)
    a_n = -m[0] / math.sqrt(msq) + _poly(_SW_C1, rsn)
    if n > 5:
        a_n1 = -m[1] / math.sqrt(msq) + _poly(_SW_C2, rsn)
        phi = (msq - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2) / (
            1.0 - 2.0 * a_n**2 - 2.0 * a_n1**2
        )
        weights = m / math.sqrt(phi)
        weights[0] = -a_n
        weights[1] = -a_n1
    else:
        phi = (msq - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a_n**2)
        weights = m / math.sqrt(phi)
        weights[0] = -a_n
    return weights


def shapiro_wilk(x) -> TestOutcome:
    """Shapiro-Wilk W test for normality via the AS R94 approximation."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if not 3 <= n <= 5000:
        raise SampleSizeOutOfRange(f"Shapiro-Wilk requires 3 <= n <= 5000, got {n}")
    xs = np.sort(x)
    if xs[-1] - xs[0] <= 0.0:
        raise DegenerateSeries("all values equal; W is undefined")

    lower = _shapiro_weights(n)
    n2 = n // 2
    w_full = np.zeros(n)
    w_full[:n2] = lower
    w_full[n - n2 :] = -lower[::-1]

    centered = xs - xs.mean()
    num = float(np.dot(w_full, centered)) ** 2
    den = float(np.dot(centered, centered))
    w_stat = min(num / den, 1.0)

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w_stat)) - math.asin(math.sqrt(0.75)))
        p = min(max(p, 0.0), 1.0)
        return TestOutcome(DiagnosticTest.SHAPIRO_WILK, w_stat, n, p)

    one_minus_w = max(1.0 - w_stat, 1e-300)
    y = math.log(one_minus_w)
    if n <= 11:
        gamma = 0.459 * n - 2.273
        if y >= gamma:
            return TestOutcome(DiagnosticTest.SHAPIRO_WILK, w_stat, n, 0.0)
        y = -math.log(gamma - y)
        mu = _poly(_SW_C3, float(n))
        sigma = math.exp(_poly(_SW_C4, float(n)))
    else:
        ln_n = math.log(n)
        mu = _poly(_SW_C5, ln_n)
        sigma = math.exp(_poly(_SW_C6, ln_n))
    p = normal_sf((y - mu) / sigma)
    return TestOutcome(DiagnosticTest.SHAPIRO_WILK, w_stat, n, min(max(p, 0.0), 1.0))


def qq_points(residuals) -> np.ndarray:
    """Normal QQ pairs: column 0 theoretical quantiles, column 1 sorted data.

    Plotting positions are (i - 0.375) / (n + 0.25), the same convention the
    Shapiro-Wilk weights use.
    """
    x = np.asarray(residuals, dtype=float)
    n = x.size
    if n < 3:
        raise ValueError(f"need at least 3 residuals, got {n}")
    theoretical = np.array(
        [normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)]
    )
    return np.column_stack([theoretical, np.sort(x)])


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    """The three residual tests plus the QQ data backing the plots."""

    ljung_box: TestOutcome
    box_pierce: TestOutcome
    shapiro_wilk: TestOutcome
    lags: int
    fitted_params: int
    qq: np.ndarray

    def outcomes(self) -> tuple[TestOutcome, TestOutcome, TestOutcome]:
        return (self.ljung_box, self.box_pierce, self.shapiro_wilk)

    def all_pass(self, level: float = 0.10) -> bool:
        return all(o.p_value > level for o in self.outcomes())


def diagnose_residuals(
    residuals, fitted_params: int, lags: int | None = None
) -> DiagnosticsReport:
    """Run the three residual tests with the default lag rule."""
    x = np.asarray(residuals, dtype=float)
    if lags is None:
        lags = default_portmanteau_lags(x.size, fitted_params)
    return DiagnosticsReport(
        ljung_box=ljung_box(x, lags, fitted_params),
        box_pierce=box_pierce(x, lags, fitted_params),
        shapiro_wilk=shapiro_wilk(x),
        lags=lags,
        fitted_params=fitted_params,
        qq=qq_points(x),
    )
