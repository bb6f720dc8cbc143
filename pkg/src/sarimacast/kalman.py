"""Exact Gaussian likelihood of a SARMA process via the Kalman filter.

The expanded ARMA(p+sP, q+sQ) is put in the Harvey companion form with
state dimension r = max(p+sP, q+sQ+1), the initial state covariance is the
exact stationary solution of the discrete Lyapunov equation, and the
innovation variance is concentrated out analytically so optimizers search
only over AR/MA coefficients.

Once the prediction variance sequence has converged the filter switches to
steady-state updates (gain and variance frozen), which keeps the per-step
cost linear in the state dimension without changing the likelihood beyond
round-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_discrete_lyapunov

from .errors import DegenerateSeries, NonStationaryRegion
from .model import CoefficientSet, ModelOrder, expand_polynomials

# Optimizer exploration is pushed back as soon as an inverse root reaches
# this close to the unit circle; the post-fit admissibility gate in
# model.check_roots is stricter (1e-6).
STATIONARITY_MARGIN = 1e-7
_STEADY_RTOL = 1e-14


def _filter_core_numpy(y, phi_col, R, P0):
    """Innovations v_t and scaled variances F_t for one filter pass.

    ``phi_col`` is the first column of the companion transition matrix; the
    rest of T is the shift structure, which both implementations exploit.
    Freezes the gain and variance once P has converged (relative 1e-14 on
    two consecutive steps), after which each step costs O(r).
    """
    n = y.shape[0]
    r = phi_col.shape[0]
    T = np.zeros((r, r))
    T[:, 0] = phi_col
    if r > 1:
        T[: r - 1, 1:] = np.eye(r - 1)
    v = np.empty(n)
    F = np.empty(n)
    a = np.zeros(r)
    P = P0.copy()
    rrt = np.outer(R, R)
    gain = np.zeros(r)
    F_steady = 0.0
    steady = False
    prev_F = -1.0
    hits = 0
    for t in range(n):
        vt = y[t] - a[0]
        v[t] = vt
        if steady:
            F[t] = F_steady
            a0 = a[0]
            for i in range(r - 1):
                a[i] = phi_col[i] * a0 + a[i + 1] + gain[i] * vt
            a[r - 1] = phi_col[r - 1] * a0 + gain[r - 1] * vt
            continue
        Ft = P[0, 0]
        F[t] = Ft
        K = P[:, 0] / Ft
        a = T @ (a + K * vt)
        P_new = T @ (P - np.outer(K, P[0].copy())) @ T.T + rrt
        if abs(P_new[0, 0] - Ft) <= _STEADY_RTOL * Ft and abs(Ft - prev_F) <= _STEADY_RTOL * Ft:
            hits += 1
            if hits >= 2:
                steady = True
                F_steady = P_new[0, 0]
                gain = T @ K
        else:
            hits = 0
        prev_F = Ft
        P = P_new
    return v, F, a, P


def _filter_core_loops(y, phi_col, R, P0):
    """Same recursion with explicit loops exploiting the companion shift,
    so each full step is O(r^2); meant to be numba-compiled."""
    n = y.shape[0]
    r = phi_col.shape[0]
    v = np.empty(n)
    F = np.empty(n)
    a = np.zeros(r)
    P = P0.copy()
    K = np.empty(r)
    work = np.empty((r, r))
    gain = np.zeros(r)
    F_steady = 0.0
    steady = False
    prev_F = -1.0
    hits = 0
    for t in range(n):
        vt = y[t] - a[0]
        v[t] = vt
        if steady:
            F[t] = F_steady
            a0 = a[0]
            for i in range(r - 1):
                a[i] = phi_col[i] * a0 + a[i + 1] + gain[i] * vt
            a[r - 1] = phi_col[r - 1] * a0 + gain[r - 1] * vt
            continue
        Ft = P[0, 0]
        F[t] = Ft
        for i in range(r):
            K[i] = P[i, 0] / Ft
        # a <- T (a + K v)
        a0 = a[0] + K[0] * vt
        for i in range(r - 1):
            a[i] = phi_col[i] * a0 + a[i + 1] + K[i + 1] * vt
        a[r - 1] = phi_col[r - 1] * a0
        # work <- T (P - K P[0,:]) using the companion structure row-wise
        for i in range(r):
            ci = phi_col[i]
            if i + 1 < r:
                for j in range(r):
                    work[i, j] = ci * (P[0, j] - K[0] * P[0, j]) + (
                        P[i + 1, j] - K[i + 1] * P[0, j]
                    )
            else:
                for j in range(r):
                    work[i, j] = ci * (P[0, j] - K[0] * P[0, j])
        # P <- work T' + R R'
        for i in range(r):
            wi0 = work[i, 0]
            for j in range(r - 1):
                P[i, j] = phi_col[j] * wi0 + work[i, j + 1] + R[i] * R[j]
            P[i, r - 1] = phi_col[r - 1] * wi0 + R[i] * R[r - 1]
        if abs(P[0, 0] - Ft) <= _STEADY_RTOL * Ft and abs(Ft - prev_F) <= _STEADY_RTOL * Ft:
            hits += 1
            if hits >= 2:
                steady = True
                F_steady = P[0, 0]
                for i in range(r - 1):
                    gain[i] = phi_col[i] * K[0] + K[i + 1]
                gain[r - 1] = phi_col[r - 1] * K[0]
        else:
            hits = 0
        prev_F = Ft
    return v, F, a, P


def _lyapunov_smith(phi_col, R):
    """Stationary covariance P = T P T' + R R' by Smith doubling.

    P_k accumulates sum_j A^j Q A'^j with A squared each round; converges
    geometrically for any stationary transition.
    """
    r = phi_col.shape[0]
    A = np.zeros((r, r))
    A[:, 0] = phi_col
    for i in range(r - 1):
        A[i, i + 1] = 1.0
    P = np.outer(R, R)
    for _ in range(100):
        P = P + A @ P @ A.T
        A = A @ A
        if np.max(np.abs(A)) < 1e-18:
            break
    return P


try:  # compiled kernels when numba is available; the numpy fallback is exact
    from numba import njit

    _filter_core = njit(cache=True)(_filter_core_loops)
    _lyapunov_core = njit(cache=True)(_lyapunov_smith)
except ImportError:  # pragma: no cover
    _filter_core = _filter_core_numpy
    _lyapunov_core = _lyapunov_smith


@dataclass(frozen=True, eq=False)
class StateSpaceForm:
    """Companion-form matrices: transition (r,r), innovation loading (r,)."""

    transition: np.ndarray
    innovation: np.ndarray
    dim: int


def build_statespace(order: ModelOrder, coeffs: CoefficientSet) -> StateSpaceForm:
    """Deterministic Harvey representation of the expanded SARMA."""
    ar_poly, ma_poly = expand_polynomials(order, coeffs)
    p_full = ar_poly.size - 1
    q_full = ma_poly.size - 1
    r = max(p_full, q_full + 1)
    T = np.zeros((r, r))
    T[:p_full, 0] = -ar_poly[1:]
    if r > 1:
        T[: r - 1, 1:] = np.eye(r - 1)
    R = np.zeros(r)
    R[: q_full + 1] = ma_poly
    return StateSpaceForm(transition=T, innovation=R, dim=r)


def _factor_excess(poly: np.ndarray) -> float:
    """How far a lag polynomial's inverse roots stray toward/past the unit circle.

    ``poly`` is constant-first (1, c1, ..., ck).  Returns 0 when every
    inverse root has modulus below 1 - STATIONARITY_MARGIN, else the summed
    excess (a smooth-ish penalty for the optimizer).  Degrees 1 and 2 use
    closed forms; higher degrees fall back to companion eigenvalues.
    """
    poly = np.trim_zeros(np.asarray(poly, dtype=float), trim="b")
    degree = poly.size - 1
    bound = 1.0 - STATIONARITY_MARGIN
    if degree <= 0:
        return 0.0
    if degree == 1:
        moduli = (abs(poly[1]),)
    elif degree == 2:
        b, c = poly[1], poly[2]
        disc = b * b - 4.0 * c
        if disc >= 0.0:
            sq = np.sqrt(disc)
            moduli = (abs((-b + sq) / 2.0), abs((-b - sq) / 2.0))
        else:
            moduli = (np.sqrt(c), np.sqrt(c))  # conjugate pair, |z|^2 = c
    else:
        # sum |c_i| <= bound^degree forces every inverse root below bound
        if np.sum(np.abs(poly[1:])) <= bound**degree:
            return 0.0
        moduli = tuple(np.abs(np.roots(poly)))
    total = 0.0
    for m in moduli:
        if m > bound:
            total += m - bound
    return total


def coefficient_penalty(order: ModelOrder, coeffs: CoefficientSet) -> float:
    """Distance outside the stationary/invertible region (0 when inside).

    The multiplicative structure makes this exact and cheap: each factor is
    a small polynomial, and the product is admissible iff every factor is.
    MA factors are held to the same (invertibility) gate to keep the
    likelihood surface identified.  Seasonal factors are assessed in the
    B^s variable, which preserves the inside/outside verdict.
    """
    dist = 0.0
    dist += _factor_excess(np.concatenate([[1.0], -np.asarray(coeffs.phi)]))
    dist += _factor_excess(np.concatenate([[1.0], -np.asarray(coeffs.sphi)]))
    dist += _factor_excess(np.concatenate([[1.0], np.asarray(coeffs.theta)]))
    dist += _factor_excess(np.concatenate([[1.0], np.asarray(coeffs.stheta)]))
    return dist


def stationary_initial_covariance(form: StateSpaceForm) -> np.ndarray:
    """Solve P = T P T' + R R' for the exact stationary state covariance."""
    T, R = form.transition, form.innovation
    r = form.dim
    if r == 1:
        t = float(T[0, 0])
        return np.array([[R[0] ** 2 / (1.0 - t * t)]])
    return _lyapunov_core(np.ascontiguousarray(T[:, 0]), R)


def _reference_initial_covariance(form: StateSpaceForm) -> np.ndarray:
    """scipy's Lyapunov solver, kept as an independent cross-check."""
    return solve_discrete_lyapunov(form.transition, np.outer(form.innovation, form.innovation))


@dataclass(frozen=True, eq=False)
class KalmanRun:
    """One filter pass: innovations, their scaled variances and likelihood.

    ``scales`` holds F_t, the innovation variances divided by sigma2, so the
    standardized residuals are innovations / sqrt(sigma2 * scales).
    """

    loglik: float
    sigma2: float
    innovations: np.ndarray
    scales: np.ndarray
    concentrated: bool

    def standardized_residuals(self) -> np.ndarray:
        return self.innovations / np.sqrt(self.sigma2 * self.scales)


def kalman_filter(
    data,
    order: ModelOrder,
    coeffs: CoefficientSet,
    concentrate: bool = True,
) -> KalmanRun:
    """Run the filter over already-differenced data.

    The d and D members of ``order`` are ignored here; the caller is
    responsible for having differenced the data.  With ``concentrate`` the
    returned sigma2 is the analytic maximizer mean(v^2/F) and the
    log-likelihood is the profile value; otherwise ``coeffs.sigma2`` is used
    as-is.

    Raises NonStationaryRegion (with a ``distance`` attribute) when the
    coefficients admit no stationary initial covariance.
    """
    y = np.asarray(data, dtype=float)
    n = y.size
    if n < 1:
        raise ValueError("no data")
    if coeffs.const is not None:
        y = y - coeffs.const

    dist = coefficient_penalty(order, coeffs)
    if dist > 0.0:
        err = NonStationaryRegion(
            f"coefficients outside the stationary/invertible region (excess {dist:.3g})"
        )
        err.distance = dist
        raise err

    form = build_statespace(order, coeffs)
    P0 = stationary_initial_covariance(form)
    v, F, _, _ = _filter_core(
        np.ascontiguousarray(y), np.ascontiguousarray(form.transition[:, 0]),
        form.innovation, P0,
    )

    ssq = float(np.sum(v * v / F))
    sum_log_f = float(np.sum(np.log(F)))
    if concentrate:
        if ssq <= 0.0:
            raise DegenerateSeries(
                "all one-step innovations are zero; the innovation variance is degenerate"
            )
        sigma2 = ssq / n
        loglik = -0.5 * n * (np.log(2.0 * np.pi) + 1.0 + np.log(sigma2)) - 0.5 * sum_log_f
    else:
        sigma2 = coeffs.sigma2
        loglik = (
            -0.5 * n * np.log(2.0 * np.pi)
            - 0.5 * (sum_log_f + n * np.log(sigma2))
            - 0.5 * ssq / sigma2
        )
    return KalmanRun(
        loglik=float(loglik),
        sigma2=float(sigma2),
        innovations=v,
        scales=F,
        concentrated=concentrate,
    )


def kalman_loglik(
    data, order: ModelOrder, coeffs: CoefficientSet, concentrate: bool = True
) -> float:
    """Exact Gaussian log-likelihood (profile over sigma2 by default)."""
    return kalman_filter(data, order, coeffs, concentrate=concentrate).loglik


def forecast_state(
    data, order: ModelOrder, coeffs: CoefficientSet, horizon: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-step forecast means and variances of the differenced process.

    Runs the filter over ``data`` and iterates the prediction equations
    ``horizon`` steps past the sample end.  Variances are on the same scale
    as ``coeffs.sigma2`` (i.e. true innovation-variance units).
    """
    y = np.asarray(data, dtype=float)
    const = coeffs.const if coeffs.const is not None else 0.0
    work = np.ascontiguousarray(y - const)

    dist = coefficient_penalty(order, coeffs)
    if dist > 0.0:
        err = NonStationaryRegion(
            f"cannot forecast from non-stationary coefficients (excess {dist:.3g})"
        )
        err.distance = dist
        raise err

    form = build_statespace(order, coeffs)
    T, R = form.transition, form.innovation
    P0 = stationary_initial_covariance(form)
    _, _, a, P = _filter_core(work, np.ascontiguousarray(T[:, 0]), R, P0)

    means = np.empty(horizon)
    variances = np.empty(horizon)
    rrt = np.outer(R, R)
    for h in range(horizon):
        means[h] = a[0] + const
        variances[h] = P[0, 0] * coeffs.sigma2
        a = T @ a
        P = T @ P @ T.T + rrt
    return means, variances
