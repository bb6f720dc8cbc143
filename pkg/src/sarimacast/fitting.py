"""Maximum-likelihood SARIMA fitting with standard errors and residuals.

The optimizer is a derivative-free Nelder-Mead simplex with a five-point
documented multistart: all coefficients at 0.1 with the four sign patterns
over the AR and MA sides, plus the origin (duplicates collapse for
one-sided models).  Starts are ranked by objective value, the three most
promising get a short exploratory run, the best exploration result is
polished at objective tolerance 1e-8, and standard errors come from the
inverse of a central-difference Hessian of the negative profile
log-likelihood at the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .distributions import normal_sf
from .errors import NonStationaryRegion, SeriesTooShort, ShapeMismatch
from .kalman import kalman_filter, kalman_loglik
from .model import CoefficientSet, ModelOrder, coefficients_from_flat
from .series import DifferencedSeries, TimeSeries, TransformSpec

_PENALTY = 1e10
_START_MAGNITUDE = 0.1
_EXPLORE_FATOL = 1e-6
_POLISH_FATOL = 1e-8
_MAX_ITER = 2000

MA_CONVENTION = "MA polynomial uses plus signs: (1 + theta_1 B + ...)"


@dataclass(frozen=True, eq=False)
class FittedModel:
    """A maximum-likelihood fit: coefficients, uncertainty and residuals.

    ``stderr``/``t_stats``/``p_values`` are None when the numerical Hessian
    was singular; the model is still usable for forecasting.  ``residuals``
    are the standardized one-step prediction errors on the differenced
    scale, anchored at the differenced sample's first month.
    """

    order: ModelOrder
    coefficients: CoefficientSet
    stderr: np.ndarray | None
    t_stats: np.ndarray | None
    p_values: np.ndarray | None
    loglik: float
    aic: float
    residuals: TimeSeries
    converged: bool
    iterations: int
    n_obs: int

    @property
    def n_params(self) -> int:
        """Estimated parameters including the innovation variance."""
        extra = 1 if self.coefficients.const is not None else 0
        return self.order.n_coef + extra + 1

    def significant(self, level: float = 0.10) -> bool:
        """True when every AR/MA coefficient is two-sided significant.

        The constant (a level term, not part of the dynamics) is exempt.
        Vacuously true for the coefficient-free model; false when standard
        errors are unavailable.
        """
        if self.order.n_coef == 0:
            return True
        if self.p_values is None:
            return False
        return bool(np.all(self.p_values[: self.order.n_coef] < level))

    def to_card(self) -> dict:
        """Model card for serialization."""
        rows = []
        labels = self.coefficients.labels()
        estimates = self.coefficients.flat()
        for i, name in enumerate(labels):
            rows.append(
                {
                    "name": name,
                    "estimate": float(estimates[i]),
                    "stderr": float(self.stderr[i]) if self.stderr is not None else None,
                    "t": float(self.t_stats[i]) if self.t_stats is not None else None,
                    "p": float(self.p_values[i]) if self.p_values is not None else None,
                }
            )
        return {
            "order": str(self.order),
            "convention": MA_CONVENTION,
            "coefficients": rows,
            "sigma2": self.coefficients.sigma2,
            "loglik": self.loglik,
            "aic": self.aic,
            "converged": self.converged,
            "iterations": self.iterations,
            "n_obs": self.n_obs,
        }


def _as_differenced(data) -> DifferencedSeries:
    if isinstance(data, DifferencedSeries):
        return data
    if isinstance(data, TimeSeries):
        return DifferencedSeries(data, TransformSpec(apply_log=False, d=0, D=0), ())
    raise TypeError(f"expected DifferencedSeries or TimeSeries, got {type(data)!r}")


def _start_points(order: ModelOrder, include_constant: bool, y_mean: float) -> list[np.ndarray]:
    p, q, P, Q = order.p, order.q, order.P, order.Q
    dim = order.n_coef + (1 if include_constant else 0)
    ar_idx = list(range(p)) + list(range(p + q, p + q + P))
    ma_idx = list(range(p, p + q)) + list(range(p + q + P, p + q + P + Q))
    starts: list[np.ndarray] = []
    seen = set()
    for sa, sm in ((1, 1), (-1, -1), (1, -1), (-1, 1), (0, 0)):
        v = np.zeros(dim)
        v[ar_idx] = sa * _START_MAGNITUDE
        v[ma_idx] = sm * _START_MAGNITUDE
        if include_constant:
            v[-1] = y_mean
        key = tuple(np.round(v, 12))
        if key not in seen:
            seen.add(key)
            starts.append(v)
    return starts


def _numerical_hessian(f, x: np.ndarray, base_step: float = 1e-3) -> np.ndarray:
    """Central-difference Hessian; per-coordinate steps shrink away from the
    penalty region so estimates near the stationarity boundary stay usable."""
    dim = x.size
    f0 = f(x)
    steps = np.array([base_step * max(1.0, abs(v)) for v in x])
    for i in range(dim):
        e = np.zeros(dim)
        for _ in range(8):
            e[i] = steps[i]
            if f(x + e) < _PENALTY and f(x - e) < _PENALTY:
                break
            steps[i] *= 0.5
    H = np.empty((dim, dim))
    for i in range(dim):
        ei = np.zeros(dim)
        ei[i] = steps[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / steps[i] ** 2
        for j in range(i):
            ej = np.zeros(dim)
            ej[j] = steps[j]
            quad = f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            H[i, j] = H[j, i] = quad / (4.0 * steps[i] * steps[j])
    return H


def fit_mle(
    data,
    order: ModelOrder,
    include_constant: bool = False,
    min_obs: int = 10,
) -> FittedModel:
    """Fit a SARIMA model to an already-differenced sample.

    ``data`` is the DifferencedSeries produced by ``apply_transform`` (a
    plain TimeSeries is accepted for undifferenced models).  A constant term
    is only allowed when d = D = 0.  The model is returned even when the
    optimizer fails to converge; the ``converged`` flag says so.
    """
    diffed = _as_differenced(data)
    spec = diffed.spec
    if (order.d, order.D) != (spec.d, spec.D) or (order.D > 0 and order.s != spec.s):
        raise ShapeMismatch(
            f"order {order} does not match the data's transform "
            f"(d={spec.d}, D={spec.D}, s={spec.s})"
        )
    if include_constant and (order.d > 0 or order.D > 0):
        raise ValueError("a constant term is only allowed when d = D = 0")

    y = diffed.core.values
    n = y.size
    dim = order.n_coef + (1 if include_constant else 0)
    if n < min_obs + order.n_coef:
        raise SeriesTooShort(
            f"{n} observations are too few to fit {order} (need >= {min_obs + order.n_coef})"
        )

    def negloglik(vec: np.ndarray) -> float:
        coeffs = coefficients_from_flat(order, vec, has_const=include_constant)
        try:
            return -kalman_loglik(y, order, coeffs)
        except NonStationaryRegion as err:
            return _PENALTY * (1.0 + err.distance)

    iterations = 0
    if dim == 0:
        x_opt = np.empty(0)
        converged = True
    elif order.n_coef == 0 and include_constant:
        # White noise plus level: the profile optimum is the sample mean.
        x_opt = np.array([float(y.mean())])
        converged = True
    else:
        starts = _start_points(order, include_constant, float(y.mean()))
        # rank the documented starts by objective value and run the short
        # exploratory simplex from the three most promising only
        starts.sort(key=negloglik)
        explored = []
        for s in starts[:3]:
            res = minimize(
                negloglik,
                s,
                method="Nelder-Mead",
                options={
                    "maxfev": 40 * dim + 20,
                    "xatol": 1e-3,
                    "fatol": _EXPLORE_FATOL,
                    "disp": False,
                },
            )
            iterations += int(res.nit)
            explored.append(res)
        best = min(explored, key=lambda r: float(r.fun))
        polish = minimize(
            negloglik,
            best.x,
            method="Nelder-Mead",
            options={
                "maxiter": _MAX_ITER,
                "maxfev": 2 * _MAX_ITER,
                "xatol": 1e-6,
                "fatol": _POLISH_FATOL,
                "disp": False,
            },
        )
        iterations += int(polish.nit)
        if float(polish.fun) <= float(best.fun):
            x_opt, final_fun = polish.x, float(polish.fun)
        else:
            x_opt, final_fun = best.x, float(best.fun)
        converged = bool(polish.success) and final_fun < _PENALTY

    coeffs = coefficients_from_flat(order, x_opt, has_const=include_constant)
    run = kalman_filter(y, order, coeffs, concentrate=True)
    coeffs = CoefficientSet(
        phi=coeffs.phi,
        theta=coeffs.theta,
        sphi=coeffs.sphi,
        stheta=coeffs.stheta,
        sigma2=run.sigma2,
        const=coeffs.const,
    )

    stderr = t_stats = p_values = None
    if dim == 0:
        stderr = np.empty(0)
        t_stats = np.empty(0)
        p_values = np.empty(0)
    else:
        H = _numerical_hessian(negloglik, x_opt)
        try:
            cov = np.linalg.inv(H)
            variances = np.diag(cov)
            if np.all(np.isfinite(variances)) and np.all(variances > 0.0):
                stderr = np.sqrt(variances)
                t_stats = x_opt / stderr
                p_values = np.array([2.0 * normal_sf(abs(t)) for t in t_stats])
        except np.linalg.LinAlgError:
            pass

    k = dim + 1  # innovation variance counts as a parameter
    aic = 2.0 * k - 2.0 * run.loglik
    residuals = TimeSeries(diffed.core.start, run.standardized_residuals())
    return FittedModel(
        order=order,
        coefficients=coeffs,
        stderr=stderr,
        t_stats=t_stats,
        p_values=p_values,
        loglik=run.loglik,
        aic=float(aic),
        residuals=residuals,
        converged=converged,
        iterations=iterations,
        n_obs=n,
    )
