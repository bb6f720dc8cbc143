"""Seasonal ARIMA model orders, coefficients and polynomial algebra.

Sign conventions, printed verbatim in every report:

* AR: (1 - phi_1 B - ... - phi_p B^p)(1 - sphi_1 B^s - ... - sphi_P B^(sP))
* MA: (1 + theta_1 B + ... + theta_q B^q)(1 + stheta_1 B^s + ...)

``expand_polynomials`` returns the multiplied-out lag polynomials with the
constant term first, so ``ar_poly[k]`` is the coefficient of B^k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .series import difference_polynomial

ROOT_TOLERANCE = 1e-6


@dataclass(frozen=True, order=True)
class ModelOrder:
    """SARIMA order (p,d,q)(P,D,Q)_s."""

    p: int
    d: int
    q: int
    P: int
    D: int
    Q: int
    s: int = 12

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.s < 1:
            raise ValueError("seasonal period s must be >= 1")

    @property
    def n_coef(self) -> int:
        """AR/MA coefficients to estimate (variance not counted)."""
        return self.p + self.q + self.P + self.Q

    @property
    def n_seasonal_coef(self) -> int:
        return self.P + self.Q

    @property
    def ar_degree(self) -> int:
        return self.p + self.s * self.P

    @property
    def ma_degree(self) -> int:
        return self.q + self.s * self.Q

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})({self.P},{self.D},{self.Q})[{self.s}]"

    @classmethod
    def parse(cls, text: str) -> "ModelOrder":
        """Parse '(p,d,q)(P,D,Q)[s]' or 'p,d,q' / 'p,d,q,P,D,Q,s' forms."""
        flat = [int(tok) for tok in text.replace("(", " ").replace(")", " ")
                .replace("[", " ").replace("]", " ").replace(",", " ").split()]
        if len(flat) == 3:
            p, d, q = flat
            return cls(p, d, q, 0, 0, 0)
        if len(flat) == 6:
            return cls(*flat)
        if len(flat) == 7:
            return cls(*flat)
        raise ValueError(f"cannot parse model order from {text!r}")


@dataclass(frozen=True)
class CoefficientSet:
    """Estimated (or hypothesized) SARIMA coefficients.

    ``const`` is an optional level term, meaningful only for undifferenced
    models; ``None`` means the model has no constant.
    """

    phi: tuple[float, ...] = ()
    theta: tuple[float, ...] = ()
    sphi: tuple[float, ...] = ()
    stheta: tuple[float, ...] = ()
    sigma2: float = 1.0
    const: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        object.__setattr__(self, "sphi", tuple(float(v) for v in self.sphi))
        object.__setattr__(self, "stheta", tuple(float(v) for v in self.stheta))
        if self.sigma2 <= 0.0:
            raise ValueError(f"innovation variance must be positive, got {self.sigma2}")

    def matches(self, order: ModelOrder) -> bool:
        return (
            len(self.phi) == order.p
            and len(self.theta) == order.q
            and len(self.sphi) == order.P
            and len(self.stheta) == order.Q
        )

    def labels(self) -> list[str]:
        """Coefficient names in optimizer/report order."""
        names = [f"ar{i + 1}" for i in range(len(self.phi))]
        names += [f"ma{i + 1}" for i in range(len(self.theta))]
        names += [f"sar{i + 1}" for i in range(len(self.sphi))]
        names += [f"sma{i + 1}" for i in range(len(self.stheta))]
        if self.const is not None:
            names.append("const")
        return names

    def flat(self) -> np.ndarray:
        """AR, MA, SAR, SMA (and const if present) as one vector."""
        vec = list(self.phi) + list(self.theta) + list(self.sphi) + list(self.stheta)
        if self.const is not None:
            vec.append(self.const)
        return np.array(vec, dtype=float)


def coefficients_from_flat(order: ModelOrder, vec, sigma2: float = 1.0,
                           has_const: bool = False) -> CoefficientSet:
    """Rebuild a CoefficientSet from the optimizer's flat vector."""
    vec = np.asarray(vec, dtype=float)
    expected = order.n_coef + (1 if has_const else 0)
    if vec.size != expected:
        raise ShapeMismatch(f"expected {expected} coefficients, got {vec.size}")
    p, q, P, Q = order.p, order.q, order.P, order.Q
    return CoefficientSet(
        phi=tuple(vec[:p]),
        theta=tuple(vec[p : p + q]),
        sphi=tuple(vec[p + q : p + q + P]),
        stheta=tuple(vec[p + q + P : p + q + P + Q]),
        sigma2=sigma2,
        const=float(vec[-1]) if has_const else None,
    )


def expand_polynomials(order: ModelOrder, coeffs: CoefficientSet) -> tuple[np.ndarray, np.ndarray]:
    """Multiply seasonal and non-seasonal lag polynomials.

    Returns (ar_poly, ma_poly) with constant term 1 at index 0, degrees
    p + s*P and q + s*Q respectively.
    """
    if not coeffs.matches(order):
        raise ShapeMismatch(
            f"coefficient counts {len(coeffs.phi)},{len(coeffs.theta)},"
            f"{len(coeffs.sphi)},{len(coeffs.stheta)} do not match order {order}"
        )
    s = order.s

    ar = np.zeros(order.p + 1)
    ar[0] = 1.0
    ar[1:] = -np.asarray(coeffs.phi)
    sar = np.zeros(s * order.P + 1)
    sar[0] = 1.0
    for j, v in enumerate(coeffs.sphi, start=1):
        sar[s * j] = -v
    ar_poly = np.convolve(ar, sar)

    ma = np.zeros(order.q + 1)
    ma[0] = 1.0
    ma[1:] = np.asarray(coeffs.theta)
    sma = np.zeros(s * order.Q + 1)
    sma[0] = 1.0
    for j, v in enumerate(coeffs.stheta, start=1):
        sma[s * j] = v
    ma_poly = np.convolve(ma, sma)

    return ar_poly, ma_poly


def polynomial_roots(poly: np.ndarray) -> np.ndarray:
    """Roots of 1 + c_1 z + ... + c_k z^k (empty for degree 0)."""
    poly = np.trim_zeros(np.asarray(poly, dtype=float), trim="b")
    if poly.size <= 1:
        return np.empty(0, dtype=complex)
    # np.roots expects the highest power first.
    return np.roots(poly[::-1])


@dataclass(frozen=True, eq=False)
class RootReport:
    """Roots of the expanded AR and MA polynomials and the admissibility gate."""

    ar_roots: np.ndarray
    ma_roots: np.ndarray
    min_ar_modulus: float
    min_ma_modulus: float
    ar_ok: bool
    ma_ok: bool

    @property
    def ok(self) -> bool:
        return self.ar_ok and self.ma_ok


def check_roots(order: ModelOrder, coeffs: CoefficientSet) -> RootReport:
    """Verify all polynomial roots lie strictly outside the unit circle.

    Degree-zero polynomials pass vacuously with an infinite minimum modulus.
    """
    ar_poly, ma_poly = expand_polynomials(order, coeffs)
    ar_roots = polynomial_roots(ar_poly)
    ma_roots = polynomial_roots(ma_poly)
    min_ar = float(np.min(np.abs(ar_roots))) if ar_roots.size else float("inf")
    min_ma = float(np.min(np.abs(ma_roots))) if ma_roots.size else float("inf")
    threshold = 1.0 + ROOT_TOLERANCE
    return RootReport(
        ar_roots=ar_roots,
        ma_roots=ma_roots,
        min_ar_modulus=min_ar,
        min_ma_modulus=min_ma,
        ar_ok=min_ar > threshold,
        ma_ok=min_ma > threshold,
    )


def min_root_separation(report: RootReport) -> float:
    """Smallest distance between AR and MA inverse roots.

    Near-zero separation means the polynomials share a near-common factor,
    i.e. the model is parameter-redundant and a lower-order candidate
    represents the same process.  Infinite when either side has no roots.
    """
    if report.ar_roots.size == 0 or report.ma_roots.size == 0:
        return float("inf")
    inv_ar = 1.0 / report.ar_roots
    inv_ma = 1.0 / report.ma_roots
    gaps = np.abs(inv_ar[:, None] - inv_ma[None, :])
    return float(np.min(gaps))


def psi_weights(order: ModelOrder, coeffs: CoefficientSet, count: int) -> np.ndarray:
    """First ``count`` moving-average weights of the integrated process.

    These are the series coefficients of ma_poly(B) / (ar_poly(B) * delta(B))
    with delta(B) = (1-B)^d (1-B^s)^D, so psi[0] = 1 and the h-step forecast
    error variance on the undifferenced scale is sigma2 * sum(psi[:h]**2).
    """
    ar_poly, ma_poly = expand_polynomials(order, coeffs)
    full_ar = np.convolve(ar_poly, difference_polynomial(order.d, order.D, order.s))
    psi = np.zeros(count)
    if count == 0:
        return psi
    psi[0] = 1.0
    for j in range(1, count):
        value = ma_poly[j] if j < ma_poly.size else 0.0
        upper = min(j, full_ar.size - 1)
        for i in range(1, upper + 1):
            value -= full_ar[i] * psi[j - i]
        psi[j] = value
    return psi
