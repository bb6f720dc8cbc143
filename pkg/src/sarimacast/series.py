"""Calendar-anchored monthly series, the log transform and differencing.

The data carrier is :class:`TimeSeries`: a start month plus a contiguous
block of float64 values.  :func:`apply_transform` composes the pipeline's
fixed transform order (log, then seasonal differences at lag ``s``, then
non-seasonal differences at lag 1) and :func:`integrate_transform` inverts
it stage by stage, optionally extending past the sample end so forecasts can
be expressed back on the original count scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentInitials, NonPositiveValue, SeriesTooShort


@dataclass(frozen=True, order=True)
class MonthStamp:
    """A calendar month: (year, month) with month in 1..12.

    Ordering is lexicographic on (year, month), which coincides with
    ordering by the linear index 12*year + month.
    """

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @property
    def index(self) -> int:
        return 12 * self.year + (self.month - 1)

    def advance(self, months: int) -> "MonthStamp":
        idx = self.index + months
        return MonthStamp(idx // 12, idx % 12 + 1)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "MonthStamp":
        """Parse 'YYYY-MM'."""
        parts = text.strip().split("-")
        if len(parts) != 2:
            raise ValueError(f"expected 'YYYY-MM', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))


def _as_values(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"values must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("a series needs at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series values must all be finite")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Contiguous monthly observations anchored at ``start``.

    Position ``i`` holds the value for ``start.advance(i)``; there are no
    gaps by construction.  Values are stored as read-only float64.
    """

    start: MonthStamp
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def end(self) -> MonthStamp:
        """Stamp of the last observation."""
        return self.start.advance(len(self) - 1)

    def month_at(self, i: int) -> MonthStamp:
        if not 0 <= i < len(self):
            raise IndexError(i)
        return self.start.advance(i)

    def months(self) -> list[MonthStamp]:
        return [self.start.advance(i) for i in range(len(self))]

    def value_at(self, stamp: MonthStamp) -> float:
        offset = stamp.index - self.start.index
        if not 0 <= offset < len(self):
            raise KeyError(str(stamp))
        return float(self.values[offset])

    def with_values(self, values, start: MonthStamp | None = None) -> "TimeSeries":
        return TimeSeries(start if start is not None else self.start, values)


@dataclass(frozen=True)
class TransformSpec:
    """Log flag plus differencing orders: d at lag 1, D at seasonal lag s."""

    apply_log: bool = True
    d: int = 0
    D: int = 0
    s: int = 12

    def __post_init__(self):
        if self.d < 0 or self.D < 0:
            raise ValueError("differencing orders must be non-negative")
        if self.s < 1:
            raise ValueError("seasonal period must be >= 1")

    @property
    def loss(self) -> int:
        """Observations consumed by differencing: d + D*s."""
        return self.d + self.D * self.s


@dataclass(frozen=True, eq=False)
class DifferencedSeries:
    """A differenced series plus everything needed to undo the transform.

    ``initials`` holds, for each differencing pass in application order, the
    ``lag`` leading values of that pass's input (on the log scale when the
    transform starts with a log).  Seasonal passes come first, matching the
    fixed composition order log -> D seasonal differences -> d plain ones.
    """

    core: TimeSeries
    spec: TransformSpec
    initials: tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self):
        frozen = tuple(np.array(v, dtype=float) for v in self.initials)
        for arr in frozen:
            arr.setflags(write=False)
        object.__setattr__(self, "initials", frozen)
        expected = [self.spec.s] * self.spec.D + [1] * self.spec.d
        got = [arr.size for arr in self.initials]
        if got != expected:
            raise InconsistentInitials(
                f"initials lengths {got} do not match spec accounting {expected}"
            )


def log_transform(series: TimeSeries) -> TimeSeries:
    """Natural log of every value; requires strict positivity."""
    bad = np.nonzero(series.values <= 0.0)[0]
    if bad.size:
        i = int(bad[0])
        raise NonPositiveValue(i, float(series.values[i]))
    return TimeSeries(series.start, np.log(series.values))


def _difference_once(values: np.ndarray, lag: int) -> tuple[np.ndarray, np.ndarray]:
    """One differencing pass; returns (differenced, consumed initials)."""
    if values.size <= lag:
        raise SeriesTooShort(
            f"need more than {lag} observations to difference at lag {lag}, have {values.size}"
        )
    return values[lag:] - values[:-lag], values[:lag].copy()


def difference(series: TimeSeries, lag: int, times: int = 1) -> DifferencedSeries:
    """Apply ``y[t] = x[t] - x[t-lag]`` the given number of times.

    The leading ``lag`` values consumed by each pass are retained so the
    operation is exactly invertible.  The calendar anchor advances by
    ``lag * times`` months.
    """
    if lag < 1:
        raise ValueError("lag must be a positive integer")
    if times < 1:
        raise ValueError("times must be a positive integer")
    if len(series) <= lag * times:
        raise SeriesTooShort(
            f"series of length {len(series)} cannot be differenced {times}x at lag {lag}"
        )
    values = series.values
    initials = []
    for _ in range(times):
        values, consumed = _difference_once(values, lag)
        initials.append(consumed)
    if lag == 1:
        spec = TransformSpec(apply_log=False, d=times, D=0, s=12)
    else:
        spec = TransformSpec(apply_log=False, d=0, D=times, s=lag)
    core = TimeSeries(series.start.advance(lag * times), values)
    return DifferencedSeries(core, spec, tuple(initials))


def apply_transform(series: TimeSeries, spec: TransformSpec) -> DifferencedSeries:
    """Log (if requested), then D seasonal differences, then d plain ones.

    The composition order is fixed; :func:`integrate_transform` reverses it.
    """
    if len(series) <= spec.loss:
        raise SeriesTooShort(
            f"series of length {len(series)} too short for d={spec.d}, D={spec.D}, s={spec.s}"
        )
    work = log_transform(series) if spec.apply_log else series
    values = work.values
    initials = []
    for _ in range(spec.D):
        values, consumed = _difference_once(values, spec.s)
        initials.append(consumed)
    for _ in range(spec.d):
        values, consumed = _difference_once(values, 1)
        initials.append(consumed)
    core = TimeSeries(series.start.advance(spec.loss), values)
    return DifferencedSeries(core, spec, tuple(initials))


def undifference(diffed: DifferencedSeries, future=()) -> np.ndarray:
    """Invert the differencing stages only (no exponentiation).

    Returns the full undifferenced sequence on the (possibly log) scale,
    including the ``future`` extension when one is supplied.
    """
    spec = diffed.spec
    values = np.concatenate([diffed.core.values, np.asarray(future, dtype=float)])
    lags = [spec.s] * spec.D + [1] * spec.d
    if len(lags) != len(diffed.initials):
        raise InconsistentInitials(
            f"{len(diffed.initials)} initial blocks for {len(lags)} differencing passes"
        )
    for lag, seed in zip(reversed(lags), reversed(diffed.initials)):
        if seed.size != lag:
            raise InconsistentInitials(f"initial block of size {seed.size} for lag {lag}")
        full = np.empty(values.size + lag)
        full[:lag] = seed
        for t in range(values.size):
            full[lag + t] = values[t] + full[t]
        values = full
    return values


def integrate_transform(diffed: DifferencedSeries, future=()) -> np.ndarray:
    """Full inverse of :func:`apply_transform`: undifference, then exp.

    With a non-empty ``future`` the returned sequence extends past the
    sample end, which is how forecasts made on the transformed scale are
    carried back to the original one.
    """
    values = undifference(diffed, future)
    if diffed.spec.apply_log:
        values = np.exp(values)
    return values


def train_test_split(series: TimeSeries, holdout: int) -> tuple[TimeSeries, TimeSeries]:
    """Split off the last ``holdout`` observations as the test segment."""
    if holdout < 1:
        raise ValueError("holdout must be a positive integer")
    if holdout >= len(series):
        raise SeriesTooShort(
            f"holdout {holdout} leaves no training data for a series of length {len(series)}"
        )
    cut = len(series) - holdout
    train = TimeSeries(series.start, series.values[:cut])
    test = TimeSeries(series.start.advance(cut), series.values[cut:])
    return train, test


def difference_polynomial(d: int, D: int, s: int) -> np.ndarray:
    """Coefficients of (1-B)^d (1-B^s)^D, constant term first."""
    poly = np.array([1.0])
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    seasonal = np.zeros(s + 1)
    seasonal[0] = 1.0
    seasonal[s] = -1.0
    for _ in range(D):
        poly = np.convolve(poly, seasonal)
    return poly
