"""Realized-variance windows, implied variance and aligned ratio series.

A "month" is a rolling window of 21 trading days (one ratio per trading
date, not disjoint calendar months). Realized variance is annualized with a
252 trading-day year; the constant cancels in every ratio and only shifts
diagnostic output. Volatility-index levels quote annualized volatility in
percent, so implied variance is (level/100)^2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import AlignmentError, DataQualityError

__all__ = [
    "MODES",
    "DatedValues",
    "PriceSeries",
    "IndexSeries",
    "RVSeries",
    "RatioSeries",
    "log_returns",
    "realized_variance",
    "implied_variance",
    "trading_day_rescale",
    "apply_calendar_rescale",
    "build_ratio_series",
    "invert_series",
]

#: Ratio alignment modes.
MODES = ("predicted", "preceding", "adjacent", "random")

def _check_dates(dates: np.ndarray) -> None:
    if dates.size and not np.all(np.diff(dates) > np.timedelta64(0, "D")):
        raise ValueError("dates must be strictly increasing")


def _as_dates(dates) -> np.ndarray:
    return np.asarray(dates, dtype="datetime64[D]")


@dataclass(frozen=True)
class DatedValues:
    """A plain date-indexed value series."""

    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dates.size != self.values.size:
            raise ValueError("dates and values must have equal length")
        _check_dates(self.dates)

    def __len__(self) -> int:
        return int(self.dates.size)


@dataclass(frozen=True)
class PriceSeries:
    """Daily closes of the underlying index."""

    dates: np.ndarray
    closes: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "closes", np.asarray(self.closes, dtype=float))
        if self.dates.size != self.closes.size:
            raise ValueError("dates and closes must have equal length")
        _check_dates(self.dates)
        if np.any(~np.isfinite(self.closes)) or np.any(self.closes <= 0.0):
            raise ValueError("closes must be positive and finite")

    def __len__(self) -> int:
        return int(self.dates.size)


@dataclass(frozen=True)
class IndexSeries:
    """Daily closes of a volatility index (annualized vol, percent)."""

    dates: np.ndarray
    levels: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "levels", np.asarray(self.levels, dtype=float))
        if self.dates.size != self.levels.size:
            raise ValueError("dates and levels must have equal length")
        _check_dates(self.dates)
        if np.any(~np.isfinite(self.levels)) or np.any(self.levels <= 0.0):
            raise ValueError("levels must be positive and finite")

    def __len__(self) -> int:
        return int(self.dates.size)


@dataclass(frozen=True)
class RVSeries:
    """Annualized realized variance per anchor date, with window metadata."""

    dates: np.ndarray
    rv2: np.ndarray
    window_trading_days: int
    window_calendar_days: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "rv2", np.asarray(self.rv2, dtype=float))
        object.__setattr__(
            self, "window_calendar_days", np.asarray(self.window_calendar_days, dtype=int)
        )
        if not (self.dates.size == self.rv2.size == self.window_calendar_days.size):
            raise ValueError("per-point fields must have equal length")
        _check_dates(self.dates)
        if self.window_trading_days < 1 or np.any(self.window_calendar_days < 1):
            raise ValueError("window lengths must be >= 1")
        if np.any(self.rv2 < 0.0):
            raise ValueError("realized variance must be nonnegative")

    def __len__(self) -> int:
        return int(self.dates.size)


@dataclass(frozen=True)
class RatioSeries:
    """Dimensionless variance-ratio series under one alignment mode."""

    dates: np.ndarray
    values: np.ndarray
    mode: str
    scaled_to_unit_mean: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dates.size != self.values.size:
            raise ValueError("dates and values must have equal length")
        _check_dates(self.dates)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if np.any(~np.isfinite(self.values)) or np.any(self.values <= 0.0):
            raise DataQualityError("ratio values must be strictly positive and finite")

    def __len__(self) -> int:
        return int(self.dates.size)


def log_returns(prices: PriceSeries) -> DatedValues:
    """Daily log returns ln(C_i / C_{i-1}); each carries the date it ends on."""
    if len(prices) < 2:
        raise ValueError("log_returns requires at least two prices")
    r = np.log(prices.closes[1:] / prices.closes[:-1])
    return DatedValues(prices.dates[1:], r)


def realized_variance(
    prices: PriceSeries,
    convention: str,
    window_trading_days: int = 21,
    trading_days_per_year: int = 252,
    stride: int = 1,
) -> RVSeries:
    """Annualized realized variance over windows of daily log returns.

    ``convention`` selects where the window sits relative to each anchor
    date: ``"predicted"`` sums the squared returns of the next
    ``window_trading_days`` trading days, ``"preceding"`` the previous ones.
    Anchors without a full window are not emitted. The predicted window at
    anchor i and the preceding window at anchor i + window cover the same
    returns. ``stride`` spaces the anchors: 1 gives rolling daily windows,
    ``window_trading_days`` gives disjoint ones.
    """
    if convention not in ("predicted", "preceding"):
        raise ValueError(f"convention must be 'predicted' or 'preceding', got {convention!r}")
    w = int(window_trading_days)
    if w < 1:
        raise ValueError("window_trading_days must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    n = len(prices)
    if n < w + 1:
        raise DataQualityError(
            f"need at least {w + 1} prices for one {w}-trading-day window, got {n}"
        )
    r2 = np.log(prices.closes[1:] / prices.closes[:-1]) ** 2
    sums = np.convolve(r2, np.ones(w), mode="valid")  # sums[j] = sum r2[j:j+w]
    factor = trading_days_per_year / w
    if convention == "predicted":
        anchors = np.arange(0, n - w, stride)
        span = (prices.dates[anchors + w] - prices.dates[anchors]).astype(int)
        window_sums = sums[anchors]
    else:
        anchors = np.arange(w, n, stride)
        span = (prices.dates[anchors] - prices.dates[anchors - w]).astype(int)
        window_sums = sums[anchors - w]
    return RVSeries(
        dates=prices.dates[anchors],
        rv2=factor * window_sums,
        window_trading_days=w,
        window_calendar_days=span,
    )


def implied_variance(index: IndexSeries) -> DatedValues:
    """Annualized implied variance in decimal units: (level / 100)^2."""
    return DatedValues(index.dates, (index.levels / 100.0) ** 2)


def trading_day_rescale(
    rv2: float,
    window_calendar_days: int,
    window_trading_days: int,
    trading_days_per_year: int = 252,
) -> float:
    """Rescale one trading-day variance point onto the calendar-day basis.

    Realized variance accrues only on trading dates while implied variance
    covers every day; the factor window_trading_days * (365/252) /
    window_calendar_days (about 1.0139 for a standard 21/30 window) puts the
    two on the same footing.
    """
    factor = window_trading_days * (365.0 / trading_days_per_year) / window_calendar_days
    return rv2 * factor


def apply_calendar_rescale(rv: RVSeries, trading_days_per_year: int = 252) -> RVSeries:
    """Apply the calendar rescale to every point of an RV series."""
    factors = (
        rv.window_trading_days * (365.0 / trading_days_per_year) / rv.window_calendar_days
    )
    return replace(rv, rv2=rv.rv2 * factors)


def _values_of(series) -> np.ndarray:
    if isinstance(series, RVSeries):
        return series.rv2
    if isinstance(series, DatedValues):
        return series.values
    raise TypeError(f"unsupported series type {type(series).__name__}")


def _intersect(a_dates, b_dates) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    common, ia, ib = np.intersect1d(a_dates, b_dates, return_indices=True)
    if common.size == 0:
        raise AlignmentError("series share no dates")
    return common, ia, ib


def build_ratio_series(
    rv,
    iv,
    mode: str,
    scale_to_unit_mean: bool = True,
    seed: Optional[int] = None,
) -> RatioSeries:
    """Pointwise ratio of two date-aligned series under one alignment mode.

    ``rv`` is the numerator (an RVSeries or DatedValues), ``iv`` the
    denominator. Under ``"random"`` the numerator values are permuted by one
    seeded Fisher-Yates shuffle before dividing, which destroys the pairing
    while preserving the marginal distribution. With ``scale_to_unit_mean``
    the finished series is divided by its own mean.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    dates, ia, ib = _intersect(
        rv.dates if hasattr(rv, "dates") else _as_dates(rv), iv.dates
    )
    num = _values_of(rv)[ia]
    den = _values_of(iv)[ib]
    if np.any(num == 0.0):
        raise DataQualityError(
            f"{int(np.sum(num == 0.0))} zero-variance window(s) in the numerator"
        )
    if np.any(den == 0.0):
        raise DataQualityError(
            f"{int(np.sum(den == 0.0))} zero value(s) in the denominator"
        )
    if mode == "random":
        if seed is None:
            raise ValueError("random mode requires a seed")
        rng = np.random.Generator(np.random.PCG64(seed))
        num = num[rng.permutation(num.size)]
    values = num / den
    if scale_to_unit_mean:
        values = values / values.mean()
    return RatioSeries(dates, values, mode, scale_to_unit_mean)


def invert_series(r: RatioSeries) -> RatioSeries:
    """Pointwise reciprocal; the unit-mean scaling is re-applied if flagged."""
    values = 1.0 / r.values
    if r.scaled_to_unit_mean:
        values = values / values.mean()
    return RatioSeries(r.dates, values, r.mode, r.scaled_to_unit_mean)
