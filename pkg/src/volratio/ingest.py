"""CSV loading, manifest parsing and calendar alignment.

Input files are daily `date,close` CSVs with a header row, ISO-8601 dates
and plain decimal values (the shape CBOE and FRED exports take after
trivial preprocessing). FRED's "." placeholder and empty cells count as
missing and are dropped with a logged warning.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import AlignmentError, IngestError
from .volatility import DatedValues, IndexSeries, PriceSeries, RVSeries

__all__ = [
    "DEFAULT_DATE_FROM",
    "DEFAULT_DATE_TO",
    "Manifest",
    "load_manifest",
    "load_price_csv",
    "load_index_csv",
    "save_price_csv",
    "restrict",
    "align",
]

log = logging.getLogger(__name__)

_MISSING = {"", ".", "na", "n/a", "nan", "null"}

DEFAULT_DATE_FROM = dt.date(1990, 1, 2)
DEFAULT_DATE_TO = dt.date(2016, 12, 30)


def _read_rows(path: Union[str, Path], column_name: str) -> list[tuple[dt.date, float]]:
    path = Path(path)
    if not path.exists():
        raise IngestError(f"input file does not exist: {path}")
    rows: list[tuple[dt.date, float]] = []
    dropped = 0
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: file is empty") from None
        header = [h.strip().lower() for h in header]
        try:
            date_col = header.index("date")
            value_col = header.index(column_name.lower())
        except ValueError:
            raise IngestError(
                f"{path}: header must contain 'date' and {column_name!r}, got {header}"
            ) from None
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if max(date_col, value_col) >= len(row):
                raise IngestError(f"{path}:{lineno}: expected at least {max(date_col, value_col) + 1} columns")
            raw_value = row[value_col].strip()
            if raw_value.lower() in _MISSING:
                dropped += 1
                continue
            try:
                date = dt.date.fromisoformat(row[date_col].strip())
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: bad date {row[date_col]!r}: {exc}") from None
            try:
                value = float(raw_value)
            except ValueError:
                raise IngestError(f"{path}:{lineno}: bad value {raw_value!r}") from None
            if not np.isfinite(value):
                dropped += 1
                continue
            rows.append((date, value))
    if dropped:
        log.warning("%s: dropped %d row(s) with missing values", path, dropped)
    if not rows:
        raise IngestError(f"{path}: no usable rows")
    # Sort and deduplicate, keeping the first occurrence of each date.
    rows.sort(key=lambda r: r[0])
    deduped: list[tuple[dt.date, float]] = []
    for date, value in rows:
        if deduped and deduped[-1][0] == date:
            continue
        deduped.append((date, value))
    if len(deduped) != len(rows):
        log.warning("%s: dropped %d duplicate date(s)", path, len(rows) - len(deduped))
    return deduped


def load_price_csv(path: Union[str, Path], column_name: str = "close") -> PriceSeries:
    """Load a daily close CSV into a sorted, deduplicated price series."""
    rows = _read_rows(path, column_name)
    dates = np.array([r[0] for r in rows], dtype="datetime64[D]")
    return PriceSeries(dates, np.array([r[1] for r in rows]))


def load_index_csv(path: Union[str, Path], column_name: str = "close") -> IndexSeries:
    """Load a volatility-index CSV into a sorted, deduplicated level series."""
    rows = _read_rows(path, column_name)
    dates = np.array([r[0] for r in rows], dtype="datetime64[D]")
    return IndexSeries(dates, np.array([r[1] for r in rows]))


def save_price_csv(series: PriceSeries, path: Union[str, Path]) -> None:
    """Write the canonical `date,close` form (round-trips through load)."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", "close"])
        for date, close in zip(series.dates, series.closes):
            writer.writerow([str(date), repr(float(close))])


def restrict(series, date_from: dt.date, date_to: dt.date):
    """Subset a dated series to [date_from, date_to], inclusive."""
    lo = np.datetime64(date_from, "D")
    hi = np.datetime64(date_to, "D")
    mask = (series.dates >= lo) & (series.dates <= hi)
    if not mask.any():
        raise AlignmentError(
            f"no observations between {date_from} and {date_to}"
        )
    return _take(series, np.flatnonzero(mask))


def _take(series, idx: np.ndarray):
    if isinstance(series, PriceSeries):
        return PriceSeries(series.dates[idx], series.closes[idx])
    if isinstance(series, IndexSeries):
        return IndexSeries(series.dates[idx], series.levels[idx])
    if isinstance(series, DatedValues):
        return DatedValues(series.dates[idx], series.values[idx])
    if isinstance(series, RVSeries):
        return replace(
            series,
            dates=series.dates[idx],
            rv2=series.rv2[idx],
            window_calendar_days=series.window_calendar_days[idx],
        )
    raise TypeError(f"unsupported series type {type(series).__name__}")


def align(a, b):
    """Restrict two dated series to their common dates.

    Returns the pair in the same order; the resulting date vectors are
    identical. The count of dropped observations is logged per side.
    """
    common, ia, ib = np.intersect1d(a.dates, b.dates, return_indices=True)
    if common.size == 0:
        raise AlignmentError("series share no dates")
    dropped_a = len(a.dates) - common.size
    dropped_b = len(b.dates) - common.size
    if dropped_a or dropped_b:
        log.info("align: dropped %d date(s) from left, %d from right", dropped_a, dropped_b)
    return _take(a, ia), _take(b, ib)


@dataclass(frozen=True)
class Manifest:
    """File paths and date range for one pipeline run."""

    spx: Path
    vix: Optional[Path] = None
    vxo: Optional[Path] = None
    date_from: dt.date = DEFAULT_DATE_FROM
    date_to: dt.date = DEFAULT_DATE_TO

    def index_path(self, index: str) -> Path:
        path = {"vix": self.vix, "vxo": self.vxo}.get(index)
        if path is None:
            raise IngestError(f"manifest does not name a file for index {index!r}")
        return path


def load_manifest(path: Union[str, Path]) -> Manifest:
    """Parse a key=value manifest naming the input files and date range.

    Recognized keys: spx, vix, vxo, from, to. Blank lines and '#' comments
    are skipped. Relative paths resolve against the manifest's directory.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"manifest does not exist: {path}")
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise IngestError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key not in ("spx", "vix", "vxo", "from", "to"):
            raise IngestError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    if "spx" not in values:
        raise IngestError(f"{path}: manifest must name an 'spx' file")

    def resolve(key: str) -> Optional[Path]:
        if key not in values:
            return None
        p = Path(values[key])
        return p if p.is_absolute() else (path.parent / p)

    def parse_date(key: str, default: dt.date) -> dt.date:
        if key not in values:
            return default
        try:
            return dt.date.fromisoformat(values[key])
        except ValueError as exc:
            raise IngestError(f"{path}: bad {key} date {values[key]!r}: {exc}") from None

    date_from = parse_date("from", DEFAULT_DATE_FROM)
    date_to = parse_date("to", DEFAULT_DATE_TO)
    if date_from > date_to:
        raise IngestError(f"{path}: date range is empty ({date_from} > {date_to})")
    return Manifest(
        spx=resolve("spx"),
        vix=resolve("vix"),
        vxo=resolve("vxo"),
        date_from=date_from,
        date_to=date_to,
    )
