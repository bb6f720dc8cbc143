"""Dataset ingestion: delimited monthly crime counts to contiguous series.

The expected file is header-bearing delimited text with Year, Month,
Category and Count columns (names remappable via the schema mapping) plus
any number of extra columns such as County, which are ignored: records are
summed statewide per category and month.  Weapon-category labels from the
California Crimes & Clearances export are canonicalized to short names;
unrecognized labels pass through untouched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .errors import MissingMonth, NegativeCount, ParseError
from .series import MonthStamp, TimeSeries

CATEGORY_LABELS = {
    "firearm": "Firearm",
    "knife or cutting instrument": "Knife",
    "knife": "Knife",
    "other weapon": "OtherWeapon",
    "otherweapon": "OtherWeapon",
    "other dangerous weapon": "OtherWeapon",
    "hands, fist, feet": "Hands",
    "hands, fists, feet": "Hands",
    "hands": "Hands",
}


def canonical_category(label: str) -> str:
    return CATEGORY_LABELS.get(label.strip().lower(), label.strip())


@dataclass(frozen=True)
class DatasetRecord:
    year: int
    month: int
    category: str
    count: int

    @property
    def stamp(self) -> MonthStamp:
        return MonthStamp(self.year, self.month)


def read_records(path: Path, schema: dict) -> list[DatasetRecord]:
    """Parse the file; errors carry 1-based line numbers."""
    path = Path(path)
    records = []
    with path.open(newline="") as handle:
        sample = handle.readline()
        if not sample.strip():
            raise ParseError(1, "empty input file")
        delimiter = "\t" if "\t" in sample else ","
        handle.seek(0)
        reader = csv.DictReader(handle, delimiter=delimiter)
        if reader.fieldnames is None:
            raise ParseError(1, "missing header row")
        header = {name.strip(): name for name in reader.fieldnames}
        columns = {}
        for field in ("year", "month", "category", "count"):
            wanted = schema[field]
            if wanted not in header:
                raise ParseError(
                    1, f"column {wanted!r} for {field} not in header {sorted(header)}"
                )
            columns[field] = header[wanted]
        for row in reader:
            line = reader.line_num
            try:
                year = int(str(row[columns["year"]]).strip())
                month = int(str(row[columns["month"]]).strip())
                raw_count = str(row[columns["count"]]).strip().replace(",", "")
                count = int(raw_count)
                label = str(row[columns["category"]])
            except (TypeError, ValueError, KeyError) as err:
                raise ParseError(line, f"unreadable record ({err})") from None
            if not 1 <= month <= 12:
                raise ParseError(line, f"month {month} outside 1..12")
            if count < 0:
                raise NegativeCount(f"line {line}: negative count {count}")
            records.append(
                DatasetRecord(year=year, month=month, category=canonical_category(label), count=count)
            )
    return records


def aggregate(
    records: list[DatasetRecord],
    period_from: MonthStamp,
    period_to: MonthStamp,
    categories: tuple[str, ...],
) -> dict[str, TimeSeries]:
    """Sum records per (category, month) over the period; gaps are fatal."""
    sums: dict[tuple[str, int], int] = {}
    seen: dict[tuple[str, int], bool] = {}
    lo, hi = period_from.index, period_to.index
    for rec in records:
        idx = rec.stamp.index
        if not lo <= idx <= hi:
            continue
        key = (rec.category, idx)
        sums[key] = sums.get(key, 0) + rec.count
        seen[key] = True
    n_months = hi - lo + 1
    out = {}
    for cat in categories:
        values = np.empty(n_months)
        for i in range(n_months):
            key = (cat, lo + i)
            if key not in seen:
                stamp = period_from.advance(i)
                raise MissingMonth(cat, stamp.year, stamp.month)
            values[i] = float(sums[key])
        out[cat] = TimeSeries(period_from, values)
    return out


def ingest(path: Path, config: PipelineConfig) -> dict[str, TimeSeries]:
    """Read, filter to the configured period and aggregate statewide."""
    records = read_records(path, config.schema)
    return aggregate(records, config.period_from, config.period_to, config.categories)


def annual_totals(series_by_category: dict[str, TimeSeries]) -> dict[int, int]:
    """Calendar-year sums over all categories (only full years reported)."""
    buckets: dict[int, float] = {}
    counts: dict[int, int] = {}
    for ts in series_by_category.values():
        for i, value in enumerate(ts.values):
            stamp = ts.start.advance(i)
            buckets[stamp.year] = buckets.get(stamp.year, 0.0) + float(value)
            counts[stamp.year] = counts.get(stamp.year, 0) + 1
    full = len(series_by_category) * 12
    return {year: int(round(total)) for year, total in sorted(buckets.items()) if counts[year] == full}
