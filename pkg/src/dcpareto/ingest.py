"""Case-count CSV ingestion and sequential analysis windows.

Three layouts are understood:

* WHO COVID-19 daily: ``Date_reported``, ``Country``, ``New_cases``
* OWID mpox: ``location``, ``date``, ``new_cases``
* generic: ``date,count`` (written by this package)

Only the named columns are read; extra columns are ignored. Dates must be ISO
``YYYY-MM-DD``. Empty counts become 0, negative counts (retroactive
corrections) are clamped to 0 and tallied in ``CountSeries.n_clamped``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
import warnings
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Iterable

import numpy as np

from .errors import EmptyWindowError, FormatError, RowError
from .fit import CountSample

__all__ = [
    "Source",
    "CountSeries",
    "CutoffPlan",
    "parse_who_csv",
    "parse_owid_csv",
    "parse_generic_csv",
    "write_generic_csv",
    "window",
    "sequential_windows",
    "SINGAPORE_COVID_PLAN",
    "FRANCE_MPOX_PLAN",
]


class Source(enum.Enum):
    WHO_COVID = "who"
    OWID_MPOX = "owid"
    GENERIC = "generic"


_ISO_DATE = re.compile(r"\d{4}-\d{2}-\d{2}")


def parse_iso_date(text: str) -> date:
    text = text.strip()
    if not _ISO_DATE.fullmatch(text):
        raise ValueError(f"not an ISO date: {text!r}")
    return datetime.strptime(text, "%Y-%m-%d").date()


@dataclass(frozen=True)
class CountSeries:
    location: str
    dates: tuple[date, ...]
    counts: tuple[int, ...]
    source: Source = Source.GENERIC
    n_clamped: int = field(default=0, compare=False)

    def __post_init__(self):
        if len(self.dates) != len(self.counts):
            raise ValueError("dates and counts differ in length")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True)
class CutoffPlan:
    start_date: date
    cutoffs: tuple[date, ...]

    def __post_init__(self):
        object.__setattr__(self, "cutoffs", tuple(self.cutoffs))
        if not self.cutoffs:
            raise ValueError("a plan needs at least one cutoff")
        if any(c <= self.start_date for c in self.cutoffs):
            raise ValueError("every cutoff must come after the start date")
        if any(b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ValueError("cutoffs must be increasing")


SINGAPORE_COVID_PLAN = CutoffPlan(
    date(2021, 4, 1),
    (
        date(2021, 7, 1),
        date(2021, 10, 1),
        date(2022, 1, 1),
        date(2022, 4, 1),
        date(2022, 7, 1),
        date(2022, 10, 1),
        date(2023, 1, 1),
    ),
)

# the second cutoff is sometimes listed as 8/1/2021; the series starts in 2022
FRANCE_MPOX_PLAN = CutoffPlan(
    date(2022, 5, 19),
    (
        date(2022, 7, 1),
        date(2022, 8, 1),
        date(2022, 9, 1),
        date(2022, 10, 1),
        date(2022, 11, 1),
        date(2022, 12, 1),
        date(2023, 1, 1),
    ),
)


def _parse_count(text: str, line: int) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        value = float(text)
    except ValueError:
        raise RowError(line, f"non-numeric count {text!r}") from None
    if not math.isfinite(value) or value != math.floor(value):
        raise RowError(line, f"count {text!r} is not an integer")
    return int(value)


def _read_rows(text: str | bytes, date_col: str, key_col: str | None, count_col: str, source: Source):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    text = text.lstrip("\ufeff")
    reader = csv.DictReader(io.StringIO(text, newline=""))
    header = [h.strip() for h in (reader.fieldnames or [])]
    reader.fieldnames = header
    for col in (date_col, key_col, count_col):
        if col is not None and col not in header:
            raise FormatError(f"missing required column {col!r}")

    rows: dict[str, dict[date, int]] = {}
    clamped: dict[str, int] = {}
    for row in reader:
        line = reader.line_num
        if not any((v or "").strip() for v in row.values()):
            continue
        key = (row.get(key_col) or "").strip() if key_col else ""
        raw_date = row.get(date_col) or ""
        try:
            day = parse_iso_date(raw_date)
        except ValueError:
            raise RowError(line, f"unparseable date {raw_date!r}") from None
        count = _parse_count(row.get(count_col) or "", line)
        per_key = rows.setdefault(key, {})
        if day in per_key:
            raise RowError(line, f"duplicate date {day.isoformat()} for {key!r}")
        if count < 0:
            clamped[key] = clamped.get(key, 0) + 1
            count = 0
        per_key[day] = count

    out = {}
    for key, per_key in rows.items():
        days = sorted(per_key)
        n_clamped = clamped.get(key, 0)
        if n_clamped:
            warnings.warn(f"{key or 'series'}: {n_clamped} negative counts clamped to 0", stacklevel=3)
        out[key] = CountSeries(key, tuple(days), tuple(per_key[d] for d in days), source, n_clamped)
    return out


def parse_who_csv(text: str | bytes) -> dict[str, CountSeries]:
    """One series per ``Country`` from a WHO daily export."""
    return _read_rows(text, "Date_reported", "Country", "New_cases", Source.WHO_COVID)


def parse_owid_csv(text: str | bytes) -> dict[str, CountSeries]:
    """One series per ``location`` from an OWID mpox export."""
    return _read_rows(text, "date", "location", "new_cases", Source.OWID_MPOX)


def parse_generic_csv(text: str | bytes, location: str = "") -> CountSeries:
    series = _read_rows(text, "date", None, "count", Source.GENERIC)
    if not series:
        raise FormatError("no data rows")
    s = series[""]
    return CountSeries(location, s.dates, s.counts, Source.GENERIC, s.n_clamped)


def write_generic_csv(series: CountSeries | tuple[Iterable[date], Iterable[int]]) -> str:
    if isinstance(series, CountSeries):
        dates, counts = series.dates, series.counts
    else:
        dates, counts = series
    buf = io.StringIO()
    buf.write("date,count\n")
    for d, c in zip(dates, counts):
        buf.write(f"{d.isoformat()},{int(c)}\n")
    return buf.getvalue()


def window(series: CountSeries, start: date, cutoff: date) -> CountSample:
    """Counts dated within ``[start, cutoff]`` (both ends inclusive)."""
    if start > cutoff:
        raise ValueError("window start is after its cutoff")
    picked = [c for d, c in zip(series.dates, series.counts) if start <= d <= cutoff]
    if not picked:
        raise EmptyWindowError(f"no observations between {start} and {cutoff}")
    return CountSample(np.asarray(picked, dtype=np.int64))


def sequential_windows(series: CountSeries, plan: CutoffPlan) -> list[tuple[date, CountSample]]:
    """Cumulative windows from ``plan.start_date`` to each cutoff."""
    return [(cut, window(series, plan.start_date, cut)) for cut in plan.cutoffs]
