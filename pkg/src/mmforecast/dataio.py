"""CSV ingestion, cleaning and the fortnight merge."""
import bisect
import csv
import logging
import math
from dataclasses import dataclass, fields
from datetime import date, datetime
from pathlib import Path

import numpy as np

from .errors import DataError, RowError, SchemaError, SizeError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BankRatesRecord:
    fortnight_ended: date
    prr: float
    rrr: float
    crr: float

    @property
    def key(self):
        return self.fortnight_ended


@dataclass(frozen=True)
class StockMonthlyRecord:
    month: date
    open: float
    high: float
    low: float
    close: float

    @property
    def key(self):
        return self.month


@dataclass(frozen=True)
class MoneyMarketRecord:
    fortnight_ended: date
    total_outstanding: float
    volume: float
    min_roi: float
    max_roi: float

    @property
    def key(self):
        return self.fortnight_ended


@dataclass(frozen=True)
class MergedObservation:
    fortnight_ended: date
    volume: float
    min_roi: float
    max_roi: float
    year: int
    month: int
    day: int
    open: float
    close: float
    prr: float
    rrr: float
    crr: float


# schema name -> (record class, CSV header in file order)
SCHEMAS = {
    "bank_rates": (BankRatesRecord, ["FortnightEnded", "PRR", "RRR", "CRR"]),
    "stock_monthly": (StockMonthlyRecord, ["Month", "Open", "High", "Low", "Close"]),
    "money_market": (MoneyMarketRecord,
                     ["FortnightEnded", "TotalAmountOutstanding", "Volume", "MinROI", "MaxROI"]),
}

MERGED_COLUMNS = [f.name for f in fields(MergedObservation)]
PREDICTORS = ["min_roi", "max_roi", "open", "close", "prr", "rrr", "crr"]

_DATE_FORMATS = ("%Y-%m-%d", "%b. %d, %Y", "%b %d, %Y", "%B %d, %Y", "%d-%m-%Y", "%Y/%m/%d")


def parse_date(text):
    """Parse ISO dates and the ``Sep. 13, 2019`` style used by RBI tables."""
    text = text.strip()
    cleaned = text.replace("Sept.", "Sep.")
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(cleaned, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r}")


def _parse_number(text):
    value = float(text.strip().replace(",", ""))
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {text!r}")
    return value


def _split_row(row, width):
    # "Sep. 13, 2019" written without quotes spills into two cells
    if len(row) == width + 1:
        joined = f"{row[0].strip()}, {row[1].strip()}"
        try:
            parse_date(joined)
        except ValueError:
            return row
        return [joined] + row[2:]
    return row


def _validate(record, line):
    if isinstance(record, BankRatesRecord):
        if min(record.prr, record.rrr, record.crr) < 0:
            raise RowError("bank rates must be non-negative", line)
    elif isinstance(record, StockMonthlyRecord):
        if min(record.open, record.high, record.low, record.close) <= 0:
            raise RowError("stock prices must be positive", line)
        if record.low > min(record.open, record.close) or record.high < max(record.open, record.close):
            raise RowError("stock low/high inconsistent with open/close", line)
    elif isinstance(record, MoneyMarketRecord):
        if record.volume < 0:
            raise RowError("volume must be non-negative", line)
        if record.min_roi > record.max_roi:
            raise RowError("MinROI exceeds MaxROI", line)


def ingest_table(path, schema):
    """Read one source CSV into a list of records.

    The header must match the schema's column names exactly. Dates may be ISO
    or ``Mon. D, YYYY``; both normalise to :class:`datetime.date`.
    """
    if schema not in SCHEMAS:
        raise SchemaError(f"unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}")
    cls, header = SCHEMAS[schema]
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh, skipinitialspace=True)
        try:
            found = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path}: missing header row") from None
        for i, expected in enumerate(header):
            got = found[i] if i < len(found) else "<missing>"
            if got != expected:
                raise SchemaError(f"{path}: column {i + 1} is {got!r}, expected {expected!r}")
        if len(found) > len(header):
            raise SchemaError(f"{path}: unexpected extra column {found[len(header)]!r}")

        records = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            row = _split_row(row, len(header))
            if len(row) != len(header):
                raise RowError(f"expected {len(header)} fields, got {len(row)}", line)
            try:
                values = [parse_date(row[0])] + [_parse_number(c) for c in row[1:]]
            except ValueError as exc:
                raise RowError(str(exc), line) from None
            record = cls(*values)
            _validate(record, line)
            records.append(record)
    return records


def write_table(records, path, schema):
    """Write records back in the schema's CSV layout with ISO dates."""
    cls, header = SCHEMAS[schema]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rec in records:
            values = [getattr(rec, f.name) for f in fields(cls)]
            writer.writerow([values[0].isoformat()] + [repr(float(v)) for v in values[1:]])


def dedupe_sort(records):
    """Drop repeated dates (first occurrence wins) and sort ascending."""
    seen = {}
    for rec in records:
        seen.setdefault(rec.key, rec)
    return [seen[k] for k in sorted(seen)]


def merge_fortnight(mm, stock, rates, stats=None):
    """Join the three tables on the money-market fortnight date.

    Stock open/close come from the monthly row of the same calendar month.
    Bank rates are joined as-of: the latest rates row dated on or before the
    fortnight. Fortnights with no stock month or no earlier rates row are
    dropped; the count lands in ``stats["dropped"]`` when a dict is passed.
    """
    by_month = {(s.month.year, s.month.month): s for s in stock}
    rate_dates = [r.fortnight_ended for r in rates]
    merged = []
    dropped = 0
    for rec in mm:
        d = rec.fortnight_ended
        month = by_month.get((d.year, d.month))
        idx = bisect.bisect_right(rate_dates, d) - 1
        if month is None or idx < 0:
            dropped += 1
            continue
        rate = rates[idx]
        merged.append(MergedObservation(
            fortnight_ended=d, volume=rec.volume, min_roi=rec.min_roi, max_roi=rec.max_roi,
            year=d.year, month=d.month, day=d.day, open=month.open, close=month.close,
            prr=rate.prr, rrr=rate.rrr, crr=rate.crr,
        ))
    if dropped:
        log.warning("merge dropped %d fortnight(s) without stock month or prior rates", dropped)
    if stats is not None:
        stats["dropped"] = dropped
    return merged


def load_merged(mm_path, stock_path, rates_path, stats=None):
    """Ingest, clean and merge the three source files."""
    mm = dedupe_sort(ingest_table(mm_path, "money_market"))
    stock = dedupe_sort(ingest_table(stock_path, "stock_monthly"))
    rates = dedupe_sort(ingest_table(rates_path, "bank_rates"))
    return merge_fortnight(mm, stock, rates, stats=stats)


def split_train_validation(rows, train_fraction=0.8, mode="chronological", seed=0):
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = len(rows)
    if n < 2:
        raise SizeError(f"need at least 2 rows to split, got {n}")
    n_train = int(math.floor(train_fraction * n))
    if mode == "chronological":
        order = np.arange(n)
    elif mode == "shuffled":
        order = np.random.default_rng(seed).permutation(n)
    else:
        raise ValueError(f"unknown split mode {mode!r}")
    rows = list(rows)
    return [rows[i] for i in order[:n_train]], [rows[i] for i in order[n_train:]]


def to_matrix(rows, columns):
    """Stack the named attributes of ``rows`` into an (n, k) float array."""
    return np.array([[float(getattr(r, c)) for c in columns] for r in rows], dtype=float).reshape(len(rows), len(columns))


def write_merged(rows, path):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MERGED_COLUMNS)
        for r in rows:
            writer.writerow([getattr(r, c).isoformat() if c == "fortnight_ended" else getattr(r, c)
                             for c in MERGED_COLUMNS])
