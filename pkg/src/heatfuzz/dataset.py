"""Observation records: CSV I/O, outlier removal, summaries and splitting."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

ATTRIBUTES = ("rh", "t", "hi")


class DataError(ValueError):
    """Raised for malformed input data."""


@dataclass(frozen=True)
class Sample:
    """One observation: relative humidity (%), temperature and heat index (degC)."""

    rh: float
    t: float
    hi: float
    timestamp: str | None = None

    def __post_init__(self):
        for name in ATTRIBUTES:
            if not math.isfinite(getattr(self, name)):
                raise DataError(f"{name} must be finite, got {getattr(self, name)!r}")
        if not 0.0 <= self.rh <= 100.0:
            raise DataError(f"relative humidity {self.rh} outside [0, 100]")


@dataclass(frozen=True)
class Dataset:
    samples: tuple[Sample, ...] = ()
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def column(self, name: str) -> np.ndarray:
        if name not in ATTRIBUTES:
            raise KeyError(name)
        return np.fromiter((getattr(s, name) for s in self.samples), dtype=float, count=len(self.samples))

    @property
    def rh(self) -> np.ndarray:
        return self.column("rh")

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    @property
    def hi(self) -> np.ndarray:
        return self.column("hi")

    def subset(self, indices: Iterable[int], source: str | None = None) -> "Dataset":
        return Dataset(tuple(self.samples[i] for i in indices), self.source if source is None else source)

    @classmethod
    def from_arrays(cls, rh, t, hi, source: str = "", timestamps: Sequence[str] | None = None) -> "Dataset":
        rh, t, hi = (np.asarray(v, dtype=float) for v in (rh, t, hi))
        if not rh.shape == t.shape == hi.shape:
            raise DataError("column lengths differ")
        ts = [None] * len(rh) if timestamps is None else list(timestamps)
        return cls(
            tuple(Sample(float(a), float(b), float(c), s) for a, b, c, s in zip(rh, t, hi, ts)),
            source,
        )


@dataclass(frozen=True)
class AttributeStats:
    mean: float
    std: float
    min: float
    max: float


@dataclass(frozen=True)
class SummaryStats:
    rh: AttributeStats
    t: AttributeStats
    hi: AttributeStats
    n: int = field(default=0)

    def __getitem__(self, name: str) -> AttributeStats:
        return getattr(self, name)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_csv(path, has_header: bool | None = None) -> Dataset:
    """Read observations from ``path``.

    Rows are ``rh,t,hi`` or ``timestamp,rh,t,hi``. With ``has_header=None``
    the first row is treated as a header when none of its value fields are
    numeric. Rows with non-finite values or humidity outside [0, 100] are
    dropped as inconsistent entries; non-numeric fields raise ``DataError``.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(f.strip() for f in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    if not rows:
        return Dataset((), str(path))

    start = 0
    if has_header is None:
        first = rows[0]
        values = first[1:] if len(first) == 4 else first
        has_header = not any(_is_number(f) for f in values)
    if has_header:
        start = 1

    samples = []
    dropped = 0
    for lineno, row in enumerate(rows[start:], start=start + 1):
        fields = [f.strip() for f in row]
        if len(fields) == 4:
            timestamp, fields = fields[0], fields[1:]
        elif len(fields) == 3:
            timestamp = None
        else:
            raise DataError(f"{path}: row {lineno}: expected 3 or 4 columns, got {len(fields)}")
        try:
            rh, t, hi = (float(f) for f in fields)
        except ValueError:
            raise DataError(f"{path}: row {lineno}: non-numeric field in {','.join(row)!r}") from None
        try:
            samples.append(Sample(rh, t, hi, timestamp))
        except DataError as exc:
            logger.debug("dropping row %d: %s", lineno, exc)
            dropped += 1
    if dropped:
        logger.warning("%s: dropped %d inconsistent rows", path, dropped)
    return Dataset(tuple(samples), str(path))


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(d: Dataset, path) -> None:
    """Write ``d`` with a header, keeping the timestamp column when every row has one."""
    with_ts = len(d) > 0 and all(s.timestamp is not None for s in d)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["timestamp", "rh", "t", "hi"] if with_ts else ["rh", "t", "hi"])
        for s in d:
            row = [_fmt(s.rh), _fmt(s.t), _fmt(s.hi)]
            w.writerow([s.timestamp, *row] if with_ts else row)


def iqr_fences(values, k: float = 1.5) -> tuple[float, float]:
    q1, q3 = np.quantile(np.asarray(values, dtype=float), [0.25, 0.75], method="linear")
    iqr = q3 - q1
    return float(q1 - k * iqr), float(q3 + k * iqr)


def iqr_clean(d: Dataset, k: float = 1.5) -> tuple[Dataset, int]:
    """Drop every row with any attribute outside its ``[Q1 - k*IQR, Q3 + k*IQR]`` fence."""
    if len(d) < 4:
        raise DataError(f"IQR cleaning needs at least 4 rows, got {len(d)}")
    if not k > 0:
        raise ValueError(f"fence multiplier must be positive, got {k}")
    keep = np.ones(len(d), dtype=bool)
    for name in ATTRIBUTES:
        col = d.column(name)
        lo, hi = iqr_fences(col, k)
        keep &= (col >= lo) & (col <= hi)
    cleaned = d.subset(np.flatnonzero(keep))
    return cleaned, int(len(d) - len(cleaned))


def split_train_test(d: Dataset, train_fraction: float = 0.7, seed: int = 0) -> tuple[Dataset, Dataset]:
    if not 0 < train_fraction < 1:
        raise ValueError(f"train fraction must lie in (0, 1), got {train_fraction}")
    n = len(d)
    if n < 2:
        raise DataError(f"need at least 2 rows to split, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    n_train = math.floor(train_fraction * n)
    return d.subset(order[:n_train]), d.subset(order[n_train:])


def describe(d: Dataset) -> SummaryStats:
    if len(d) < 2:
        raise DataError("descriptive statistics need at least 2 rows")
    stats = {}
    for name in ATTRIBUTES:
        col = d.column(name)
        stats[name] = AttributeStats(
            mean=float(col.mean()), std=float(col.std(ddof=1)), min=float(col.min()), max=float(col.max())
        )
    return SummaryStats(n=len(d), **stats)


def pearson(x, y) -> float:
    """Product-moment correlation of two equal-length series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("correlation undefined for a constant series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def correlation_matrix(d: Dataset) -> dict[tuple[str, str], float]:
    cols = {name: d.column(name) for name in ATTRIBUTES}
    return {(a, b): 1.0 if a == b else pearson(cols[a], cols[b]) for a in ATTRIBUTES for b in ATTRIBUTES}
