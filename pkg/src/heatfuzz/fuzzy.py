"""Triangular membership functions and the low/mid/high partition of a variable."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

LABELS = ("low", "mid", "high")


@dataclass(frozen=True)
class Universe:
    """Closed interval ``[lo, hi]`` a variable lives on."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError(f"universe bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"degenerate universe [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2

    def clamp(self, x):
        return np.clip(x, self.lo, self.hi)


@dataclass(frozen=True)
class TriangularMf:
    """Triangle with left foot ``a``, peak ``b`` and right foot ``c``.

    ``a == b`` gives a left shoulder and ``b == c`` a right shoulder.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.a <= self.b <= self.c:
            raise ValueError(f"need a <= b <= c, got ({self.a}, {self.b}, {self.c})")
        if self.a == self.c:
            raise ValueError("triangle collapses to a point")

    def __call__(self, x):
        return membership(x, self)


@dataclass(frozen=True)
class MembershipGrades:
    low: float
    mid: float
    high: float

    def __getitem__(self, label: str) -> float:
        return getattr(self, label)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.low, self.mid, self.high)


@dataclass(frozen=True)
class Partition:
    universe: Universe
    low: TriangularMf
    mid: TriangularMf
    high: TriangularMf

    def __getitem__(self, label: str) -> TriangularMf:
        if label not in LABELS:
            raise KeyError(label)
        return getattr(self, label)

    def grade(self, x, label: str):
        """Grade of ``x`` (clamped to the universe) in region ``label``."""
        return membership(self.universe.clamp(x), self[label])


def universe_from_data(values: Iterable[float]) -> Universe:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.size < 2:
        raise ValueError("need at least two values to form a universe")
    return Universe(float(arr.min()), float(arr.max()))


def build_partition(u: Universe) -> Partition:
    m = u.midpoint
    return Partition(
        universe=u,
        low=TriangularMf(u.lo, u.lo, m),
        mid=TriangularMf(u.lo, m, u.hi),
        high=TriangularMf(m, u.hi, u.hi),
    )


def membership(x, mf: TriangularMf):
    """Triangle formula ``max(min((x-a)/(b-a), (c-x)/(c-b)), 0)``.

    A slope whose denominator vanishes is dropped from the ``min``, which
    turns the degenerate sides of the low/high triangles into shoulders.
    Accepts scalars or arrays; scalars come back as ``float``.
    """
    xs = np.asarray(x, dtype=float)
    a, b, c = mf.a, mf.b, mf.c
    grade = np.full(xs.shape, np.inf)
    if b > a:
        grade = np.minimum(grade, (xs - a) / (b - a))
    else:
        grade = np.where(xs < a, 0.0, grade)
    if c > b:
        grade = np.minimum(grade, (c - xs) / (c - b))
    else:
        grade = np.where(xs > c, 0.0, grade)
    grade = np.clip(grade, 0.0, 1.0)
    if grade.ndim == 0:
        return float(grade)
    return grade


def fuzzify(x: float, p: Partition) -> MembershipGrades:
    xc = float(p.universe.clamp(x))
    return MembershipGrades(*(membership(xc, p[label]) for label in LABELS))


def classify_max(g: MembershipGrades) -> str:
    """Label with the largest grade; ties go to the earlier of low, mid, high."""
    grades = g.as_tuple()
    best = max(grades)
    if best <= 0:
        raise ValueError("all membership grades are zero")
    return LABELS[grades.index(best)]
