"""Zero-order Sugeno prediction over a learned rule base, plus consequent tuning."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .fuzzy import LABELS, Universe

if TYPE_CHECKING:
    from .dataset import Dataset
    from .rules import RuleBase


@dataclass(frozen=True)
class ConsequentCenters:
    """Crisp value of each heat-index region: base point of full membership plus a tuned offset."""

    base_low: float
    base_mid: float
    base_high: float
    offset_low: float = 0.0
    offset_mid: float = 0.0
    offset_high: float = 0.0

    def __post_init__(self):
        for label in LABELS:
            off = getattr(self, f"offset_{label}")
            if not -1.0 <= off <= 1.0:
                raise ValueError(f"offset for {label} must lie in [-1, 1], got {off}")

    def base(self, label: str) -> float:
        return getattr(self, f"base_{label}")

    def offset(self, label: str) -> float:
        return getattr(self, f"offset_{label}")

    def effective(self, label: str) -> float:
        return self.base(label) + self.offset(label)

    @property
    def effective_all(self) -> np.ndarray:
        return np.array([self.effective(label) for label in LABELS])

    @property
    def offsets(self) -> tuple[float, float, float]:
        return (self.offset_low, self.offset_mid, self.offset_high)

    def with_offsets(self, low: float, mid: float, high: float) -> "ConsequentCenters":
        return replace(self, offset_low=low, offset_mid=mid, offset_high=high)


def consequent_centers(hi_universe: Universe) -> ConsequentCenters:
    # Each triangle reaches 1 at exactly one point: lo, the midpoint, hi.
    return ConsequentCenters(hi_universe.lo, hi_universe.midpoint, hi_universe.hi)


def _grade_table(values, partition) -> dict[str, np.ndarray]:
    x = partition.universe.clamp(np.asarray(values, dtype=float))
    return {label: partition.grade(x, label) for label in LABELS}


def fulfillment_matrix(rh, t, rb: "RuleBase") -> np.ndarray:
    """Degrees of fulfillment, shape ``(n_inputs, n_rules)``."""
    g_rh = _grade_table(np.atleast_1d(rh), rb.rh)
    g_t = _grade_table(np.atleast_1d(t), rb.t)
    if not rb.rules:
        return np.zeros((len(g_rh["low"]), 0))
    return np.column_stack([g_rh[r.rh_label] * g_t[r.t_label] for r in rb.rules])


def fulfillment(rh: float, t: float, rb: "RuleBase") -> np.ndarray:
    """Degree of fulfillment of every rule for a single input, in rule-base order."""
    if not rb.rules:
        raise ValueError("rule base is empty")
    return fulfillment_matrix(rh, t, rb)[0]


def region_weights(d: np.ndarray, consequents: Sequence[str]) -> np.ndarray:
    """Share of the total fulfillment per consequent region, shape ``(n, 3)``.

    Rows whose fulfillment sums to zero come back all-zero.
    """
    d = np.atleast_2d(np.asarray(d, dtype=float))
    per_region = np.zeros((d.shape[0], len(LABELS)))
    for j, label in enumerate(LABELS):
        cols = [r for r, c in enumerate(consequents) if c == label]
        if cols:
            per_region[:, j] = d[:, cols].sum(axis=1)
    total = per_region.sum(axis=1)
    out = np.zeros_like(per_region)
    ok = total > 0
    out[ok] = per_region[ok] / total[ok, None]
    return out


def defuzzify(d, consequents: Sequence[str], centers: ConsequentCenters) -> float:
    """Fulfillment-weighted mean of the consequent centers.

    Weights are pooled per consequent region before dividing, so a single
    firing region reproduces its center exactly. The result is clamped to
    the center range to absorb last-ulp rounding of the convex combination.
    """
    w = region_weights(d, consequents)
    if not w.any():
        raise ZeroDivisionError("no rule fires")
    c = centers.effective_all
    return float(_combine(w, c, c[[LABELS.index(x) for x in consequents]])[0])


def _fallback_weights(rh, t, rb: "RuleBase") -> np.ndarray:
    # One-hot on the consequent of the rule with the largest antecedent grade sum.
    g_rh = _grade_table(rh, rb.rh)
    g_t = _grade_table(t, rb.t)
    score = np.column_stack([g_rh[r.rh_label] + g_t[r.t_label] for r in rb.rules])
    best = np.argmax(score, axis=1)  # first maximum wins
    cons = np.array([LABELS.index(r.hi_label) for r in rb.rules])[best]
    w = np.zeros((len(best), len(LABELS)))
    w[np.arange(len(best)), cons] = 1.0
    return w


def prediction_weights(rh, t, rb: "RuleBase") -> tuple[np.ndarray, np.ndarray]:
    """Per-input region weights (rows sum to one) and the fallback mask.

    Predictions are ``weights @ effective_centers``; keeping the weights
    separate makes predictions linear in the center offsets.
    """
    if not rb.rules:
        raise ValueError("rule base is empty")
    rh = np.atleast_1d(np.asarray(rh, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    d = fulfillment_matrix(rh, t, rb)
    w = region_weights(d, [r.hi_label for r in rb.rules])
    fallback = ~w.any(axis=1)
    if fallback.any():
        w[fallback] = _fallback_weights(rh[fallback], t[fallback], rb)
    return w, fallback


def _combine(w: np.ndarray, centers: np.ndarray, used: np.ndarray) -> np.ndarray:
    # Explicit sum keeps results independent of batch size (BLAS kernels are not).
    pred = w[:, 0] * centers[0] + w[:, 1] * centers[1] + w[:, 2] * centers[2]
    return np.clip(pred, used.min(), used.max())


def _used_centers(rb: "RuleBase", centers: np.ndarray) -> np.ndarray:
    return centers[sorted({LABELS.index(r.hi_label) for r in rb.rules})]


def predict_arrays(rh, t, rb: "RuleBase") -> tuple[np.ndarray, np.ndarray]:
    w, fallback = prediction_weights(rh, t, rb)
    c = rb.centers.effective_all
    return _combine(w, c, _used_centers(rb, c)), fallback


def predict_one(rh: float, t: float, rb: "RuleBase") -> tuple[float, bool]:
    pred, fallback = predict_arrays(rh, t, rb)
    return float(pred[0]), bool(fallback[0])


def predict_batch(samples: "Dataset", rb: "RuleBase") -> tuple[list[float], int]:
    """Predict every sample in order; returns predictions and the fallback count."""
    if len(samples) == 0:
        return [], 0
    pred, fallback = predict_arrays(samples.rh, samples.t, rb)
    return pred.tolist(), int(fallback.sum())


def offset_grid(step: float) -> np.ndarray:
    """Symmetric grid ``k * step`` covering [-1, 1], always containing 0."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    m = math.floor(1.0 / step + 1e-9)
    return np.clip(np.arange(-m, m + 1) * step, -1.0, 1.0)


def optimize_offsets(rb: "RuleBase", train: "Dataset", step: float = 0.05) -> "RuleBase":
    """Exhaustive search of per-region center offsets in [-1, 1]^3.

    Candidates are ranked by training R^2 (highest first), then RMSE, then
    the L1 size of the offset triple, then lexicographically.
    """
    if len(train) == 0:
        raise ValueError("training set is empty")
    grid = offset_grid(step)
    cand = np.array(list(itertools.product(grid, repeat=3)))

    y = train.hi
    w, _ = prediction_weights(train.rh, train.t, rb)
    base = np.array([rb.centers.base(label) for label in LABELS])
    # Residual at offset o is e0 - w @ o, so SSE is a quadratic form in o.
    e0 = y - w @ base
    gram = w.T @ w
    lin = w.T @ e0
    sse = float(e0 @ e0) - 2.0 * cand @ lin + np.einsum("ij,jk,ik->i", cand, gram, cand)
    sse = np.maximum(sse, 0.0)
    n = len(y)
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - sse / sst if sst > 0 else -sse
    rmse = np.sqrt(sse / n)
    l1 = np.abs(cand).sum(axis=1)
    order = np.lexsort((cand[:, 2], cand[:, 1], cand[:, 0], l1, rmse, -r2))
    best = cand[order[0]]

    # Quadratic-form rounding must never pick something worse than no offsets.
    def direct_sse(o):
        c = base + o
        return float(((y - _combine(w, c, _used_centers(rb, c))) ** 2).sum())

    if direct_sse(best) > direct_sse(np.zeros(3)):
        best = np.zeros(3)
    return replace(rb, centers=rb.centers.with_offsets(*(float(v) for v in best)))
