"""Synthetic growth-room style observations built on the NWS heat index equation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset

SAMPLE_INTERVAL_S = 50


def c_to_f(c):
    return c * 9.0 / 5.0 + 32.0


def f_to_c(f):
    return (f - 32.0) * 5.0 / 9.0


def heat_index_f(t_f: float, rh: float) -> float:
    """NWS heat index in degF.

    Uses the Steadman approximation unless its average with the air
    temperature reaches 80 degF, in which case the Rothfusz regression with
    its low- and high-humidity adjustments takes over.
    https://www.wpc.ncep.noaa.gov/html/heatindex_equation.shtml
    """
    if not 0.0 <= rh <= 100.0:
        raise ValueError(f"relative humidity {rh} outside [0, 100]")
    if not math.isfinite(t_f):
        raise ValueError(f"temperature must be finite, got {t_f}")
    simple = 0.5 * (t_f + 61.0 + (t_f - 68.0) * 1.2 + rh * 0.094)
    averaged = (simple + t_f) / 2.0
    if averaged < 80.0:
        return averaged

    t, r = t_f, rh
    hi = (
        -42.379
        + 2.04901523 * t
        + 10.14333127 * r
        - 0.22475541 * t * r
        - 0.00683783 * t * t
        - 0.05481717 * r * r
        + 0.00122874 * t * t * r
        + 0.00085282 * t * r * r
        - 0.00000199 * t * t * r * r
    )
    if r < 13.0 and 80.0 <= t <= 112.0:
        hi -= ((13.0 - r) / 4.0) * math.sqrt((17.0 - abs(t - 95.0)) / 17.0)
    elif r > 85.0 and 80.0 <= t <= 87.0:
        hi += ((r - 85.0) / 10.0) * ((87.0 - t) / 5.0)
    return hi


def heat_index_noaa(t: float, rh: float) -> float:
    """Heat index in degC for air temperature ``t`` (degC) and humidity ``rh`` (%)."""
    return f_to_c(heat_index_f(c_to_f(t), rh))


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    seed: int
    rh_range: tuple[float, float] = (68.0, 84.0)
    t_range: tuple[float, float] = (23.0, 26.0)
    noise_std: float = 0.0
    walk: bool = False
    quantize: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        for name in ("rh_range", "t_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must be a non-degenerate interval, got ({lo}, {hi})")
        if self.rh_range[0] < 0 or self.rh_range[1] > 100:
            raise ValueError("rh_range must lie within [0, 100]")


def _reflect(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    span = hi - lo
    y = np.mod(x - lo, 2 * span)
    return lo + np.where(y > span, 2 * span - y, y)


def _draw(rng: np.random.Generator, n: int, lo: float, hi: float, walk: bool) -> np.ndarray:
    if not walk:
        return rng.uniform(lo, hi, n)
    # Bounded random walk; step size keeps a full sweep of the range to a few hundred samples.
    steps = rng.normal(0.0, 0.02 * (hi - lo), n)
    steps[0] = rng.uniform(lo, hi)
    return _reflect(np.cumsum(steps), lo, hi)


def generate(cfg: GeneratorConfig) -> Dataset:
    rng = np.random.default_rng(cfg.seed)
    rh = _draw(rng, cfg.n, *cfg.rh_range, cfg.walk)
    t = _draw(rng, cfg.n, *cfg.t_range, cfg.walk)
    if cfg.quantize:
        rh = np.clip(np.rint(rh), *cfg.rh_range)
        t = np.clip(np.rint(t), *cfg.t_range)
    hi = np.array([heat_index_noaa(a, b) for a, b in zip(t, rh)])
    if cfg.noise_std > 0:
        hi = hi + rng.normal(0.0, cfg.noise_std, cfg.n)
    stamps = [str(i * SAMPLE_INTERVAL_S) for i in range(cfg.n)]
    return Dataset.from_arrays(rh, t, hi, source=f"synth(seed={cfg.seed})", timestamps=stamps)
