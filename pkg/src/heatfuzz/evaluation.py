"""Goodness-of-fit metrics, the regression F-test and a linear baseline."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .inference import predict_batch


@dataclass(frozen=True)
class FTest:
    f_stat: float
    df1: int
    df2: int
    p_value: float


@dataclass(frozen=True)
class Metrics:
    r2: float
    rmse: float
    mae: float
    f_stat: float
    df1: int
    df2: int
    p_value: float
    n: int


@dataclass(frozen=True)
class ErrorAnalysis:
    abs_errors: list[float]
    residuals: list[float]
    overprediction_fraction: float
    abs_error_min: float
    abs_error_max: float


@dataclass(frozen=True)
class LinearModel:
    """``hi = b0 + b1 * rh + b2 * t``."""

    b0: float
    b1: float
    b2: float

    def __post_init__(self):
        if not all(math.isfinite(b) for b in (self.b0, self.b1, self.b2)):
            raise ValueError("linear model coefficients must be finite")


def _pair(y_true, y_pred) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y_true, dtype=float)
    yhat = np.asarray(y_pred, dtype=float)
    if y.shape != yhat.shape:
        raise ValueError(f"length mismatch: {y.size} vs {yhat.size}")
    return y, yhat


# Regularized incomplete beta by Lentz's continued fraction.

_BETACF_EPS = 1e-15
_BETACF_TINY = 1e-300
_BETACF_MAXITER = 10_000


def _betacf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETACF_TINY:
        d = _BETACF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``."""
    if a <= 0 or b <= 0:
        raise ValueError("betainc needs a, b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"betainc needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # The continued fraction converges fast for x below the mean; use symmetry otherwise.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_sf(f: float, df1: float, df2: float) -> float:
    """Upper-tail probability ``P(F > f)`` of the F distribution."""
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))


def f_test(y_true, y_pred) -> FTest:
    """Simple-regression F-test of the observations on the predictions, df (1, n - 2)."""
    y, yhat = _pair(y_true, y_pred)
    n = y.size
    if n < 3:
        raise ValueError("F-test needs at least 3 points")
    dy = y - y.mean()
    dp = yhat - yhat.mean()
    spp = float(dp @ dp)
    syy = float(dy @ dy)
    if spp == 0:
        raise ValueError("F-test undefined for constant predictions")
    if syy == 0:
        raise ValueError("F-test undefined for constant observations")
    r2 = min(1.0, float(dy @ dp) ** 2 / (spp * syy))
    df2 = n - 2
    if r2 >= 1.0:
        return FTest(math.inf, 1, df2, 0.0)
    f = df2 * r2 / (1.0 - r2)
    return FTest(f, 1, df2, f_sf(f, 1, df2))


def f_from_r2(r2, n: int):
    """Regression F statistic for squared correlation ``r2``; exact for ``Fraction`` input."""
    return (n - 2) * r2 / (1 - r2)


def compute_metrics(y_true, y_pred) -> Metrics:
    y, yhat = _pair(y_true, y_pred)
    n = y.size
    if n < 3:
        raise ValueError("metrics need at least 3 points")
    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0:
        raise ValueError("R^2 undefined for constant observations")
    err = y - yhat
    sse = float(err @ err)
    ft = f_test(y, yhat)
    return Metrics(
        r2=1.0 - sse / sst,
        rmse=_rms(err),
        mae=float(np.abs(err).mean()),
        f_stat=ft.f_stat,
        df1=ft.df1,
        df2=ft.df2,
        p_value=ft.p_value,
        n=n,
    )


def _rms(err: np.ndarray) -> float:
    # Scaled so tiny errors do not underflow when squared.
    scale = float(np.abs(err).max()) if err.size else 0.0
    if scale == 0 or not math.isfinite(scale):
        return scale
    return scale * math.sqrt(float(((err / scale) ** 2).mean()))


def rmse(y_true, y_pred) -> float:
    y, yhat = _pair(y_true, y_pred)
    return _rms(y - yhat)


def mae(y_true, y_pred) -> float:
    y, yhat = _pair(y_true, y_pred)
    return float(np.abs(y - yhat).mean())


def error_analysis(y_true, y_pred) -> ErrorAnalysis:
    y, yhat = _pair(y_true, y_pred)
    if y.size == 0:
        raise ValueError("no observations")
    res = y - yhat
    abs_err = np.abs(res)
    return ErrorAnalysis(
        abs_errors=abs_err.tolist(),
        residuals=res.tolist(),
        overprediction_fraction=float((res < 0).mean()),
        abs_error_min=float(abs_err.min()),
        abs_error_max=float(abs_err.max()),
    )


def residual_histogram(residuals, bins: int = 10) -> tuple[list[int], list[float]]:
    counts, edges = np.histogram(np.asarray(residuals, dtype=float), bins=bins)
    return counts.tolist(), edges.tolist()


def solve3(a, b) -> list[float]:
    """Solve a 3x3 system by Gaussian elimination with partial pivoting."""
    m = [list(map(float, row)) + [float(v)] for row, v in zip(a, b)]
    scale = max(abs(v) for row in m for v in row[:3])
    if scale == 0:
        raise np.linalg.LinAlgError("singular matrix")
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) <= 1e-12 * scale:
            raise np.linalg.LinAlgError("singular normal matrix (collinear inputs)")
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, 3):
            factor = m[r][col] / m[col][col]
            for k in range(col, 4):
                m[r][k] -= factor * m[col][k]
    x = [0.0, 0.0, 0.0]
    for r in (2, 1, 0):
        x[r] = (m[r][3] - sum(m[r][k] * x[k] for k in range(r + 1, 3))) / m[r][r]
    return x


def fit_mlr(train: Dataset) -> LinearModel:
    """Ordinary least squares of hi on (1, rh, t) via the normal equations."""
    if len(train) < 4:
        raise ValueError("linear fit needs at least 4 rows")
    X = np.column_stack([np.ones(len(train)), train.rh, train.t])
    y = train.hi
    xtx = X.T @ X
    xty = X.T @ y
    beta = np.array(solve3(xtx, xty))
    # One refinement pass recovers digits lost to the normal matrix's conditioning.
    beta += np.array(solve3(xtx, X.T @ (y - X @ beta)))
    return LinearModel(*map(float, beta))


def predict_mlr(m: LinearModel, samples) -> list[float]:
    if isinstance(samples, Dataset):
        rh, t = samples.rh, samples.t
    else:
        rh = np.array([s.rh for s in samples], dtype=float)
        t = np.array([s.t for s in samples], dtype=float)
    return (m.b0 + m.b1 * rh + m.b2 * t).tolist()


REPORT_COLUMNS = ("r2", "rmse", "mae", "f_stat", "p_value")


def format_report(rows: Sequence[tuple[str, Metrics]], fmt: str = "text") -> str:
    """Render ``(name, metrics)`` rows as an aligned table or CSV."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", *REPORT_COLUMNS, "df1", "df2", "n"])
        for name, m in rows:
            d = asdict(m)
            w.writerow([name, *(repr(d[c]) for c in REPORT_COLUMNS), m.df1, m.df2, m.n])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    header = f"{'model':<8}{'R2':>10}{'RMSE':>10}{'MAE':>10}{'F':>16}{'p':>12}{'df':>12}"
    lines = [header, "-" * len(header)]
    for name, m in rows:
        df = f"({m.df1},{m.df2})"
        lines.append(
            f"{name:<8}{m.r2:>10.4f}{m.rmse:>10.4f}{m.mae:>10.4f}{m.f_stat:>16.3f}{m.p_value:>12.3g}{df:>12}"
        )
    return "\n".join(lines) + "\n"


def compare_report(test: Dataset, rb, m: LinearModel, fmt: str = "text") -> str:
    """Fuzzy model against the linear baseline on the same held-out samples."""
    if len(test) == 0:
        raise ValueError("test set is empty")
    y = test.hi
    fuzzy_pred, _ = predict_batch(test, rb)
    rows = [("fuzzy", compute_metrics(y, fuzzy_pred)), ("mlr", compute_metrics(y, predict_mlr(m, test)))]
    return format_report(rows, fmt)
