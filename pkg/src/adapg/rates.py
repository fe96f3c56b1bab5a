"""Empirical convergence-rate classification from residual series."""

import math
from dataclasses import dataclass

import numpy as np

FINITE = "finite"
SUPERLINEAR = "superlinear"
LINEAR = "linear"
SUBLINEAR = "sublinear"

R2_THRESHOLD = 0.98
MIN_POINTS = 4


@dataclass(frozen=True)
class RateFit:
    """classification plus the fitted slope/exponent and fit quality r^2.

    `low_confidence` flags a sublinear fallback that no model fit well.
    """

    classification: str
    rate_param: float
    r2: float
    low_confidence: bool = False


def _linfit(x, y):
    """Least-squares line y ~ a + b*x; returns (slope, r_squared)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    b, a = np.polyfit(x, y, 1)
    resid = y - (a + b * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return float(b), 1.0
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(b), max(0.0, min(1.0, r2))


def fit_rate(series):
    """Classify a positive residual series (t, value) by decay shape.

    Tried in order, first fit with r^2 >= 0.98 wins: finite (an exact zero
    appears), superlinear (log log 1/value linear in t), linear (log value
    linear in t, rate_param is the per-step log decrease), sublinear
    (log value linear in log t, rate_param the power-law exponent).  If
    nothing fits, sublinear with the low-confidence flag.
    """
    if len(series) < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points, got {len(series)}")
    ts = np.array([float(t) for t, _ in series])
    vals = np.array([float(v) for _, v in series])
    if np.any(vals < 0) or not np.all(np.isfinite(vals)):
        raise ValueError("series values must be nonnegative and finite")

    if np.any(vals == 0.0):
        first_zero = int(np.argmax(vals == 0.0))
        return RateFit(FINITE, rate_param=float(ts[first_zero]), r2=1.0)

    # superlinear: log log(1/v) vs t on the sub-unit tail
    mask = vals < 1.0
    if int(mask.sum()) >= MIN_POINTS:
        y = np.log(np.log(1.0 / vals[mask]))
        slope, r2 = _linfit(ts[mask], y)
        if slope > 0 and r2 >= R2_THRESHOLD:
            return RateFit(SUPERLINEAR, rate_param=slope, r2=r2)

    slope, r2 = _linfit(ts, np.log(vals))
    if slope < 0 and r2 >= R2_THRESHOLD:
        return RateFit(LINEAR, rate_param=-slope, r2=r2)

    mask = ts > 0
    if int(mask.sum()) >= MIN_POINTS:
        slope, r2 = _linfit(np.log(ts[mask]), np.log(vals[mask]))
        if r2 >= R2_THRESHOLD:
            return RateFit(SUBLINEAR, rate_param=slope, r2=r2)
        return RateFit(SUBLINEAR, rate_param=slope, r2=r2, low_confidence=True)
    return RateFit(SUBLINEAR, rate_param=math.nan, r2=0.0, low_confidence=True)
