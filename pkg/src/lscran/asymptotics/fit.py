"""Log-log least-squares slope fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InsufficientDataError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points: tuple[tuple[float, float], ...]
    statistic_kind: str = "custom"

    def predict(self, log_x: float) -> float:
        return self.intercept + self.slope * log_x


def fit_points(log_x, log_y, kind: str = "custom") -> ExponentFit:
    x = np.asarray(log_x, dtype=float)
    y = np.asarray(log_y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise InsufficientDataError("need at least two (log x, log y) points")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise InsufficientDataError("non-finite points in fit")
    if np.ptp(x) == 0:
        raise InsufficientDataError("all x values coincide")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    # flat data up to rounding counts as a perfect fit
    flat = ss_tot <= 1e-20 * max(1.0, float(np.sum(y ** 2)))
    r2 = 1.0 if flat else max(0.0, 1.0 - float(np.sum(resid ** 2)) / ss_tot)
    pts = tuple((float(a), float(b)) for a, b in zip(x, y))
    return ExponentFit(float(slope), float(intercept), r2, pts, kind)


def fit_loglog(xs, ys, kind: str = "custom") -> ExponentFit:
    """Fit log(ys) = intercept + slope * log(xs); ys must be positive."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if (xs <= 0).any() or (ys <= 0).any():
        raise InsufficientDataError("log-log fit needs positive values")
    return fit_points(np.log(xs), np.log(ys), kind)
