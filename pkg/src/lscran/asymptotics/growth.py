"""Growth rates of pathloss sums that the exponent formulas rest on.

Each check has a prediction side (quadrature or a piecewise exponent) and an
empirical side (median over random draws, then a log-log slope).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .. import kernels
from ..network import make_rng
from .fit import ExponentFit, InsufficientDataError, fit_loglog


class QuadratureError(RuntimeError):
    pass


# -- sums of i.i.d. terms ----------------------------------------------------

def tail_sum_prediction(dist_quantile, h, n: int) -> float:
    """n * integral of h over the distribution above its 1/n quantile.

    Evaluated as log(n) * int_0^1 n^t h(F^-1(n^(t-1))) dt, which spreads
    the mass of heavy tails evenly over the unit interval.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    ln = math.log(n)

    def integrand(t):
        x = math.exp((t - 1.0) * ln)
        return math.exp(t * ln) * h(dist_quantile(x))

    val, err, info, *msg = integrate.quad(integrand, 0.0, 1.0, limit=500,
                                          epsrel=1e-10, full_output=1)
    if msg or not math.isfinite(val):
        raise QuadratureError(msg[0] if msg else "non-finite integral")
    return ln * val


def tail_sum_slope(dist_sampler, h, n, trials: int, seed) -> ExponentFit:
    """Median of sum_k h(x_k) over ``trials`` draws at each size in ``n``."""
    grid = [int(v) for v in n]
    rng = make_rng(seed)
    medians = []
    for size in grid:
        sums = np.empty(trials)
        for i in range(trials):
            sums[i] = float(np.sum(h(dist_sampler(rng, size))))
        ok = np.isfinite(sums) & (sums > 0)
        if not ok.any():
            raise InsufficientDataError(f"no usable draws at n={size}")
        medians.append(float(np.median(sums[ok])))
    return fit_loglog(grid, medians)


def growth_supremum(decay: float, set_growth, t_min: float, t_max: float,
                   points: int = 100001) -> float:
    """sup over t of growth(t) - decay * t.

    ``growth(t)`` is the exponent of the number of terms at scale n^t and
    ``decay`` is the exponent with h(n^t) = n^(-decay * t).  The grid
    contains both endpoints, so piecewise-linear cases are exact whenever
    their kinks sit on the grid.
    """
    if not t_max > t_min:
        raise ValueError("need t_max > t_min")
    t = np.linspace(t_min, t_max, points)
    g = np.asarray([set_growth(v) for v in t], dtype=float)
    return float(np.max(g - decay * t))


# Example: interference at the centre of a disk of radius R
def disk_quantile(radius: float = 1.0):
    return lambda x: radius * math.sqrt(x)


def disk_sampler(radius: float = 1.0):
    return lambda rng, size: radius * np.sqrt(rng.random(size))


def bounded_pathloss(alpha: float, floor: float = 0.0):
    if floor > 0:
        return lambda x: np.maximum(floor, x) ** (-alpha)
    return lambda x: np.asarray(x, dtype=float) ** (-alpha)


# -- Poisson sums -------------------------------------------------------------

def _ppp(rng, intensity: float, radius: float) -> np.ndarray:
    n = rng.poisson(intensity * math.pi * radius * radius)
    r = radius * np.sqrt(rng.random(n))
    th = 2.0 * math.pi * rng.random(n)
    return np.ascontiguousarray(np.column_stack((r * np.cos(th), r * np.sin(th))))


def _uniform_point(rng, radius: float):
    r = radius * math.sqrt(rng.random())
    th = 2.0 * math.pi * rng.random()
    return r * math.cos(th), r * math.sin(th)


def ppp_pathloss_slope(lambda_grid, alpha: float, trials: int, seed, radius: float = 1.0,
                 return_excluded: bool = False):
    """Sum of |X - Y0|^-alpha over a PPP of intensity lambda on a disk."""
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    grid = [float(v) for v in lambda_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda_grid must be ascending")
    rng = make_rng(seed)
    medians, excluded = [], 0
    for lam in grid:
        vals = []
        for _ in range(trials):
            pts = _ppp(rng, lam, radius)
            x0, y0 = _uniform_point(rng, radius)
            if len(pts) == 0:
                excluded += 1
                continue
            vals.append(kernels.pathloss_sum(pts, x0, y0, alpha))
        if not vals:
            raise InsufficientDataError(f"every draw empty at lambda={lam}")
        medians.append(float(np.median(vals)))
    fit = fit_loglog(grid, medians)
    return (fit, excluded) if return_excluded else fit


def pair_sum_exponents(alpha0: float, alpha1: float, delta: float, z: float):
    """(s, t): growth exponents of the pair sums outside / inside the z-balls."""
    if not (alpha0 > 2 and alpha1 > 2):
        raise ValueError("alpha0 and alpha1 must exceed 2")
    if not delta > 0:
        raise ValueError("delta must be positive")
    amax, amin = max(alpha0, alpha1), min(alpha0, alpha1)
    if delta < 1:
        if z < -0.5:
            s = amax / 2 + amin / 2 * delta
        elif z < -0.5 * delta:
            s = 1 + (2 - amax) * z + amin / 2 * delta
        else:
            s = 1 + delta + (4 - amax - amin) * z
    else:
        if z < -0.5:
            s = (amax + amin) / 2 + delta - 1
        else:
            s = 1 + delta + (4 - amax - amin) * z
    if z > -0.5 * delta > -0.5:
        t = amax / 2 + amin / 2 * delta
    elif z > -0.5 > -0.5 * delta:
        t = (amax + amin) / 2 + delta - 1
    elif -0.5 * delta < z < -0.5:
        t = (amax + amin) / 2 + delta + 2 * z
    else:
        t = -math.inf
    return float(s), float(t)


def pair_sum_slope(lambda_grid, alpha0: float, alpha1: float, delta: float, z: float,
                           trials: int, seed, radius: float = 1.0, ball_scale: float = 0.5,
                           part: str = "outside") -> ExponentFit:
    """Pair sums over two PPPs of intensities lambda and lambda^delta.

    ``part="outside"`` keeps X outside both balls of radius
    ball_scale * lambda^z around Y0 and Y; ``"inside"`` keeps X inside both.
    """
    if part not in ("outside", "inside"):
        raise ValueError("part must be 'outside' or 'inside'")
    grid = [float(v) for v in lambda_grid]
    rng = make_rng(seed)
    medians = []
    for lam in grid:
        r_ball = ball_scale * lam ** z
        vals = []
        for _ in range(trials):
            phi = _ppp(rng, lam, radius)
            psi = _ppp(rng, lam ** delta, radius)
            x0, y0 = _uniform_point(rng, radius)
            if len(phi) == 0 or len(psi) == 0:
                continue
            out, ins = kernels.pair_pathloss_sums(phi, psi, x0, y0, alpha0, alpha1, r_ball)
            v = out if part == "outside" else ins
            if v > 0:
                vals.append(v)
        if len(vals) < max(1, trials // 2):
            raise InsufficientDataError(f"too few non-empty draws at lambda={lam}")
        medians.append(float(np.median(vals)))
    return fit_loglog(grid, medians)
