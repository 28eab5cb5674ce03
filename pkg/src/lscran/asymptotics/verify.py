"""Default oracle battery for ``lscran verify``."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .growth import (
    bounded_pathloss,
    growth_supremum,
    disk_quantile,
    disk_sampler,
    tail_sum_slope,
    tail_sum_prediction,
    ppp_pathloss_slope,
    pair_sum_slope,
    pair_sum_exponents,
)

MIN_R2 = 0.95

# (alpha0, alpha1, delta, z) -> hand-evaluated (s, t)
PAIR_SUM_GOLDEN = {
    (4.0, 4.0, 1.0, -1.0): (4.0, -math.inf),
    (4.0, 3.0, 0.5, 0.0): (1.5, 2.75),
    (4.0, 4.0, 1.0, 0.0): (2.0, -math.inf),
    (4.0, 4.0, 0.5, -0.6): (3.0, -math.inf),
    (4.0, 4.0, 0.5, -0.25): (2.5, -math.inf),
    (4.0, 4.0, 1.5, -0.6): (4.5, 4.3),
    (4.0, 4.0, 1.5, -0.4): (4.1, 4.5),
}

# delta = 0.5 exercises all three branches of the outside-ball exponent
PAIR_SUM_POINTS = ((0.5, -0.6), (0.5, -0.25), (0.5, 0.0))


@dataclass
class OracleResult:
    name: str
    predicted: float
    observed: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"[{flag}] {self.name}: observed={self.observed:.6g} "
                f"predicted={self.predicted:.6g} tol={self.tolerance:g}{extra}")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("predicted", "observed"):
            if math.isinf(d[k]):
                d[k] = "inf" if d[k] > 0 else "-inf"
        return d


def _slope_result(name, fit, predicted, tol) -> OracleResult:
    ok = abs(fit.slope - predicted) <= tol and fit.r_squared >= MIN_R2
    return OracleResult(name, predicted, fit.slope, tol, ok, f"r2={fit.r_squared:.4f}")


def _close(name, observed, predicted, tol, rel=False) -> OracleResult:
    if math.isinf(predicted) or math.isinf(observed):
        ok = observed == predicted
    else:
        err = abs(observed - predicted) / (abs(predicted) if rel else 1.0)
        ok = err <= tol
    return OracleResult(name, predicted, observed, tol, ok)


def disk_pathloss_ratio(alpha: float, n: int, floor: float = 0.0) -> float:
    q = disk_quantile(1.0)
    h = (lambda x: max(floor, x) ** (-alpha)) if floor > 0 else (lambda x: x ** (-alpha))
    return tail_sum_prediction(q, h, 2 * n) / tail_sum_prediction(q, h, n)


def iid_sum_oracles(alphas, quick: bool, seed: int) -> list:
    out = []
    n_big = 10 ** 6
    out.append(_close("tail-sum prediction, constant h",
                      tail_sum_prediction(disk_quantile(), lambda x: 1.0, n_big), n_big - 1, 1e-9, rel=True))
    out.append(_close("tail-sum prediction, bounded pathloss ratio n->2n",
                      disk_pathloss_ratio(3.0, n_big, floor=0.1), 2.0, 0.01, rel=True))
    trials = 60 if quick else 200
    grid = [1024 * 2 ** i for i in range(7)]
    tol = 0.25 if quick else 0.1
    for a in alphas:
        out.append(_close(f"tail-sum prediction ratio n->2n, alpha={a:g}",
                          disk_pathloss_ratio(a, n_big), 2.0 ** (a / 2), 0.01, rel=True))
        fit = tail_sum_slope(disk_sampler(), bounded_pathloss(a), grid, trials, [seed, 1, int(a * 8)])
        out.append(_slope_result(f"disk pathloss empirical slope, alpha={a:g}", fit, a / 2, tol))
        sup = growth_supremum(a, lambda t: 2 * t + 1, -0.5, 0.0)
        out.append(_close(f"growth supremum, alpha={a:g}", sup, a / 2, 1e-12))
    fit = tail_sum_slope(disk_sampler(), lambda x: 0.0 * x + 1.0, grid, 20, [seed, 2])
    out.append(_slope_result("tail-sum empirical slope, constant h", fit, 1.0, 0.05))
    return out


def poisson_sum_oracles(alphas, quick: bool, seed: int) -> list:
    out = []
    trials = 60 if quick else 200
    grid = [16000 / 2 ** i for i in range(6, -1, -1)]
    tol = 0.25 if quick else 0.1
    for a in alphas:
        fit = ppp_pathloss_slope(grid, a, trials, [seed, 3, int(a * 8)])
        out.append(_slope_result(f"poisson pathloss slope, alpha={a:g}", fit, a / 2, tol))
    for key, (s, t) in PAIR_SUM_GOLDEN.items():
        ps, pt = pair_sum_exponents(*key)
        out.append(_close(f"pair-sum exponent s{key}", ps, s, 1e-12))
        out.append(_close(f"pair-sum exponent t{key}", pt, t, 1e-12))
    trials2 = 100  # heavy-tailed near-ball sums need this many even in quick mode
    grid2 = [32000 / 2 ** i for i in range(5, -1, -1)]
    tol2 = 0.25 if quick else 0.2
    for i, (delta, z) in enumerate(PAIR_SUM_POINTS):
        fit = pair_sum_slope(grid2, 4.0, 4.0, delta, z, trials2, [seed, 4, i])
        s, _ = pair_sum_exponents(4.0, 4.0, delta, z)
        out.append(_slope_result(f"pair-sum empirical slope, delta={delta:g} z={z:g}",
                                 fit, s, tol2))
    return out


def run_oracles(quick: bool = False, alpha=None, seed: int = 0) -> list:
    alphas = (3.0, 4.0) if alpha is None else (float(alpha),)
    for a in alphas:
        if not a > 2:
            raise ValueError("alpha must exceed 2")
    return iid_sum_oracles(alphas, quick, seed) + poisson_sum_oracles(alphas, quick, seed)
