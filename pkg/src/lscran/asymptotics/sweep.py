"""Monte Carlo sweeps over network size and log-log exponent fits of the medians."""

from __future__ import annotations

import csv
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..channels import draw_channels, estimate
from ..exponents import OperationKind, ScalingParams, ValidationError, exponent_report
from ..network import NetworkConfig, make_rng, place_and_associate
from ..transmission import (
    IllConditionedGramError,
    ZeroNormPrecoderError,
    allocate_power,
    build_precoder,
    effective_channels,
    metrics_from,
)
from .fit import ExponentFit, InsufficientDataError, fit_loglog

STATISTICS = ("snr", "sir", "sinr")
WORKERS_ENV = "LSCRAN_WORKERS"
MAX_EXCLUDED = 0.10


class RedrawLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepPlan:
    n_grid: tuple
    trials_per_n: int
    params: ScalingParams
    operations: tuple = (OperationKind.IF, OperationKind.MRT, OperationKind.ZF)
    master_seed: int = 0
    region_radius: float = 1.0
    typical_user: str = "centroid"
    genie: bool = False
    max_redraws: int = 20

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        if len(grid) < 4:
            raise ValidationError("n_grid", "needs at least 4 sizes")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("n_grid", "must be strictly increasing")
        if grid[0] < 4:
            raise ValidationError("n_grid", "sizes must be >= 4")
        if int(self.trials_per_n) < 1:
            raise ValidationError("trials_per_n", "must be positive")
        ops = tuple(dict.fromkeys(OperationKind.parse(o) for o in self.operations))
        if not ops:
            raise ValidationError("operations", "at least one operation required")
        if int(self.master_seed) < 0:
            raise ValidationError("master_seed", "must be non-negative")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "operations", ops)
        object.__setattr__(self, "trials_per_n", int(self.trials_per_n))


@dataclass(frozen=True)
class TrialRecord:
    n_target: int
    n_realized: int
    operation: str
    statistic: str
    trial: int
    value: float


@dataclass
class SweepResult:
    plan: SweepPlan
    records: list
    fits: dict = field(default_factory=dict)        # (op, stat) -> ExponentFit
    excluded: dict = field(default_factory=dict)    # (op, stat) -> count
    aborted: list = field(default_factory=list)     # (op, stat) with too many exclusions
    redraws: int = 0

    def fit(self, op, stat: str) -> ExponentFit:
        return self.fits[(OperationKind.parse(op).value, stat)]


def _realization(plan: SweepPlan, n_target: int, seed_seq: np.random.SeedSequence):
    p = plan.params
    s_net, s_ch, s_noise = seed_seq.spawn(3)
    cfg = NetworkConfig(n_target, p, plan.region_radius, 0, plan.typical_user)
    net = place_and_associate(cfg, make_rng(s_net))
    ch = draw_channels(net, s_ch)
    n = net.n_realized
    est = estimate(net, ch, float(n) ** p.rho_ul, s_noise, genie=plan.genie)
    return net, ch, est, float(n) ** p.rho_dl


def run_trial(plan: SweepPlan, n_index: int, trial: int):
    """One realization shared by every operation; redrawn on singular ZF systems."""
    n_target = plan.n_grid[n_index]
    for attempt in range(plan.max_redraws + 1):
        ss = np.random.SeedSequence([plan.master_seed, n_index, trial, attempt])
        net, ch, est, p_dl = _realization(plan, n_target, ss)
        k = net.typical_user
        out = {}
        try:
            for op in plan.operations:
                pre = build_precoder(op, est, net)
                q = allocate_power(pre, p_dl)
                psi = effective_channels(pre, ch, net, rows=k)[0]
                lm = metrics_from(psi, q, k, interference_free=op is OperationKind.IF)
                out[op.value] = (lm.snr, lm.sir, lm.sinr)
        except (IllConditionedGramError, ZeroNormPrecoderError):
            continue
        return (n_index, trial), net.n_realized, out, attempt
    raise RedrawLimitError(
        f"N={n_target} trial {trial}: no usable realization after {plan.max_redraws} redraws"
    )


def _run_item(args):
    plan, n_index, trial = args
    try:
        return run_trial(plan, n_index, trial)
    except RedrawLimitError:
        return (n_index, trial), None, None, plan.max_redraws + 1


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ValidationError(WORKERS_ENV, f"not an integer: {raw!r}") from None


def fit_records(records, operations, min_valid: float = 1.0 - MAX_EXCLUDED):
    """Median-per-size fits.  Returns (fits, excluded, aborted)."""
    groups = defaultdict(lambda: defaultdict(list))
    realized = {}
    for r in records:
        groups[(r.operation, r.statistic)][r.n_target].append(r.value)
        realized[r.n_target] = r.n_realized
    fits, excluded, aborted = {}, {}, []
    for op in operations:
        op = OperationKind.parse(op)
        for stat in STATISTICS:
            if op is OperationKind.IF and stat == "sir":
                continue
            by_n = groups.get((op.value, stat))
            if not by_n:
                continue
            total = bad = 0
            xs, ys = [], []
            for n_t in sorted(by_n):
                v = np.asarray(by_n[n_t], dtype=float)
                ok = np.isfinite(v) & (v > 0)
                total += v.size
                bad += int((~ok).sum())
                if ok.any():
                    xs.append(realized[n_t])
                    ys.append(float(np.median(v[ok])))
            excluded[(op.value, stat)] = bad
            if total and bad > (1.0 - min_valid) * total:
                aborted.append((op.value, stat))
                continue
            fits[(op.value, stat)] = fit_loglog(xs, ys, stat)
    return fits, excluded, aborted


def run_sweep(plan: SweepPlan, workers: int | None = None) -> SweepResult:
    workers = default_workers() if workers is None else max(1, int(workers))
    items = [(plan, i, t) for i in range(len(plan.n_grid)) for t in range(plan.trials_per_n)]
    if workers == 1:
        outcomes = [_run_item(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(_run_item, items, chunksize=max(1, len(items) // (8 * workers))))
    outcomes.sort(key=lambda o: o[0])
    records, redraws = [], 0
    ok_per_n = defaultdict(int)
    for (i, t), n_real, out, attempts in outcomes:
        redraws += attempts
        if out is None:
            continue
        ok_per_n[i] += 1
        for op in plan.operations:
            for stat, v in zip(STATISTICS, out[op.value]):
                records.append(TrialRecord(plan.n_grid[i], n_real, op.value, stat, t, v))
    missing = [plan.n_grid[i] for i in range(len(plan.n_grid)) if ok_per_n[i] == 0]
    try:
        if missing:
            raise InsufficientDataError(f"no successful trials at N={missing}")
        fits, excluded, aborted = fit_records(records, plan.operations)
    except InsufficientDataError as exc:
        exc.records = records  # lets callers flush what finished
        raise
    return SweepResult(plan, records, fits, excluded, aborted, redraws)


def theory_exponent(op, stat: str, params: ScalingParams) -> float:
    return float(getattr(exponent_report(op, params), stat))


# -- CSV ------------------------------------------------------------------

TRIAL_COLUMNS = ("n_target", "n_realized", "operation", "statistic", "trial", "value")
SUMMARY_COLUMNS = ("operation", "statistic", "slope", "intercept", "r2",
                   "theory_exponent", "abs_error")


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trials_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIAL_COLUMNS)
        for r in records:
            w.writerow((r.n_target, r.n_realized, r.operation, r.statistic, r.trial, _fmt(r.value)))


def read_trials_csv(path) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        TrialRecord(int(r["n_target"]), int(r["n_realized"]), r["operation"], r["statistic"],
                    int(r["trial"]), float(r["value"]))
        for r in rows
    ]


def summary_rows(result: SweepResult) -> list:
    rows = []
    for (op, stat), f in sorted(result.fits.items()):
        th = theory_exponent(op, stat, result.plan.params)
        rows.append((op, stat, f.slope, f.intercept, f.r_squared, th, abs(f.slope - th)))
    return rows


def write_summary_csv(path, result: SweepResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for op, stat, *nums in summary_rows(result):
            w.writerow((op, stat, *(_fmt(x) for x in nums)))


def read_summary_csv(path) -> list:
    with open(path, newline="") as fh:
        return [
            (r["operation"], r["statistic"], *(float(r[c]) for c in SUMMARY_COLUMNS[2:]))
            for r in csv.DictReader(fh)
        ]

