"""Empirical exponents: Monte Carlo sweeps, log-log fits and growth-rate oracles."""

from .fit import ExponentFit, InsufficientDataError, fit_loglog, fit_points
from .growth import (
    QuadratureError,
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
from .sweep import (
    STATISTICS,
    SweepPlan,
    SweepResult,
    TrialRecord,
    fit_records,
    read_summary_csv,
    read_trials_csv,
    run_sweep,
    write_summary_csv,
    write_trials_csv,
)
