"""Closed-form scaling exponents for cooperative downlink in a dense CRAN.

Every quantity here is an exponent of the network size N = L*M: a value
``s`` stands for a statistic that grows like N**s.  The formulas are hinge
compositions, so they are written once over numpy arrays (``_core``) and the
public scalar API wraps them.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

ALPHA_MIN = 2.0 + 1e-9
SUM_TOL = 1e-12
INF = math.inf


class ValidationError(ValueError):
    """Raised for out-of-range exponents; ``field`` names the offending one."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class AmbiguousRegionError(RuntimeError):
    pass


class Regime(str, enum.Enum):
    EH = "EH"
    H = "H"
    M = "M"
    L = "L"


class OperationKind(str, enum.Enum):
    IF = "IF"
    MRT = "MRT"
    ZF = "ZF"

    @classmethod
    def parse(cls, value) -> "OperationKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValidationError("op", f"unknown operation {value!r}") from None


@dataclass(frozen=True)
class ScalingParams:
    """Exponent-space description of a network family.

    ``upsilon_pa=None`` means every user is served by all BSs and
    ``upsilon_pr=None`` means one orthogonal pilot per user.
    """

    eta_bs: float
    eta_user: float
    alpha: float
    rho_ul: float = 0.0
    rho_dl: float = 0.0
    eta_ant: Optional[float] = None
    upsilon_pa: Optional[float] = None
    upsilon_pr: Optional[float] = None

    def __post_init__(self):
        if self.eta_ant is None:
            object.__setattr__(self, "eta_ant", 1.0 - float(self.eta_bs))
        for name in ("eta_bs", "eta_ant", "eta_user", "alpha", "rho_ul", "rho_dl"):
            v = getattr(self, name)
            if not isinstance(v, numbers.Real) or not math.isfinite(v):
                raise ValidationError(name, f"must be a finite real, got {v!r}")
            object.__setattr__(self, name, float(v))
        for name in ("eta_bs", "eta_ant", "eta_user"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(name, f"must lie in [0, 1], got {v}")
        if abs(self.eta_bs + self.eta_ant - 1.0) > SUM_TOL:
            raise ValidationError("eta_ant", "eta_bs + eta_ant must equal 1")
        if self.alpha <= ALPHA_MIN:
            raise ValidationError("alpha", f"must exceed 2, got {self.alpha}")
        if self.upsilon_pa is not None:
            v = float(self.upsilon_pa)
            if not 0.0 <= v <= self.eta_bs:
                raise ValidationError("upsilon_pa", f"must lie in [0, eta_bs], got {v}")
            object.__setattr__(self, "upsilon_pa", v)
        if self.upsilon_pr is not None:
            v = float(self.upsilon_pr)
            if not 0.0 <= v <= self.eta_user:
                raise ValidationError("upsilon_pr", f"must lie in [0, eta_user], got {v}")
            object.__setattr__(self, "upsilon_pr", v)

    @property
    def pa(self) -> float:
        return self.eta_bs if self.upsilon_pa is None else self.upsilon_pa

    @property
    def pr(self) -> float:
        return self.eta_user if self.upsilon_pr is None else self.upsilon_pr

    def with_(self, **changes) -> "ScalingParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "eta_bs": self.eta_bs,
            "eta_ant": self.eta_ant,
            "eta_user": self.eta_user,
            "alpha": self.alpha,
            "rho_ul": self.rho_ul,
            "rho_dl": self.rho_dl,
            "upsilon_pa": self.upsilon_pa,
            "upsilon_pr": self.upsilon_pr,
        }


@dataclass(frozen=True)
class ExponentReport:
    operation: OperationKind
    regime: Regime
    xi: float
    delta: Optional[float]
    snr: float
    sir: float
    sinr: float

    def to_dict(self) -> dict:
        return {
            "operation": self.operation.value,
            "regime": self.regime.value,
            "xi": self.xi,
            "delta": self.delta,
            "snr": self.snr,
            "sir": "inf" if math.isinf(self.sir) else self.sir,
            "sinr": self.sinr,
        }


@dataclass(frozen=True)
class TradeoffPoint:
    rho: float
    tau: float
    zeta_user: float
    region: str


def _pos(x):
    return np.maximum(x, 0.0)


# -- vectorised core -------------------------------------------------------

def _xi(alpha, eta_bs, eta_ant, rho_ul):
    a = rho_ul + 0.5 * alpha * eta_bs
    return _pos(a + eta_ant) - _pos(a)


def _xi_pr(alpha, eta_bs, eta_ant, eta_user, pr, rho_ul):
    a = rho_ul + 0.5 * alpha * eta_bs
    return _pos(a + eta_ant) - _pos(a + _pos(eta_user - pr - eta_bs))


def _delta_mrt(alpha, eta_bs, eta_user, rho_dl):
    return rho_dl + 0.5 * alpha * np.minimum(eta_bs, eta_user) + _pos(eta_user - eta_bs)


def _delta_zf(alpha, eta_bs, eta_user, rho_dl, rho_ul):
    return (
        _delta_mrt(alpha, eta_bs, eta_user, rho_dl)
        - (1.0 - 2.0 / alpha) * _pos(0.5 * alpha * np.minimum(eta_bs, eta_user) + rho_ul)
        - (2.0 / alpha) * _pos(rho_ul)
    )


def _varpi(alpha, eta_bs, pa, rho_ul):
    return np.where(pa < eta_bs, np.minimum(rho_ul, 0.5 * alpha * (pa - eta_bs)), rho_ul)


def _delta_pr(alpha, eta_bs, eta_user, pr, rho_dl, xi_pr):
    return (
        rho_dl
        + 0.5 * alpha * np.minimum(eta_bs, eta_user - pr)
        + _pos(eta_user - pr - eta_bs)
        + xi_pr
    )


def _core(op, alpha, eta_bs, eta_ant, eta_user, pa, pr, rho_ul, rho_dl):
    """Return (xi, delta, snr) for array-valued inputs; delta is nan for IF."""
    reuse = pr < eta_user
    xi_pr = _xi_pr(alpha, eta_bs, eta_ant, eta_user, pr, rho_ul)
    xi = np.where(reuse, xi_pr, _xi(alpha, eta_bs, eta_ant, rho_ul))
    snr = rho_dl + 0.5 * alpha * eta_bs + xi
    if op is OperationKind.IF:
        return xi, np.full_like(snr, np.nan, dtype=float), snr
    varpi = _varpi(alpha, eta_bs, pa, rho_ul)
    if op is OperationKind.MRT:
        delta = _delta_mrt(alpha, eta_bs, eta_user, rho_dl)
    else:
        delta = _delta_zf(alpha, eta_bs, eta_user, rho_dl, varpi)
    delta = np.where(
        reuse, np.maximum(delta, _delta_pr(alpha, eta_bs, eta_user, pr, rho_dl, xi_pr)), delta
    )
    return xi, delta, snr


# -- public scalar API -----------------------------------------------------

def classify_regime(p: ScalingParams) -> Regime:
    h = -0.5 * p.alpha * p.eta_bs
    if p.rho_ul >= 0:
        return Regime.EH
    if p.rho_ul >= h:
        return Regime.H
    if p.rho_ul >= h - p.eta_ant:
        return Regime.M
    return Regime.L


def array_gain(p: ScalingParams) -> float:
    """Coherent-combining exponent, ignoring pilot reuse."""
    return float(_xi(p.alpha, p.eta_bs, p.eta_ant, p.rho_ul))


def snr_exponent(p: ScalingParams) -> float:
    _, _, snr = _core(OperationKind.IF, *_args(p))
    return float(snr)


def delta_mrt(p: ScalingParams) -> float:
    return float(_delta_mrt(p.alpha, p.eta_bs, p.eta_user, p.rho_dl))


def delta_zf(p: ScalingParams) -> float:
    return float(_delta_zf(p.alpha, p.eta_bs, p.eta_user, p.rho_dl, p.rho_ul))


def effective_ul_power(p: ScalingParams) -> float:
    """UL power exponent seen by the ZF gap once association is truncated."""
    return float(_varpi(p.alpha, p.eta_bs, p.pa, p.rho_ul))


def pilot_limited_terms(p: ScalingParams) -> tuple[float, float]:
    xi_pr = _xi_pr(p.alpha, p.eta_bs, p.eta_ant, p.eta_user, p.pr, p.rho_ul)
    d = _delta_pr(p.alpha, p.eta_bs, p.eta_user, p.pr, p.rho_dl, xi_pr)
    return float(xi_pr), float(d)


def _args(p: ScalingParams):
    return (p.alpha, p.eta_bs, p.eta_ant, p.eta_user, p.pa, p.pr, p.rho_ul, p.rho_dl)


def exponent_report(op, p: ScalingParams) -> ExponentReport:
    op = OperationKind.parse(op)
    xi, delta, snr = (float(v) for v in _core(op, *_args(p)))
    if op is OperationKind.IF:
        return ExponentReport(op, classify_regime(p), xi, None, snr, INF, snr)
    return ExponentReport(
        op, classify_regime(p), xi, delta, snr, snr - delta, snr - max(delta, 0.0)
    )


def if_optimality_threshold(op, p: ScalingParams) -> float:
    """Largest DL power exponent for which the operation stays interference-free."""
    op = OperationKind.parse(op)
    if op is OperationKind.IF:
        raise ValidationError("op", "threshold is defined for MRT and ZF only")
    return p.rho_dl - exponent_report(op, p).delta


def backhaul_overhead_exponent(p: ScalingParams) -> float:
    assoc = min(max((2.0 / p.alpha) * p.rho_ul + p.eta_bs, 0.0), p.eta_bs)
    return p.eta_user + p.eta_ant + assoc


# -- supportable users -----------------------------------------------------

_BOUNDARY_TOL = 1e-12


def _regions(op: OperationKind, rho: float, tau: float, alpha: float, eb: float, ea: float):
    """Map label -> (conditions, u).  A condition is (margin, strict): it
    holds when margin > 0 (strict) or margin >= 0 (non-strict)."""
    c1 = (1.0 - 0.5 * alpha) * eb
    k = 0.5 * alpha * eb + ea
    s = alpha / (2.0 - alpha)
    a_cond = [(-ea - tau, True)]
    b_cond = [(tau + ea, False), (ea - tau, True)]
    u_a = rho - tau + 0.5 * alpha * eb
    u_b = rho - 0.5 * tau + 0.5 * alpha * eb + 0.5 * ea
    u_c = rho - tau + k
    if op is OperationKind.IF:
        return {
            "A": (a_cond, u_a),
            "B": (b_cond, u_b),
            "C": ([(tau - ea, False)], u_c),
        }
    u_de = 0.5 * (rho - tau + (0.5 * alpha + 1.0) * eb + ea)
    out = {
        "A": (a_cond + [(c1 - rho, True)], u_a),
        "B": (b_cond + [(c1 - rho, True)], u_b),
        "C": ([(tau - ea, False), (s * rho + tau - k, False)], u_c),
        "D": ([(rho - c1, False), (c1 - ea - rho - tau, True)], u_de),
        "E": (
            [(rho - c1, False), (rho + tau - c1 + ea, False), (c1 + ea - rho - tau, True)],
            u_de,
        ),
    }
    if op is OperationKind.MRT:
        out["F"] = ([(rho + tau - c1 - ea, False), (ea - tau, True)], 1.0 - tau)
        out["G"] = ([(tau - ea, False), (k - s * rho - tau, True)], (2.0 / alpha) * (k - tau))
    else:
        out["F"] = (
            [(k - tau - rho, True), (rho + tau - c1 - ea, False), (k - s * rho - tau, True)],
            alpha / (2.0 * (alpha - 1.0)) * ((1.0 - 2.0 / alpha) * rho - tau + k),
        )
        out["G"] = ([(k - tau + rho, True), (tau + rho - k, True)], 0.5 * (rho - tau + k))
    return out


def _holds(conds, slack: float) -> bool:
    return all((m > slack) if strict else (m >= slack) for m, strict in conds)


def table_region(op, rho: float, tau: float, p: ScalingParams) -> tuple[str, float]:
    """Region label and raw u for (rho, tau) under full association and no reuse.

    Returns ("infeasible", 0.0) when (rho, tau) lies in no region.
    """
    op = OperationKind.parse(op)
    regions = _regions(op, rho, tau, p.alpha, p.eta_bs, p.eta_ant)
    exact = [lab for lab, (c, _) in regions.items() if _holds(c, 0.0)]
    if len(exact) == 1:
        return exact[0], regions[exact[0]][1]
    interior = [lab for lab, (c, _) in regions.items()
                if all(m > _BOUNDARY_TOL for m, _ in c)]
    if len(interior) > 1:
        raise AmbiguousRegionError(
            f"{op.value}: regions {interior} both contain (rho={rho}, tau={tau})"
        )
    closed = [lab for lab, (c, _) in regions.items()
              if all(m >= -_BOUNDARY_TOL for m, _ in c)]
    if not closed:
        return "infeasible", 0.0
    lab = min(closed)
    return lab, regions[lab][1]


def _clamp01(u: float) -> float:
    return max(min(u, 1.0), 0.0)


def sinr_along_power_split(op, rho: float, eta_user, p: ScalingParams):
    """SINR exponent when the total power exponent ``rho`` is split as
    rho_ul = rho_dl = rho - eta_user, vectorised over ``eta_user``.

    The association and pilot exponents of ``p`` are kept; a pilot exponent
    larger than the candidate user exponent is capped at it.
    """
    op = OperationKind.parse(op)
    eu = np.asarray(eta_user, dtype=float)
    r = rho - eu
    pr = eu if p.upsilon_pr is None else np.minimum(p.upsilon_pr, eu)
    _, delta, snr = _core(op, p.alpha, p.eta_bs, p.eta_ant, eu, p.pa, pr, r, r)
    if op is OperationKind.IF:
        return snr
    return snr - np.maximum(delta, 0.0)


def supportable_users_numeric(op, rho: float, tau: float, p: ScalingParams,
                              grid: int = 2001, iters: int = 60) -> float:
    """Largest user exponent in [0, 1] whose SINR exponent still meets ``tau``.

    Dense scan over eta_user followed by bisection on the last sign change.
    Returns -1.0 when even a single user cannot meet the target.
    """
    g = np.linspace(0.0, 1.0, grid)
    ok = sinr_along_power_split(op, rho, g, p) >= tau - 1e-12
    if not ok.any():
        return -1.0
    i = int(np.flatnonzero(ok)[-1])
    if i == grid - 1:
        return 1.0
    lo, hi = g[i], g[i + 1]
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if sinr_along_power_split(op, rho, mid, p) >= tau - 1e-12:
            lo = mid
        else:
            hi = mid
    return float(lo)


SNAP_TOL = 1e-9


def supportable_users(op, rho: float, tau: float, p: ScalingParams) -> TradeoffPoint:
    """Supportable-user exponent at total power exponent ``rho`` and SINR target ``tau``.

    Under full association and one pilot per user the closed-form region
    table is used.  Otherwise the exponent is found numerically; the region
    label then still names the full-association region of (rho, tau), so
    labels are comparable across association and pilot settings.
    """
    op = OperationKind.parse(op)
    rho, tau = float(rho), float(tau)
    if not (math.isfinite(rho) and math.isfinite(tau)):
        raise ValidationError("rho/tau", "must be finite")
    label, u = table_region(op, rho, tau, p)
    if p.upsilon_pa is None and p.upsilon_pr is None:
        zeta = _clamp01(u) if label != "infeasible" else 0.0
        return TradeoffPoint(rho, tau, zeta, label)
    z = max(supportable_users_numeric(op, rho, tau, p), 0.0)
    if label != "infeasible" and abs(z - _clamp01(u)) <= SNAP_TOL:
        z = _clamp01(u)  # constraint not binding: report the closed form exactly
    return TradeoffPoint(rho, tau, z, label)


def tradeoff_grid(op, rho_range, tau_range, p: ScalingParams, steps) -> list[list[TradeoffPoint]]:
    """Row-major grid: one row per rho value, one column per tau value.

    ``steps`` is an int or a (rho_steps, tau_steps) pair; ranges are
    inclusive (lo, hi) pairs.
    """
    rs, ts = (steps, steps) if isinstance(steps, int) else tuple(steps)
    if rs < 1 or ts < 1:
        raise ValidationError("steps", "must be positive")
    for name, rng in (("rho_range", rho_range), ("tau_range", tau_range)):
        if len(rng) != 2 or not all(math.isfinite(float(v)) for v in rng):
            raise ValidationError(name, "must be a finite (lo, hi) pair")
    rhos = np.linspace(float(rho_range[0]), float(rho_range[1]), rs)
    taus = np.linspace(float(tau_range[0]), float(tau_range[1]), ts)
    return [[supportable_users(op, float(r), float(t), p) for t in taus] for r in rhos]
