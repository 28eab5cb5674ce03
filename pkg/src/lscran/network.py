"""Finite network realizations: placement on a disk, pathloss, association, pilots."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import ScalingParams, ValidationError


class DegenerateGeometryError(RuntimeError):
    pass


def make_rng(seed) -> np.random.Generator:
    """Counter-based Philox stream from an int, a sequence of ints or a SeedSequence."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class NetworkConfig:
    n_target: int
    params: ScalingParams
    region_radius: float = 1.0
    seed: int = 0
    typical_user: str = "centroid"

    def __post_init__(self):
        if int(self.n_target) != self.n_target or self.n_target < 4:
            raise ValidationError("n_target", f"must be an integer >= 4, got {self.n_target}")
        if not self.region_radius > 0:
            raise ValidationError("region_radius", "must be positive")
        if self.typical_user not in ("centroid", "random"):
            raise ValidationError("typical_user", "must be 'centroid' or 'random'")


@dataclass
class NetworkInstance:
    l: int
    m: int
    k: int
    t: int
    n_pa: int
    alpha: float
    bs_positions: np.ndarray    # (l, 2)
    user_positions: np.ndarray  # (k, 2)
    beta: np.ndarray            # (l, k)
    assoc: np.ndarray           # (k, n_pa) BS indices, nearest first
    pilot_of: np.ndarray        # (k,) values in 0..t-1
    typical_user: int
    region_radius: float = 1.0
    _mask: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def n_realized(self) -> int:
        return self.l * self.m

    @property
    def assoc_mask(self) -> np.ndarray:
        """(l, k) boolean: BS l serves user k."""
        if self._mask is None:
            mask = np.zeros((self.l, self.k), dtype=bool)
            mask[self.assoc, np.arange(self.k)[:, None]] = True
            self._mask = mask
        return self._mask

    def distances(self) -> np.ndarray:
        d = self.bs_positions[:, None, :] - self.user_positions[None, :, :]
        return np.hypot(d[..., 0], d[..., 1])

    def to_snapshot(self) -> str:
        doc = {
            "l": self.l, "m": self.m, "k": self.k, "t": self.t, "n_pa": self.n_pa,
            "alpha": self.alpha,
            "region_radius": self.region_radius,
            "bs_positions": self.bs_positions.tolist(),
            "user_positions": self.user_positions.tolist(),
            "assoc": self.assoc.tolist(),
            "pilot_of": self.pilot_of.tolist(),
            "typical_user": self.typical_user,
        }
        return json.dumps(doc)

    @classmethod
    def from_snapshot(cls, text: str) -> "NetworkInstance":
        d = json.loads(text)
        bs = np.asarray(d["bs_positions"], dtype=float).reshape(-1, 2)
        us = np.asarray(d["user_positions"], dtype=float).reshape(-1, 2)
        net = cls(
            l=d["l"], m=d["m"], k=d["k"], t=d["t"], n_pa=d["n_pa"], alpha=d["alpha"],
            bs_positions=bs, user_positions=us, beta=np.empty((0, 0)),
            assoc=np.asarray(d["assoc"], dtype=np.int64).reshape(d["k"], d["n_pa"]),
            pilot_of=np.asarray(d["pilot_of"], dtype=np.int64),
            typical_user=d["typical_user"], region_radius=d["region_radius"],
        )
        net.beta = net.distances() ** (-net.alpha)
        return net


def realize_sizes(cfg: NetworkConfig) -> tuple[int, int, int, int, int, int]:
    """(l, m, k, t, n_pa, n_realized); python's round() is half-to-even."""
    p = cfg.params
    n = cfg.n_target
    l = max(1, round(n ** p.eta_bs))
    m = max(1, round(n ** p.eta_ant))
    nr = l * m
    k = max(1, round(nr ** p.eta_user))
    t = k if p.upsilon_pr is None else max(1, min(k, round(nr ** p.upsilon_pr)))
    n_pa = l if p.upsilon_pa is None else max(1, min(l, round(nr ** p.upsilon_pa)))
    return l, m, k, t, n_pa, nr


def _uniform_disk(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(count))
    th = 2.0 * math.pi * rng.random(count)
    return np.column_stack((r * np.cos(th), r * np.sin(th)))


def _draw(cfg: NetworkConfig, rng: np.random.Generator) -> NetworkInstance:
    l, m, k, t, n_pa, _ = realize_sizes(cfg)
    alpha = cfg.params.alpha
    bs = _uniform_disk(rng, l, cfg.region_radius)
    us = _uniform_disk(rng, k, cfg.region_radius)
    diff = bs[:, None, :] - us[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    pts = np.vstack((bs, us))
    if (dist == 0).any() or len(np.unique(pts, axis=0)) < len(pts):
        raise DegenerateGeometryError("two nodes coincide")
    # stable sort keeps ties in index order
    assoc = np.argsort(dist.T, axis=1, kind="stable")[:, :n_pa]
    if t >= k:
        pilots = rng.permutation(k)
    else:
        pilots = rng.integers(0, t, size=k)
    if cfg.typical_user == "centroid":
        typical = int(np.argmin(np.hypot(us[:, 0], us[:, 1])))
    else:
        typical = int(rng.integers(0, k))
    return NetworkInstance(
        l=l, m=m, k=k, t=t, n_pa=n_pa, alpha=alpha,
        bs_positions=bs, user_positions=us, beta=dist ** (-alpha),
        assoc=assoc.astype(np.int64), pilot_of=pilots.astype(np.int64),
        typical_user=typical, region_radius=cfg.region_radius,
    )


def place_and_associate(cfg: NetworkConfig, rng=None) -> NetworkInstance:
    """Draw one network.  ``rng`` overrides ``cfg.seed`` when given."""
    rng = make_rng(cfg.seed if rng is None else rng)
    try:
        return _draw(cfg, rng)
    except DegenerateGeometryError:
        return _draw(cfg, rng)
