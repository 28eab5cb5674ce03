"""Small-scale fading and pilot-based MMSE estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import NetworkInstance, make_rng


@dataclass
class ChannelRealization:
    h: np.ndarray  # (l, k, m) complex, i.i.d. CN(0, 1)

    def g(self, beta: np.ndarray) -> np.ndarray:
        return np.sqrt(beta)[:, :, None] * self.h


@dataclass
class EstimatedChannels:
    h_hat: np.ndarray  # (l, k, m); zero where the BS does not serve the user
    phi: np.ndarray    # (l, k) estimation quality phi_lkk
    genie: bool = False


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def draw_channels(net: NetworkInstance, seed=None) -> ChannelRealization:
    rng = make_rng(seed)
    return ChannelRealization(complex_normal(rng, (net.l, net.k, net.m)))


def pilot_onehot(net: NetworkInstance) -> np.ndarray:
    e = np.zeros((net.k, net.t))
    e[np.arange(net.k), net.pilot_of] = 1.0
    return e


def estimate(net: NetworkInstance, ch: ChannelRealization, p_ul: float,
             seed=None, genie: bool = False) -> EstimatedChannels:
    """MMSE estimates from the received pilot signal of every BS.

    Users sharing a pilot at a BS see the same noise sample, so the
    contamination structure is exact.  With ``genie`` the true channels are
    returned on the served pairs.
    """
    mask = net.assoc_mask
    if genie:
        h_hat = np.where(mask[:, :, None], ch.h, 0.0)
        return EstimatedChannels(h_hat, mask.astype(float), genie=True)
    if not p_ul > 0:
        raise ValueError(f"p_ul must be positive, got {p_ul}")
    rng = make_rng(seed)
    pb = p_ul * net.beta                        # (l, k)
    onehot = pilot_onehot(net)                  # (k, t)
    denom = (pb @ onehot)[:, net.pilot_of] + 1.0
    phi = pb / denom
    theta = np.sqrt(pb) / denom
    # received pilot per (l, pilot): sum of co-pilot channels plus noise
    weighted = np.sqrt(pb)[:, :, None] * ch.h
    y = np.tensordot(weighted, onehot, axes=([1], [0])).transpose(0, 2, 1)
    y = y + complex_normal(rng, (net.l, net.t, net.m))
    h_hat = theta[:, :, None] * y[:, net.pilot_of, :]
    h_hat[~mask] = 0.0
    return EstimatedChannels(h_hat, phi)
