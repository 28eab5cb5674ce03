"""Cooperative DL precoding, power allocation and typical-user link metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channels import ChannelRealization, EstimatedChannels
from .exponents import OperationKind
from .network import NetworkInstance

GRAM_COND_MAX = 1e12


class IllConditionedGramError(RuntimeError):
    def __init__(self, cond: float):
        super().__init__(f"ZF Gram matrix condition estimate {cond:.3g} exceeds {GRAM_COND_MAX:g}")
        self.cond = cond


class ZeroNormPrecoderError(RuntimeError):
    pass


@dataclass
class Precoder:
    operation: OperationKind
    f: np.ndarray  # (l*m, k); column j stacks f_lj over BSs, zero on unserved BSs
    m: int

    def f_lj(self, l: int, j: int) -> np.ndarray:
        return self.f[l * self.m:(l + 1) * self.m, j]


@dataclass
class LinkMetrics:
    snr: float
    sir: float
    sinr: float
    psi_kk: complex
    interference: float
    q: np.ndarray


def _stack(per_lk: np.ndarray) -> np.ndarray:
    """(l, k, m) -> (l*m, k)."""
    l, k, m = per_lk.shape
    return per_lk.transpose(0, 2, 1).reshape(l * m, k)


def estimated_gains(est: EstimatedChannels, net: NetworkInstance) -> np.ndarray:
    """G-hat^H as an (l*m, k) matrix."""
    return _stack(np.sqrt(net.beta)[:, :, None] * est.h_hat)


def build_precoder(op, est: EstimatedChannels, net: NetworkInstance) -> Precoder:
    op = OperationKind.parse(op)
    gh = estimated_gains(est, net)
    if op is not OperationKind.ZF:
        return Precoder(op, gh, net.m)
    gram = gh.conj().T @ gh
    gram = 0.5 * (gram + gram.conj().T)
    ev = np.linalg.eigvalsh(gram)
    cond = math.inf if ev[0] <= 0 else float(ev[-1] / ev[0])
    if cond > GRAM_COND_MAX:
        raise IllConditionedGramError(cond)
    w = scipy.linalg.cho_solve(scipy.linalg.cho_factor(gram), np.eye(net.k, dtype=gram.dtype))
    f = gh @ w
    mask = net.assoc_mask
    if not mask.all():
        # BSs outside a user's association set do not transmit to it
        f = f * np.repeat(mask, net.m, axis=0)
    return Precoder(op, f, net.m)


def allocate_power(pre: Precoder, p_dl_target: float) -> np.ndarray:
    norms = np.einsum("ij,ij->j", pre.f.real, pre.f.real) + np.einsum(
        "ij,ij->j", pre.f.imag, pre.f.imag
    )
    if (norms <= 0).any():
        raise ZeroNormPrecoderError(f"users {np.flatnonzero(norms <= 0).tolist()} have no precoder")
    return p_dl_target / norms


def true_gains(ch: ChannelRealization, net: NetworkInstance) -> np.ndarray:
    """G^H as an (l*m, k) matrix of true channels."""
    return _stack(ch.g(net.beta))


def effective_channels(pre: Precoder, ch: ChannelRealization, net: NetworkInstance,
                       rows=None) -> np.ndarray:
    """psi[k, j] = sum_l g_lk^H f_lj; restrict to ``rows`` users when given."""
    g = true_gains(ch, net)
    if rows is not None:
        g = g[:, np.atleast_1d(rows)]
    return g.conj().T @ pre.f


def metrics_from(psi_row: np.ndarray, q: np.ndarray, k: int, interference_free=False) -> LinkMetrics:
    power = q * (psi_row.real ** 2 + psi_row.imag ** 2)
    snr = float(power[k])
    interference = 0.0 if interference_free else float(power.sum() - power[k])
    if interference_free or interference == 0.0:
        interference = 0.0
        sir = math.inf
    else:
        sir = snr / interference
    sinr = snr / (interference + 1.0)
    return LinkMetrics(snr, sir, sinr, complex(psi_row[k]), interference, q)


def measure(op, net: NetworkInstance, ch: ChannelRealization, est: EstimatedChannels,
            p_dl: float) -> LinkMetrics:
    """Typical-user metrics; IF keeps MRT's signal and drops the interference."""
    op = OperationKind.parse(op)
    pre = build_precoder(op, est, net)
    q = allocate_power(pre, p_dl)
    k = net.typical_user
    psi = effective_channels(pre, ch, net, rows=k)[0]
    return metrics_from(psi, q, k, interference_free=op is OperationKind.IF)
