"""Amplify-and-forward NCR link budget."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .units import db_to_linear


@dataclass(frozen=True)
class NcrParams:
    gain_db: float
    sigma_n2_mw: float
    max_out_mw: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.gain_db):
            raise ValueError("gain_db must be finite")
        if not self.sigma_n2_mw > 0:
            raise ValueError("NCR noise variance must be positive")
        if self.max_out_mw is not None and not self.max_out_mw > 0:
            raise ValueError("output power cap must be positive")

    @property
    def gain(self) -> float:
        return db_to_linear(self.gain_db)


@dataclass(frozen=True)
class NcrLinkBudget:
    gamma_bn: float
    gamma_nu: float
    g_eff: float
    snr: float
    rate_bps: float


def effective_gain(H, pair) -> float:
    """Beamformed power gain ``|rx^H H tx|^2``."""
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    tx = np.asarray(pair[0], dtype=complex).reshape(-1)
    rx = np.asarray(pair[1], dtype=complex).reshape(-1)
    if H.shape != (rx.size, tx.size):
        raise ValueError(f"channel is {H.shape}, beams are rx {rx.size} / tx {tx.size}")
    return float(abs(rx.conj() @ H @ tx) ** 2)


def ncr_effective_amplification(p_mw, params: NcrParams, gamma_bn) -> float:
    """Linear gain actually applied once the output power cap is enforced."""
    g = params.gain
    if params.max_out_mw is None:
        return g
    p_in = params.sigma_n2_mw + p_mw * gamma_bn
    if g * p_in <= params.max_out_mw:
        return g
    return params.max_out_mw / p_in


def ncr_snr(p_mw, g_eff, gamma_bn, gamma_nu, sigma_n2, sigma_u2) -> float:
    signal = p_mw * g_eff * gamma_bn * gamma_nu
    return signal / (sigma_u2 + sigma_n2 * g_eff * gamma_nu)


def rate(q_hz, sinr) -> float:
    """Shannon rate in bit/s."""
    if sinr < 0:
        raise ValueError(f"SINR must be nonnegative, got {sinr}")
    return q_hz * math.log2(1.0 + sinr)


def ncr_link_budget(p_mw, params: NcrParams, gamma_bn, gamma_nu, sigma_u2, q_hz) -> NcrLinkBudget:
    g_eff = ncr_effective_amplification(p_mw, params, gamma_bn)
    snr = ncr_snr(p_mw, g_eff, gamma_bn, gamma_nu, params.sigma_n2_mw, sigma_u2)
    return NcrLinkBudget(gamma_bn, gamma_nu, g_eff, snr, rate(q_hz, snr))


def ncr_forwarded_interference(p_mw, g_eff, gamma_bn, h_nv, tx_beam, sigma_n2,
                               victim_rx_gain=1.0) -> float:
    """Power (mW) a repeater leaks onto a non-intended receiver.

    The repeater forwards its amplified input (signal plus its own noise)
    through ``tx_beam``; ``h_nv`` is the repeater-to-victim channel.
    """
    h = np.atleast_2d(np.asarray(h_nv, dtype=complex))
    t = np.asarray(tx_beam, dtype=complex).reshape(-1)
    if h.shape[1] != t.size:
        raise ValueError(f"channel has {h.shape[1]} tx antennas, beam has {t.size}")
    leak = float(np.sum(np.abs(h @ t) ** 2)) * victim_rx_gain
    return g_eff * (p_mw * gamma_bn + sigma_n2) * leak
