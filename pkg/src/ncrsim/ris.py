"""RIS reflection model, per-realization rate and the hardware-impairment rate."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .ncr import rate


def wrap_phases(thetas) -> np.ndarray:
    """Map phases onto [0, 2*pi)."""
    t = np.mod(np.asarray(thetas, dtype=float), 2 * np.pi)
    t[t >= 2 * np.pi] = 0.0  # mod can round up to exactly 2*pi
    return t


def reflection_matrix(thetas) -> np.ndarray:
    return np.diag(np.exp(1j * np.asarray(thetas, dtype=float)))


def ris_effective_channel(h_br, h_ru, thetas) -> np.ndarray:
    """Cascaded BS-RIS-UE row channel ``h_ru diag(e^{j theta}) h_br`` (length N_b)."""
    h_br = np.atleast_2d(np.asarray(h_br, dtype=complex))
    h_ru = np.asarray(h_ru, dtype=complex).reshape(-1)
    thetas = np.asarray(thetas, dtype=float).reshape(-1)
    if not (h_br.shape[0] == h_ru.size == thetas.size):
        raise ValueError(f"inconsistent RIS sizes: h_br rows {h_br.shape[0]}, "
                         f"h_ru {h_ru.size}, phases {thetas.size}")
    return (h_ru * np.exp(1j * thetas)) @ h_br


def ris_snr(h_br, h_ru, thetas, w, p_mw, sigma2_mw) -> float:
    h = ris_effective_channel(h_br, h_ru, thetas)
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.size != h.size:
        raise ValueError(f"precoder has {w.size} entries, BS has {h.size} antennas")
    return p_mw * abs(h @ w) ** 2 / sigma2_mw


def ris_rate(h_br, h_ru, thetas, w, p_mw, sigma2_mw, q_hz) -> float:
    return rate(q_hz, ris_snr(h_br, h_ru, thetas, w, p_mw, sigma2_mw))


class HwiLinkStats(NamedTuple):
    mu_br: float
    mu_ru: float
    mu_bu: float
    phi_bu: float
    alpha: float
    kappa_t: float
    kappa_r: float
    m: int


def hwi_coefficients(stats: HwiLinkStats) -> tuple[float, float]:
    """Return ``(beta, xi)``: the M^2 and M coefficients of the impaired received power."""
    a, br, ru, bu = stats.alpha, stats.mu_br, stats.mu_ru, stats.mu_bu
    if min(br, ru, bu) < 0:
        raise ValueError("attenuation coefficients must be nonnegative")
    if not 0 < a <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {a}")
    beta = 4 * a * a * ru * br / math.pi ** 2
    xi = ((1 - 4 / math.pi ** 2) * a * a * ru * br
          + 4 * a / math.pi * math.sqrt(br * ru * bu) * math.cos(stats.phi_bu))
    return beta, xi


def hwi_sinr(stats: HwiLinkStats, p_mw, sigma2_mw) -> float:
    if not p_mw > 0:
        raise ValueError("transmit power must be positive")
    beta, xi = hwi_coefficients(stats)
    m = stats.m
    sig = beta * m * m + xi * m + stats.mu_bu
    if sig < 0:
        raise ValueError(f"impaired received power is negative ({sig:.3e}); "
                         "direct-link phase and strength give destructive combining")
    return sig / ((stats.kappa_t + stats.kappa_r) * sig + sigma2_mw / p_mw)


def hwi_rate(stats: HwiLinkStats, p_mw, sigma2_mw, q_hz) -> float:
    """Channel-averaged RIS rate under transceiver distortion and imperfect reflection."""
    return rate(q_hz, hwi_sinr(stats, p_mw, sigma2_mw))
