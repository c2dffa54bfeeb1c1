"""Beamformer construction for the NCR and RIS links.

Includes SVD transmit/receive pairs, the Kronecker DFT codebook for the RIS,
alternating optimization of BS precoder and RIS phases, and exhaustive
codebook search.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .ris import ris_rate, wrap_phases


class BeamPair(NamedTuple):
    tx: np.ndarray
    rx: np.ndarray


def _first_nonzero_phase(v, eps=1e-300):
    idx = np.flatnonzero(np.abs(v) > eps)
    return np.exp(-1j * np.angle(v[idx[0]])) if idx.size else 1.0


def svd_beam_pair(H) -> BeamPair:
    """Dominant right/left singular vectors of ``H`` (``n_r x n_t``).

    The global phase is fixed by making the first nonzero entry of ``tx``
    real-positive; ``rx`` is rotated with it so ``rx^H H tx`` stays real-positive.
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if not np.any(H):
        raise ValueError("channel matrix is identically zero")
    U, _, Vh = np.linalg.svd(H)
    tx = Vh[0].conj()
    rx = U[:, 0]
    rot = _first_nonzero_phase(tx)
    return BeamPair(tx * rot, rx * rot)


def dft_codebook(m: int) -> np.ndarray:
    """Kronecker product of two ``sqrt(m)``-point DFT codebooks.

    Row ``i*sqrt(m) + j`` holds ``omega_i (x) v_j``. Raises for non-square ``m``;
    use :func:`ao_optimize` for arbitrary RIS sizes.
    """
    if m < 1:
        raise ValueError("codebook size must be positive")
    n = math.isqrt(m)
    if n * n != m:
        raise ValueError(f"DFT codebook needs a perfect-square size, got {m}; "
                         "use ao_optimize for non-square RIS sizes")
    k = np.arange(n)
    F = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return np.einsum("ia,jb->ijab", F, F).reshape(m, m)


class AoResult(NamedTuple):
    w: np.ndarray
    phases: np.ndarray
    rate: float
    trace: list
    converged: bool


def _check_ris_channels(h_br, h_ru):
    h_br = np.atleast_2d(np.asarray(h_br, dtype=complex))
    h_ru = np.asarray(h_ru, dtype=complex).reshape(-1)
    if h_br.shape[0] != h_ru.size:
        raise ValueError(f"h_br has {h_br.shape[0]} rows but h_ru has {h_ru.size} entries")
    if not np.any(h_br) or not np.any(h_ru):
        raise ValueError("RIS channel is identically zero")
    return h_br, h_ru


def ao_optimize(h_br, h_ru, p_mw, sigma2_mw, q_hz, tol=1e-6, max_iter=100) -> AoResult:
    """Alternate RIS phase alignment and BS matched filtering until the rate settles.

    Starts from a uniform-amplitude, zero-phase precoder. Each iteration first
    sets every RIS phase so the reflected summands add in phase, then sets the
    precoder to the matched filter of the resulting effective row channel.
    Stops when the relative rate gain drops below ``tol``. ``trace`` holds the
    rate after every iteration and never decreases.
    """
    h_br, h_ru = _check_ris_channels(h_br, h_ru)
    if not tol > 0:
        raise ValueError("tol must be positive")
    n_b = h_br.shape[1]
    w = np.full(n_b, 1.0 / math.sqrt(n_b), dtype=complex)
    trace = []
    best = None
    converged = False
    for _ in range(max_iter):
        h_w = h_br @ w
        theta = wrap_phases(-np.angle(h_ru * h_w))
        h_eff = (h_ru * np.exp(1j * theta)) @ h_br
        w = h_eff.conj() / np.linalg.norm(h_eff)
        r = ris_rate(h_br, h_ru, theta, w, p_mw, sigma2_mw, q_hz)
        if best is None or r > best[2]:
            best = (w, theta, r)
        trace.append(r)
        if len(trace) > 1 and r - trace[-2] <= tol * trace[-2]:
            converged = True
            break
    return AoResult(best[0], best[1], best[2], trace, converged)


class CodebookResult(NamedTuple):
    w: np.ndarray
    best_index: int
    score: float
    rate: float


def codebook_scores(h_br, h_ru, codebook) -> np.ndarray:
    """Received-power score ``||h_ru diag(v_i) h_br||^2`` for every codeword."""
    h_br, h_ru = _check_ris_channels(h_br, h_ru)
    V = np.atleast_2d(np.asarray(codebook, dtype=complex))
    if V.shape[1] != h_ru.size:
        raise ValueError(f"codeword length {V.shape[1]} does not match RIS size {h_ru.size}")
    eff = (V * h_ru) @ h_br
    return np.sum(np.abs(eff) ** 2, axis=1)


def codebook_optimize(h_br, h_ru, codebook, p_mw, sigma2_mw, q_hz) -> CodebookResult:
    """Pick the codeword with the strongest effective channel, then MRT on it."""
    h_br, h_ru = _check_ris_channels(h_br, h_ru)
    V = np.atleast_2d(np.asarray(codebook, dtype=complex))
    scores = codebook_scores(h_br, h_ru, V)
    best = int(np.argmax(scores))  # argmax returns the lowest index on ties
    theta = wrap_phases(np.angle(V[best]))
    h_eff = (h_ru * V[best]) @ h_br
    w = h_eff.conj() / np.linalg.norm(h_eff)
    return CodebookResult(w, best, float(scores[best]),
                          ris_rate(h_br, h_ru, theta, w, p_mw, sigma2_mw, q_hz))
