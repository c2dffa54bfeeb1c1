"""Experiment drivers: rate vs BS power, RIS size needed to match an NCR,
blockage bypass, and two-cell forwarded interference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .beamforming import ao_optimize, codebook_optimize, dft_codebook, svd_beam_pair
from .geometry import (Position, Wall, as_position, distance, is_blocked, link_gain,
                       make_wall, synthesize_channel)
from .montecarlo import monte_carlo
from .ncr import (NcrParams, effective_gain, ncr_effective_amplification,
                  ncr_forwarded_interference, ncr_snr, rate)
from .ris import HwiLinkStats, hwi_sinr, ris_snr
from .units import SystemParams, dbm_to_mw, default_params

METHODS = ("ncr_unclamped", "ncr_clamped", "ris_ao", "ris_dft", "ris_hwi", "direct_only")


@dataclass
class Scene:
    bs: list
    ue: list
    ncr: list = field(default_factory=list)
    ris: list = field(default_factory=list)
    walls: list = field(default_factory=list)

    def __post_init__(self):
        if not self.bs or not self.ue:
            raise ValueError("a scene needs at least one BS and one UE")
        self.bs = [as_position(p) for p in self.bs]
        self.ue = [as_position(p) for p in self.ue]
        self.ncr = [as_position(p) for p in self.ncr]
        self.ris = [as_position(p) for p in self.ris]
        self.walls = [w if isinstance(w, Wall) else make_wall(*w) for w in self.walls]
        # NCR and RIS may share a site: they are alternative deployments
        relays = self.ncr + self.ris
        for group_a, group_b in ((self.bs, relays), (relays, self.ue), (self.bs, self.ue)):
            for a in group_a:
                if a in group_b:
                    raise ValueError(f"transmitter and receiver coincide at {a}")


@dataclass(frozen=True)
class TrialRecord:
    scenario: str
    sweep_value: float
    method: str
    trial_index: int
    rate_bps: float
    sinr_db: float


@dataclass
class SweepResult:
    """Per-method mean rate and standard error at every sweep point.

    ``mean`` and ``stderr`` are keyed by ``(sweep_value, method)``.
    """

    scenario: str
    sweep_values: list
    methods: list
    mean: dict
    stderr: dict
    trials: int
    q_hz: float
    samples: list = field(default_factory=list, repr=False)

    def curve(self, method: str) -> np.ndarray:
        return np.array([self.mean[(v, method)] for v in self.sweep_values])

    def curve_stderr(self, method: str) -> np.ndarray:
        return np.array([self.stderr[(v, method)] for v in self.sweep_values])

    def rows(self) -> list:
        """``(scenario, sweep_value, method, mean, stderr, trials)`` tuples."""
        return [(self.scenario, v, m, self.mean[(v, m)], self.stderr[(v, m)], self.trials)
                for (v, m) in self.mean]

    def records(self) -> list:
        out = []
        for i, sample in enumerate(self.samples):
            for (v, m), r in sample.items():
                snr = 2.0 ** (r / self.q_hz) - 1.0
                out.append(TrialRecord(self.scenario, v, m, i, r,
                                       10 * math.log10(snr) if snr > 0 else -math.inf))
        return out


def _sweep(scenario, sweep_values, methods, sinr_fn, params, seed, trials, workers, stream=()):
    q = params.bandwidth_hz

    def trial(rng):
        return {k: rate(q, s) for k, s in sinr_fn(rng).items()}

    res = monte_carlo(trial, trials, seed, workers=workers, stream=stream)
    return SweepResult(scenario, list(sweep_values), list(methods), res.mean, res.stderr,
                       trials, q, res.samples)


def _draw(tx, rx, n_t, n_r, params, gains_db, rng, walls=()):
    blocked = is_blocked(tx, rx, walls)
    return synthesize_channel(tx, rx, n_t, n_r, params.n_paths, params.carrier_freq_ghz,
                              blocked, gains_db, rng).matrix


def _gains(params):
    bn = params.bs_gain_dbi + params.node_gain_dbi
    nu = params.node_gain_dbi + params.ue_gain_dbi
    bu = params.bs_gain_dbi + params.ue_gain_dbi
    return bn, nu, bu


def _ncr_gammas(H_bn, H_nu):
    pair_bn = svd_beam_pair(H_bn)
    pair_nu = svd_beam_pair(H_nu)
    return effective_gain(H_bn, pair_bn), effective_gain(H_nu, pair_nu), pair_nu.tx


def _ncr_sinr(p_mw, gain_db, cap_mw, gamma_bn, gamma_nu, sigma2, interference=0.0):
    ncr = NcrParams(gain_db, sigma2, cap_mw)
    g = ncr_effective_amplification(p_mw, ncr, gamma_bn)
    if interference == 0.0:
        return ncr_snr(p_mw, g, gamma_bn, gamma_nu, sigma2, sigma2)
    return p_mw * g * gamma_bn * gamma_nu / (sigma2 + sigma2 * g * gamma_nu + interference)


def hwi_stats_for(params: SystemParams, bs, ris, ue, m=None, include_direct=False,
                  walls=()) -> HwiLinkStats:
    """Large-scale HWI inputs from geometry; the direct BS-UE term is NLoS and off by default."""
    bn, nu, bu = _gains(params)
    fc = params.carrier_freq_ghz
    mu_br = link_gain(distance(bs, ris), fc, is_blocked(bs, ris, walls), bn)
    mu_ru = link_gain(distance(ris, ue), fc, is_blocked(ris, ue, walls), nu)
    mu_bu = link_gain(distance(bs, ue), fc, True, bu) if include_direct else 0.0
    h = params.hwi
    return HwiLinkStats(mu_br, mu_ru, mu_bu, h.phi_bu, h.alpha, h.kappa_t, h.kappa_r,
                        params.n_ris_elements if m is None else m)


# ---------------------------------------------------------------- rate vs power

FIG3_SCENE = Scene(bs=[(140.0, 50.0)], ncr=[(0.0, 0.0)], ris=[(0.0, 0.0)], ue=[(100.0, 0.0)])
FIG3_POWERS_DBM = tuple(range(20, 51, 5))


def run_fig3(params: Optional[SystemParams] = None, seed: int = 0, trials: int = 200,
             powers_dbm: Sequence[float] = FIG3_POWERS_DBM,
             ncr_gains_db: Sequence[float] = (90.0, 100.0),
             include_direct_hwi: bool = False, scene: Scene = FIG3_SCENE,
             workers: Optional[int] = None) -> SweepResult:
    """UE rate vs BS power for NCR (with and without output cap) and RIS (AO, DFT, HWI).

    NCR methods are labelled ``<method>_g<gain>`` for each amplification gain.
    The output cap is ``params.ncr_max_out_dbm``, falling back to 40 dBm.
    """
    params = params or default_params("fig3")
    bs, node, ue = scene.bs[0], scene.ncr[0], scene.ue[0]
    ris = (scene.ris or scene.ncr)[0]
    bn, nu, _ = _gains(params)
    nb, nn, m = params.n_bs_antennas, params.n_ncr_antennas_per_side, params.n_ris_elements
    sigma2 = params.noise_mw
    q = params.bandwidth_hz
    cap_dbm = 40.0 if params.ncr_max_out_dbm is None else params.ncr_max_out_dbm
    cap = dbm_to_mw(cap_dbm)
    powers = [float(p) for p in powers_dbm]
    codebook = dft_codebook(m)
    hwi = hwi_stats_for(params, bs, ris, ue, include_direct=include_direct_hwi, walls=scene.walls)

    ncr_methods = [f"{kind}_g{g:g}" for g in ncr_gains_db for kind in ("ncr_unclamped", "ncr_clamped")]
    methods = ncr_methods + ["ris_ao", "ris_dft", "ris_hwi"]

    def sinrs(rng):
        H_bn = _draw(bs, node, nb, nn, params, bn, rng, scene.walls)
        H_nu = _draw(node, ue, nn, 1, params, nu, rng, scene.walls)
        h_br = _draw(bs, ris, nb, m, params, bn, rng, scene.walls)
        h_ru = _draw(ris, ue, m, 1, params, nu, rng, scene.walls)[0]
        g_bn, g_nu, _ = _ncr_gammas(H_bn, H_nu)
        dft = codebook_optimize(h_br, h_ru, codebook, 1.0, sigma2, q)
        out = {}
        for p_dbm in powers:
            p = dbm_to_mw(p_dbm)
            for g in ncr_gains_db:
                out[(p_dbm, f"ncr_unclamped_g{g:g}")] = _ncr_sinr(p, g, None, g_bn, g_nu, sigma2)
                out[(p_dbm, f"ncr_clamped_g{g:g}")] = _ncr_sinr(p, g, cap, g_bn, g_nu, sigma2)
            ao = ao_optimize(h_br, h_ru, p, sigma2, q)
            out[(p_dbm, "ris_ao")] = ris_snr(h_br, h_ru, ao.phases, ao.w, p, sigma2)
            out[(p_dbm, "ris_dft")] = ris_snr(h_br, h_ru, np.angle(codebook[dft.best_index]),
                                              dft.w, p, sigma2)
            out[(p_dbm, "ris_hwi")] = hwi_sinr(hwi, p, sigma2)
        return out

    return _sweep("fig3", powers, methods, sinrs, params, seed, trials, workers)


# ------------------------------------------------------- RIS size to match an NCR

def find_min_ris_elements(target_rate: float, rate_of_m: Callable[[int], float],
                          m_max: int) -> Optional[int]:
    """Smallest M in [1, m_max] with ``rate_of_m(M) >= target_rate``, or None.

    Doubles M to bracket the target, bisects, then steps down while M-1
    still meets the target (guards against a slightly non-monotone estimate).
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if rate_of_m(1) >= target_rate:
        return 1
    lo, hi = 1, 2
    while hi < m_max and rate_of_m(hi) < target_rate:
        lo, hi = hi, min(2 * hi, m_max)
    if rate_of_m(hi) < target_rate:
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rate_of_m(mid) >= target_rate:
            hi = mid
        else:
            lo = mid
    while hi > 1 and rate_of_m(hi - 1) >= target_rate:
        hi -= 1
    return hi


@dataclass
class Fig4Row:
    n_ncr_antennas: int
    gain_db: float
    ncr_rate_bps: float
    required_m_ideal: Optional[int]
    required_m_hwi: Optional[int]


@dataclass
class Fig4Table:
    rows: list
    trials: int
    m_max: int

    def lookup(self, n_ncr_antennas, gain_db) -> Fig4Row:
        for r in self.rows:
            if r.n_ncr_antennas == n_ncr_antennas and r.gain_db == gain_db:
                return r
        raise KeyError((n_ncr_antennas, gain_db))


def run_fig4(params: Optional[SystemParams] = None, seed: int = 0, trials: int = 100,
             n_ncr_grid: Sequence[int] = tuple(range(4, 11)),
             gains_db: Sequence[float] = (90.0, 100.0), m_max: int = 8192,
             scene: Scene = FIG3_SCENE, workers: Optional[int] = None) -> Fig4Table:
    """Smallest RIS (ideal AO and HWI) whose mean rate matches the capped NCR.

    The RIS channel draws come from their own rng stream and are nested in M,
    so every M is evaluated on common random numbers. Unreachable targets are
    reported as None.
    """
    params = params or default_params("fig4")
    bs, node, ue = scene.bs[0], scene.ncr[0], scene.ue[0]
    ris = (scene.ris or scene.ncr)[0]
    bn, nu, _ = _gains(params)
    nb = params.n_bs_antennas
    sigma2, q, p = params.noise_mw, params.bandwidth_hz, params.bs_power_mw
    cap = params.ncr_max_out_mw

    @lru_cache(maxsize=None)
    def ideal_rate(m):
        def trial(rng):
            h_br = _draw(bs, ris, nb, m, params, bn, rng, scene.walls)
            h_ru = _draw(ris, ue, m, 1, params, nu, rng, scene.walls)[0]
            return ao_optimize(h_br, h_ru, p, sigma2, q).rate
        return monte_carlo(trial, trials, seed, workers=workers, stream=(1,)).mean

    def hwi_rate_of(m):
        return rate(q, hwi_sinr(hwi_stats_for(params, bs, ris, ue, m=m, walls=scene.walls),
                                p, sigma2))

    rows = []
    for nn in n_ncr_grid:
        def ncr_trial(rng, nn=nn):
            H_bn = _draw(bs, node, nb, nn, params, bn, rng, scene.walls)
            H_nu = _draw(node, ue, nn, 1, params, nu, rng, scene.walls)
            g_bn, g_nu, _ = _ncr_gammas(H_bn, H_nu)
            return {g: rate(q, _ncr_sinr(p, g, cap, g_bn, g_nu, sigma2)) for g in gains_db}

        target = monte_carlo(ncr_trial, trials, seed, workers=workers, stream=(0,)).mean
        for g in gains_db:
            rows.append(Fig4Row(int(nn), float(g), target[g],
                                find_min_ris_elements(target[g], ideal_rate, m_max),
                                find_min_ris_elements(target[g], hwi_rate_of, m_max)))
    return Fig4Table(rows, trials, m_max)


# ------------------------------------------------------------- blockage bypass

FIG5_SCENE = Scene(bs=[(0.0, 0.0)], ncr=[(40.0, 20.0)], ue=[(60.0, 0.0)],
                   walls=[((40.0, 40.0), (-10.0, 10.0))])
FIG5_Y_GRID = tuple(float(y) for y in range(-20, 101, 10))


def run_fig5(params: Optional[SystemParams] = None, seed: int = 0, trials: int = 200,
             y_grid: Sequence[float] = FIG5_Y_GRID, ue_x: float = 60.0,
             scene: Scene = FIG5_SCENE, workers: Optional[int] = None) -> SweepResult:
    """UE rate along the line x = ``ue_x`` with the direct link only, and via the NCR.

    Each link switches to NLoS path loss when it crosses a wall. Every sweep
    point reuses the trial's small-scale draws so the curves stay smooth.
    """
    params = params or default_params("fig5")
    bs, node = scene.bs[0], scene.ncr[0]
    bn, nu, bu = _gains(params)
    nb, nn = params.n_bs_antennas, params.n_ncr_antennas_per_side
    sigma2, p = params.noise_mw, params.bs_power_mw
    ys = [float(y) for y in y_grid]

    def sinrs(rng):
        point_seed = int(rng.integers(2 ** 63))
        out = {}
        for y in ys:
            ue = Position(ue_x, y)
            r = np.random.default_rng(point_seed)
            H_bn = _draw(bs, node, nb, nn, params, bn, r, scene.walls)
            H_nu = _draw(node, ue, nn, 1, params, nu, r, scene.walls)
            h_bu = _draw(bs, ue, nb, 1, params, bu, r, scene.walls)
            g_bn, g_nu, _ = _ncr_gammas(H_bn, H_nu)
            out[(y, "direct_only")] = p * effective_gain(h_bu, svd_beam_pair(h_bu)) / sigma2
            out[(y, "ncr")] = _ncr_sinr(p, params.ncr_gain_db, params.ncr_max_out_mw,
                                        g_bn, g_nu, sigma2)
        return out

    return _sweep("fig5", ys, ["direct_only", "ncr"], sinrs, params, seed, trials, workers)


# ----------------------------------------------------- two-cell interference

FIG7_BS = ((-50.0, 0.0), (250.0, 0.0))
FIG7_NCR = ((0.0, 20.0), (200.0, 20.0))
FIG7_UE2 = {-0.4: (160.0, -40.0), -0.2: (160.0, -20.0), 0.0: (160.0, 20.0)}
FIG7_THETA1_GRID = tuple(float(x) for x in np.round(np.linspace(-0.5, 0.5, 21) * np.pi, 12))


def fig7_method(theta2_over_pi: float, ncr1_on: bool = True) -> str:
    return f"ue2_theta2={theta2_over_pi:g}pi" + ("" if ncr1_on else "_ncr1_off")


def run_fig7(params: Optional[SystemParams] = None, seed: int = 0, trials: int = 200,
             theta1_grid: Sequence[float] = FIG7_THETA1_GRID, ue1_radius: float = 80.0,
             ue2_positions: Optional[dict] = None,
             workers: Optional[int] = None) -> SweepResult:
    """Rate of the cell-2 UE while the cell-1 UE moves on a circle around the origin.

    Sweep values are the cell-1 UE angle in radians. For every cell-2 UE
    position there is a curve with NCR 1 forwarding toward UE 1 and a
    reference curve with NCR 1 switched off.
    """
    params = params or default_params("fig7")
    ue2_positions = FIG7_UE2 if ue2_positions is None else ue2_positions
    bs1, bs2 = map(as_position, FIG7_BS)
    n1, n2 = map(as_position, FIG7_NCR)
    bn, nu, _ = _gains(params)
    nb, nn = params.n_bs_antennas, params.n_ncr_antennas_per_side
    sigma2, p = params.noise_mw, params.bs_power_mw
    g_db, cap = params.ncr_gain_db, params.ncr_max_out_mw
    thetas = [float(t) for t in theta1_grid]
    methods = [fig7_method(t2, on) for t2 in ue2_positions for on in (True, False)]

    def sinrs(rng):
        point_seed = int(rng.integers(2 ** 63))
        out = {}
        for th in thetas:
            ue1 = Position(ue1_radius * math.cos(th), ue1_radius * math.sin(th))
            r = np.random.default_rng(point_seed)
            H_b1n1 = _draw(bs1, n1, nb, nn, params, bn, r)
            H_n1u1 = _draw(n1, ue1, nn, 1, params, nu, r)
            H_b2n2 = _draw(bs2, n2, nb, nn, params, bn, r)
            g_bn1, _, tx1 = _ncr_gammas(H_b1n1, H_n1u1)
            g1 = ncr_effective_amplification(p, NcrParams(g_db, sigma2, cap), g_bn1)
            g_bn2 = effective_gain(H_b2n2, svd_beam_pair(H_b2n2))
            for t2, pos in ue2_positions.items():
                ue2 = as_position(pos)
                H_n2u2 = _draw(n2, ue2, nn, 1, params, nu, r)
                H_n1u2 = _draw(n1, ue2, nn, 1, params, nu, r)
                g_nu2 = effective_gain(H_n2u2, svd_beam_pair(H_n2u2))
                interference = ncr_forwarded_interference(p, g1, g_bn1, H_n1u2, tx1, sigma2)
                out[(th, fig7_method(t2, True))] = _ncr_sinr(p, g_db, cap, g_bn2, g_nu2, sigma2,
                                                             interference)
                out[(th, fig7_method(t2, False))] = _ncr_sinr(p, g_db, cap, g_bn2, g_nu2, sigma2)
        return out

    return _sweep("fig7", thetas, methods, sinrs, params, seed, trials, workers)
