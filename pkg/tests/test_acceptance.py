"""Acceptance gate. Each check prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
written straight to the terminal.
"""
import math
import time

import numpy as np
import pytest

from ncrsim.beamforming import ao_optimize, codebook_optimize, dft_codebook
from ncrsim.cli import main
from ncrsim.geometry import is_blocked, path_loss_los_db, path_loss_nlos_db, synthesize_channel
from ncrsim.ncr import NcrParams, ncr_effective_amplification, ncr_link_budget, ncr_snr
from ncrsim.ris import HwiLinkStats, hwi_coefficients, hwi_rate
from ncrsim.scenarios import FIG5_SCENE, FIG7_UE2, fig7_method, run_fig3, run_fig4, run_fig5, run_fig7
from ncrsim.units import default_params

from oracles import naive_codebook_scores


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"
    return _report


# 1. rate ordering at 45 dBm -------------------------------------------------

@pytest.fixture(scope="module")
def fig3_45():
    t0 = time.perf_counter()
    res = run_fig3(seed=2023, trials=200, powers_dbm=(45,))
    return res, time.perf_counter() - t0


def _fig3_means(res):
    return (res.mean[(45.0, "ncr_unclamped_g100")], res.mean[(45.0, "ris_ao")],
            res.mean[(45.0, "ris_hwi")])


def test_c1_fig3_ordering(fig3_45, report):
    ncr, ao, hwi = _fig3_means(fig3_45[0])
    report("C1 ordering ncr(g=100) > ris_ao > ris_hwi", ncr > ao > hwi,
           f"{ncr / 1e9:.3f} > {ao / 1e9:.3f} > {hwi / 1e9:.3f} Gbit/s")


def test_c1_fig3_ncr_vs_ideal_ris(fig3_45, report):
    ncr, ao, _ = _fig3_means(fig3_45[0])
    ratio = ncr / ao
    report("C1 NCR/ris_ao ratio in [1.10, 1.80]", 1.10 <= ratio <= 1.80, f"ratio = {ratio:.3f}")


def test_c1_fig3_ncr_vs_hwi_ris(fig3_45, report):
    ncr, _, hwi = _fig3_means(fig3_45[0])
    report("C1 NCR/ris_hwi ratio >= 2.0", ncr / hwi >= 2.0, f"ratio = {ncr / hwi:.3f}")


def test_c1_fig3_runtime(fig3_45, report):
    report("C1 runtime <= 120 s", fig3_45[1] <= 120.0, f"{fig3_45[1]:.2f} s")


# 2. required RIS size -------------------------------------------------------

@pytest.fixture(scope="module")
def fig4():
    return run_fig4(seed=2023, trials=100, n_ncr_grid=tuple(range(4, 11)))


def test_c2_required_m_grows_with_gain(fig4, report):
    pairs = [(n, fig4.lookup(n, 90.0).required_m_ideal, fig4.lookup(n, 100.0).required_m_ideal)
             for n in range(4, 11)]
    ok = all(m90 is not None and m100 is not None and m100 > m90 for _, m90, m100 in pairs)
    report("C2 ideal M(g=100) > M(g=90) for N_n = 4..10", ok,
           ", ".join(f"N_n={n}: {m90} vs {m100}" for n, m90, m100 in pairs))


def test_c2_hwi_needs_more(fig4, report):
    def as_num(m):
        return math.inf if m is None else m
    ok = all(as_num(r.required_m_hwi) > as_num(r.required_m_ideal) for r in fig4.rows)
    report("C2 HWI-required M > ideal-required M", ok,
           "; ".join(f"N_n={r.n_ncr_antennas},g={r.gain_db:g}: {r.required_m_ideal}/"
                     f"{r.required_m_hwi or 'unreachable'}" for r in fig4.rows))


def test_c2_sanity_band(fig4, report):
    m = fig4.lookup(7, 100.0).required_m_ideal
    report("C2 ideal M at N_n=7, g=100 dB in [50, 800]", m is not None and 50 <= m <= 800, f"M = {m}")


# 3. blockage bypass ---------------------------------------------------------

def test_c3_blockage_bypass(report):
    y0 = 80.0
    ue = (60.0, y0)
    bs, ncr, walls = FIG5_SCENE.bs[0], FIG5_SCENE.ncr[0], FIG5_SCENE.walls
    geometry_ok = is_blocked(bs, ue, walls) and not is_blocked(bs, ncr, walls) \
        and not is_blocked(ncr, ue, walls)
    res = run_fig5(seed=2023, trials=100, y_grid=(y0,))
    ratio = res.mean[(y0, "ncr")] / res.mean[(y0, "direct_only")]
    report("C3 NCR path >= 3x direct-only with direct link blocked", geometry_ok and ratio >= 3.0,
           f"y0 = {y0:g} m, ratio = {ratio:.2f}")


# 4. interference dip --------------------------------------------------------

def test_c4_interference_dip(report):
    res = run_fig7(seed=2023, trials=100)
    worst = {}
    for t2 in FIG7_UE2:
        on = res.curve(fig7_method(t2, True))
        off = res.curve(fig7_method(t2, False))
        worst[t2] = on.min() / off[np.argmin(on)]
    ok = any(v <= 0.8 for v in worst.values())
    report("C4 UE2 rate dip <= 0.8x NCR1-off for some theta2", ok,
           ", ".join(f"theta2={k:g}pi: {v:.3f}" for k, v in worst.items()))


# 5. AO monotone and terminating ---------------------------------------------

def test_c5_ao_monotone(report):
    params = default_params("fig3")
    p, s2, q = params.bs_power_mw, params.noise_mw, params.bandwidth_hz
    worst_step, max_len, all_conv = 0.0, 0, True
    for seed in range(100):
        rng = np.random.default_rng(seed)
        h_br = synthesize_channel((140, 50), (0, 0), 16, 16, 3, 28.0, False, 36.0, rng).matrix
        h_ru = synthesize_channel((0, 0), (100, 0), 16, 1, 3, 28.0, False, 18.0, rng).matrix[0]
        res = ao_optimize(h_br, h_ru, p, s2, q, tol=1e-6, max_iter=100)
        steps = np.diff(res.trace)
        if steps.size:
            worst_step = min(worst_step, float(steps.min()))
        max_len = max(max_len, len(res.trace))
        all_conv &= res.converged
    ok = worst_step >= -1e-10 and all_conv and max_len <= 100
    report("C5 AO traces non-decreasing and converge within 100 iterations", ok,
           f"worst step {worst_step:.3e}, longest trace {max_len}, all converged {all_conv}")


# 6. codebook exactness ------------------------------------------------------

def test_c6_codebook_exhaustive(report):
    V = dft_codebook(16)
    mismatches = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        h_br = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        h_ru = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        naive = naive_codebook_scores(h_br, h_ru, V)
        res = codebook_optimize(h_br, h_ru, V, 1.0, 1.0, 1.0)
        best = int(np.argmax(naive))
        if res.best_index != best or abs(res.score - naive[best]) > 1e-12 * naive[best]:
            mismatches += 1
    report("C6 codebook best beam equals exhaustive recomputation", mismatches == 0,
           f"{mismatches} mismatches in 100")


def test_c6_codebook_orthogonal(report):
    errs = {m: float(np.max(np.abs(dft_codebook(m).conj().T @ dft_codebook(m) - m * np.eye(m))))
            for m in (4, 16, 64, 100)}
    report("C6 V^H V = M I within 1e-12", all(e <= 1e-12 for e in errs.values()),
           ", ".join(f"M={m}: {e:.1e}" for m, e in errs.items()))


# 7. HWI reduction -----------------------------------------------------------

def test_c7_hwi_kappa_zero(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        s = HwiLinkStats(mu_br=10 ** rng.uniform(-12, 0), mu_ru=10 ** rng.uniform(-12, 0),
                         mu_bu=10 ** rng.uniform(-15, 0), phi_bu=rng.uniform(-np.pi, np.pi),
                         alpha=rng.uniform(0.01, 1.0), kappa_t=0.0, kappa_r=0.0,
                         m=int(rng.integers(1, 2000)))
        p, s2, q = 10 ** rng.uniform(-3, 5), 10 ** rng.uniform(-12, -6), 10 ** rng.uniform(6, 10)
        beta, xi = hwi_coefficients(s)
        closed = q * math.log2(1 + p * (beta * s.m ** 2 + xi * s.m + s.mu_bu) / s2)
        worst = max(worst, abs(hwi_rate(s, p, s2, q) - closed) / closed)
    report("C7 kappa=0 matches closed form within 1e-12", worst <= 1e-12, f"worst rel err {worst:.2e}")


def test_c7_hwi_ceiling(report):
    s = HwiLinkStats(1e-7, 1e-8, 0.0, math.pi / 4, 1.0, 0.05 ** 2, 0.05 ** 2, 100)
    q = 1e9
    r = hwi_rate(s, 1e40, 3.98e-8, q)
    err = abs(r - q * math.log2(201)) / (q * math.log2(201))
    report("C7 P->inf ceiling = Q log2(201) within 1e-9", err <= 1e-9, f"rel err {err:.2e}")


# 8. NCR algebra -------------------------------------------------------------

def test_c8_ncr_hand_value(report):
    v = ncr_snr(1.0, 10.0, 0.1, 0.2, 0.01, 0.01)
    report("C8 SNR hand example 6.6667", abs(v - 20 / 3) <= 1e-12, f"{v:.15f}")


def test_c8_ncr_upper_bound(report):
    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(1000):
        p, g, gbn, gnu, sn, su = 10 ** rng.uniform(-3, 3, 6) * [1, 1e6, 1e-6, 1e-6, 1e-8, 1e-8]
        if not ncr_snr(p, g, gbn, gnu, sn, su) < p * gbn / sn:
            violations += 1
    report("C8 SNR strictly below P*gamma_bn/sigma_N^2", violations == 0, f"{violations} violations in 1000")


def test_c8_clamp_continuity(report):
    p, gbn, gnu, sn, g_db = 20.0, 1e-5, 1e-7, 4e-8, 90.0
    boundary = 10 ** (g_db / 10) * (sn + p * gbn)
    free = ncr_link_budget(p, NcrParams(g_db, sn), gbn, gnu, sn, 1e9).rate_bps
    errs = []
    for cap in (boundary * (1 - 1e-12), boundary, boundary * (1 + 1e-12)):
        r = ncr_link_budget(p, NcrParams(g_db, sn, cap), gbn, gnu, sn, 1e9).rate_bps
        errs.append(abs(r - free) / free)
    clamped = ncr_effective_amplification(p, NcrParams(g_db, sn, boundary * (1 - 1e-12)), gbn)
    report("C8 clamp boundary continuity within 1e-9",
           max(errs) <= 1e-9 and clamped < 10 ** (g_db / 10), f"max rel diff {max(errs):.2e}")


# 9. determinism -------------------------------------------------------------

@pytest.mark.parametrize("scenario", ["fig3", "fig4", "fig5", "fig7"])
def test_c9_determinism(scenario, tmp_path, monkeypatch, report):
    outputs = []
    for run, threads in enumerate(("1", "4", "4")):
        monkeypatch.setenv("NCRSIM_THREADS", threads)
        out = tmp_path / f"run{run}"
        assert main(["--scenario", scenario, "--seed", "11", "--trials", "6", "--out", str(out)]) == 0
        outputs.append((out / f"{scenario}.csv").read_bytes())
    report(f"C9 {scenario} CSV byte-identical across runs and thread counts",
           outputs[0] == outputs[1] == outputs[2], f"{len(outputs[0])} bytes")


# 10. path-loss oracle -------------------------------------------------------

def test_c10_path_loss(report):
    los, nlos = path_loss_los_db(100, 28), path_loss_nlos_db(100, 28)
    report("C10 PL(100 m, 28 GHz) = 101.40 / 149.94 dB +- 0.01",
           abs(los - 101.40) <= 0.01 and abs(nlos - 149.94) <= 0.01, f"{los:.4f} / {nlos:.4f}")
