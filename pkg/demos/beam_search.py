"""Passive beamforming on one channel draw: alternating optimization vs a
DFT codebook sweep, and the SVD beam pair an NCR would use.

Run: python3 demos/beam_search.py
"""
import numpy as np

from ncrsim import default_params
from ncrsim.beamforming import ao_optimize, codebook_optimize, dft_codebook, svd_beam_pair
from ncrsim.geometry import synthesize_channel
from ncrsim.ncr import effective_gain

params = default_params("fig3")
rng = np.random.default_rng(3)
h_br = synthesize_channel((140, 50), (0, 0), 16, 100, 3, 28.0, False, 36.0, rng).matrix
h_ru = synthesize_channel((0, 0), (100, 0), 100, 1, 3, 28.0, False, 18.0, rng).matrix[0]
p, s2, q = params.bs_power_mw, params.noise_mw, params.bandwidth_hz

ao = ao_optimize(h_br, h_ru, p, s2, q)
print(f"AO: {len(ao.trace)} iterations, {ao.rate / 1e9:.3f} Gbit/s")
print("trace:", " ".join(f"{r / 1e9:.3f}" for r in ao.trace[:8]), "...")

cb = codebook_optimize(h_br, h_ru, dft_codebook(100), p, s2, q)
print(f"DFT codebook: beam {cb.best_index} of 100, {cb.rate / 1e9:.3f} Gbit/s")

# an NCR with 16 antennas per side picks the dominant singular pair instead
H = synthesize_channel((140, 50), (0, 0), 16, 16, 3, 28.0, False, 36.0, rng).matrix
pair = svd_beam_pair(H)
print(f"SVD beam gain {effective_gain(H, pair):.3e} = sigma_max^2 "
      f"{np.linalg.svd(H, compute_uv=False)[0] ** 2:.3e}")
