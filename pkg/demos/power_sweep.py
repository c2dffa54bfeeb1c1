"""NCR vs RIS rate as the BS transmit power grows.

The repeater amplifies (up to its output cap), the surface only reflects.
Run: python3 demos/power_sweep.py
"""
from ncrsim import default_params
from ncrsim.scenarios import run_fig3

params = default_params("fig3")
res = run_fig3(params, seed=1, trials=50)

methods = ["ncr_unclamped_g100", "ncr_clamped_g100", "ris_ao", "ris_dft", "ris_hwi"]
print("P [dBm] " + "".join(f"{m:>20s}" for m in methods))
for i, p in enumerate(res.sweep_values):
    print(f"{p:7.0f} " + "".join(f"{res.curve(m)[i] / 1e9:20.3f}" for m in methods))
print("rates in Gbit/s")

# the DFT search needs no channel knowledge; its gap to AO shrinks as power grows
gap = 1 - res.curve("ris_dft") / res.curve("ris_ao")
print(f"DFT loss vs AO: {100 * gap.min():.1f}% .. {100 * gap.max():.1f}%")
