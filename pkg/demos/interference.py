"""Two cells, each with its own NCR. When NCR 1 steers toward its UE it can
spray amplified signal into the cell-2 UE.

Run: python3 demos/interference.py
"""
import numpy as np

from ncrsim.scenarios import FIG7_UE2, fig7_method, run_fig7

res = run_fig7(seed=1, trials=40)
theta1 = np.asarray(res.sweep_values) / np.pi
for t2 in FIG7_UE2:
    on, off = res.curve(fig7_method(t2, True)), res.curve(fig7_method(t2, False))
    k = int(np.argmin(on / off))
    print(f"theta2={t2:+.1f}pi: worst theta1={theta1[k]:+.2f}pi, "
          f"UE2 keeps {on[k] / off[k]:.0%} of its interference-free rate")
