"""A wall cuts the BS-UE line; an NCR placed beside it restores the link.

Run: python3 demos/blockage.py
"""
from ncrsim.geometry import is_blocked
from ncrsim.scenarios import FIG5_SCENE, run_fig5

bs, ncr, walls = FIG5_SCENE.bs[0], FIG5_SCENE.ncr[0], FIG5_SCENE.walls
res = run_fig5(seed=1, trials=50)
print("  y0  direct blocked   direct [Gbit/s]   via NCR [Gbit/s]")
for i, y in enumerate(res.sweep_values):
    ue = (60.0, y)
    print(f"{y:4.0f}  {str(is_blocked(bs, ue, walls)):>14s}   "
          f"{res.curve('direct_only')[i] / 1e9:15.3f}   {res.curve('ncr')[i] / 1e9:16.3f}")
