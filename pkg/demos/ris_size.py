"""How many RIS elements match an NCR with a given antenna count?

Bisection over M on the trial-averaged RIS rate. With hardware impairments
the RIS rate saturates, so the target may be out of reach altogether.
Run: python3 demos/ris_size.py
"""
from ncrsim.scenarios import run_fig4

table = run_fig4(seed=1, trials=20, n_ncr_grid=(4, 6, 8, 10), gains_db=(100.0,))
for row in table.rows:
    hwi = row.required_m_hwi if row.required_m_hwi is not None else f"> {table.m_max}"
    print(f"N_n={row.n_ncr_antennas:2d}  NCR {row.ncr_rate_bps / 1e9:6.2f} Gbit/s  "
          f"ideal RIS M={row.required_m_ideal}  impaired RIS M={hwi}")
