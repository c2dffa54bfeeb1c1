"""Link-level comparison of network-controlled repeaters and RIS-assisted mmWave links."""

__version__ = "0.1.0"

from .units import (HwiParams, SystemParams, db_to_linear, dbm_to_mw, default_params,
                    linear_to_db, load_scenario_config, noise_power_dbm)
from .geometry import (Position, Wall, boresight_angle, distance, path_loss_los_db,
                       path_loss_nlos_db, segments_intersect, steering_vector,
                       synthesize_channel)
from .beamforming import ao_optimize, codebook_optimize, dft_codebook, svd_beam_pair
from .ncr import (NcrParams, effective_gain, ncr_effective_amplification,
                  ncr_forwarded_interference, ncr_snr, rate)
from .ris import HwiLinkStats, hwi_coefficients, hwi_rate, reflection_matrix, ris_rate
from .montecarlo import monte_carlo
from .scenarios import (find_min_ris_elements, run_fig3, run_fig4, run_fig5, run_fig7)
