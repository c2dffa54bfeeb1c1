"""Unit conversions, system parameters and the key-value scenario config.

All power arithmetic inside the simulator is linear mW. dB, dBm and dBi
only appear when reading configuration or reporting results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional

SCENARIOS = ("fig3", "fig4", "fig5", "fig7")


class ConfigError(ValueError):
    """Raised for malformed or out-of-range configuration. ``key`` names the offender."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _check_finite(x, what="value"):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{what} must be finite, got {x!r}")
    return x


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (_check_finite(x_db, "x_db") / 10.0)


def linear_to_db(x: float) -> float:
    x = _check_finite(x, "x")
    if x <= 0:
        raise ValueError(f"linear ratio must be positive, got {x!r}")
    return 10.0 * math.log10(x)


def dbm_to_mw(p_dbm: float) -> float:
    return 10.0 ** (_check_finite(p_dbm, "p_dbm") / 10.0)


def mw_to_dbm(p_mw: float) -> float:
    return linear_to_db(p_mw)


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float = 10.0,
                    psd_dbm_hz: float = -174.0) -> float:
    """Thermal noise power over ``bandwidth_hz`` including the receiver noise figure."""
    bandwidth_hz = _check_finite(bandwidth_hz, "bandwidth_hz")
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth_hz must be positive, got {bandwidth_hz!r}")
    return (_check_finite(psd_dbm_hz, "psd_dbm_hz") + 10.0 * math.log10(bandwidth_hz)
            + _check_finite(noise_figure_db, "noise_figure_db"))


@dataclass(frozen=True)
class HwiParams:
    """RIS hardware-impairment settings (amplitude coefficient, distortion levels, direct-link phase)."""

    alpha: float = 1.0
    kappa_t: float = 0.05 ** 2
    kappa_r: float = 0.05 ** 2
    phi_bu: float = math.pi / 4

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ConfigError(f.name, "must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha", f"must lie in (0, 1], got {self.alpha}")
        if self.kappa_t < 0:
            raise ConfigError("kappa_t", f"must be nonnegative, got {self.kappa_t}")
        if self.kappa_r < 0:
            raise ConfigError("kappa_r", f"must be nonnegative, got {self.kappa_r}")


@dataclass(frozen=True)
class SystemParams:
    carrier_freq_ghz: float
    bandwidth_hz: float
    bs_power_dbm: float
    n_bs_antennas: int
    n_ncr_antennas_per_side: int
    n_ris_elements: int
    ncr_gain_db: float
    bs_gain_dbi: float
    node_gain_dbi: float
    ue_gain_dbi: float
    ncr_max_out_dbm: Optional[float] = None
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 10.0
    n_paths: int = 3
    hwi: HwiParams = field(default_factory=HwiParams)

    def __post_init__(self):
        for name in ("carrier_freq_ghz", "bandwidth_hz", "bs_power_dbm", "ncr_gain_db",
                     "bs_gain_dbi", "node_gain_dbi", "ue_gain_dbi", "noise_psd_dbm_hz",
                     "noise_figure_db"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(name, "must be finite")
        if self.ncr_max_out_dbm is not None and not math.isfinite(self.ncr_max_out_dbm):
            raise ConfigError("ncr_max_out_dbm", "must be finite when present")
        if self.carrier_freq_ghz <= 0:
            raise ConfigError("carrier_freq_ghz", "must be positive")
        if self.bandwidth_hz <= 0:
            raise ConfigError("bandwidth_hz", "must be positive")
        for name in ("n_bs_antennas", "n_ncr_antennas_per_side", "n_ris_elements", "n_paths"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(name, f"must be a positive integer, got {v!r}")

    @property
    def bs_power_mw(self) -> float:
        return dbm_to_mw(self.bs_power_dbm)

    @property
    def noise_mw(self) -> float:
        """Receiver noise variance, shared by NCR and UE."""
        return dbm_to_mw(noise_power_dbm(self.bandwidth_hz, self.noise_figure_db,
                                         self.noise_psd_dbm_hz))

    @property
    def ncr_max_out_mw(self) -> Optional[float]:
        return None if self.ncr_max_out_dbm is None else dbm_to_mw(self.ncr_max_out_dbm)

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ScenarioDescriptor:
    scenario: Optional[str] = None
    seed: Optional[int] = None
    trials: Optional[int] = None


def default_params(scenario: str = "fig3") -> SystemParams:
    """Parameter set used by each experiment when no config file is given."""
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")
    base = SystemParams(
        carrier_freq_ghz=28.0, bandwidth_hz=1e9, bs_power_dbm=45.0,
        n_bs_antennas=16, n_ncr_antennas_per_side=8, n_ris_elements=100,
        ncr_gain_db=100.0, ncr_max_out_dbm=40.0,
        bs_gain_dbi=18.0, node_gain_dbi=18.0, ue_gain_dbi=0.0,
    )
    if scenario in ("fig4", "fig5"):
        return base.with_(bs_power_dbm=43.0)
    if scenario == "fig7":
        return base.with_(bs_power_dbm=43.0, n_ncr_antennas_per_side=10)
    return base


_HWI_KEYS = tuple(f.name for f in fields(HwiParams))
_INT_KEYS = ("n_bs_antennas", "n_ncr_antennas_per_side", "n_ris_elements", "n_paths")
_REQUIRED = ("carrier_freq_ghz", "bandwidth_hz", "bs_power_dbm", "n_bs_antennas",
             "n_ncr_antennas_per_side", "n_ris_elements", "ncr_gain_db",
             "bs_gain_dbi", "node_gain_dbi", "ue_gain_dbi")
_OPTIONAL = ("ncr_max_out_dbm", "noise_psd_dbm_hz", "noise_figure_db", "n_paths")
_DESCRIPTOR_KEYS = ("scenario", "seed", "trials")
KNOWN_KEYS = _REQUIRED + _OPTIONAL + _HWI_KEYS + _DESCRIPTOR_KEYS


def _parse_value(key, raw):
    try:
        if key in _INT_KEYS or key in ("seed", "trials"):
            return int(raw)
        if key == "scenario":
            return raw
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r}") from None


def load_scenario_config(text: str) -> tuple[SystemParams, ScenarioDescriptor]:
    """Parse a ``key = value`` document into validated params and a run descriptor.

    Blank lines and ``#`` comments are ignored. Unknown or duplicate keys,
    unparsable values and range violations raise :class:`ConfigError`.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
        if key in values:
            raise ConfigError(key, "duplicate key")
        values[key] = _parse_value(key, raw)

    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(missing[0], "required key missing")

    desc = ScenarioDescriptor(**{k: values.pop(k) for k in _DESCRIPTOR_KEYS if k in values})
    if desc.scenario is not None and desc.scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {desc.scenario!r}; valid: {', '.join(SCENARIOS)}")
    if desc.seed is not None and not 0 <= desc.seed < 2 ** 64:
        raise ConfigError("seed", "must be an unsigned 64-bit integer")
    if desc.trials is not None and desc.trials < 1:
        raise ConfigError("trials", "must be positive")

    hwi = HwiParams(**{k: values.pop(k) for k in _HWI_KEYS if k in values})
    return SystemParams(hwi=hwi, **values), desc


def dump_scenario_config(params: SystemParams, desc: ScenarioDescriptor = ScenarioDescriptor()) -> str:
    """Serialize back to the key-value format; ``load_scenario_config`` inverts this."""
    lines = []
    for k in _DESCRIPTOR_KEYS:
        v = getattr(desc, k)
        if v is not None:
            lines.append(f"{k} = {v}")
    for f in fields(SystemParams):
        if f.name == "hwi":
            continue
        v = getattr(params, f.name)
        if v is None:
            continue
        lines.append(f"{f.name} = {v!r}")
    for k in _HWI_KEYS:
        lines.append(f"{k} = {getattr(params.hwi, k)!r}")
    return "\n".join(lines) + "\n"
