"""Command-line entry point: run one experiment and write its CSV and manifest."""
from __future__ import annotations

import argparse
import csv
import hashlib
import math
import os
import sys
from pathlib import Path

from . import __version__
from .scenarios import run_fig3, run_fig4, run_fig5, run_fig7
from .units import (SCENARIOS, ConfigError, ScenarioDescriptor, default_params,
                    dump_scenario_config, load_scenario_config)

CSV_HEADER = ("scenario", "sweep_value", "method", "mean_rate_bps", "stderr_rate_bps", "trials")
FIG4_HEADER = ("scenario", "n_ncr_antennas", "gain_db", "ncr_rate_bps",
               "required_m_ideal", "required_m_hwi", "trials", "m_max")
RAW_HEADER = ("scenario", "sweep_value", "method", "trial_index", "rate_bps", "sinr_db")
DEFAULT_SEED = 0
DEFAULT_TRIALS = 200


def fmt(x) -> str:
    """Nine significant digits; exact zero prints as ``0.000000000``."""
    x = float(x)
    if x == 0:
        return "0.000000000"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_csv(rows, path) -> None:
    """Write aggregate rows ``(scenario, sweep_value, method, mean, stderr, trials)``.

    Rows are sorted by ``(sweep_value, method)``.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to write")
    rows.sort(key=lambda r: (float(r[1]), r[2]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(CSV_HEADER)
        for scen, v, m, mean, se, n in rows:
            w.writerow((scen, fmt(v), m, fmt(mean), fmt(se), int(n)))


def write_fig4_csv(table, path) -> None:
    def m_or_unreachable(m):
        return "unreachable" if m is None else str(m)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(FIG4_HEADER)
        for r in sorted(table.rows, key=lambda r: (r.n_ncr_antennas, r.gain_db)):
            w.writerow(("fig4", r.n_ncr_antennas, fmt(r.gain_db), fmt(r.ncr_rate_bps),
                        m_or_unreachable(r.required_m_ideal), m_or_unreachable(r.required_m_hwi),
                        table.trials, table.m_max))


def write_raw_csv(records, path) -> None:
    records = sorted(records, key=lambda r: (r.sweep_value, r.method, r.trial_index))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(RAW_HEADER)
        for r in records:
            w.writerow((r.scenario, fmt(r.sweep_value), r.method, r.trial_index,
                        fmt(r.rate_bps), fmt(r.sinr_db)))


def config_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_manifest(path, scenario, digest, seed, trials, outputs) -> None:
    lines = [f"scenario = {scenario}", f"config_sha256 = {digest}", f"seed = {seed}",
             f"trials = {trials}", f"version = {__version__}"]
    lines += [f"output = {o}" for o in outputs]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"ncrsim: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ncrsim", description="NCR vs RIS millimeter-wave link simulator")
    p.add_argument("--config", type=Path, help="key = value parameter file (flags override it)")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--raw", action="store_true", help="also dump per-trial records")
    return p


RUNNERS = {"fig3": run_fig3, "fig5": run_fig5, "fig7": run_fig7}


def run(scenario, params, seed, trials, out_dir: Path, raw=False) -> list:
    """Run ``scenario`` and write its outputs into ``out_dir``; returns the written paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if scenario == "fig4":
        table = run_fig4(params, seed=seed, trials=trials)
        write_fig4_csv(table, out_dir / "fig4.csv")
        written.append(out_dir / "fig4.csv")
        return written
    result = RUNNERS[scenario](params, seed=seed, trials=trials)
    write_csv(result.rows(), out_dir / f"{scenario}.csv")
    written.append(out_dir / f"{scenario}.csv")
    if raw:
        write_raw_csv(result.records(), out_dir / f"{scenario}_raw.csv")
        written.append(out_dir / f"{scenario}_raw.csv")
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        desc = ScenarioDescriptor()
        params = None
        if args.config is not None:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                print(f"ncrsim: error: cannot read config {args.config}: {exc.strerror}",
                      file=sys.stderr)
                return 2
            params, desc = load_scenario_config(text)
        scenario = args.scenario or desc.scenario
        if scenario is None:
            print(f"ncrsim: error: no scenario given; valid: {', '.join(SCENARIOS)}",
                  file=sys.stderr)
            return 2
        seed = args.seed if args.seed is not None else (desc.seed if desc.seed is not None else DEFAULT_SEED)
        trials = args.trials if args.trials is not None else (desc.trials or DEFAULT_TRIALS)
        if trials < 1:
            print("ncrsim: error: --trials must be positive", file=sys.stderr)
            return 2
        if not 0 <= seed < 2 ** 64:
            print("ncrsim: error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
            return 2
        if params is None:
            params = default_params(scenario)
            text = dump_scenario_config(params)

        out_dir = args.out
        try:
            written = run(scenario, params, seed, trials, out_dir, raw=args.raw)
            write_manifest(out_dir / "manifest.txt", scenario, config_digest(text), seed, trials,
                           [p.name for p in written])
        except OSError as exc:
            print(f"ncrsim: error: cannot write outputs to {out_dir}: {exc.strerror or exc}",
                  file=sys.stderr)
            return 1
    except (ConfigError, ValueError) as exc:
        print(f"ncrsim: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
