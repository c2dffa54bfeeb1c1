"""Seeded, order-independent Monte Carlo driver."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional

import numpy as np

THREADS_ENV = "NCRSIM_THREADS"


def trial_rng(master_seed: int, trial_index: int, *stream: int) -> np.random.Generator:
    """Independent stream for one trial, derived only from ``(master_seed, trial_index, *stream)``.

    ``stream`` separates independent families of draws that share a trial index.
    """
    key = [int(master_seed), int(trial_index), *map(int, stream)]
    return np.random.default_rng(np.random.SeedSequence(key))


def worker_count(workers: Optional[int] = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ValueError("worker count must be nonnegative")
    return workers or (os.cpu_count() or 1)


@dataclass
class MonteCarloResult:
    mean: Any
    stderr: Any
    n_trials: int
    samples: list


def aggregate(samples: Mapping[int, Any]) -> MonteCarloResult:
    """Mean and standard error over per-trial outputs keyed by trial index.

    Outputs are either scalars or mappings of key -> scalar. The reduction
    runs in trial-index order, so completion order never matters.
    """
    ordered = [samples[i] for i in sorted(samples)]
    n = len(ordered)
    if n == 0:
        raise ValueError("no trials to aggregate")

    def stats(values):
        a = np.asarray(values, dtype=float)
        se = float(np.std(a, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return float(np.mean(a)), se

    if isinstance(ordered[0], Mapping):
        mean, stderr = {}, {}
        for key in ordered[0]:
            mean[key], stderr[key] = stats([s[key] for s in ordered])
        return MonteCarloResult(mean, stderr, n, ordered)
    mean, stderr = stats(ordered)
    return MonteCarloResult(mean, stderr, n, ordered)


def monte_carlo(trial_fn: Callable[[np.random.Generator], Any], n_trials: int,
                master_seed: int, workers: Optional[int] = None,
                stream: tuple = ()) -> MonteCarloResult:
    """Run ``trial_fn`` once per trial with its own rng stream and aggregate.

    ``workers`` defaults to ``$NCRSIM_THREADS`` (0 means one per CPU).
    Results are identical for any worker count.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    workers = min(worker_count(workers), n_trials)

    def run(i):
        return trial_fn(trial_rng(master_seed, i, *stream))

    if workers == 1:
        outputs = [run(i) for i in range(n_trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(run, range(n_trials)))
    return aggregate(dict(enumerate(outputs)))
