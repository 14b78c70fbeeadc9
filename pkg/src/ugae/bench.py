"""Timing harness: recursive GAE vs vectorized UGAE over episode length."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .advantage import Trajectory, gae_recursive, ugae
from .schedule import exponential_schedule

GAMMA = 0.99
LAMBDA = 0.95


@dataclass(frozen=True)
class BenchRow:
    episode_length: int
    gae_seconds: float
    ugae_seconds: float
    trunc: Optional[int] = None


def default_lengths(n: int = 16, max_length: int = 100_000) -> list:
    """``n`` log-spaced distinct lengths in ``[1, max_length]``."""
    return sorted({int(round(x)) for x in np.geomspace(1, max_length, n)})


def random_trajectory(length: int, rng: np.random.Generator) -> Trajectory:
    return Trajectory(rng.standard_normal(length), rng.standard_normal(length),
                      float(rng.standard_normal()))


def time_call(fn: Callable, repetitions: int):
    """Median wall time of ``fn()`` after one warm-up call; returns (seconds, result)."""
    result = fn()
    times = []
    for _ in range(repetitions):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


def run_bench(lengths: Sequence[int], repetitions: int = 5, trunc: Optional[int] = None,
              seed: int = 0, gamma: float = GAMMA, lam: float = LAMBDA) -> list:
    if not lengths:
        raise ValueError("need at least one episode length")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if any(n < 1 for n in lengths):
        raise ValueError("episode lengths must be positive")
    rng = np.random.default_rng(seed)
    rows = []
    for n in lengths:
        traj = random_trajectory(int(n), rng)
        sched = exponential_schedule(gamma, int(n) + 1)
        gae_s, _ = time_call(lambda: gae_recursive(traj, gamma, lam), repetitions)
        ugae_s, _ = time_call(lambda: ugae(traj, sched, lam, trunc), repetitions)
        rows.append(BenchRow(int(n), gae_s, ugae_s, trunc))
    return rows


def loglog_slope(lengths: Sequence[float], seconds: Sequence[float]) -> float:
    """Least-squares slope of ``log(seconds)`` against ``log(length)``."""
    x = np.log(np.asarray(lengths, dtype=float))
    y = np.log(np.maximum(np.asarray(seconds, dtype=float), 1e-12))
    return float(np.polyfit(x, y, 1)[0])
