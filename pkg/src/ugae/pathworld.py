"""Pathworld: a one-decision hazard environment.

Path ``i`` pays reward ``i`` after ``d = i**2`` steps.  In each episode a
hazard rate ``lam`` is drawn from a known family, and at every step of the
path the agent dies with probability ``1 - exp(-lam)``.  The true value of
path ``i`` is therefore ``i * E[exp(-lam * d)]``; a discount schedule
predicts it as ``i * w[d]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .descriptor import ScheduleDescriptor, parse_descriptor
from .schedule import DiscountSchedule

DEFAULT_NUM_PATHS = 14

DEFAULT_DESCRIPTORS = (
    "exp(gamma=0.99)",
    "exp(gamma=0.95)",
    "exp(gamma=0.975)",
    "hyper(k=0.05)",
    "beta(mu=0.95,eta=0.5)",
)


@dataclass(frozen=True)
class DiracHazard:
    rate: float


@dataclass(frozen=True)
class ExponentialHazard:
    mean: float


@dataclass(frozen=True)
class UniformHazard:
    """Hazard rate drawn from ``U([0, 2 * mean])``."""

    mean: float


Hazard = Union[DiracHazard, ExponentialHazard, UniformHazard]


def _hazard_param(h: Hazard) -> float:
    if isinstance(h, DiracHazard):
        return h.rate
    if isinstance(h, (ExponentialHazard, UniformHazard)):
        return h.mean
    raise TypeError(f"unknown hazard {h!r}")


def parse_hazard(text: str) -> Hazard:
    """``uniform:0.05``, ``dirac:0.05`` or ``exponential:0.05``."""
    kind, sep, raw = text.partition(":")
    kinds = {"dirac": DiracHazard, "exponential": ExponentialHazard,
             "exp": ExponentialHazard, "uniform": UniformHazard}
    cls = kinds.get(kind.strip().lower())
    if cls is None or not sep:
        raise ValueError(f"bad hazard {text!r}; expected dirac:R, exponential:K or uniform:M")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"bad hazard parameter in {text!r}") from None
    if not (value >= 0 and math.isfinite(value)):
        raise ValueError(f"hazard parameter must be finite and >= 0, got {value}")
    return cls(value)


def format_hazard(h: Hazard) -> str:
    name = {DiracHazard: "dirac", ExponentialHazard: "exponential",
            UniformHazard: "uniform"}[type(h)]
    return f"{name}:{_hazard_param(h)!r}"


@dataclass(frozen=True)
class PathworldSpec:
    num_paths: int = DEFAULT_NUM_PATHS
    hazard: Hazard = UniformHazard(0.05)

    def __post_init__(self):
        if self.num_paths < 0:
            raise ValueError("num_paths must be non-negative")
        if _hazard_param(self.hazard) < 0:
            raise ValueError("hazard parameters must be non-negative")


@dataclass(frozen=True)
class PathValueRow:
    i: int
    d: int
    predicted: float
    empirical: float
    squared_error: float


def survival(d: int, hazard: Hazard) -> float:
    """``E[exp(-lam * d)]`` under the hazard distribution."""
    if isinstance(hazard, DiracHazard):
        return math.exp(-hazard.rate * d)
    if isinstance(hazard, ExponentialHazard):
        return 1.0 / (1.0 + hazard.mean * d)
    if isinstance(hazard, UniformHazard):
        x = 2.0 * hazard.mean * d
        # (1 - e^-x) / x, -> 1 as x -> 0
        return 1.0 if x == 0 else -math.expm1(-x) / x
    raise TypeError(f"unknown hazard {hazard!r}")


def empirical_value(i: int, hazard: Hazard) -> float:
    if i < 0:
        raise ValueError("path index must be non-negative")
    return i * survival(i * i, hazard)


def _sample_rates(rng: np.random.Generator, hazard: Hazard, n: int) -> np.ndarray:
    if isinstance(hazard, DiracHazard):
        return np.full(n, hazard.rate)
    if isinstance(hazard, ExponentialHazard):
        return rng.exponential(hazard.mean, n) if hazard.mean > 0 else np.zeros(n)
    if isinstance(hazard, UniformHazard):
        return rng.uniform(0.0, 2.0 * hazard.mean, n)
    raise TypeError(f"unknown hazard {hazard!r}")


def empirical_value_mc(i: int, hazard: Hazard, episodes: int, seed: int = 0,
                       shards: int = 1) -> tuple:
    """Monte Carlo estimate of a path's value: ``(mean, std_error)``.

    Survival over ``d`` steps is drawn as one Bernoulli with probability
    ``exp(-lam * d)``, which has the same law as ``d`` per-step coin flips.
    Shard ``k`` draws from the stream seeded by ``(seed, k)``.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    d = i * i
    sizes = [episodes // shards + (k < episodes % shards) for k in range(shards)]
    total = 0.0
    total_sq = 0.0
    for k, size in enumerate(sizes):
        if size == 0:
            continue
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
        rates = _sample_rates(rng, hazard, size)
        alive = rng.random(size) < np.exp(-rates * d)
        hits = float(np.count_nonzero(alive))
        total += i * hits
        total_sq += i * i * hits
    mean = total / episodes
    if episodes == 1:
        return mean, 0.0
    var = max(total_sq - episodes * mean * mean, 0.0) / (episodes - 1)
    return mean, math.sqrt(var / episodes)


def predicted_value(i: int, s: DiscountSchedule) -> float:
    d = i * i
    if d >= len(s):
        raise ValueError(f"schedule of length {len(s)} cannot reach delay {d}")
    return i * float(s.weights[d])


def path_curve(s: DiscountSchedule, spec: PathworldSpec, empirical=None) -> list:
    """Rows for paths ``0..spec.num_paths``.

    ``empirical`` optionally overrides the closed-form values (e.g. with
    Monte Carlo means); it must have one entry per path.
    """
    rows = []
    for i in range(spec.num_paths + 1):
        pred = predicted_value(i, s)
        emp = empirical_value(i, spec.hazard) if empirical is None else float(empirical[i])
        rows.append(PathValueRow(i, i * i, pred, emp, (pred - emp) ** 2))
    return rows


@dataclass(frozen=True)
class MseRow:
    label: str
    mse: float
    sum_sq_err: float


def schedule_horizon(spec: PathworldSpec) -> int:
    return spec.num_paths ** 2 + 1


def mse_table(specs=None, spec: PathworldSpec = PathworldSpec()) -> list:
    """Mean squared prediction error over paths ``0..num_paths`` per schedule.

    The divisor is ``num_paths + 1`` (path 0 always contributes zero).
    """
    if specs is None:
        specs = DEFAULT_DESCRIPTORS
    out = []
    for item in specs:
        desc = item if isinstance(item, ScheduleDescriptor) else parse_descriptor(item)
        rows = path_curve(desc.build(schedule_horizon(spec)), spec)
        sq = sum(r.squared_error for r in rows)
        out.append(MseRow(desc.label, sq / len(rows), sq))
    return out
