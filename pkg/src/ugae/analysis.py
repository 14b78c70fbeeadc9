"""Properties of discount schedules: future-reward importance, variance,
effective planning horizon and total weight."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .descriptor import ScheduleDescriptor, parse_descriptor
from .schedule import DiscountSchedule

ANALYSIS_HORIZON = 10_000
BANDS = ((0, 10), (10, 100), (100, 1000), (1000, 10_000))

DEFAULT_DESCRIPTORS = (
    "none()",
    "exp(gamma=0.99)",
    "exp(gamma=0.999)",
    "exp(gamma=0.97)",
    "beta(mu=0.99,eta=0.5)",
    "beta(mu=0.97,eta=0.5)",
    "hyper(mu=0.99)",
    "hyper(mu=0.25)",
    "fixed(t_max=100)",
    "fixed(t_max=160)",
    "exp(gamma=0.99)|trunc=100",
    "exp(gamma=0.99)|trunc=500",
    "beta(mu=0.99,eta=0.5)|trunc=100",
    "hyper(mu=0.99)|trunc=100",
    "hyper(mu=0.99)|trunc=500",
)

CSV_HEADER = ("label", "g0_10", "g10_100", "g100_1000", "g1000_10000",
              "variance", "t_eff", "total_1000")


@dataclass(frozen=True)
class PropertyRow:
    label: str
    g_0_10: float
    g_10_100: float
    g_100_1000: float
    g_1000_10000: float
    variance_measure: float
    t_eff: int
    total_1000: float


def _total(s: DiscountSchedule) -> float:
    total = float(np.sum(s.weights))
    if total <= 0.0:
        raise ValueError("schedule has zero total weight")
    return total


def partial_weight(s: DiscountSchedule, t1: int, t2: int) -> float:
    """Share of total weight in the half-open band ``[t1, t2)``."""
    if not 0 <= t1 < t2 <= len(s):
        raise ValueError(f"band [{t1}, {t2}) must satisfy 0 <= t1 < t2 <= {len(s)}")
    return float(np.sum(s.weights[t1:t2])) / _total(s)


def variance_measure(s: DiscountSchedule, sigma: float = 1.0) -> float:
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    w = s.weights
    return sigma * sigma * float(np.dot(w, w))


def effective_horizon(s: DiscountSchedule) -> int:
    """Smallest T whose tail weight share ``sum(w[T:]) / sum(w)`` is at most 1/e."""
    w = s.weights
    # tail[T] = sum(w[T:]) for T = 0..H, tail[H] = 0
    tail = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
    if tail[0] <= 0.0:
        raise ValueError("schedule has zero total weight")
    return int(np.argmax(tail <= tail[0] / math.e))


def total_sum(s: DiscountSchedule, n: int = 1000) -> float:
    if not 1 <= n <= len(s):
        raise ValueError(f"n must lie in [1, {len(s)}], got {n}")
    return float(np.sum(s.weights[:n]))


def properties(s: DiscountSchedule, label: str) -> PropertyRow:
    if len(s) < BANDS[-1][1]:
        raise ValueError(f"{label}: analysis needs at least {BANDS[-1][1]} steps, got {len(s)}")
    return PropertyRow(
        label,
        *(partial_weight(s, a, b) for a, b in BANDS),
        variance_measure(s),
        effective_horizon(s),
        total_sum(s, 1000),
    )


def property_table(specs=None, horizon: int = ANALYSIS_HORIZON) -> list:
    """One :class:`PropertyRow` per descriptor (strings or parsed)."""
    if specs is None:
        specs = DEFAULT_DESCRIPTORS
    rows = []
    for spec in specs:
        desc = spec if isinstance(spec, ScheduleDescriptor) else parse_descriptor(spec)
        try:
            rows.append(properties(desc.build(horizon), desc.label))
        except ValueError as exc:
            raise ValueError(f"{desc.label}: {exc}") from exc
    return rows


def format_sig(x: float, digits: int = 4) -> str:
    if x != 0 and abs(x) < 1e-4:
        return f"{x:.{digits - 1}e}"
    return np.format_float_positional(x, precision=digits, unique=False,
                                      fractional=False, trim="-")


def table_records(rows, full_precision: bool = False) -> list:
    out = []
    for row in rows:
        rec = []
        for f, value in zip(fields(PropertyRow), astuple(row)):
            if f.name in ("label", "t_eff"):
                rec.append(str(value))
            else:
                rec.append(repr(value) if full_precision else format_sig(value))
        out.append(rec)
    return out
