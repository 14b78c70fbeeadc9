"""Discount schedules.

A schedule is a finite vector of per-step discount weights ``w[0..H-1]``
together with a tag recording how it was built.  Every constructor here
is pure and returns an immutable :class:`DiscountSchedule`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np


@dataclass(frozen=True)
class Exponential:
    gamma: float


@dataclass(frozen=True)
class Hyperbolic:
    k: float


@dataclass(frozen=True)
class BetaWeighted:
    alpha: float
    beta: float


@dataclass(frozen=True)
class NoDiscount:
    pass


@dataclass(frozen=True)
class FixedHorizon:
    t_max: int


@dataclass(frozen=True)
class Truncated:
    inner: "Kind"
    t_max: int


Kind = Union[Exponential, Hyperbolic, BetaWeighted, NoDiscount, FixedHorizon, Truncated]


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a finite positive number, got {self.alpha!r}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be a finite positive number, got {self.beta!r}")


@dataclass(frozen=True)
class MuEta:
    """Mean/dispersion parametrization of Beta-weighted discounting.

    ``mu`` is the mean discount factor ``alpha / (alpha + beta)`` and
    ``eta = 1 / beta``.  ``eta = 0`` is the exponential limit, ``eta = 1``
    is hyperbolic discounting.
    """

    mu: float
    eta: float

    def __post_init__(self):
        if not 0.0 < self.mu < 1.0:
            raise ValueError(f"mu must lie in (0,1), got {self.mu!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0,1], got {self.eta!r}")


@dataclass(frozen=True, eq=False)
class DiscountSchedule:
    weights: np.ndarray
    kind: Kind
    analytic_total: Optional[float] = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a non-empty 1-D sequence")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size

    @property
    def horizon(self) -> int:
        return self.weights.size

    def __eq__(self, other):
        if not isinstance(other, DiscountSchedule):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.analytic_total == other.analytic_total
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def _check_horizon(horizon) -> int:
    if isinstance(horizon, bool) or int(horizon) != horizon or horizon < 1:
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    return int(horizon)


def mu_eta_to_alpha_beta(p: MuEta) -> BetaParams:
    if p.eta == 0:
        raise ValueError("eta = 0 has no finite (alpha, beta); use the exponential form")
    return BetaParams(alpha=p.mu / (p.eta * (1.0 - p.mu)), beta=1.0 / p.eta)


def alpha_beta_to_mu_eta(p: BetaParams) -> MuEta:
    return MuEta(mu=p.alpha / (p.alpha + p.beta), eta=1.0 / p.beta)


def analytic_sum(p: BetaParams) -> float:
    """Infinite sum of the Beta-weighted schedule, ``math.inf`` if divergent."""
    if p.beta > 1.0:
        return (p.alpha + p.beta - 1.0) / (p.beta - 1.0)
    return math.inf


def beta_weights(alpha: float, beta: float, horizon: int) -> np.ndarray:
    # w[t+1] = w[t] * (alpha + t) / (alpha + beta + t); cumprod is sequential
    t = np.arange(horizon - 1, dtype=np.float64)
    w = np.empty(horizon)
    w[0] = 1.0
    np.cumprod((alpha + t) / (alpha + beta + t), out=w[1:])
    return w


def exponential_schedule(gamma: float, horizon: int) -> DiscountSchedule:
    horizon = _check_horizon(horizon)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0,1], got {gamma!r}")
    w = np.power(float(gamma), np.arange(horizon, dtype=np.float64))
    total = 1.0 / (1.0 - gamma) if gamma < 1.0 else None
    return DiscountSchedule(w, Exponential(float(gamma)), total)


def beta_schedule(params: MuEta, horizon: int) -> DiscountSchedule:
    horizon = _check_horizon(horizon)
    # eta so small that alpha or beta overflows is indistinguishable from eta = 0
    if params.eta == 0 or not (math.isfinite(1.0 / params.eta)
                               and math.isfinite(params.mu / (params.eta * (1.0 - params.mu)))):
        w = np.power(params.mu, np.arange(horizon, dtype=np.float64))
        return DiscountSchedule(w, Exponential(params.mu), 1.0 / (1.0 - params.mu))
    ab = mu_eta_to_alpha_beta(params)
    total = analytic_sum(ab)
    return DiscountSchedule(
        beta_weights(ab.alpha, ab.beta, horizon),
        BetaWeighted(ab.alpha, ab.beta),
        total if math.isfinite(total) else None,
    )


def beta_schedule_ab(params: BetaParams, horizon: int) -> DiscountSchedule:
    horizon = _check_horizon(horizon)
    total = analytic_sum(params)
    return DiscountSchedule(
        beta_weights(params.alpha, params.beta, horizon),
        BetaWeighted(params.alpha, params.beta),
        total if math.isfinite(total) else None,
    )


def hyperbolic_schedule_k(k: float, horizon: int) -> DiscountSchedule:
    """Hyperbolic weights ``1 / (1 + k t)``; never summable."""
    horizon = _check_horizon(horizon)
    if not (k >= 0 and math.isfinite(k)):
        raise ValueError(f"k must be a finite non-negative number, got {k!r}")
    w = 1.0 / (1.0 + k * np.arange(horizon, dtype=np.float64))
    return DiscountSchedule(w, Hyperbolic(float(k)))


def hyperbolic_schedule(mu: float, horizon: int) -> DiscountSchedule:
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0,1), got {mu!r}")
    return hyperbolic_schedule_k((1.0 - mu) / mu, horizon)


def fixed_horizon_schedule(t_max: int, horizon: int) -> DiscountSchedule:
    horizon = _check_horizon(horizon)
    if isinstance(t_max, bool) or int(t_max) != t_max or t_max < 1:
        raise ValueError(f"t_max must be a positive integer, got {t_max!r}")
    t_max = int(t_max)
    w = (np.arange(horizon) < t_max).astype(np.float64)
    return DiscountSchedule(w, FixedHorizon(t_max), float(t_max))


def no_discount_schedule(horizon: int) -> DiscountSchedule:
    horizon = _check_horizon(horizon)
    return DiscountSchedule(np.ones(horizon), NoDiscount())


def truncate(schedule: DiscountSchedule, t_max: int) -> DiscountSchedule:
    """Zero every weight at index ``t_max`` and beyond."""
    if isinstance(t_max, bool) or int(t_max) != t_max or t_max < 1:
        raise ValueError(f"t_max must be a positive integer, got {t_max!r}")
    t_max = int(t_max)
    w = schedule.weights.copy()
    w[t_max:] = 0.0
    return DiscountSchedule(w, Truncated(schedule.kind, t_max))


def describe(kind: Kind) -> str:
    """Human-readable label for a schedule kind."""
    if isinstance(kind, Exponential):
        return f"Exponential gamma={kind.gamma:g}"
    if isinstance(kind, Hyperbolic):
        return f"Hyperbolic k={kind.k:g}"
    if isinstance(kind, BetaWeighted):
        mu = kind.alpha / (kind.alpha + kind.beta)
        return f"Beta-weighted mu={mu:g} eta={1.0 / kind.beta:g}"
    if isinstance(kind, NoDiscount):
        return "No discounting"
    if isinstance(kind, FixedHorizon):
        return f"Fixed-horizon T_max={kind.t_max}"
    if isinstance(kind, Truncated):
        return f"Truncated {describe(kind.inner)} T_max={kind.t_max}"
    raise TypeError(f"unknown schedule kind {kind!r}")
