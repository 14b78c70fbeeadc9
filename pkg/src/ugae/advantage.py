"""Advantage estimation under arbitrary discount schedules.

``ugae`` evaluates the lambda-weighted mixture of k-step advantages as two
suffix dot products per step (rewards against ``lambda^l w[l]``, next-state
values against ``lambda^l w[l+1]``).  On a finite episode of length T the
mixture is closed by placing the leftover weight ``lambda^(n-1)`` on the
longest available k-step advantage, so that lambda = 1 gives the discounted
Monte Carlo return and exponential schedules agree with the usual backward
GAE recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .schedule import DiscountSchedule


@dataclass(frozen=True, eq=False)
class Trajectory:
    rewards: np.ndarray
    values: np.ndarray
    bootstrap_value: float = 0.0

    def __post_init__(self):
        r = np.array(self.rewards, dtype=np.float64)
        v = np.array(self.values, dtype=np.float64)
        if r.ndim != 1 or r.shape != v.shape or r.size < 1:
            raise ValueError("rewards and values must be 1-D sequences of equal non-zero length")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v)) and math.isfinite(self.bootstrap_value)):
            raise ValueError("trajectory entries must be finite")
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "rewards", r)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "bootstrap_value", float(self.bootstrap_value))

    def __len__(self) -> int:
        return self.rewards.size

    def value_at(self, t: int) -> float:
        """V(s_t), with V(s_T) the bootstrap value."""
        return self.bootstrap_value if t == len(self) else float(self.values[t])


@dataclass(frozen=True)
class UGAE:
    lam: float
    trunc: Optional[int] = None


@dataclass(frozen=True)
class RecursiveGAE:
    gamma: float
    lam: float


@dataclass(frozen=True)
class MonteCarlo:
    pass


Estimator = Union[UGAE, RecursiveGAE, MonteCarlo]


@dataclass(frozen=True, eq=False)
class AdvantageVector:
    advantages: np.ndarray
    estimator: Estimator

    def __len__(self) -> int:
        return self.advantages.size


def _check_lambda(lam: float) -> None:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0,1], got {lam!r}")


def k_step_advantage(traj: Trajectory, s: DiscountSchedule, t: int, k: int) -> float:
    T = len(traj)
    if not 0 <= t < T:
        raise ValueError(f"t must lie in [0, {T}), got {t}")
    if k < 1 or t + k > T:
        raise ValueError(f"k must satisfy 1 <= k <= T - t = {T - t}, got {k}")
    if k >= len(s):
        raise ValueError(f"schedule of length {len(s)} is too short for k={k}")
    w = s.weights
    acc = -float(traj.values[t])
    for l in range(k):
        acc += w[l] * traj.rewards[t + l]
    return acc + w[k] * traj.value_at(t + k)


def _suffix_dots(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """out[t] = sum_l kernel[l] * x[t + l], with x zero-padded past its end."""
    if kernel.size == 0:
        return np.zeros(x.size)
    padded = np.concatenate([x, np.zeros(kernel.size - 1)])
    # direct (non-FFT) correlation: one dot product per output index
    return np.correlate(padded, kernel, mode="valid")


def ugae(traj: Trajectory, s: DiscountSchedule, lam: float,
         trunc: Optional[int] = None) -> AdvantageVector:
    _check_lambda(lam)
    T = len(traj)
    if trunc is not None and trunc < 1:
        raise ValueError(f"trunc must be a positive integer, got {trunc}")
    N = T if trunc is None else min(int(trunc), T)
    if len(s) < N + 1:
        raise ValueError(f"schedule needs at least {N + 1} weights, has {len(s)}")

    w = s.weights[: N + 1]
    lam_pow = np.power(float(lam), np.arange(N, dtype=np.float64))
    lam_w = lam_pow * w[:N]
    lam_w_next = lam_pow[: N - 1] * w[1:N]

    reward_part = _suffix_dots(traj.rewards, lam_w)
    # V(s_{t+l+1}) for l <= n-2 only; the bootstrap enters via the residual term
    value_part = _suffix_dots(np.append(traj.values[1:], 0.0), lam_w_next)

    n = np.minimum(T - np.arange(T), N)
    v_ext = np.append(traj.values, traj.bootstrap_value)
    residual = lam_pow[n - 1] * w[n] * v_ext[np.arange(T) + n]

    adv = -traj.values + reward_part + (1.0 - lam) * value_part + residual
    return AdvantageVector(adv, UGAE(float(lam), trunc))


def gae_recursive(traj: Trajectory, gamma: float, lam: float) -> AdvantageVector:
    """Standard backward-recursive GAE with exponential discounting."""
    _check_lambda(lam)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0,1], got {gamma!r}")
    r = traj.rewards.tolist()
    v = traj.values.tolist() + [traj.bootstrap_value]
    T = len(r)
    out = [0.0] * T
    last = 0.0
    for t in range(T - 1, -1, -1):
        delta = r[t] + gamma * v[t + 1] - v[t]
        last = delta + gamma * lam * last
        out[t] = last
    return AdvantageVector(np.array(out), RecursiveGAE(float(gamma), float(lam)))


def monte_carlo(traj: Trajectory, s: DiscountSchedule) -> AdvantageVector:
    """Discounted return-to-go, bootstrapped at the cut, minus the baseline."""
    T = len(traj)
    if len(s) < T + 1:
        raise ValueError(f"schedule needs at least {T + 1} weights, has {len(s)}")
    w = s.weights
    out = np.empty(T)
    for t in range(T):
        n = T - t
        out[t] = (np.dot(w[:n], traj.rewards[t:]) + w[n] * traj.bootstrap_value
                  - traj.values[t])
    return AdvantageVector(out, MonteCarlo())


def bias_coefficient(s: DiscountSchedule, l: int, horizon: int) -> float:
    """``sum_{t'<horizon} (w[l] w[t'] - w[l + t'])``; zero for exponential schedules."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if horizon < 1 or l + horizon > len(s):
        raise ValueError(f"need l + horizon <= {len(s)}, got {l} + {horizon}")
    w = s.weights
    return float(np.sum(w[l] * w[:horizon] - w[l:l + horizon]))


def bias_bound(s: DiscountSchedule, lam: float, r_max: float, horizon: int,
               rtol: float = 1e-12) -> float:
    """Upper bound ``R * sum_l lambda^(l-1) |delta_l|`` on the added value bias.

    The series is cut once the geometric tail bound
    ``lambda^L * max(w) * sum(w) / (1 - lambda)`` drops below ``rtol`` of the
    running total (or of ``max(w) * sum(w)`` while the total is still zero).
    """
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lambda must lie in [0,1) for the bias bound, got {lam!r}")
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    w = s.weights
    if horizon < 1 or horizon >= len(s):
        raise ValueError(f"horizon must lie in [1, {len(s) - 1}], got {horizon}")
    scale = float(np.max(w[:horizon])) * float(np.sum(w[:horizon]))
    total = 0.0
    lam_pow = 1.0
    l = 1
    while True:
        total += lam_pow * abs(bias_coefficient(s, l, horizon))
        lam_pow *= lam
        tail = lam_pow * scale / (1.0 - lam)
        if tail <= rtol * max(total, scale):
            break
        l += 1
        if l + horizon > len(s):
            raise ValueError(f"schedule of length {len(s)} too short to converge the "
                             f"bias series at horizon {horizon}")
    return r_max * total
