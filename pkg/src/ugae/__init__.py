"""Generalized advantage estimation for arbitrary discount schedules."""

from .advantage import (
    AdvantageVector,
    Trajectory,
    bias_bound,
    bias_coefficient,
    gae_recursive,
    k_step_advantage,
    monte_carlo,
    ugae,
)
from .schedule import (
    BetaParams,
    DiscountSchedule,
    MuEta,
    alpha_beta_to_mu_eta,
    analytic_sum,
    beta_schedule,
    exponential_schedule,
    fixed_horizon_schedule,
    hyperbolic_schedule,
    hyperbolic_schedule_k,
    mu_eta_to_alpha_beta,
    no_discount_schedule,
    truncate,
)

__version__ = "0.1.0"
