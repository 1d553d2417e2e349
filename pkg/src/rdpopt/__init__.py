"""Optimal conversion from Renyi DP to approximate DP, with composition accounting.

The package is organized bottom-up:

  divergences   two-point hockey-stick and power divergences
  optimize      golden-section minimization and monotone bisection
  conversion    the exact conversion frontier and its closed-form bounds
  gaussian      T-fold Gaussian composition, ours versus moments accountant
  oracle        brute-force grid validation of the frontier
  cli           command-line front end (see `rdpopt --help`)
"""

from .conversion import (
    ConversionResult,
    ZeroEpsilonRegion,
    ZetaAlpha,
    balle_epsilon,
    baseline_delta,
    baseline_epsilon,
    boundary_objective,
    delta_bound,
    delta_exact,
    epsilon_bound,
    epsilon_exact,
    gamma_bound,
    gamma_exact,
    log_zeta,
    zero_epsilon_region,
)
from .divergences import (
    BernoulliPair,
    DpGuarantee,
    RenyiGuarantee,
    chi_alpha_binary,
    chi_of_gamma,
    gamma_of_chi,
    hockey_stick_binary,
    renyi_binary,
)
from .errors import AccountingError, BracketRangeError, DomainError, InfeasibleError
from .gaussian import (
    AccountedEpsilon,
    CompositionQuery,
    CurvePoint,
    GaussianConfig,
    RequiredVariance,
    acct_epsilon,
    epochs_from_iterations,
    iterations_from_epochs,
    ma_epsilon,
    ma_max_iterations,
    ma_required_variance,
    max_iterations,
    privacy_curve,
    required_variance,
    rho_gaussian,
    rho_subsampled,
)
from .optimize import ScalarSearchConfig, invert_monotone, log_add, minimize_unimodal
from .oracle import GridSpec, brute_force_gamma, joint_range_containment, verify_q_star

__version__ = "0.1.0"

__all__ = [
    "AccountedEpsilon",
    "AccountingError",
    "BernoulliPair",
    "BracketRangeError",
    "CompositionQuery",
    "ConversionResult",
    "CurvePoint",
    "DomainError",
    "DpGuarantee",
    "GaussianConfig",
    "GridSpec",
    "InfeasibleError",
    "RenyiGuarantee",
    "RequiredVariance",
    "ScalarSearchConfig",
    "ZeroEpsilonRegion",
    "ZetaAlpha",
    "acct_epsilon",
    "balle_epsilon",
    "baseline_delta",
    "baseline_epsilon",
    "boundary_objective",
    "brute_force_gamma",
    "chi_alpha_binary",
    "chi_of_gamma",
    "delta_bound",
    "delta_exact",
    "epochs_from_iterations",
    "epsilon_bound",
    "epsilon_exact",
    "gamma_bound",
    "gamma_exact",
    "gamma_of_chi",
    "hockey_stick_binary",
    "invert_monotone",
    "iterations_from_epochs",
    "joint_range_containment",
    "log_add",
    "log_zeta",
    "ma_epsilon",
    "ma_max_iterations",
    "ma_required_variance",
    "max_iterations",
    "minimize_unimodal",
    "privacy_curve",
    "renyi_binary",
    "required_variance",
    "rho_gaussian",
    "rho_subsampled",
    "verify_q_star",
    "zero_epsilon_region",
]
