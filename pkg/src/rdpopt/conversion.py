"""Conversions between Renyi-divergence guarantees and approximate DP.

The exact frontier is the map

    gamma(alpha, eps, delta) = eps + (1/(alpha-1)) * min_{p in (delta, 1)}
        log( p^alpha (p - delta)^(1-alpha)
             + (1-p)^alpha (e^eps - p + delta)^(1-alpha) ),

the smallest order-alpha Renyi divergence among pairs of distributions
whose hockey-stick divergence at lam = e^eps is at least delta.  A
mechanism with Renyi guarantee (alpha, gamma) satisfies (eps, delta)-DP
exactly when gamma <= gamma(alpha, eps, delta), so inverting the frontier
in delta or eps yields the optimal conversions in both directions.

Closed-form companions: a lower bound on the frontier that is exact when
alpha * delta >= 1 (equivalently, upper bounds on the converted delta and
eps), the classical Markov-style baseline delta = e^{-(alpha-1)(eps-gamma)},
and the slightly looser conversion of Balle et al. (arXiv:1905.09982,
Thm 21) for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

from .errors import BracketRangeError, DomainError, InfeasibleError
from .optimize import DEFAULT_SEARCH, ScalarSearchConfig, invert_monotone, log_add, minimize_unimodal

Method = Literal["exact_numeric", "closed_form_bound", "baseline", "balle"]
Branch = Literal["alpha_delta_ge_1", "g_bound", "f_bound", "chi_bound"]


@dataclass(frozen=True)
class ConversionResult:
    """Converted value plus how it was obtained.

    argmin_p is the interior minimizer of the frontier objective when the
    numeric search won (None when the p -> 1 boundary value is optimal or
    no search ran).  active_branch names the winning closed-form piece.
    """

    value: float
    method: Method
    argmin_p: Optional[float] = None
    active_branch: Optional[Branch] = None


@dataclass(frozen=True)
class ZetaAlpha:
    """The constant zeta(alpha) = (1/alpha) * (1 - 1/alpha)^(alpha - 1).

    It decreases from 1 at alpha -> 1 toward 1/(e*alpha), and always lies
    in (1/(e*alpha), 1/alpha).
    """

    alpha: float
    zeta: float

    @classmethod
    def for_order(cls, alpha: float) -> "ZetaAlpha":
        _check_alpha(alpha)
        return cls(alpha=alpha, zeta=math.exp(log_zeta(alpha)))


def log_zeta(alpha: float) -> float:
    """log zeta(alpha), assembled from log1p for stability at large alpha."""
    _check_alpha(alpha)
    return (alpha - 1.0) * math.log1p(-1.0 / alpha) - math.log(alpha)


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha > 1.0):
        raise DomainError(f"order alpha must be finite and > 1, got {alpha!r}")


def _check_epsilon(epsilon: float) -> None:
    if not (math.isfinite(epsilon) and epsilon >= 0.0):
        raise DomainError(f"epsilon must be finite and >= 0, got {epsilon!r}")


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise DomainError(f"gamma must be finite and >= 0, got {gamma!r}")


def _check_delta(delta: float, *, positive: bool = False) -> None:
    lo_ok = delta > 0.0 if positive else delta >= 0.0
    if not (lo_ok and delta < 1.0):
        lo = "(0, 1)" if positive else "[0, 1)"
        raise DomainError(f"delta must lie in {lo}, got {delta!r}")


def boundary_objective(p: float, alpha: float, epsilon: float, delta: float) -> float:
    """Log of the two-atom tradeoff term whose minimum over p gives the frontier.

    Computed entirely in log domain; requires delta < p < 1.
    """
    _check_alpha(alpha)
    _check_epsilon(epsilon)
    _check_delta(delta)
    if not (delta < p < 1.0):
        raise DomainError(f"p must lie in (delta, 1) = ({delta!r}, 1), got {p!r}")
    head = alpha * math.log(p) + (1.0 - alpha) * math.log(p - delta)
    # log(e^eps - p + delta) = eps + log1p((delta - p) e^{-eps}), always finite here
    log_rest = epsilon + math.log1p((delta - p) * math.exp(-epsilon))
    tail = alpha * math.log1p(-p) + (1.0 - alpha) * log_rest
    return log_add(head, tail)


def gamma_exact(
    alpha: float,
    epsilon: float,
    delta: float,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> ConversionResult:
    """Exact frontier value gamma(alpha, eps, delta) by numeric minimization.

    The interior search over p in (delta, 1) is compared against the
    p -> 1 boundary value eps - log(1 - delta), which is the true infimum
    whenever alpha * delta >= 1.
    """
    _check_alpha(alpha)
    _check_epsilon(epsilon)
    _check_delta(delta)
    if delta == 0.0:
        return ConversionResult(0.0, "exact_numeric")
    argmin_p, m_interior = minimize_unimodal(
        lambda p: boundary_objective(p, alpha, epsilon, delta), delta, 1.0, cfg
    )
    m_edge = (1.0 - alpha) * math.log1p(-delta)
    if m_edge <= m_interior:
        return ConversionResult(max(epsilon - math.log1p(-delta), 0.0), "exact_numeric")
    value = epsilon + m_interior / (alpha - 1.0)
    return ConversionResult(max(value, 0.0), "exact_numeric", argmin_p=argmin_p)


def _f_lower_bound(alpha: float, epsilon: float, delta: float) -> float:
    """Tangent-at-zero lower bound on the frontier, valid for alpha*delta < 1.

    f = eps + (1/(alpha-1)) * log( (e^eps - alpha*delta) *
        ((1-delta)/(e^eps - delta))^alpha + alpha*delta ).
    """
    ad = alpha * delta
    if ad == 0.0:
        return 0.0
    log_lead = epsilon + math.log1p(-ad * math.exp(-epsilon))
    log_ratio = math.log1p(-delta) - (epsilon + math.log1p(-delta * math.exp(-epsilon)))
    inner = log_add(log_lead + alpha * log_ratio, math.log(ad))
    return epsilon + inner / (alpha - 1.0)


def gamma_bound(alpha: float, epsilon: float, delta: float) -> ConversionResult:
    """Closed-form lower bound on the frontier; exact when alpha*delta >= 1.

    For alpha*delta < 1 it is the larger of the moment-based piece
    g = eps - (1/(alpha-1)) log(zeta(alpha)/delta) and the tangent piece f.
    """
    _check_alpha(alpha)
    _check_epsilon(epsilon)
    _check_delta(delta)
    if delta == 0.0:
        return ConversionResult(0.0, "closed_form_bound")
    if alpha * delta >= 1.0:
        value = epsilon - math.log1p(-delta)
        return ConversionResult(value, "closed_form_bound", active_branch="alpha_delta_ge_1")
    g = epsilon - (log_zeta(alpha) - math.log(delta)) / (alpha - 1.0)
    f = _f_lower_bound(alpha, epsilon, delta)
    if g >= f:
        return ConversionResult(g, "closed_form_bound", active_branch="g_bound")
    return ConversionResult(f, "closed_form_bound", active_branch="f_bound")


def delta_exact(
    alpha: float,
    gamma: float,
    epsilon: float,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> ConversionResult:
    """Smallest delta such that (alpha, gamma) implies (epsilon, delta)-DP.

    Inverts the frontier, which is continuous and increasing in delta.
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_epsilon(epsilon)
    if gamma == 0.0:
        return ConversionResult(0.0, "exact_numeric")
    hi = 1.0 - 1e-12
    gamma_hi = gamma_exact(alpha, epsilon, hi, cfg).value
    if gamma > gamma_hi:
        raise InfeasibleError(
            f"no delta < 1 reaches gamma={gamma!r} at eps={epsilon!r} "
            f"(frontier tops out near {gamma_hi!r})"
        )
    d = invert_monotone(
        lambda t: gamma_exact(alpha, epsilon, t, cfg).value,
        gamma,
        0.0,
        hi,
        increasing=True,
        cfg=cfg,
    )
    return ConversionResult(min(max(d, 0.0), hi), "exact_numeric")


def delta_bound(
    alpha: float,
    gamma: float,
    epsilon: float,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> ConversionResult:
    """Closed-form upper bound on the optimal delta; exact when it is >= 1/alpha.

    Inverts each closed-form frontier piece separately and takes the best:
    the moment piece inverts to zeta(alpha) * e^{-(alpha-1)(eps-gamma)},
    the tangent piece is inverted numerically on [0, 1/alpha).
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_epsilon(epsilon)
    d_closed = -math.expm1(epsilon - gamma)  # 1 - e^(eps - gamma)
    if d_closed >= 1.0 / alpha:
        return ConversionResult(d_closed, "closed_form_bound", active_branch="alpha_delta_ge_1")
    d_g = math.exp(log_zeta(alpha) - (alpha - 1.0) * (epsilon - gamma))
    cap = (1.0 / alpha) * (1.0 - 1e-12)
    if gamma <= _f_lower_bound(alpha, epsilon, cap):
        try:
            d_f = invert_monotone(
                lambda t: _f_lower_bound(alpha, epsilon, t),
                gamma,
                0.0,
                cap,
                increasing=True,
                cfg=cfg,
            )
        except BracketRangeError:
            d_f = cap
    else:
        # the tangent piece stays below gamma on its whole domain; it only
        # certifies delta <= 1/alpha, which the moment piece already beats
        d_f = 1.0 / alpha
    value = min(d_g, d_f)
    branch: Branch = "g_bound" if d_g <= d_f else "f_bound"
    return ConversionResult(min(max(value, 0.0), 1.0 - 1e-15), "closed_form_bound", active_branch=branch)


def epsilon_exact(
    alpha: float,
    gamma: float,
    delta: float,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> ConversionResult:
    """Smallest epsilon such that (alpha, gamma) implies (epsilon, delta)-DP.

    Returns 0 when the frontier at eps = 0 already dominates gamma;
    otherwise bisects eps between 0 and the closed-form upper bound.
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_delta(delta, positive=True)
    if gamma == 0.0:
        return ConversionResult(0.0, "exact_numeric")
    if gamma_exact(alpha, 0.0, delta, cfg).value >= gamma:
        return ConversionResult(0.0, "exact_numeric")
    hi = max(epsilon_bound(alpha, gamma, delta).value, 1e-9) * (1.0 + 1e-9) + 1e-12
    guard = 0
    while gamma_exact(alpha, hi, delta, cfg).value < gamma:
        hi *= 2.0
        guard += 1
        if guard > 200:
            raise InfeasibleError(f"no epsilon reaches gamma={gamma!r} at delta={delta!r}")
    eps = invert_monotone(
        lambda e: gamma_exact(alpha, e, delta, cfg).value,
        gamma,
        0.0,
        hi,
        increasing=True,
        cfg=cfg,
    )
    return ConversionResult(max(eps, 0.0), "exact_numeric")


def epsilon_bound(alpha: float, gamma: float, delta: float) -> ConversionResult:
    """Closed-form upper bound on the optimal epsilon; exact when alpha*delta >= 1.

    For alpha*delta < 1 it is the smaller of the clamped moment piece
    (gamma + log(zeta(alpha)/delta)/(alpha-1))_+ and the power-divergence
    piece (1/(alpha-1)) log(1 + (alpha-1) chi(gamma)/(alpha delta)).
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_delta(delta, positive=True)
    if gamma == 0.0:
        return ConversionResult(0.0, "closed_form_bound")
    if alpha * delta >= 1.0:
        value = max(gamma + math.log1p(-delta), 0.0)
        return ConversionResult(value, "closed_form_bound", active_branch="alpha_delta_ge_1")
    piece_g = max(gamma + (log_zeta(alpha) - math.log(delta)) / (alpha - 1.0), 0.0)
    piece_chi = _chi_epsilon_piece(alpha, gamma, delta)
    if piece_g <= piece_chi:
        return ConversionResult(piece_g, "closed_form_bound", active_branch="g_bound")
    return ConversionResult(piece_chi, "closed_form_bound", active_branch="chi_bound")


def _chi_epsilon_piece(alpha: float, gamma: float, delta: float) -> float:
    # (1/(alpha-1)) log(1 + (e^{(alpha-1)gamma} - 1)/(alpha delta)),
    # written as log(expm1(x) + c) - log(c) with x = (alpha-1)gamma, c = alpha delta
    x = (alpha - 1.0) * gamma
    c = alpha * delta
    if x < 30.0:
        return (math.log(math.expm1(x) + c) - math.log(c)) / (alpha - 1.0)
    if x > 709.0:
        return (x - math.log(c)) / (alpha - 1.0)
    return (x + math.log1p((c - 1.0) * math.exp(-x)) - math.log(c)) / (alpha - 1.0)


def baseline_delta(alpha: float, gamma: float, epsilon: float) -> float:
    """Markov-style conversion delta = e^{-(alpha-1)(eps-gamma)}, capped at 1."""
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_epsilon(epsilon)
    return min(math.exp(-(alpha - 1.0) * (epsilon - gamma)), 1.0)


def baseline_epsilon(alpha: float, gamma: float, delta: float) -> float:
    """Markov-style conversion eps = gamma + log(1/delta)/(alpha-1)."""
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_delta(delta, positive=True)
    return gamma - math.log(delta) / (alpha - 1.0)


def balle_epsilon(alpha: float, gamma: float, delta: float) -> float:
    """Conversion eps = gamma + log(zeta(alpha)/delta)/(alpha-1), reported unclamped.

    From Balle et al. (arXiv:1905.09982, Thm 21); always at most the
    baseline, and matches the moment piece of epsilon_bound before its
    clamp at zero.
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    _check_delta(delta, positive=True)
    return gamma + (log_zeta(alpha) - math.log(delta)) / (alpha - 1.0)


@dataclass(frozen=True)
class ZeroEpsilonRegion:
    """Deltas for which the guarantee already implies (0, delta)-DP.

    interval is a closed sub-interval of [0, 1/alpha] when the simple
    sufficient condition applies, else None; delta_free is the threshold
    above which epsilon = 0 always holds.
    """

    interval: Optional[tuple[float, float]]
    delta_free: float


def zero_epsilon_region(alpha: float, gamma: float) -> ZeroEpsilonRegion:
    """Where the optimal epsilon is exactly zero for an (alpha, gamma) guarantee.

    If 1 - e^{-gamma} < 1/alpha the interval
    [zeta(alpha) e^{(alpha-1)gamma}, 1/alpha] gives eps = 0; independent of
    that, eps = 0 for every delta > max(1 - e^{-gamma}, 1/alpha).
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    tail = -math.expm1(-gamma)  # 1 - e^-gamma
    delta_free = max(tail, 1.0 / alpha)
    if tail < 1.0 / alpha:
        lo = math.exp(log_zeta(alpha) + (alpha - 1.0) * gamma)
        return ZeroEpsilonRegion(interval=(lo, 1.0 / alpha), delta_free=delta_free)
    return ZeroEpsilonRegion(interval=None, delta_free=delta_free)
