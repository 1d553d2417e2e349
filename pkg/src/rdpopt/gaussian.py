"""Privacy accounting for T-fold composition of Gaussian mechanisms.

A Gaussian mechanism with noise sigma and sensitivity Delta satisfies
(alpha, rho * alpha)-Renyi DP for every alpha > 1 with rate
rho = Delta^2 / (2 sigma^2); T-fold composition multiplies the rate by T.
Poisson-subsampled gradient steps use the rate rho = q^2 / ((1-q) sigma^2)
with unit sensitivity.

The moments-accountant baseline converts via delta = e^{-(alpha-1)(eps -
alpha rho T)}, whose optimized closed form is

    eps_ma = rho T + sqrt(4 rho T log(1/delta)).

The accountant here instead converts through the exact frontier of
conversion.gamma_exact, either via its closed-form upper-bound pieces
(mode "closed_form") or by minimizing the numeric inversion itself
(mode "exact").
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .conversion import epsilon_exact, log_zeta
from .errors import DomainError, InfeasibleError
from .optimize import ScalarSearchConfig, minimize_unimodal

MODES = ("closed_form", "exact")


def rho_gaussian(sigma: float, sensitivity: float = 1.0) -> float:
    """Renyi rate Delta^2 / (2 sigma^2) of a single Gaussian mechanism."""
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise DomainError(f"sigma must be finite and > 0, got {sigma!r}")
    if not (math.isfinite(sensitivity) and sensitivity > 0.0):
        raise DomainError(f"sensitivity must be finite and > 0, got {sensitivity!r}")
    return (sensitivity * sensitivity) / (2.0 * sigma * sigma)


def rho_subsampled(sigma: float, q: float) -> float:
    """Renyi rate q^2 / ((1-q) sigma^2) of a Poisson-subsampled unit-sensitivity step.

    Valid in the small-q, moderate-alpha regime where the subsampled
    mechanism's Renyi curve is linear in alpha.
    """
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise DomainError(f"sigma must be finite and > 0, got {sigma!r}")
    if not (0.0 < q < 1.0):
        raise DomainError(f"sampling rate q must lie in (0, 1), got {q!r}")
    return (q * q) / ((1.0 - q) * sigma * sigma)


@dataclass(frozen=True)
class GaussianConfig:
    """Mechanism parameters; rho is derived, with unit sensitivity under subsampling."""

    sigma: float
    sensitivity: float = 1.0
    subsampling_q: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"sigma must be finite and > 0, got {self.sigma!r}")
        if not (math.isfinite(self.sensitivity) and self.sensitivity > 0.0):
            raise DomainError(f"sensitivity must be finite and > 0, got {self.sensitivity!r}")
        if self.subsampling_q is not None:
            if not (0.0 < self.subsampling_q < 1.0):
                raise DomainError(f"sampling rate q must lie in (0, 1), got {self.subsampling_q!r}")
            if self.sensitivity != 1.0:
                raise DomainError("subsampled accounting assumes unit sensitivity")

    @property
    def rho(self) -> float:
        if self.subsampling_q is not None:
            return rho_subsampled(self.sigma, self.subsampling_q)
        return rho_gaussian(self.sigma, self.sensitivity)


@dataclass(frozen=True)
class CompositionQuery:
    """One budget question: either epsilon after T steps, or max T under epsilon."""

    delta: float
    T: Optional[float] = None
    epsilon: Optional[float] = None
    mode: str = "closed_form"

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0):
            raise DomainError(f"delta must lie in (0, 1), got {self.delta!r}")
        if (self.T is None) == (self.epsilon is None):
            raise DomainError("exactly one of T and epsilon must be given")
        if self.T is not None and not (math.isfinite(self.T) and self.T >= 1):
            raise DomainError(f"T must be >= 1, got {self.T!r}")
        if self.epsilon is not None and not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise DomainError(f"epsilon must be finite and > 0, got {self.epsilon!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")


def epochs_from_iterations(q: float, T: float) -> float:
    """Passes over the data after T subsampled steps: epochs = q * T."""
    return q * T


def iterations_from_epochs(q: float, epochs: float) -> float:
    """Subsampled steps needed for the given number of passes: T = epochs / q."""
    return epochs / q


def ma_epsilon(rho: float, T: float, delta: float) -> float:
    """Moments-accountant epsilon: rho*T + sqrt(4*rho*T*log(1/delta)).

    This is the closed form of min over alpha > 1 of
    alpha*rho*T - log(delta)/(alpha - 1).
    """
    _check_rate(rho)
    _check_steps(T)
    _check_delta_open(delta)
    s = rho * T
    return s + math.sqrt(4.0 * s * math.log(1.0 / delta))


def _check_rate(rho: float) -> None:
    if not (math.isfinite(rho) and rho > 0.0):
        raise DomainError(f"rho must be finite and > 0, got {rho!r}")


def _check_steps(T: float) -> None:
    if not (math.isfinite(T) and T >= 1):
        raise DomainError(f"T must be >= 1, got {T!r}")


def _check_delta_open(delta: float) -> None:
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")


@dataclass(frozen=True)
class AccountedEpsilon:
    """Composed epsilon with its branch breakdown and minimizing order."""

    epsilon: float
    eps0: float
    eps1: float
    eps_third: float
    argmin_alpha: float
    mode: str


def _eps0_inner(alpha: float, rho_T: float, log_delta: float) -> float:
    # alpha*rho*T + log(zeta(alpha)/delta)/(alpha-1), before the clamp at 0
    return rho_T * alpha + (log_zeta(alpha) - log_delta) / (alpha - 1.0)


def _eps1_inner(alpha: float, rho: float, T: float, delta: float) -> float:
    # (1/(alpha-1)) log(1 + (e^{rho alpha (alpha-1) T} - 1)/(alpha delta))
    x = rho * alpha * (alpha - 1.0) * T
    c = alpha * delta
    if x < 30.0:
        return (math.log(math.expm1(x) + c) - math.log(c)) / (alpha - 1.0)
    if x > 709.0:
        return (x - math.log(c)) / (alpha - 1.0)
    return (x + math.log1p((c - 1.0) * math.exp(-x)) - math.log(c)) / (alpha - 1.0)


def _min_over_orders(objective, delta: float, cfg: ScalarSearchConfig) -> tuple[float, float]:
    # minimize over alpha in (1, 1/delta], searching log(alpha - 1) so that
    # orders near 1 and near 1/delta get comparable resolution
    u_hi = math.log(1.0 / delta - 1.0)
    u_lo = min(math.log(1e-6), u_hi - 1.0)
    u, value = minimize_unimodal(lambda t: objective(1.0 + math.exp(t)), u_lo, u_hi, cfg)
    alpha_end = 1.0 / delta
    v_end = objective(alpha_end)
    if v_end < value:
        return alpha_end, v_end
    return 1.0 + math.exp(u), value


def acct_epsilon(
    rho: float,
    T: float,
    delta: float,
    mode: str = "closed_form",
    cfg: ScalarSearchConfig | None = None,
) -> AccountedEpsilon:
    """Epsilon after T compositions at rate rho, via the conversion frontier.

    Closed-form mode takes the best of three upper-bound branches, each
    optimized over the order alpha in (1, 1/delta]:

      eps0      = (alpha rho T + log(zeta(alpha)/delta)/(alpha-1))_+
      eps1      = (1/(alpha-1)) log(1 + (e^{rho alpha (alpha-1) T} - 1)/(alpha delta))
      eps_third = (rho T / delta + log(1 - delta))_+   (the alpha = 1/delta endpoint)

    Exact mode minimizes epsilon_exact(alpha, rho*alpha*T, delta) over the
    same range (orders above 1/delta reduce to eps_third) and is never
    worse than closed-form mode up to search tolerance.
    """
    _check_rate(rho)
    _check_steps(T)
    _check_delta_open(delta)
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if cfg is None:
        cfg = ScalarSearchConfig()
    ld = math.log(delta)
    rho_T = rho * T
    a0, v0 = _min_over_orders(lambda a: _eps0_inner(a, rho_T, ld), delta, cfg)
    eps0 = max(v0, 0.0)
    a1, eps1 = _min_over_orders(lambda a: _eps1_inner(a, rho, T, delta), delta, cfg)
    eps_third = max(rho_T / delta + math.log1p(-delta), 0.0)
    closed = min((eps0, a0), (eps1, a1), (eps_third, 1.0 / delta))
    if mode == "closed_form":
        return AccountedEpsilon(closed[0], eps0, eps1, eps_third, closed[1], mode)

    inner_cfg = ScalarSearchConfig(abs_tol=1e-9, max_iters=cfg.max_iters, coarse_grid=32)
    order_cfg = ScalarSearchConfig(abs_tol=1e-6, max_iters=cfg.max_iters, coarse_grid=min(cfg.coarse_grid, 64))

    def exact_at(alpha: float) -> float:
        return epsilon_exact(alpha, rho * alpha * T, delta, inner_cfg).value

    a_best, v_best = _min_over_orders(exact_at, delta, order_cfg)
    for seed in (a0, a1, 1.0 / delta):
        v_seed = exact_at(seed)
        if v_seed < v_best:
            a_best, v_best = seed, v_seed
    return AccountedEpsilon(v_best, eps0, eps1, eps_third, a_best, mode)


def max_iterations(
    rho: float,
    epsilon: float,
    delta: float,
    mode: str = "closed_form",
    cfg: ScalarSearchConfig | None = None,
) -> int:
    """Largest integer T whose accounted epsilon stays within the budget."""
    _check_budget(epsilon)
    return _largest_T(lambda T: acct_epsilon(rho, T, delta, mode, cfg).epsilon, epsilon)


def ma_max_iterations(rho: float, epsilon: float, delta: float) -> int:
    """Largest integer T whose moments-accountant epsilon stays within the budget."""
    _check_budget(epsilon)
    return _largest_T(lambda T: ma_epsilon(rho, T, delta), epsilon)


def _check_budget(epsilon: float) -> None:
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise DomainError(f"epsilon budget must be finite and > 0, got {epsilon!r}")


def _largest_T(eps_at, budget: float) -> int:
    # eps_at is nondecreasing in T; exponential bracket then integer bisection
    if eps_at(1) > budget:
        return 0
    lo, hi = 1, 2
    while eps_at(hi) <= budget:
        lo = hi
        hi *= 2
        if hi > 2**62:
            raise InfeasibleError("iteration budget exceeds 2^62; rate is effectively zero")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eps_at(mid) <= budget:
            lo = mid
        else:
            hi = mid
    return lo


def ma_required_variance(T: float, epsilon: float, delta: float) -> float:
    """Noise variance making the moments-accountant epsilon equal the budget.

    Inverts eps = x + sqrt(4 x log(1/delta)) at x = rho*T, using the stable
    root x = (sqrt(eps + log(1/delta)) - sqrt(log(1/delta)))^2, then
    sigma^2 = T / (2 x).
    """
    _check_steps(T)
    _check_budget(epsilon)
    _check_delta_open(delta)
    big_l = math.log(1.0 / delta)
    x = (math.sqrt(epsilon + big_l) - math.sqrt(big_l)) ** 2
    if not x > 0.0:
        raise InfeasibleError(f"budget epsilon={epsilon!r} admits no positive rate at delta={delta!r}")
    return T / (2.0 * x)


@dataclass(frozen=True)
class RequiredVariance:
    """Noise variance certified by the frontier's moment piece.

    sigma_sq is the numeric infimum over feasible orders (the primary
    answer); sigma_sq_at_alpha_star is the plug-in evaluation at
    alpha_star = 2 log(1/delta)/eps, or None when that order is infeasible.
    """

    sigma_sq: float
    argmin_alpha: float
    alpha_star: float
    sigma_sq_at_alpha_star: Optional[float]


def required_variance(
    T: float,
    epsilon: float,
    delta: float,
    cfg: ScalarSearchConfig | None = None,
) -> RequiredVariance:
    """Smallest unit-sensitivity variance whose accounted epsilon meets the budget.

    Minimizes sigma^2(alpha) = alpha T / (2 eps + (2/(alpha-1)) log(delta/zeta(alpha)))
    over the orders where the denominator is positive.  Requires
    eps > 2 delta log(1/delta) so that some order is feasible.
    """
    _check_steps(T)
    _check_budget(epsilon)
    _check_delta_open(delta)
    if cfg is None:
        cfg = ScalarSearchConfig()
    threshold = 2.0 * delta * math.log(1.0 / delta)
    if not epsilon > threshold:
        raise DomainError(
            f"epsilon must exceed 2*delta*log(1/delta) = {threshold!r}, got {epsilon!r}"
        )
    ld = math.log(delta)

    def denom(alpha: float) -> float:
        return 2.0 * epsilon + 2.0 * (ld - log_zeta(alpha)) / (alpha - 1.0)

    def objective(alpha: float) -> float:
        d = denom(alpha)
        return alpha * T / d if d > 0.0 else math.inf

    argmin_alpha, sigma_sq = _min_over_orders(objective, delta, cfg)
    alpha_star = 2.0 * math.log(1.0 / delta) / epsilon
    plug = None
    if 1.0 < alpha_star <= 1.0 / delta:
        d_star = denom(alpha_star)
        if d_star > 0.0:
            plug = alpha_star * T / d_star
    return RequiredVariance(
        sigma_sq=sigma_sq,
        argmin_alpha=argmin_alpha,
        alpha_star=alpha_star,
        sigma_sq_at_alpha_star=plug,
    )


@dataclass(frozen=True)
class CurvePoint:
    """One row of an epsilon-versus-T sweep."""

    T: float
    eps_ma: float
    eps_ours: float
    eps_ours_exact: Optional[float]
    gap: float


def privacy_curve(
    config: GaussianConfig,
    delta: float,
    T_values: Sequence[float] | Iterable[float],
    modes: Sequence[str] = ("closed_form",),
    cfg: ScalarSearchConfig | None = None,
) -> list[CurvePoint]:
    """Sweep epsilon over T for the baseline and this accountant.

    The closed-form column is always produced; an exact column is added
    when "exact" is among the requested modes.  gap = eps_ma - eps_ours.
    """
    _check_delta_open(delta)
    t_list = list(T_values)
    if not t_list:
        raise DomainError("T_values must be non-empty")
    if not modes or any(m not in MODES for m in modes):
        raise DomainError(f"modes must be a non-empty subset of {MODES}, got {modes!r}")
    rho = config.rho
    want_exact = "exact" in modes
    rows = []
    for T in t_list:
        ma = ma_epsilon(rho, T, delta)
        ours = acct_epsilon(rho, T, delta, "closed_form", cfg).epsilon
        exact_value = acct_epsilon(rho, T, delta, "exact", cfg).epsilon if want_exact else None
        rows.append(CurvePoint(T=T, eps_ma=ma, eps_ours=ours, eps_ours_exact=exact_value, gap=ma - ours))
    return rows
