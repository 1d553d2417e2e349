"""Divergences between two-point distributions, in both privacy flavors.

Approximate DP is characterized by the hockey-stick divergence, generated
by f(t) = (t - lam)_+ with lam = e^eps, and Renyi DP by the power
divergence generated by f(t) = (t^alpha - 1)/(alpha - 1).  On a pair of
Bernoulli distributions both reduce to two-atom sums.  Powers are combined
in log domain so that orders of several hundred do not overflow.  All
values are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .optimize import log_add

_LOG_MAX = 709.0  # math.exp overflows just above this


def _check_open_unit(x: float, name: str) -> None:
    if not (0.0 < x < 1.0) or not math.isfinite(x):
        raise DomainError(f"{name} must lie strictly inside (0, 1), got {x!r}")


def _check_order(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha > 1.0):
        raise DomainError(f"order alpha must be finite and > 1, got {alpha!r}")


@dataclass(frozen=True)
class BernoulliPair:
    """Success probabilities of two binary distributions; endpoints rejected."""

    p: float
    q: float

    def __post_init__(self):
        _check_open_unit(self.p, "p")
        _check_open_unit(self.q, "q")


@dataclass(frozen=True)
class RenyiGuarantee:
    """A bound gamma on the order-alpha Renyi divergence between outputs."""

    alpha: float
    gamma: float

    def __post_init__(self):
        _check_order(self.alpha)
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")


@dataclass(frozen=True)
class DpGuarantee:
    """An (epsilon, delta) approximate-DP guarantee."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise DomainError(f"epsilon must be finite and >= 0, got {self.epsilon!r}")
        if not (0.0 <= self.delta < 1.0):
            raise DomainError(f"delta must lie in [0, 1), got {self.delta!r}")


def hockey_stick_binary(pair: BernoulliPair, lam: float) -> float:
    """E_lam(P||Q) = (p - lam*q)_+ + ((1-p) - lam*(1-q))_+ for lam >= 1."""
    if not (math.isfinite(lam) and lam >= 1.0):
        raise DomainError(f"lam must be finite and >= 1, got {lam!r}")
    p, q = pair.p, pair.q
    return max(p - lam * q, 0.0) + max((1.0 - p) - lam * (1.0 - q), 0.0)


def _log_moment(pair: BernoulliPair, alpha: float) -> float:
    # log( p^a q^(1-a) + (1-p)^a (1-q)^(1-a) ), exponents combined before exp
    p, q = pair.p, pair.q
    t_head = alpha * math.log(p) + (1.0 - alpha) * math.log(q)
    t_tail = alpha * math.log1p(-p) + (1.0 - alpha) * math.log1p(-q)
    return log_add(t_head, t_tail)


def chi_alpha_binary(pair: BernoulliPair, alpha: float) -> float:
    """Power divergence (E[(dP/dQ)^alpha] - 1)/(alpha - 1); +inf on overflow."""
    _check_order(alpha)
    m = _log_moment(pair, alpha)
    if m > _LOG_MAX:
        return math.inf
    # the true value is >= 0; rounding at p ~= q can push m a few ulp below 0
    return max(math.expm1(m) / (alpha - 1.0), 0.0)


def renyi_binary(pair: BernoulliPair, alpha: float) -> float:
    """Renyi divergence (1/(alpha-1)) * log E[(dP/dQ)^alpha]."""
    _check_order(alpha)
    return max(_log_moment(pair, alpha) / (alpha - 1.0), 0.0)


def chi_of_gamma(gamma: float, alpha: float) -> float:
    """Largest power divergence compatible with Renyi divergence gamma.

    chi(gamma) = (e^((alpha-1)*gamma) - 1)/(alpha - 1); returns +inf when
    the exponential overflows.
    """
    _check_order(alpha)
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise DomainError(f"gamma must be finite and >= 0, got {gamma!r}")
    x = (alpha - 1.0) * gamma
    if x > _LOG_MAX:
        return math.inf
    return math.expm1(x) / (alpha - 1.0)


def gamma_of_chi(t: float, alpha: float) -> float:
    """Inverse of chi_of_gamma: (1/(alpha-1)) * log(1 + (alpha-1)*t)."""
    _check_order(alpha)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"divergence value must be >= 0, got {t!r}")
    return math.log1p((alpha - 1.0) * t) / (alpha - 1.0)
