"""Derivative-free scalar minimization and monotone inversion.

Every quantity in this package reduces to a one-dimensional minimization
over an open interval, or to inverting a monotone map built from such a
minimization.  A coarse scan brackets the minimizer first (the objectives
are convex in practice, but bracketing does not rely on that), then
golden-section search refines the bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import BracketRangeError, DomainError, InfeasibleError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScalarSearchConfig:
    """Knobs shared by the scalar searches.

    abs_tol is an absolute tolerance on the argument, not the value.
    """

    abs_tol: float = 1e-10
    max_iters: int = 200
    coarse_grid: int = 256

    def __post_init__(self):
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if self.coarse_grid < 8:
            raise DomainError(f"coarse_grid must be >= 8, got {self.coarse_grid!r}")


DEFAULT_SEARCH = ScalarSearchConfig()


def log_add(a: float, b: float) -> float:
    """log(e^a + e^b) with the max factored out; tolerates infinities."""
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    if a == math.inf or b == math.inf:
        return math.inf
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def minimize_unimodal(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> tuple[float, float]:
    """Minimize over the open interval (lo, hi).

    Returns (argmin, value).  The value never exceeds the best coarse-grid
    sample: the reported minimum is the best of every point evaluated.
    Non-finite objective values are skipped; if the whole grid is
    non-finite the minimization is infeasible.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"need a finite interval with lo < hi, got ({lo!r}, {hi!r})")
    eta = max(1e-12, 1e-12 * abs(hi - lo))
    a, b = lo + eta, hi - eta
    if not a < b:
        # interval thinner than the endpoint offset; only the midpoint is usable
        mid = 0.5 * (lo + hi)
        return mid, objective(mid)

    def f(x: float) -> float:
        v = objective(x)
        return math.inf if math.isnan(v) else v

    n = cfg.coarse_grid
    step = (b - a) / (n - 1)
    best_x, best_v, best_i = a, f(a), 0
    for i in range(1, n):
        x = a + i * step
        v = f(x)
        if v < best_v:
            best_x, best_v, best_i = x, v, i
    if not best_v < math.inf:
        raise InfeasibleError("objective is non-finite everywhere on the coarse grid")

    left = a + max(best_i - 1, 0) * step
    right = a + min(best_i + 1, n - 1) * step
    x1 = right - _INV_PHI * (right - left)
    x2 = left + _INV_PHI * (right - left)
    f1, f2 = f(x1), f(x2)
    for x, v in ((x1, f1), (x2, f2)):
        if v < best_v:
            best_x, best_v = x, v
    iters = 0
    while (right - left) > cfg.abs_tol and iters < cfg.max_iters:
        if f1 <= f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - _INV_PHI * (right - left)
            f1 = f(x1)
            if f1 < best_v:
                best_x, best_v = x1, f1
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + _INV_PHI * (right - left)
            f2 = f(x2)
            if f2 < best_v:
                best_x, best_v = x2, f2
        iters += 1
    return best_x, best_v


def invert_monotone(
    fn: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    increasing: bool = True,
    cfg: ScalarSearchConfig = DEFAULT_SEARCH,
) -> float:
    """Solve fn(x) = target on [lo, hi] for monotone fn by bisection.

    Flat segments are tolerated; for an increasing fn the returned point
    converges to the leftmost crossing, and always satisfies
    fn(result) >= target up to the argument tolerance.  A target outside
    the attained range raises BracketRangeError carrying both endpoint
    values.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got ({lo!r}, {hi!r})")
    f_lo, f_hi = fn(lo), fn(hi)
    lo_v, hi_v = (f_lo, f_hi) if increasing else (f_hi, f_lo)
    if not (lo_v <= target <= hi_v):
        raise BracketRangeError(
            f"target {target!r} outside attained range [{lo_v!r}, {hi_v!r}]",
            lo_value=f_lo,
            hi_value=f_hi,
        )
    left, right = lo, hi
    iters = 0
    while (right - left) > cfg.abs_tol and iters < cfg.max_iters:
        mid = 0.5 * (left + right)
        if (fn(mid) >= target) == increasing:
            right = mid
        else:
            left = mid
        iters += 1
    return right
