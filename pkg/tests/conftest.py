"""Shared sampling helpers for the test suite."""

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250814)


def sample_triples(rng: np.random.Generator, n: int) -> list[tuple[float, float, float]]:
    """Random (alpha, epsilon, delta) with alpha in (1, 50], eps in [0, 5], delta in [0, 0.5)."""
    alpha = 1.0 + 49.0 * rng.uniform(1e-6, 1.0, size=n)
    eps = 5.0 * rng.uniform(0.0, 1.0, size=n)
    delta = 0.5 * rng.uniform(0.0, 1.0, size=n)
    return list(zip(alpha.tolist(), eps.tolist(), delta.tolist()))


def sample_small_delta_triples(rng: np.random.Generator, n: int) -> list[tuple[float, float, float]]:
    """Random (alpha, gamma, delta) with alpha*delta < 1 and delta > 0."""
    out = []
    for _ in range(n):
        alpha = 1.0 + 49.0 * rng.uniform(1e-6, 1.0)
        gamma = 5.0 * rng.uniform(0.0, 1.0)
        delta = rng.uniform(1e-8, 1.0) * min(0.5, 0.999 / alpha)
        out.append((alpha, gamma, delta))
    return out
