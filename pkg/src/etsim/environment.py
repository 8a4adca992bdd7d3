"""Exogenous per-slot processes: available MEV and token-price volatility."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError


def draw_mev(mev_scale: float, rng: np.random.Generator) -> float:
    """One exponential draw with mean `mev_scale`."""
    if mev_scale <= 0:
        raise ConfigError("mev_scale", "must be > 0")
    return float(rng.exponential(mev_scale))


def draw_volatility(price_vola: tuple[float, float] | None, rng: np.random.Generator) -> float:
    """One log-normal volatility draw; 1.0 exactly when the feature is off."""
    if price_vola is None:
        return 1.0
    mu, sigma = price_vola
    if sigma < 0:
        raise ConfigError("price_vola", "sigma must be >= 0")
    return float(rng.lognormal(mu, sigma))


def expected_volatility(price_vola: tuple[float, float]) -> float:
    """Analytic mean of the volatility distribution, exp(mu + sigma^2 / 2).

    This is the benchmark holders compare each slot's draw against.
    """
    mu, sigma = price_vola
    if sigma < 0:
        raise ConfigError("price_vola", "sigma must be >= 0")
    return math.exp(mu + sigma * sigma / 2.0)
