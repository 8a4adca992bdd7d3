import math

import numpy as np
import pytest

from etsim.environment import draw_mev, draw_volatility, expected_volatility
from etsim.errors import ConfigError


def test_draw_mev_mean_and_positivity():
    rng = np.random.default_rng(1)
    draws = [draw_mev(0.05, rng) for _ in range(50_000)]
    assert all(d >= 0 for d in draws)
    mean = sum(draws) / len(draws)
    # 3 sigma of the exponential sample mean
    assert abs(mean - 0.05) < 3 * 0.05 / math.sqrt(len(draws))


def test_draw_mev_rejects_bad_scale():
    with pytest.raises(ConfigError):
        draw_mev(0.0, np.random.default_rng(0))


def test_draw_volatility_off_is_exactly_one():
    assert draw_volatility(None, np.random.default_rng(0)) == 1.0


def test_draw_volatility_lognormal_mean():
    rng = np.random.default_rng(2)
    mu, sigma = 0.0, 0.2
    draws = [draw_volatility((mu, sigma), rng) for _ in range(50_000)]
    assert all(d > 0 for d in draws)
    expected = expected_volatility((mu, sigma))
    mean = sum(draws) / len(draws)
    sample_sigma = math.sqrt(
        (math.exp(sigma**2) - 1) * math.exp(2 * mu + sigma**2) / len(draws)
    )
    assert abs(mean - expected) < 3 * sample_sigma


def test_expected_volatility_formula():
    assert expected_volatility((0.0, 0.2)) == pytest.approx(math.exp(0.02))
    assert expected_volatility((0.5, 0.0)) == pytest.approx(math.exp(0.5))


def test_negative_sigma_rejected():
    with pytest.raises(ConfigError):
        expected_volatility((0.0, -1.0))
    with pytest.raises(ConfigError):
        draw_volatility((0.0, -1.0), np.random.default_rng(0))
