import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from etsim.agents import (
    bid_fpa,
    bid_spa,
    intrinsic_valuation,
    quoted_decision,
    seed_holders,
    strategy_estimate,
    volatility_adjustment,
)
from etsim.errors import ConfigError
from etsim.model import Strategy, Tier, TicketHolder


def make_holder(funds=100.0, capture=0.9, aggressiveness=0.1, vola=1.0):
    return TicketHolder(
        id=1,
        tier=Tier.TOP,
        available_funds=funds,
        mev_capture_rate=capture,
        aggressiveness=aggressiveness,
        vola_spec_factor=vola,
    )


def test_seed_holders_tier_split_and_ranges():
    holders = seed_holders(10, np.random.default_rng(42))
    tiers = [h.tier for h in holders]
    assert tiers[:2] == [Tier.TOP] * 2
    assert tiers[2:6] == [Tier.MIDDLE] * 4
    assert tiers[6:] == [Tier.TAIL] * 4
    assert [h.id for h in holders] == list(range(1, 11))
    for h in holders:
        lo, hi = {
            Tier.TOP: (400, 1000),
            Tier.MIDDLE: (300, 700),
            Tier.TAIL: (200, 500),
        }[h.tier]
        assert lo <= h.available_funds <= hi
        clo, chi = {
            Tier.TOP: (0.85, 0.95),
            Tier.MIDDLE: (0.75, 0.85),
            Tier.TAIL: (0.6, 0.75),
        }[h.tier]
        assert clo <= h.mev_capture_rate <= chi
        assert h.vola_spec_factor > 0
        assert h.tickets == [] and h.accumulated_costs == 0.0


def test_seed_holders_negative_vola_factor_floored():
    # with enough holders some normal(1, 0.5) draws go non-positive
    holders = seed_holders(500, np.random.default_rng(0))
    assert all(h.vola_spec_factor > 0 for h in holders)
    assert any(h.vola_spec_factor == pytest.approx(0.1) for h in holders)


def test_seed_holders_requires_positive_count():
    with pytest.raises(ConfigError):
        seed_holders(0, np.random.default_rng(0))


def test_strategy_estimates():
    scale = 0.05
    assert strategy_estimate(Strategy.NAIVE_HISTORICAL, scale, None) == (scale, False)
    assert strategy_estimate(Strategy.CAPTURE_AWARE, scale, None) == (scale, True)
    assert strategy_estimate(Strategy.TRUTHFUL, scale, None) == (scale, True)
    assert strategy_estimate(Strategy.QUOTED_THRESHOLD, scale, None) == (scale, True)
    median = scale * math.log(2)
    est, use_capture = strategy_estimate(
        Strategy.UNIFORM_AROUND_MEDIAN, scale, np.random.default_rng(0)
    )
    assert not use_capture
    assert 0.5 * median <= est <= 1.5 * median


def test_intrinsic_valuation_components():
    h = make_holder(capture=0.8, aggressiveness=0.25)
    assert intrinsic_valuation(h, 1.0) == pytest.approx(0.8 * 0.75)
    assert intrinsic_valuation(h, 1.0, use_capture=False) == pytest.approx(0.75)
    assert intrinsic_valuation(h, 1.0, expiry_discount=0.5) == pytest.approx(0.8 * 0.75 * 0.5)
    assert intrinsic_valuation(h, 1.0, vola_adjustment=2.0) == pytest.approx(0.8 * 0.75 * 2.0)


def test_fpa_competition_shading():
    h = make_holder(funds=100.0)
    assert bid_fpa(h, 1.0, Strategy.CAPTURE_AWARE, 10) == pytest.approx(1.0)
    assert bid_fpa(h, 1.0, Strategy.COMPETITION_ADJUSTED, 10) == pytest.approx(0.9)
    # shading never exceeds half even with a single bidder
    assert bid_fpa(h, 1.0, Strategy.COMPETITION_ADJUSTED, 1) == pytest.approx(0.5)


def test_bids_capped_by_funds():
    h = make_holder(funds=0.3)
    assert bid_fpa(h, 1.0, Strategy.CAPTURE_AWARE, 10) == pytest.approx(0.3)
    assert bid_spa(h, 1.0) == pytest.approx(0.3)


@given(
    valuation=st.floats(0, 1000, allow_nan=False),
    funds=st.floats(0, 1000, allow_nan=False),
)
def test_spa_bid_is_truthful_up_to_budget(valuation, funds):
    h = make_holder(funds=funds)
    assert bid_spa(h, valuation) == min(valuation, funds)


@given(
    price=st.floats(0, 10, allow_nan=False),
    valuation=st.floats(0, 10, allow_nan=False),
    funds=st.floats(0, 10, allow_nan=False),
)
def test_quoted_decision_threshold(price, valuation, funds):
    h = make_holder(funds=funds)
    assert quoted_decision(h, price, valuation) == (price < valuation and price <= funds)


def test_volatility_adjustment():
    assert volatility_adjustment(1.5, 1.0, 1.0) == pytest.approx(1.5)
    assert volatility_adjustment(0.5, 1.0, 1.0) == pytest.approx(0.5)
    # floored at zero for strongly negative surprises
    assert volatility_adjustment(0.0, 2.0, 3.0) == 0.0
    # expected draw leaves the valuation untouched
    assert volatility_adjustment(1.3, 1.3, 5.0) == pytest.approx(1.0)
