import pytest
from hypothesis import given
from hypothesis import strategies as st

from etsim.errors import UndefinedMetric
from etsim.metrics import (
    combined_capture,
    delta_variance,
    gk_measure,
    hhi,
    market_shares,
    mev_share,
    nakamoto,
)
from etsim.model import TradeRecord, Venue


def trade(venue, slot=0, ticket_id=1, buyer=None, seller=None, price=0.0, mev=None, extracted=None):
    return TradeRecord(
        slot=slot,
        venue=venue,
        ticket_id=ticket_id,
        buyer_id=buyer,
        seller_id=seller,
        price=price,
        mev_available=mev,
        mev_extracted=extracted,
    )


def redemption(seller, slot=0, ticket_id=1, mev=1.0):
    return trade(Venue.REDEMPTION, slot=slot, ticket_id=ticket_id, seller=seller, mev=mev)


def test_hhi_reference_value():
    assert hhi({1: 0.5, 2: 0.3, 3: 0.2}) == pytest.approx(3800.0)
    assert hhi({1: 1.0}) == pytest.approx(10000.0)


def test_nakamoto_reference_values():
    equal5 = {i: 0.2 for i in range(5)}
    assert nakamoto(equal5) == 3
    assert nakamoto({1: 1.0}) == 1
    assert nakamoto({1: 0.51, 2: 0.49}) == 1
    assert nakamoto({1: 0.50, 2: 0.50}) == 2


def test_gk_constant_prices_is_exactly_zero():
    series = [(slot, 0.05) for slot in range(64)]
    assert gk_measure(series, 32) == 0.0


def test_gk_averages_over_nonempty_epochs():
    # epoch 0: range [1, 2] monotone; epoch 2: constant; epoch 1 empty
    series = [(0, 1.0), (1, 2.0), (70, 5.0), (71, 5.0)]
    import math

    expected_epoch0 = 0.5 * math.log(2.0) ** 2 - (2 * math.log(2) - 1) * math.log(2.0) ** 2
    assert gk_measure(series, 32) == pytest.approx((expected_epoch0 + 0.0) / 2)


def test_gk_requires_trades():
    with pytest.raises(UndefinedMetric):
        gk_measure([], 32)


def test_delta_variance_ramp_is_exactly_zero():
    assert delta_variance([1.0, 2.0, 3.0, 4.0]) == 0.0
    assert delta_variance([5.0, 5.0, 5.0]) == 0.0


def test_delta_variance_value():
    # deltas: +1, -1 -> mean 0, population variance 1
    assert delta_variance([0.0, 1.0, 0.0]) == pytest.approx(1.0)
    with pytest.raises(UndefinedMetric):
        delta_variance([1.0, 2.0])


def test_market_shares_counts_redeemed_tickets():
    log = [redemption(1), redemption(1, ticket_id=2), redemption(2, ticket_id=3)]
    shares = market_shares(log)
    assert shares == {1: pytest.approx(2 / 3), 2: pytest.approx(1 / 3)}
    with pytest.raises(UndefinedMetric):
        market_shares([trade(Venue.PRIMARY, buyer=1, price=1.0)])


def test_mev_share_unclamped_above_one():
    assert mev_share(0.8, 1.0) == pytest.approx(0.8)
    assert mev_share(1.5, 1.0) == pytest.approx(1.5)
    assert mev_share(-0.1, 1.0) == 0.0
    with pytest.raises(UndefinedMetric):
        mev_share(1.0, 0.0)


def test_combined_capture_counts_resale_premium():
    log = [
        trade(Venue.PRIMARY, ticket_id=1, buyer=1, price=1.0),
        trade(Venue.SECONDARY, ticket_id=1, buyer=2, seller=1, price=1.4),
        trade(Venue.SECONDARY, ticket_id=1, buyer=3, seller=2, price=1.1),
    ]
    # 1.0 primary + 0.4 premium - 0.3 markdown
    assert combined_capture(log) == pytest.approx(1.1)


def test_combined_capture_nets_refunds():
    log = [
        trade(Venue.PRIMARY, ticket_id=1, buyer=1, price=1.0),
        trade(Venue.REFUND, ticket_id=1, seller=1, price=0.8),
    ]
    assert combined_capture(log) == pytest.approx(0.2)


@given(
    counts=st.lists(st.integers(1, 50), min_size=1, max_size=12),
)
def test_shares_sum_to_one_and_hhi_bounds(counts):
    log = [
        redemption(holder, ticket_id=i)
        for i, holder in enumerate(
            hid for hid, c in enumerate(counts, start=1) for _ in range(c)
        )
    ]
    shares = market_shares(log)
    assert sum(shares.values()) == pytest.approx(1.0)
    value = hhi(shares)
    assert 10000.0 / len(counts) - 1e-6 <= value <= 10000.0 + 1e-6
    assert 1 <= nakamoto(shares) <= len(counts)
