import math

import numpy as np
import pytest
from scipy import stats

from etsim.errors import ConfigError, SimulationAbort
from etsim.lifecycle import (
    assign_ticket,
    eligible_for_lottery,
    expected_value_factor,
    expire_tickets,
    issue_initial,
    lottery_assign,
    purchase,
    redeem,
    refund,
)
from etsim.model import (
    MarketState,
    SimulationConfig,
    SlotEnvironment,
    TicketState,
    Venue,
)
from etsim.agents import seed_holders


def fresh_market(n_tickets=4, n_holders=3, expiry_period=None):
    config = SimulationConfig(
        max_tickets=n_tickets,
        expiry_period=expiry_period,
        number_of_ticket_holders=n_holders,
        price_vola=None,
    )
    state = MarketState()
    issue_initial(state, config)
    holders = {h.id: h for h in seed_holders(n_holders, np.random.default_rng(0))}
    return state, holders, config


def test_issue_initial_mints_batch_with_linear_expiry():
    state, _, _ = fresh_market(n_tickets=3, expiry_period=10)
    assert sorted(state.tickets) == [1, 2, 3]
    assert [t.expiry_slot for t in state.tickets.values()] == [11, 12, 13]
    assert all(t.state is TicketState.UNSOLD for t in state.tickets.values())


def test_purchase_moves_ticket_and_funds():
    state, holders, _ = fresh_market()
    holder = holders[1]
    before = holder.available_funds
    rec = purchase(state, holder, state.tickets[1], 0.5)
    assert state.tickets[1].owner_id == 1
    assert state.tickets[1].state is TicketState.HELD
    assert holder.available_funds == pytest.approx(before - 0.5)
    assert holder.accumulated_costs == pytest.approx(0.5)
    assert state.outstanding == 1
    assert state.total_mev_captured == pytest.approx(0.5)
    assert rec.venue is Venue.PRIMARY


def test_purchase_rejects_owned_ticket_and_overspend():
    state, holders, _ = fresh_market()
    purchase(state, holders[1], state.tickets[1], 0.5)
    with pytest.raises(SimulationAbort):
        purchase(state, holders[2], state.tickets[1], 0.5)
    with pytest.raises(SimulationAbort):
        purchase(state, holders[2], state.tickets[2], holders[2].available_funds + 1)


def test_redeem_extracts_capture_scaled_mev():
    state, holders, _ = fresh_market()
    holder = holders[1]
    purchase(state, holder, state.tickets[1], 0.5)
    state.slot = 5
    assign_ticket(state, state.tickets[1], 5, slots_per_epoch=32)
    env = SlotEnvironment(slot=5, available_mev=2.0, volatility=1.0)
    before = holder.available_funds
    rec = redeem(state, holders, 1, env, expected_vola=None)
    assert rec.mev_extracted == pytest.approx(2.0 * holder.mev_capture_rate)
    assert holder.available_funds == pytest.approx(before + rec.mev_extracted)
    assert state.tickets[1].state is TicketState.REDEEMED
    assert state.outstanding == 0
    assert state.total_mev_available == pytest.approx(2.0)
    assert 1 not in holder.tickets


def test_redeem_requires_assignment_to_current_slot():
    state, holders, _ = fresh_market()
    purchase(state, holders[1], state.tickets[1], 0.5)
    with pytest.raises(SimulationAbort):
        redeem(state, holders, 1, SlotEnvironment(0, 1.0, 1.0), None)


def test_assigned_ticket_survives_expiry_sweep():
    state, holders, _ = fresh_market(expiry_period=2)
    purchase(state, holders[1], state.tickets[1], 0.1)
    purchase(state, holders[2], state.tickets[2], 0.1)
    assign_ticket(state, state.tickets[1], 10, slots_per_epoch=32)
    state.slot = 10  # both tickets are past their expiry slots
    expired = expire_tickets(state, holders)
    assert expired == 3  # ticket 2 (held) and tickets 3, 4 (unsold)
    assert state.tickets[1].state is TicketState.ASSIGNED
    assert state.tickets[2].state is TicketState.EXPIRED
    assert 2 not in holders[2].tickets
    assert state.outstanding == 1


def test_refund_returns_ticket_at_discount():
    state, holders, _ = fresh_market()
    holder = holders[1]
    purchase(state, holder, state.tickets[1], 1.0)
    rec = refund(state, holder, 1, reimbursement_factor=0.2)
    assert rec.price == pytest.approx(0.8)
    assert state.tickets[1].state is TicketState.UNSOLD
    assert state.tickets[1].owner_id is None
    assert state.outstanding == 0
    assert state.total_mev_captured == pytest.approx(1.0 - 0.8)
    assert holder.accumulated_costs == pytest.approx(0.2)


def test_refund_rejects_assigned_ticket():
    state, holders, _ = fresh_market()
    purchase(state, holders[1], state.tickets[1], 1.0)
    assign_ticket(state, state.tickets[1], 3, slots_per_epoch=32)
    with pytest.raises(SimulationAbort):
        refund(state, holders[1], 1, 0.2)


def test_lottery_uniform_over_eligible_tickets():
    """Chi-square goodness of fit over 20k assignment draws."""
    rng = np.random.default_rng(123)
    counts = {1: 0, 2: 0, 3: 0}
    for _ in range(20_000):
        state, holders, _ = fresh_market(n_tickets=4)
        for tid in (1, 2, 3):
            purchase(state, holders[1 + (tid - 1) % 3], state.tickets[tid], 0.0)
        chosen = lottery_assign(state, rng)
        counts[chosen] += 1
    result = stats.chisquare(list(counts.values()))
    assert result.pvalue > 0.001, counts


def test_lottery_consumes_one_draw_even_when_empty():
    state, _, _ = fresh_market()
    rng_a = np.random.default_rng(9)
    rng_b = np.random.default_rng(9)
    assert lottery_assign(state, rng_a) is None
    assert state.unfilled_slots == [0]
    rng_b.random()
    assert rng_a.random() == rng_b.random()


def test_lottery_excludes_expired_and_assigned():
    state, holders, _ = fresh_market(expiry_period=5)
    for tid in (1, 2, 3):
        purchase(state, holders[1], state.tickets[tid], 0.0)
    state.slot = 7  # tickets 1 (expiry 6) is stale; 2 and 3 still valid
    assert [t.id for t in eligible_for_lottery(state)] == [2, 3]
    assign_ticket(state, state.tickets[2], 8, slots_per_epoch=32)
    assert [t.id for t in eligible_for_lottery(state)] == [3]


def test_expected_value_factor_boundaries():
    assert expected_value_factor(32, 1024, 0) == 0.0
    assert expected_value_factor(32, 32, 32) == 1.0
    assert 0 < expected_value_factor(32, 1024, 32) < 1
    with pytest.raises(ConfigError):
        expected_value_factor(32, 16, 32)
    with pytest.raises(ConfigError):
        expected_value_factor(0, 16, 32)
    with pytest.raises(ConfigError):
        expected_value_factor(32, 64, -1)


@pytest.mark.parametrize("s", [32, 320, 1024])
def test_expected_value_factor_against_monte_carlo(s):
    """Independent oracle: each 32-slot window draws 32 distinct proposers
    from the 1024 circulating tickets; a tracked ticket is picked in a window
    iff its uniformly random position in that window's ordering is < 32."""
    x, z, trials = 32, 1024, 100_000
    rng = np.random.default_rng(s)
    windows = s // x
    positions = rng.integers(0, z, size=(trials, windows))
    hit_rate = float((positions < x).any(axis=1).mean())
    p = expected_value_factor(x, z, s)
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(hit_rate - p) < 3 * sigma
