"""Ticket lifecycle: issuance, lottery assignment, redemption, expiry, refunds."""

from __future__ import annotations

import numpy as np

from .agents import volatility_adjustment
from .errors import ConfigError, SimulationAbort
from .model import (
    MarketState,
    SimulationConfig,
    SlotEnvironment,
    Ticket,
    TicketHolder,
    TicketState,
    TradeRecord,
    Venue,
)


def issue_initial(state: MarketState, config: SimulationConfig) -> list[Ticket]:
    """Mint the slot-0 batch. With expiry enabled the batch expires linearly:
    ticket i (1-indexed) expires at slot i + expiry_period."""
    if config.max_tickets < 1:
        raise ConfigError("max_tickets", "must be >= 1")
    batch = []
    for _ in range(config.max_tickets):
        expiry = None
        if config.expiry_period is not None:
            expiry = state.current_ticket_id + config.expiry_period
        batch.append(state.mint_ticket(expiry_slot=expiry))
    return batch


def purchase(
    state: MarketState,
    holder: TicketHolder,
    ticket: Ticket,
    price: float,
) -> TradeRecord:
    """Primary-market transfer from the protocol to a holder."""
    if ticket.owner_id is not None or ticket.terminal:
        raise SimulationAbort(f"ticket {ticket.id} is not sellable")
    if price > holder.available_funds + 1e-12:
        raise SimulationAbort(f"holder {holder.id} cannot afford {price}")
    ticket.owner_id = holder.id
    ticket.state = TicketState.HELD
    ticket.purchase_price = price
    holder.tickets.append(ticket.id)
    holder.available_funds -= price
    holder.accumulated_costs += price
    state.outstanding += 1
    state.total_mev_captured += price
    rec = TradeRecord(
        slot=state.slot,
        venue=Venue.PRIMARY,
        ticket_id=ticket.id,
        buyer_id=holder.id,
        seller_id=None,
        price=price,
    )
    state.record(rec)
    return rec


def eligible_for_lottery(state: MarketState) -> list[Ticket]:
    return sorted(
        (
            t
            for t in state.tickets.values()
            if t.owner_id is not None
            and t.state is TicketState.HELD
            and not t.expired_at(state.slot)
        ),
        key=lambda t: t.id,
    )


def lottery_assign(
    state: MarketState,
    rng: np.random.Generator,
    target_slot: int | None = None,
    slots_per_epoch: int = 32,
) -> int | None:
    """Uniformly pick one held, non-expired ticket and assign it to
    `target_slot` (defaults to the current slot). Returns the ticket id, or
    None when the slot stays unfilled.

    Consumes exactly one draw from `rng` regardless of the outcome so that
    runs with different market features see identical lottery streams.
    """
    u = rng.random()
    eligible = eligible_for_lottery(state)
    if target_slot is None:
        target_slot = state.slot
    if not eligible:
        state.unfilled_slots.append(target_slot)
        return None
    ticket = eligible[int(u * len(eligible))]
    assign_ticket(state, ticket, target_slot, slots_per_epoch)
    return ticket.id


def assign_ticket(
    state: MarketState, ticket: Ticket, target_slot: int, slots_per_epoch: int = 32
) -> None:
    if target_slot < state.slot:
        raise SimulationAbort("cannot assign a ticket to a past slot")
    ticket.state = TicketState.ASSIGNED
    ticket.assigned_slot = target_slot
    ticket.assigned_epoch = target_slot // slots_per_epoch
    state.pending_assignments[target_slot] = ticket.id


def redeem(
    state: MarketState,
    holders: dict[int, TicketHolder],
    ticket_id: int,
    env: SlotEnvironment,
    expected_vola: float | None,
) -> TradeRecord:
    """Consume the ticket assigned to the current slot; the owner extracts
    available MEV scaled by their capture rate and volatility edge."""
    ticket = state.tickets[ticket_id]
    if ticket.state is not TicketState.ASSIGNED or ticket.assigned_slot != state.slot:
        raise SimulationAbort(f"ticket {ticket_id} is not redeemable at slot {state.slot}")
    owner = holders[ticket.owner_id]
    adj = 1.0
    if expected_vola is not None:
        adj = volatility_adjustment(env.volatility, expected_vola, owner.vola_spec_factor)
    earnings = env.available_mev * owner.mev_capture_rate * adj
    owner.accumulated_earnings += earnings
    owner.available_funds += earnings
    owner.tickets.remove(ticket.id)
    ticket.state = TicketState.REDEEMED
    ticket.redeemed_slot = state.slot
    ticket.redeemed_epoch = state.epoch
    state.outstanding -= 1
    state.total_mev_available += env.available_mev
    state.pending_assignments.pop(state.slot, None)
    rec = TradeRecord(
        slot=state.slot,
        venue=Venue.REDEMPTION,
        ticket_id=ticket.id,
        buyer_id=None,
        seller_id=owner.id,
        price=0.0,
        mev_available=env.available_mev,
        mev_extracted=earnings,
    )
    state.record(rec)
    return rec


def expire_tickets(state: MarketState, holders: dict[int, TicketHolder]) -> int:
    """Expire every held/unsold ticket whose expiry slot has passed."""
    expired = 0
    for ticket in state.tickets.values():
        if ticket.state in (TicketState.HELD, TicketState.UNSOLD) and ticket.expired_at(state.slot):
            if ticket.owner_id is not None:
                holders[ticket.owner_id].tickets.remove(ticket.id)
                state.outstanding -= 1
            ticket.state = TicketState.EXPIRED
            expired += 1
    return expired


def expected_value_factor(x: int, z: int, s: float) -> float:
    """Probability an expiring ticket is assigned before expiry:
    1 - (1 - X/Z)^(S/X) for X assignment slots per window, Z tickets in
    circulation and S remaining validity slots."""
    if x < 1:
        raise ConfigError("slots_per_epoch", "assignment window must be >= 1")
    if z < x:
        raise ConfigError("max_tickets", "tickets in circulation must be >= window size")
    if s < 0:
        raise ConfigError("expiry_period", "remaining validity must be >= 0")
    if s == 0:
        return 0.0
    return 1.0 - (1.0 - x / z) ** (s / x)


def refund(
    state: MarketState,
    holder: TicketHolder,
    ticket_id: int,
    reimbursement_factor: float,
) -> TradeRecord:
    """Return an unallocated ticket to the protocol at a discount."""
    ticket = state.tickets[ticket_id]
    if ticket.state is not TicketState.HELD or ticket.owner_id != holder.id:
        raise SimulationAbort(f"ticket {ticket_id} is not refundable by holder {holder.id}")
    amount = ticket.purchase_price * (1.0 - reimbursement_factor)
    holder.tickets.remove(ticket.id)
    holder.available_funds += amount
    holder.accumulated_costs -= amount
    ticket.owner_id = None
    ticket.state = TicketState.UNSOLD
    ticket.purchase_price = 0.0
    state.outstanding -= 1
    state.total_mev_captured -= amount
    rec = TradeRecord(
        slot=state.slot,
        venue=Venue.REFUND,
        ticket_id=ticket.id,
        buyer_id=None,
        seller_id=holder.id,
        price=amount,
    )
    state.record(rec)
    return rec
