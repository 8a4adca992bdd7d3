"""Holder-to-holder resale: one offer per holder per slot, cleared as a
second-price auction with the seller's own valuation as reserve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import intrinsic_valuation, strategy_estimate, volatility_adjustment
from .lifecycle import expected_value_factor
from .mechanisms import run_spa
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


@dataclass(frozen=True)
class ResaleOffer:
    seller_id: int
    ticket_id: int
    min_price: float


def price_resale_ticket(
    buyer: TicketHolder,
    ticket: Ticket,
    state: MarketState,
    env: SlotEnvironment,
    config: SimulationConfig,
    expected_vola: float | None,
) -> float:
    """A holder's value for someone else's ticket: intrinsic valuation scaled
    by remaining-validity risk and, for same-slot tickets, the known
    volatility draw."""
    est, use_capture = strategy_estimate(config.agent_bidding_strategy, config.mev_scale, None)
    discount = 1.0
    if ticket.expiry_slot is not None and ticket.state is not TicketState.ASSIGNED:
        remaining = max(0, ticket.expiry_slot - state.slot)
        x = config.slots_per_epoch
        z = max(config.max_tickets, x)
        discount = expected_value_factor(x, z, remaining)
    adj = 1.0
    if expected_vola is not None and ticket.assigned_slot == state.slot:
        adj = volatility_adjustment(env.volatility, expected_vola, buyer.vola_spec_factor)
    return intrinsic_valuation(buyer, est, discount, adj, use_capture)


def _pick_offer(
    holder: TicketHolder,
    state: MarketState,
    env: SlotEnvironment,
    config: SimulationConfig,
    expected_vola: float | None,
) -> ResaleOffer | None:
    """List the holder's lowest-value sellable ticket at their own valuation."""
    sellable = [
        state.tickets[tid]
        for tid in holder.tickets
        if state.tickets[tid].state in (TicketState.HELD, TicketState.ASSIGNED)
        and not state.tickets[tid].expired_at(state.slot)
    ]
    if not sellable:
        return None
    valued = [
        (price_resale_ticket(holder, t, state, env, config, expected_vola), t.id)
        for t in sellable
    ]
    value, ticket_id = min(valued)
    return ResaleOffer(seller_id=holder.id, ticket_id=ticket_id, min_price=value)


def run_secondary_round(
    state: MarketState,
    holders: dict[int, TicketHolder],
    env: SlotEnvironment,
    config: SimulationConfig,
    expected_vola: float | None,
    rng: np.random.Generator,
) -> list[TradeRecord]:
    if not config.secondary_market:
        return []
    offers = []
    for holder_id in sorted(holders):
        offer = _pick_offer(holders[holder_id], state, env, config, expected_vola)
        if offer is not None:
            offers.append(offer)
    if not offers:
        return []
    trades = []
    for idx in rng.permutation(len(offers)):
        offer = offers[int(idx)]
        seller = holders[offer.seller_id]
        ticket = state.tickets[offer.ticket_id]
        if ticket.owner_id != seller.id or ticket.terminal:
            continue
        bids = []
        for holder_id in sorted(holders):
            if holder_id == offer.seller_id:
                continue
            buyer = holders[holder_id]
            value = price_resale_ticket(buyer, ticket, state, env, config, expected_vola)
            bids.append((holder_id, min(value, buyer.available_funds)))
        outcome = run_spa(bids, reserve=offer.min_price)
        if outcome.winner_id is None:
            continue
        buyer = holders[outcome.winner_id]
        price = outcome.clearing_price
        buyer.available_funds -= price
        buyer.accumulated_costs += price
        buyer.tickets.append(ticket.id)
        seller.available_funds += price
        seller.accumulated_earnings += price
        seller.tickets.remove(ticket.id)
        ticket.owner_id = buyer.id
        ticket.purchase_price = price
        rec = TradeRecord(
            slot=state.slot,
            venue=Venue.SECONDARY,
            ticket_id=ticket.id,
            buyer_id=buyer.id,
            seller_id=seller.id,
            price=price,
        )
        state.record(rec)
        trades.append(rec)
    return trades
