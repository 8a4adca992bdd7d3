"""Discrete-slot simulation loop: environment draws, assignment lottery,
primary sales, resale round, redemption, and run/batch drivers."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from .agents import (
    bid_fpa,
    bid_spa,
    intrinsic_valuation,
    quoted_decision,
    strategy_estimate,
    volatility_adjustment,
)
from .environment import draw_mev, draw_volatility, expected_volatility
from .errors import SimulationAbort
from .lifecycle import (
    assign_ticket,
    expected_value_factor,
    expire_tickets,
    lottery_assign,
    purchase,
    redeem,
    refund,
)
from .mechanisms import (
    AuctionOutcome,
    amm_price,
    derive_b,
    eip1559_update_price,
    run_fpa,
    run_spa,
)
from .metrics import RunMetrics, compute_run_metrics
from .model import (
    MarketState,
    Mechanism,
    SimulationConfig,
    SlotEnvironment,
    Ticket,
    TicketHolder,
    TicketState,
    Venue,
    new_market,
)
from .secondary import run_secondary_round

AUCTION_MECHANISMS = (Mechanism.FPA, Mechanism.SPA)


@dataclass
class RunStreams:
    """Independent substreams so toggling one market feature never shifts the
    draws seen by the others (identical environments under identical seeds)."""

    env: np.random.Generator
    lottery: np.random.Generator
    seeding: np.random.Generator
    market: np.random.Generator


def make_streams(seed: int) -> RunStreams:
    children = np.random.SeedSequence(seed).spawn(4)
    return RunStreams(*(np.random.default_rng(c) for c in children))


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    quoted_price: float | None
    clearing_price: float | None  # mean executed primary price, if any
    mev_available: float
    volatility: float
    redeemer_id: int | None
    outstanding: int


@dataclass
class RunResult:
    config: SimulationConfig
    seed: int
    state: MarketState
    holders: dict[int, TicketHolder]
    series: list[SlotRecord] = field(default_factory=list)
    metrics: RunMetrics | None = None


@dataclass
class BatchResult:
    config: SimulationConfig
    results: list[RunResult]
    mean: dict[str, float]
    std: dict[str, float]


def is_jit(config: SimulationConfig) -> bool:
    """Single-ticket auction markets sell, assign and redeem within one slot."""
    return config.selling_mechanism in AUCTION_MECHANISMS and config.max_tickets == 1


def _expiry_factor(config: SimulationConfig, ticket: Ticket, slot: int) -> float:
    if ticket.expiry_slot is None or ticket.state is TicketState.ASSIGNED:
        return 1.0
    remaining = max(0, ticket.expiry_slot - slot)
    x = config.slots_per_epoch
    return expected_value_factor(x, max(config.max_tickets, x), remaining)


def _next_inventory(state: MarketState, config: SimulationConfig) -> Ticket:
    """Lowest-id unsold, non-expired ticket; minted on demand."""
    for ticket in state.tickets.values():
        if ticket.state is TicketState.UNSOLD and not ticket.expired_at(state.slot):
            return ticket
    expiry = None
    if config.expiry_period is not None:
        expiry = state.slot + config.expiry_period
    return state.mint_ticket(expiry_slot=expiry)


def _auction_sell(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    env: SlotEnvironment,
    expected_vola: float | None,
    ticket: Ticket,
    same_slot: bool,
    rng: np.random.Generator,
) -> AuctionOutcome | None:
    """One sealed-bid round for one ticket; returns None when it goes unsold."""
    discount = _expiry_factor(config, ticket, state.slot)
    bids = []
    for holder_id in sorted(holders):
        holder = holders[holder_id]
        adj = 1.0
        if same_slot:
            # same-slot bidders observe the slot's actual MEV and volatility
            est, use_capture = env.available_mev, True
            if expected_vola is not None:
                adj = volatility_adjustment(env.volatility, expected_vola, holder.vola_spec_factor)
        else:
            est, use_capture = strategy_estimate(
                config.agent_bidding_strategy, config.mev_scale, rng
            )
        value = intrinsic_valuation(holder, est, discount, adj, use_capture)
        if config.selling_mechanism is Mechanism.FPA:
            bid = bid_fpa(holder, value, config.agent_bidding_strategy, len(holders))
        else:
            bid = bid_spa(holder, value)
        if bid > 0:
            bids.append((holder_id, bid))
    if config.selling_mechanism is Mechanism.FPA:
        outcome = run_fpa(bids)
    else:
        outcome = run_spa(bids)
    if outcome.winner_id is None:
        return None
    purchase(state, holders[outcome.winner_id], ticket, outcome.clearing_price)
    return outcome


def _fixed_supply_round(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    env: SlotEnvironment,
    expected_vola: float | None,
    rng: np.random.Generator,
) -> None:
    """Replace expired and about-to-be-redeemed tickets so the circulating
    supply returns to max_tickets at the slot boundary."""
    need = config.max_tickets - state.outstanding
    if state.slot in state.pending_assignments:
        need += 1
    for _ in range(max(0, need)):
        ticket = _next_inventory(state, config)
        if _auction_sell(state, holders, config, env, expected_vola, ticket, False, rng) is None:
            break


def _jit_round(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    env: SlotEnvironment,
    expected_vola: float | None,
    rng: np.random.Generator,
) -> None:
    """Sell one ticket for immediate assignment to the current slot."""
    ticket = _next_inventory(state, config)
    outcome = _auction_sell(state, holders, config, env, expected_vola, ticket, True, rng)
    if outcome is not None:
        assign_ticket(state, ticket, state.slot, config.slots_per_epoch)


def _quoted_valuation(
    holder: TicketHolder,
    config: SimulationConfig,
    discount: float,
    rng: np.random.Generator,
) -> float:
    est, use_capture = strategy_estimate(config.agent_bidding_strategy, config.mev_scale, rng)
    return intrinsic_valuation(holder, est, discount, 1.0, use_capture)


def _quoted_round(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    rng: np.random.Generator,
    amm_b: float | None,
    max_sales: int | None,
) -> None:
    """Round-robin passes over a shuffled holder order; each pass a willing
    holder buys one ticket at the standing quote. AMM quotes move per sale,
    the EIP-1559 quote is fixed within the slot."""
    order = [int(i) + 1 for i in rng.permutation(len(holders))]
    sold = 0
    while max_sales is None or sold < max_sales:
        sold_this_pass = False
        for holder_id in order:
            if max_sales is not None and sold >= max_sales:
                break
            holder = holders[holder_id]
            if config.selling_mechanism is Mechanism.AMM:
                price = amm_price(state.excess_tickets_held, config.amm_adjust_factor, amm_b)
            else:
                price = state.quoted_price
            ticket = _peek_inventory(state, config)
            discount = 1.0
            if ticket is not None:
                discount = _expiry_factor(config, ticket, state.slot)
            value = _quoted_valuation(holder, config, discount, rng)
            if not quoted_decision(holder, price, value):
                continue
            ticket = ticket if ticket is not None else _next_inventory(state, config)
            purchase(state, holders[holder_id], ticket, price)
            if config.selling_mechanism is Mechanism.AMM:
                state.excess_tickets_held += 1
            sold += 1
            sold_this_pass = True
        if not sold_this_pass:
            break


def _peek_inventory(state: MarketState, config: SimulationConfig) -> Ticket | None:
    for ticket in state.tickets.values():
        if ticket.state is TicketState.UNSOLD and not ticket.expired_at(state.slot):
            return ticket
    return None


def _refund_round(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    rng: np.random.Generator,
) -> None:
    """Each holder may hand back at most one unallocated ticket per slot when
    the reimbursement beats the ticket's current value to them."""
    if config.reimbursement_factor is None:
        return
    for holder_id in sorted(holders):
        holder = holders[holder_id]
        held = sorted(
            tid
            for tid in holder.tickets
            if state.tickets[tid].state is TicketState.HELD
            and not state.tickets[tid].expired_at(state.slot)
        )
        for tid in held:
            ticket = state.tickets[tid]
            payout = ticket.purchase_price * (1.0 - config.reimbursement_factor)
            discount = _expiry_factor(config, ticket, state.slot)
            value = _quoted_valuation(holder, config, discount, rng)
            if payout > value:
                refund(state, holder, tid, config.reimbursement_factor)
                if config.selling_mechanism is Mechanism.AMM:
                    state.excess_tickets_held = max(0, state.excess_tickets_held - 1)
                break


def _draw_environment(state: MarketState, config: SimulationConfig, streams: RunStreams):
    return SlotEnvironment(
        slot=state.slot,
        available_mev=draw_mev(config.mev_scale, streams.env),
        volatility=draw_volatility(config.price_vola, streams.env),
    )


def _initial_allocation(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    streams: RunStreams,
    expected_vola: float | None,
    amm_b: float | None,
) -> SlotEnvironment:
    env = _draw_environment(state, config, streams)
    if config.selling_mechanism in AUCTION_MECHANISMS:
        if not is_jit(config):
            for ticket_id in sorted(state.tickets):
                ticket = state.tickets[ticket_id]
                if ticket.state is not TicketState.UNSOLD:
                    continue
                if _auction_sell(
                    state, holders, config, env, expected_vola, ticket, False, streams.market
                ) is None:
                    break
    elif config.selling_mechanism is Mechanism.EIP1559:
        state.quoted_price = config.initial_ticket_price
        unsold = sum(1 for t in state.tickets.values() if t.state is TicketState.UNSOLD)
        _quoted_round(state, holders, config, streams.market, None, max_sales=unsold)
    else:  # AMM
        _quoted_round(state, holders, config, streams.market, amm_b, max_sales=None)
        state.quoted_price = amm_price(state.excess_tickets_held, config.amm_adjust_factor, amm_b)
    return env


def step(
    state: MarketState,
    holders: dict[int, TicketHolder],
    config: SimulationConfig,
    streams: RunStreams,
    expected_vola: float | None,
    amm_b: float | None,
) -> SlotRecord:
    # 1. slot meta: advance time, draw the environment, expire, assign
    state.slot += 1
    state.epoch = state.slot // config.slots_per_epoch
    env = _draw_environment(state, config, streams)
    if config.expiry_period is not None:
        expired = expire_tickets(state, holders)
        if config.selling_mechanism is Mechanism.AMM and expired:
            state.excess_tickets_held = max(0, state.excess_tickets_held - expired)
    jit = is_jit(config)
    if not jit:
        target = state.slot + (config.enhanced_lookahead or 0)
        lottery_assign(state, streams.lottery, target, config.slots_per_epoch)

    # 2. primary market
    quoted_before: float | None = None
    primary_start = len(state.trade_log)
    _refund_round(state, holders, config, streams.market)
    if config.selling_mechanism in AUCTION_MECHANISMS:
        if jit:
            _jit_round(state, holders, config, env, expected_vola, streams.market)
        else:
            _fixed_supply_round(state, holders, config, env, expected_vola, streams.market)
    elif config.selling_mechanism is Mechanism.EIP1559:
        quoted_before = state.quoted_price
        _quoted_round(
            state, holders, config, streams.market, None, max_sales=config.eip1559_max_tickets
        )
    else:
        quoted_before = amm_price(state.excess_tickets_held, config.amm_adjust_factor, amm_b)
        _quoted_round(state, holders, config, streams.market, amm_b, max_sales=None)

    # 3. secondary market
    run_secondary_round(state, holders, env, config, expected_vola, streams.market)

    # 4. redemption and quote update
    redeemer_id = None
    ticket_id = state.pending_assignments.get(state.slot)
    if ticket_id is not None:
        rec = redeem(state, holders, ticket_id, env, expected_vola)
        redeemer_id = rec.seller_id
        if config.selling_mechanism is Mechanism.AMM:
            state.excess_tickets_held = max(0, state.excess_tickets_held - 1)
    elif state.slot not in state.unfilled_slots:
        state.unfilled_slots.append(state.slot)
    if config.selling_mechanism is Mechanism.EIP1559:
        state.quoted_price = eip1559_update_price(
            state.quoted_price, state.outstanding, config.max_tickets, config.eip1559_adjust_factor
        )
    elif config.selling_mechanism is Mechanism.AMM:
        state.quoted_price = amm_price(state.excess_tickets_held, config.amm_adjust_factor, amm_b)

    if state.slot % config.slots_per_epoch == 0 and state.outstanding != state.scan_outstanding():
        raise SimulationAbort(
            f"outstanding counter {state.outstanding} != scan {state.scan_outstanding()}"
            f" at slot {state.slot}"
        )

    executed = [
        rec.price for rec in state.trade_log[primary_start:] if rec.venue is Venue.PRIMARY
    ]
    return SlotRecord(
        slot=state.slot,
        quoted_price=quoted_before,
        clearing_price=sum(executed) / len(executed) if executed else None,
        mev_available=env.available_mev,
        volatility=env.volatility,
        redeemer_id=redeemer_id,
        outstanding=state.outstanding,
    )


def run(config: SimulationConfig, seed: int | None = None) -> RunResult:
    """Simulate one seeded run of `config.timesteps` slots and score it."""
    if seed is None:
        seed = config.seed
    state, holder_list, streams = new_market(config, seed)
    holders = {h.id: h for h in holder_list}
    expected_vola = expected_volatility(config.price_vola) if config.price_vola else None
    amm_b = None
    if config.selling_mechanism is Mechanism.AMM:
        amm_b = derive_b(config.initial_ticket_price, config.max_tickets)
    result = RunResult(config=config, seed=seed, state=state, holders=holders)
    _initial_allocation(state, holders, config, streams, expected_vola, amm_b)
    for _ in range(config.timesteps):
        result.series.append(step(state, holders, config, streams, expected_vola, amm_b))
    result.metrics = score(result)
    return result


def score(result: RunResult) -> RunMetrics:
    """Recompute the metric suite from a run's trade log and price series."""
    config, state = result.config, result.state
    primary_prices = [
        (rec.slot, rec.price) for rec in state.trade_log if rec.venue is Venue.PRIMARY
    ]
    if config.selling_mechanism in AUCTION_MECHANISMS:
        smoothness = [r.clearing_price for r in result.series if r.clearing_price is not None]
    else:
        smoothness = [r.quoted_price for r in result.series]
    return compute_run_metrics(
        trade_log=state.trade_log,
        primary_prices=primary_prices,
        smoothness_series=smoothness,
        slots_per_epoch=config.slots_per_epoch,
        protocol_revenue=state.total_mev_captured,
        total_mev_available=state.total_mev_available,
    )


def run_batch(config: SimulationConfig) -> BatchResult:
    """Run `config.runs` seeded repetitions and aggregate the metric suite."""
    results = [run(config, config.seed + i) for i in range(config.runs)]
    per_metric: dict[str, list[float]] = {}
    for res in results:
        for key, value in res.metrics.as_dict().items():
            per_metric.setdefault(key, []).append(float(value))
    mean = {k: statistics.fmean(v) for k, v in per_metric.items()}
    std = {k: statistics.pstdev(v) for k, v in per_metric.items()}
    return BatchResult(config=config, results=results, mean=mean, std=std)
