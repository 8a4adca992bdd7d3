"""Builder population seeding and per-agent valuations and bids."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError
from .model import Strategy, TicketHolder, Tier


def seed_holders(n: int, rng: np.random.Generator) -> list[TicketHolder]:
    """Seed `n` holders split 20/40/40 into top/middle/tail tiers.

    Ids are 1-indexed so the tier boundaries land exactly on the 0.2/0.6
    fractions for the usual population sizes.
    """
    if n < 1:
        raise ConfigError("number_of_ticket_holders", "must be >= 1")
    holders = []
    for holder_id in range(1, n + 1):
        if holder_id <= n * 0.2:
            tier = Tier.TOP
            funds = rng.uniform(400, 1000)
            capture = rng.uniform(0.85, 0.95)
        elif holder_id <= n * 0.6:
            tier = Tier.MIDDLE
            funds = rng.uniform(300, 700)
            capture = rng.uniform(0.75, 0.85)
        else:
            tier = Tier.TAIL
            funds = rng.uniform(200, 500)
            capture = rng.uniform(0.6, 0.75)
        aggressiveness = rng.normal(0.15, 0.02)
        vola_spec = rng.normal(1.0, 0.5)
        if vola_spec <= 0:
            vola_spec = 0.1
        holders.append(
            TicketHolder(
                id=holder_id,
                tier=tier,
                available_funds=float(funds),
                mev_capture_rate=float(capture),
                aggressiveness=float(aggressiveness),
                vola_spec_factor=float(vola_spec),
            )
        )
    return holders


def strategy_estimate(
    strategy: Strategy, mev_scale: float, rng: np.random.Generator | None
) -> tuple[float, bool]:
    """Per-slot MEV estimate implied by a bidding strategy.

    Returns (estimate, use_capture). Holders treat the historic scale as an
    unbiased baseline; only the crudest strategies deviate from it.
    """
    if strategy is Strategy.UNIFORM_AROUND_MEDIAN:
        median = mev_scale * math.log(2)  # exponential median
        if rng is None:
            return median, False
        return float(rng.uniform(0.5 * median, 1.5 * median)), False
    if strategy is Strategy.NAIVE_HISTORICAL:
        return mev_scale, False
    # capture_aware, competition_adjusted, truthful, quoted_threshold
    return mev_scale, True


def intrinsic_valuation(
    holder: TicketHolder,
    mev_scale_estimate: float,
    expiry_discount: float = 1.0,
    vola_adjustment: float = 1.0,
    use_capture: bool = True,
) -> float:
    """Value a ticket as estimate x capture x (1 - margin) x discounts."""
    capture = holder.mev_capture_rate if use_capture else 1.0
    return (
        mev_scale_estimate
        * capture
        * (1.0 - holder.aggressiveness)
        * expiry_discount
        * vola_adjustment
    )


def bid_fpa(
    holder: TicketHolder,
    valuation: float,
    strategy: Strategy,
    n_bidders: int,
) -> float:
    """First-price bid, shaded by (n-1)/n only for the competition-adjusted
    strategy; always capped by the holder's funds."""
    if strategy is Strategy.COMPETITION_ADJUSTED:
        n = max(2, n_bidders)
        bid = (n - 1) / n * valuation
    else:
        bid = valuation
    return min(bid, holder.available_funds)


def bid_spa(holder: TicketHolder, valuation: float) -> float:
    """Truthful second-price bid, capped by funds."""
    return min(valuation, holder.available_funds)


def quoted_decision(holder: TicketHolder, quoted_price: float, valuation: float) -> bool:
    """Buy at a quoted price iff it undercuts the valuation and is affordable."""
    return quoted_price < valuation and quoted_price <= holder.available_funds


def volatility_adjustment(
    vola_slot: float, expected_vola: float, vola_spec_factor: float
) -> float:
    """Specialization adjustment 1 + (vola - expected) * factor, floored at 0."""
    return max(0.0, 1.0 + (vola_slot - expected_vola) * vola_spec_factor)
