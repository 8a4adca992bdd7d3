"""Named benchmark configurations covering the four mechanisms and the
optional market features (expiry, resale, lookahead, refunds)."""

from __future__ import annotations

from .errors import ConfigError
from .model import Mechanism, SimulationConfig, Strategy

_COMMON = dict(
    mev_scale=0.05,
    slots_per_epoch=32,
    number_of_ticket_holders=10,
    price_vola=(0.0, 0.2),
    timesteps=1000,
    runs=10,
)

PRESETS: dict[str, SimulationConfig] = {
    # Fixed small supply, expiring tickets, winner pays bid.
    "simple-fpa": SimulationConfig(
        selling_mechanism=Mechanism.FPA,
        max_tickets=32,
        expiry_period=64,
        secondary_market=False,
        agent_bidding_strategy=Strategy.CAPTURE_AWARE,
        **_COMMON,
    ),
    # One ticket sold, assigned and redeemed per slot; bidders see the slot.
    "jit-spa": SimulationConfig(
        selling_mechanism=Mechanism.SPA,
        max_tickets=1,
        expiry_period=1,
        secondary_market=True,
        agent_bidding_strategy=Strategy.TRUTHFUL,
        **_COMMON,
    ),
    # Elastic supply at a once-per-slot adjusted quote.
    "flexible-1559": SimulationConfig(
        selling_mechanism=Mechanism.EIP1559,
        max_tickets=40,
        initial_ticket_price=0.01,
        eip1559_max_tickets=4,
        eip1559_adjust_factor=8.0,
        secondary_market=True,
        enhanced_lookahead=32,
        agent_bidding_strategy=Strategy.QUOTED_THRESHOLD,
        **_COMMON,
    ),
    # Large fixed supply, truthful second-price bidding, epoch lookahead.
    "fixed-spa": SimulationConfig(
        selling_mechanism=Mechanism.SPA,
        max_tickets=1024,
        secondary_market=False,
        enhanced_lookahead=32,
        agent_bidding_strategy=Strategy.TRUTHFUL,
        **_COMMON,
    ),
    # Bonding-curve quotes with discounted hand-backs to the protocol.
    "flexible-amm": SimulationConfig(
        selling_mechanism=Mechanism.AMM,
        max_tickets=1,
        initial_ticket_price=0.05,
        amm_adjust_factor=25.0,
        reimbursement_factor=0.2,
        secondary_market=False,
        agent_bidding_strategy=Strategy.QUOTED_THRESHOLD,
        **_COMMON,
    ),
    # Large fixed supply with an open resale market.
    "fixed-fpa-resale": SimulationConfig(
        selling_mechanism=Mechanism.FPA,
        max_tickets=1024,
        secondary_market=True,
        agent_bidding_strategy=Strategy.CAPTURE_AWARE,
        **_COMMON,
    ),
}


def get_preset(name: str) -> SimulationConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError("preset", f"unknown preset {name!r}; known presets: {known}") from None
    return base.with_overrides(preset=name)
