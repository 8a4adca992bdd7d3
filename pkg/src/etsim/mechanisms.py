"""Primary-market pricing: sealed-bid auctions, EIP-1559-style quoting, and
the exponential bonding-curve quote."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

EIP1559_PRICE_FLOOR = 1e-6  # multiplicative rule cannot recover from 0


@dataclass(frozen=True)
class AuctionOutcome:
    winner_id: int | None
    clearing_price: float
    all_bids: list[tuple[int, float]] = field(default_factory=list)


def _valid_bids(bids: list[tuple[int, float]]) -> list[tuple[int, float]]:
    return [(holder_id, bid) for holder_id, bid in bids if bid >= 0]


def _winner(bids: list[tuple[int, float]]) -> tuple[int, float]:
    # highest bid wins; ties go to the lowest holder id
    return max(bids, key=lambda hb: (hb[1], -hb[0]))


def run_fpa(bids: list[tuple[int, float]]) -> AuctionOutcome:
    """Highest bidder wins and pays their own bid."""
    valid = _valid_bids(bids)
    if not valid:
        return AuctionOutcome(winner_id=None, clearing_price=0.0, all_bids=valid)
    winner_id, winning_bid = _winner(valid)
    return AuctionOutcome(winner_id=winner_id, clearing_price=winning_bid, all_bids=valid)


def run_spa(bids: list[tuple[int, float]], reserve: float = 0.0) -> AuctionOutcome:
    """Highest bidder wins and pays max(second-highest bid, reserve)."""
    if reserve < 0:
        raise ConfigError("reserve", "must be >= 0")
    valid = [b for b in _valid_bids(bids) if b[1] >= reserve]
    if not valid:
        return AuctionOutcome(winner_id=None, clearing_price=0.0, all_bids=valid)
    winner_id, winning_bid = _winner(valid)
    rest = [bid for holder_id, bid in valid if holder_id != winner_id]
    second = max(rest) if rest else 0.0
    return AuctionOutcome(
        winner_id=winner_id,
        clearing_price=max(second, reserve),
        all_bids=valid,
    )


def eip1559_update_price(
    price: float, outstanding: int, target: int, adjust_factor: float
) -> float:
    """Once-per-slot multiplicative update on the relative supply delta."""
    if target < 1:
        raise ConfigError("max_tickets", "EIP-1559 target must be >= 1")
    if adjust_factor <= 0:
        raise ConfigError("eip1559_adjust_factor", "must be > 0")
    delta = (outstanding - target) / target
    return max(EIP1559_PRICE_FLOOR, price * (1.0 + delta / adjust_factor))


def amm_price(excess_tickets_held: int, adjust_quotient: float, b: float) -> float:
    """Quote for the next ticket: e^b * (e^((excess+1)/q) - e^(excess/q))."""
    if adjust_quotient <= 0:
        raise ConfigError("amm_adjust_factor", "must be > 0")
    if excess_tickets_held < 0:
        raise ConfigError("excess_tickets_held", "must be >= 0")
    q = adjust_quotient
    return math.exp(b) * (
        math.exp((excess_tickets_held + 1) / q) - math.exp(excess_tickets_held / q)
    )


def derive_b(target_price: float, target_amount: int) -> float:
    """Level constant for the bonding curve, ln(target_price) / target_amount."""
    if target_price <= 0:
        raise ConfigError("initial_ticket_price", "AMM target price must be > 0")
    if target_amount < 1:
        raise ConfigError("max_tickets", "AMM target amount must be >= 1")
    return math.log(target_price) / target_amount
