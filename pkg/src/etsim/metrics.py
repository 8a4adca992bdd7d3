"""Objective metrics over completed runs: concentration, MEV share, and
price-behavior measures. All functions are pure over the trade log / price
series so results can be recomputed from serialized exports."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UndefinedMetric
from .model import TradeRecord, Venue


@dataclass(frozen=True)
class RunMetrics:
    largest_market_share: float
    nakamoto: int
    hhi: float
    mev_share_primary: float
    mev_share_combined: float
    gk_measure: float
    delta_variance: float

    def as_dict(self) -> dict[str, float]:
        return {
            "largest_market_share": self.largest_market_share,
            "nakamoto": self.nakamoto,
            "hhi": self.hhi,
            "mev_share_primary": self.mev_share_primary,
            "mev_share_combined": self.mev_share_combined,
            "gk_measure": self.gk_measure,
            "delta_variance": self.delta_variance,
        }


def market_shares(trade_log: list[TradeRecord]) -> dict[int, float]:
    """Share of redeemed tickets per holder (owner at redemption time)."""
    counts: dict[int, int] = {}
    for rec in trade_log:
        if rec.venue is Venue.REDEMPTION:
            counts[rec.seller_id] = counts.get(rec.seller_id, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise UndefinedMetric("no redeemed tickets")
    return {holder: c / total for holder, c in counts.items()}


def nakamoto(shares: dict[int, float]) -> int:
    """Smallest number of holders whose combined share reaches 51%."""
    acc = 0.0
    for k, share in enumerate(sorted(shares.values(), reverse=True), start=1):
        acc += share
        if acc >= 0.51:
            return k
    return len(shares)


def hhi(shares: dict[int, float]) -> float:
    """Sum of squared market shares on the 10000 scale."""
    return 10000.0 * sum(a * a for a in shares.values())


def mev_share(protocol_revenue: float, total_mev_available: float) -> float:
    """Protocol revenue over total available MEV; may exceed 1 on overpaying."""
    if total_mev_available <= 0:
        raise UndefinedMetric("no MEV available")
    return max(0.0, protocol_revenue / total_mev_available)


GK_CLOSE_WEIGHT = 2.0 * math.log(2.0) - 1.0


def gk_measure(price_series: list[tuple[int, float]], slots_per_epoch: int) -> float:
    """Garman-Klass OHLC volatility of executed primary prices per epoch,
    averaged over epochs that saw at least one trade.

    `price_series` is (slot, price) per executed primary trade, in trade order.
    """
    epochs: dict[int, list[float]] = {}
    for slot, price in price_series:
        if price > 0:
            epochs.setdefault(slot // slots_per_epoch, []).append(price)
    values = []
    for _, prices in sorted(epochs.items()):
        o, c = prices[0], prices[-1]
        h, low = max(prices), min(prices)
        values.append(
            0.5 * math.log(h / low) ** 2 - GK_CLOSE_WEIGHT * math.log(c / o) ** 2
        )
    if not values:
        raise UndefinedMetric("no epoch with executed trades")
    return sum(values) / len(values)


def delta_variance(price_series: list[float]) -> float:
    """Population variance of consecutive price deltas."""
    if len(price_series) < 3:
        raise UndefinedMetric("need at least 3 prices")
    deltas = [b - a for a, b in zip(price_series, price_series[1:])]
    mean = sum(deltas) / len(deltas)
    return sum((d - mean) ** 2 for d in deltas) / len(deltas)


def combined_capture(trade_log: list[TradeRecord]) -> float:
    """Primary revenue plus resale premia over cost basis, net of refunds.

    The supplementary 'combined' capture treats a secondary sale's premium
    over the ticket's last purchase price as additional extracted value.
    """
    revenue = 0.0
    basis: dict[int, float] = {}
    for rec in trade_log:
        if rec.venue is Venue.PRIMARY:
            revenue += rec.price
            basis[rec.ticket_id] = rec.price
        elif rec.venue is Venue.REFUND:
            revenue -= rec.price
            basis.pop(rec.ticket_id, None)
        elif rec.venue is Venue.SECONDARY:
            revenue += rec.price - basis.get(rec.ticket_id, rec.price)
            basis[rec.ticket_id] = rec.price
    return revenue


def compute_run_metrics(
    trade_log: list[TradeRecord],
    primary_prices: list[tuple[int, float]],
    smoothness_series: list[float],
    slots_per_epoch: int,
    protocol_revenue: float,
    total_mev_available: float,
) -> RunMetrics:
    shares = market_shares(trade_log)
    return RunMetrics(
        largest_market_share=max(shares.values()),
        nakamoto=nakamoto(shares),
        hhi=hhi(shares),
        mev_share_primary=mev_share(protocol_revenue, total_mev_available),
        mev_share_combined=mev_share(combined_capture(trade_log), total_mev_available),
        gk_measure=gk_measure(primary_prices, slots_per_epoch),
        delta_variance=delta_variance(smoothness_series),
    )
