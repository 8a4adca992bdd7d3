"""Closed-form ticket pricing and supply sizing calculators."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class PerpetualParams:
    mu_r: float  # expected per-slot reward
    c: float = 0.0  # per-period carry cost
    d: float = 0.0  # per-slot discount rate
    n: int = 1  # outstanding tickets

    def __post_init__(self):
        if self.d < 0:
            raise ConfigError("d", "discount rate must be >= 0")
        if self.n < 1:
            raise ConfigError("n", "ticket count must be >= 1")
        if self.mu_r < 0:
            raise ConfigError("mu_r", "expected reward must be >= 0")


def perpetual_ticket_value(p: PerpetualParams) -> float:
    """Value of an unallocated non-expiring ticket, (mu_r - c) / (d*n + 1).

    Negative when carry costs exceed expected rewards; reported as-is.
    """
    return (p.mu_r - p.c) / (p.d * p.n + 1.0)


def slot_discount_rate(annual_rate: float, slots_per_year: int) -> float:
    """Compound-equivalent per-slot rate, (1 + annual)^(1/slots) - 1."""
    if annual_rate <= -1:
        raise ConfigError("annual_rate", "must be > -1")
    if slots_per_year < 1:
        raise ConfigError("slots_per_year", "must be >= 1")
    return (1.0 + annual_rate) ** (1.0 / slots_per_year) - 1.0


def min_tickets_for_capture(d: float, p_var: float) -> int:
    """Smallest ticket count n with (1 - p) / (d * p) <= n, i.e. the supply
    needed so the ticket market cap captures a (1 - p_var) fraction of the
    net present value of all future rewards."""
    if not 0.0 < p_var < 1.0:
        raise ConfigError("p_var", "must be in (0, 1)")
    if d <= 0:
        raise ConfigError("d", "must be > 0")
    return math.ceil((1.0 - p_var) / (d * p_var))


def npv_all_rewards(mu_r: float, d: float) -> float:
    """Present value of all future per-slot rewards, mu_r / d."""
    if d == 0:
        raise ConfigError("d", "zero discount rate gives an infinite value")
    return mu_r / d


def allocated_probability_share(lookahead_slots: int, n: int) -> float:
    """Fraction of circulating tickets already allocated, capped at 1."""
    if n < 1:
        raise ConfigError("n", "must be >= 1")
    if lookahead_slots < 0:
        raise ConfigError("lookahead_slots", "must be >= 0")
    return min(1.0, lookahead_slots / n)
