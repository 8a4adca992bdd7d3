"""Shared domain types: tickets, holders, market state, config, trade ledger."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .errors import ConfigError

PROTOCOL = 0  # pseudo holder id for the protocol side of primary trades


class Mechanism(str, enum.Enum):
    FPA = "FPA"
    SPA = "SPA"
    EIP1559 = "EIP1559"
    AMM = "AMM"


class TicketState(str, enum.Enum):
    UNSOLD = "unsold"
    HELD = "held"
    ASSIGNED = "assigned"
    REDEEMED = "redeemed"
    EXPIRED = "expired"
    REFUNDED = "refunded"


TERMINAL_STATES = frozenset({TicketState.REDEEMED, TicketState.EXPIRED, TicketState.REFUNDED})


class Venue(str, enum.Enum):
    PRIMARY = "primary"
    SECONDARY = "secondary"
    REFUND = "refund"
    REDEMPTION = "redemption"


class Tier(str, enum.Enum):
    TOP = "top"
    MIDDLE = "middle"
    TAIL = "tail"


class Strategy(str, enum.Enum):
    """Bidding strategy ladder; which entries apply depends on the mechanism."""

    UNIFORM_AROUND_MEDIAN = "uniform_around_median"
    NAIVE_HISTORICAL = "naive_historical"
    CAPTURE_AWARE = "capture_aware"
    COMPETITION_ADJUSTED = "competition_adjusted"  # FPA only
    TRUTHFUL = "truthful"  # SPA only
    QUOTED_THRESHOLD = "quoted_threshold"  # EIP-1559 / AMM


@dataclass
class Ticket:
    id: int
    owner_id: int | None  # None while owned by the protocol
    state: TicketState
    issued_slot: int
    expiry_slot: int | None = None
    assigned_slot: int | None = None
    purchase_price: float = 0.0
    redeemed_slot: int | None = None
    redeemed_epoch: int | None = None
    assigned_epoch: int | None = None

    @property
    def terminal(self) -> bool:
        return self.state in TERMINAL_STATES

    def expired_at(self, slot: int) -> bool:
        return self.expiry_slot is not None and slot > self.expiry_slot


@dataclass
class TicketHolder:
    id: int
    tier: Tier
    available_funds: float
    mev_capture_rate: float
    aggressiveness: float
    vola_spec_factor: float
    tickets: list[int] = field(default_factory=list)
    accumulated_earnings: float = 0.0
    accumulated_costs: float = 0.0


@dataclass(frozen=True)
class SlotEnvironment:
    slot: int
    available_mev: float
    volatility: float


@dataclass(frozen=True)
class TradeRecord:
    slot: int
    venue: Venue
    ticket_id: int
    buyer_id: int | None
    seller_id: int | None
    price: float
    mev_available: float | None = None
    mev_extracted: float | None = None


@dataclass(frozen=True)
class SimulationConfig:
    """Every tunable of a run. `max_tickets` doubles as the target amount of
    outstanding tickets for the quoted-price mechanisms."""

    selling_mechanism: Mechanism = Mechanism.FPA
    max_tickets: int = 32
    initial_ticket_price: float = 0.05
    mev_scale: float = 0.05
    slots_per_epoch: int = 32
    number_of_ticket_holders: int = 10
    secondary_market: bool = False
    price_vola: tuple[float, float] | None = (0.0, 0.2)
    agent_bidding_strategy: Strategy = Strategy.CAPTURE_AWARE
    eip1559_max_tickets: int = 4
    eip1559_adjust_factor: float = 8.0
    amm_adjust_factor: float = 6.0
    expiry_period: int | None = None
    reimbursement_factor: float | None = None
    enhanced_lookahead: int | None = None
    timesteps: int = 1000
    runs: int = 10
    seed: int = 0
    preset: str | None = None

    def validate(self) -> None:
        if self.selling_mechanism not in Mechanism:
            raise ConfigError("selling_mechanism", f"unknown mechanism {self.selling_mechanism!r}")
        if self.max_tickets < 1:
            raise ConfigError("max_tickets", "must be >= 1")
        if self.mev_scale <= 0:
            raise ConfigError("mev_scale", "must be > 0")
        if self.slots_per_epoch < 1:
            raise ConfigError("slots_per_epoch", "must be >= 1")
        if self.number_of_ticket_holders < 1:
            raise ConfigError("number_of_ticket_holders", "must be >= 1")
        if self.initial_ticket_price < 0:
            raise ConfigError("initial_ticket_price", "must be >= 0")
        if self.price_vola is not None:
            if len(self.price_vola) != 2:
                raise ConfigError("price_vola", "must be a (mu, sigma) pair or null")
            if self.price_vola[1] < 0:
                raise ConfigError("price_vola", "sigma must be >= 0")
        if self.agent_bidding_strategy not in Strategy:
            raise ConfigError("agent_bidding_strategy", f"unknown strategy {self.agent_bidding_strategy!r}")
        if self.eip1559_max_tickets < 1:
            raise ConfigError("eip1559_max_tickets", "must be >= 1")
        if self.eip1559_adjust_factor <= 0:
            raise ConfigError("eip1559_adjust_factor", "must be > 0")
        if self.amm_adjust_factor <= 0:
            raise ConfigError("amm_adjust_factor", "must be > 0")
        if self.expiry_period is not None and self.expiry_period < 1:
            raise ConfigError("expiry_period", "must be >= 1 when set")
        if self.reimbursement_factor is not None and not 0.0 <= self.reimbursement_factor <= 1.0:
            raise ConfigError("reimbursement_factor", "must be in [0, 1] when set")
        if self.expiry_period is not None and self.reimbursement_factor is not None:
            raise ConfigError("expiry_period", "expiring tickets cannot also be refundable")
        if self.enhanced_lookahead is not None and self.enhanced_lookahead < 0:
            raise ConfigError("enhanced_lookahead", "must be >= 0 when set")
        if self.timesteps < 0:
            raise ConfigError("timesteps", "must be >= 0")
        if self.runs < 1:
            raise ConfigError("runs", "must be >= 1")

    def with_overrides(self, **kwargs) -> "SimulationConfig":
        cfg = replace(self, **kwargs)
        cfg.validate()
        return cfg


@dataclass
class MarketState:
    """Global mutable state of one run; confined to a single run."""

    slot: int = 0
    epoch: int = 0
    current_ticket_id: int = 1
    tickets: dict[int, Ticket] = field(default_factory=dict)
    outstanding: int = 0  # sold, non-terminal tickets (held + assigned)
    quoted_price: float = 0.0
    excess_tickets_held: int = 0
    total_mev_captured: float = 0.0
    total_mev_available: float = 0.0
    trade_log: list[TradeRecord] = field(default_factory=list)
    # slot -> ticket id scheduled for redemption at that slot
    pending_assignments: dict[int, int] = field(default_factory=dict)
    unfilled_slots: list[int] = field(default_factory=list)

    def mint_ticket(self, expiry_slot: int | None = None) -> Ticket:
        ticket = Ticket(
            id=self.current_ticket_id,
            owner_id=None,
            state=TicketState.UNSOLD,
            issued_slot=self.slot,
            expiry_slot=expiry_slot,
        )
        self.current_ticket_id += 1
        self.tickets[ticket.id] = ticket
        return ticket

    def scan_outstanding(self) -> int:
        """Full-scan check of the cached outstanding counter."""
        return sum(
            1
            for t in self.tickets.values()
            if t.owner_id is not None and not t.terminal
        )

    def record(self, rec: TradeRecord) -> None:
        self.trade_log.append(rec)


def new_market(config: SimulationConfig, seed: int):
    """Build the initial state for one run: seeded holders plus the unsold
    initial ticket batch. The slot-0 allocation round happens in engine.run."""
    config.validate()
    # local imports: agents/lifecycle depend on the types above
    from .agents import seed_holders
    from .engine import make_streams
    from .lifecycle import issue_initial

    streams = make_streams(seed)
    holders = seed_holders(config.number_of_ticket_holders, streams.seeding)
    state = MarketState()
    issue_initial(state, config)
    return state, holders, streams
