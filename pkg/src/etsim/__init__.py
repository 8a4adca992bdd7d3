"""Agent-based simulator for execution-ticket markets."""

from .engine import (
    BatchResult,
    RunResult,
    RunStreams,
    SlotRecord,
    make_streams,
    run,
    run_batch,
    score,
    step,
)
from .errors import ConfigError, SimulationAbort, UndefinedMetric
from .io import export_run, load_config, metrics_from_export
from .metrics import RunMetrics, compute_run_metrics
from .model import (
    MarketState,
    Mechanism,
    SimulationConfig,
    SlotEnvironment,
    Strategy,
    Ticket,
    TicketHolder,
    TicketState,
    Tier,
    TradeRecord,
    Venue,
    new_market,
)
from .presets import PRESETS, get_preset

__version__ = "1.0.0"

__all__ = [
    "BatchResult",
    "ConfigError",
    "MarketState",
    "Mechanism",
    "PRESETS",
    "RunMetrics",
    "RunResult",
    "RunStreams",
    "SimulationAbort",
    "SimulationConfig",
    "SlotEnvironment",
    "SlotRecord",
    "Strategy",
    "Ticket",
    "TicketHolder",
    "TicketState",
    "Tier",
    "TradeRecord",
    "UndefinedMetric",
    "Venue",
    "compute_run_metrics",
    "export_run",
    "get_preset",
    "load_config",
    "make_streams",
    "metrics_from_export",
    "new_market",
    "run",
    "run_batch",
    "score",
    "step",
]
