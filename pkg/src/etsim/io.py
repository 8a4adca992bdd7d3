"""Serialization boundary: run exports (trades.csv, slots.csv, summary.json),
config loading, and metric recomputation from a previously written export.

Exports are byte-stable: fixed 9-decimal floats, LF line endings, sorted JSON
keys, so downstream consumers can diff and cache them.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import ConfigError
from .metrics import RunMetrics, compute_run_metrics
from .model import Mechanism, SimulationConfig, Strategy, TradeRecord, Venue

TRADES_COLUMNS = [
    "slot",
    "venue",
    "ticket_id",
    "buyer_id",
    "seller_id",
    "price",
    "mev_available",
    "mev_extracted",
]
SLOTS_COLUMNS = [
    "slot",
    "quoted_price",
    "clearing_price",
    "mev_available",
    "volatility",
    "redeemer_id",
    "outstanding",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9f}"
    return str(value)


def config_to_dict(config: SimulationConfig) -> dict:
    out = {}
    for key, value in vars(config).items():
        if isinstance(value, (Mechanism, Strategy)):
            value = value.value
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def config_from_dict(data: dict) -> SimulationConfig:
    known = set(vars(SimulationConfig()).keys())
    unknown = set(data) - known
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config field")
    kwargs = dict(data)
    if "selling_mechanism" in kwargs:
        try:
            kwargs["selling_mechanism"] = Mechanism(kwargs["selling_mechanism"])
        except ValueError:
            raise ConfigError(
                "selling_mechanism", f"unknown mechanism {kwargs['selling_mechanism']!r}"
            ) from None
    if "agent_bidding_strategy" in kwargs:
        try:
            kwargs["agent_bidding_strategy"] = Strategy(kwargs["agent_bidding_strategy"])
        except ValueError:
            raise ConfigError(
                "agent_bidding_strategy",
                f"unknown strategy {kwargs['agent_bidding_strategy']!r}",
            ) from None
    if kwargs.get("price_vola") is not None:
        pv = kwargs["price_vola"]
        if not isinstance(pv, (list, tuple)) or len(pv) != 2:
            raise ConfigError("price_vola", "must be a [mu, sigma] pair or null")
        kwargs["price_vola"] = (float(pv[0]), float(pv[1]))
    config = SimulationConfig(**kwargs)
    config.validate()
    return config


def load_config(source: str | Path | None = None, preset: str | None = None, **overrides) -> SimulationConfig:
    """Build a config from a preset name and/or a JSON file, then apply
    keyword overrides. Overrides win over the file, the file over the preset."""
    from .presets import get_preset

    data: dict = {}
    if preset is not None:
        data.update(config_to_dict(get_preset(preset)))
    if source is not None:
        path = Path(source)
        if not path.exists():
            raise ConfigError("config", f"no such config file: {path}")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config", "config file must hold a JSON object")
        data.update(loaded)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(data)


def export_run(result, out_dir: str | Path) -> dict[str, Path]:
    """Write trades.csv, slots.csv and summary.json for one finished run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trades_path = out / "trades.csv"
    with trades_path.open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRADES_COLUMNS)
        for rec in result.state.trade_log:
            writer.writerow(
                [
                    rec.slot,
                    rec.venue.value,
                    rec.ticket_id,
                    _fmt(rec.buyer_id),
                    _fmt(rec.seller_id),
                    _fmt(rec.price),
                    _fmt(rec.mev_available),
                    _fmt(rec.mev_extracted),
                ]
            )
    slots_path = out / "slots.csv"
    with slots_path.open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SLOTS_COLUMNS)
        for rec in result.series:
            writer.writerow(
                [
                    rec.slot,
                    _fmt(rec.quoted_price),
                    _fmt(rec.clearing_price),
                    _fmt(rec.mev_available),
                    _fmt(rec.volatility),
                    _fmt(rec.redeemer_id),
                    rec.outstanding,
                ]
            )
    summary_path = out / "summary.json"
    summary = {
        "config": config_to_dict(result.config),
        "seed": result.seed,
        "metrics": {k: round(v, 9) for k, v in result.metrics.as_dict().items()},
        "protocol_revenue": round(result.state.total_mev_captured, 9),
        "total_mev_available": round(result.state.total_mev_available, 9),
        "unfilled_slots": len(result.state.unfilled_slots),
        "holders": [
            {
                "id": h.id,
                "tier": h.tier.value,
                "available_funds": round(h.available_funds, 9),
                "mev_capture_rate": round(h.mev_capture_rate, 9),
                "accumulated_earnings": round(h.accumulated_earnings, 9),
                "accumulated_costs": round(h.accumulated_costs, 9),
            }
            for h in sorted(result.holders.values(), key=lambda h: h.id)
        ],
    }
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return {"trades": trades_path, "slots": slots_path, "summary": summary_path}


def _opt_int(text: str) -> int | None:
    return int(text) if text else None


def _opt_float(text: str) -> float | None:
    return float(text) if text else None


def load_trades(path: str | Path) -> list[TradeRecord]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in TRADES_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ConfigError("trades", f"missing columns: {', '.join(missing)}")
        return [
            TradeRecord(
                slot=int(row["slot"]),
                venue=Venue(row["venue"]),
                ticket_id=int(row["ticket_id"]),
                buyer_id=_opt_int(row["buyer_id"]),
                seller_id=_opt_int(row["seller_id"]),
                price=float(row["price"]),
                mev_available=_opt_float(row["mev_available"]),
                mev_extracted=_opt_float(row["mev_extracted"]),
            )
            for row in reader
        ]


def load_slots(path: str | Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in SLOTS_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ConfigError("slots", f"missing columns: {', '.join(missing)}")
        return [
            {
                "slot": int(row["slot"]),
                "quoted_price": _opt_float(row["quoted_price"]),
                "clearing_price": _opt_float(row["clearing_price"]),
                "mev_available": float(row["mev_available"]),
                "volatility": float(row["volatility"]),
                "redeemer_id": _opt_int(row["redeemer_id"]),
                "outstanding": int(row["outstanding"]),
            }
            for row in reader
        ]


def metrics_from_export(export_dir: str | Path) -> RunMetrics:
    """Recompute the metric suite from a written export; the result must
    match the summary.json metrics of the run that produced it."""
    export = Path(export_dir)
    trades = load_trades(export / "trades.csv")
    slots = load_slots(export / "slots.csv")
    summary = json.loads((export / "summary.json").read_text())
    config = config_from_dict(summary["config"])
    primary = [(r.slot, r.price) for r in trades if r.venue is Venue.PRIMARY]
    if config.selling_mechanism in (Mechanism.FPA, Mechanism.SPA):
        smoothness = [r["clearing_price"] for r in slots if r["clearing_price"] is not None]
    else:
        smoothness = [r["quoted_price"] for r in slots]
    revenue = sum(r.price for r in trades if r.venue is Venue.PRIMARY) - sum(
        r.price for r in trades if r.venue is Venue.REFUND
    )
    total_available = sum(r.mev_available or 0.0 for r in trades if r.venue is Venue.REDEMPTION)
    return compute_run_metrics(
        trade_log=trades,
        primary_prices=primary,
        smoothness_series=smoothness,
        slots_per_epoch=config.slots_per_epoch,
        protocol_revenue=revenue,
        total_mev_available=total_available,
    )
