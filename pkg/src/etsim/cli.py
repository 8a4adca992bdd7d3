"""Command-line front end: run simulations, aggregate batches, recompute
metrics from exports, and evaluate the closed-form pricing calculators.

Exit codes: 0 success, 1 simulation abort, 2 configuration error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import io as io_mod
from .engine import run as run_simulation
from .engine import run_batch
from .errors import ConfigError, SimulationAbort, UndefinedMetric
from .presets import PRESETS
from .valuation import (
    PerpetualParams,
    min_tickets_for_capture,
    npv_all_rewards,
    perpetual_ticket_value,
    slot_discount_rate,
)

CONFIG_ERROR_EXIT = 2
RUNTIME_ERROR_EXIT = 1


def _fail(exc: Exception, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


_config_options = [
    click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None),
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="JSON config file; overrides the preset field-by-field."),
    click.option("--seed", type=int, default=None),
    click.option("--timesteps", type=int, default=None),
    click.option("--runs", type=int, default=None),
]


def config_options(fn):
    for opt in reversed(_config_options):
        fn = opt(fn)
    return fn


def _build_config(preset, config_path, seed, timesteps, runs):
    if preset is None and config_path is None:
        raise ConfigError("preset", "provide --preset and/or --config")
    return io_mod.load_config(
        source=config_path, preset=preset, seed=seed, timesteps=timesteps, runs=runs
    )


@click.group()
def main() -> None:
    """Agent-based simulator for execution-ticket markets."""


@main.command("run")
@config_options
@click.option("--out", "out_dir", type=click.Path(), required=True,
              help="Directory for trades.csv, slots.csv and summary.json.")
def run_cmd(preset, config_path, seed, timesteps, runs, out_dir) -> None:
    """Simulate a single seeded run and export it."""
    try:
        config = _build_config(preset, config_path, seed, timesteps, runs)
    except ConfigError as exc:
        _fail(exc, CONFIG_ERROR_EXIT)
    try:
        result = run_simulation(config)
        paths = io_mod.export_run(result, out_dir)
    except (SimulationAbort, UndefinedMetric) as exc:
        _fail(exc, RUNTIME_ERROR_EXIT)
    click.echo(json.dumps({k: v for k, v in result.metrics.as_dict().items()}, sort_keys=True))
    click.echo(f"export written to {paths['summary'].parent}", err=True)


@main.command("batch")
@config_options
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Optional JSON file for the aggregate; stdout otherwise.")
def batch_cmd(preset, config_path, seed, timesteps, runs, out_path) -> None:
    """Run the configured number of seeded repetitions and aggregate."""
    try:
        config = _build_config(preset, config_path, seed, timesteps, runs)
    except ConfigError as exc:
        _fail(exc, CONFIG_ERROR_EXIT)
    try:
        batch = run_batch(config)
    except (SimulationAbort, UndefinedMetric) as exc:
        _fail(exc, RUNTIME_ERROR_EXIT)
    payload = json.dumps(
        {
            "config": io_mod.config_to_dict(config),
            "runs": config.runs,
            "mean": {k: round(v, 9) for k, v in batch.mean.items()},
            "std": {k: round(v, 9) for k, v in batch.std.items()},
        },
        indent=2,
        sort_keys=True,
    )
    if out_path is not None:
        Path(out_path).write_text(payload + "\n")
        click.echo(f"aggregate written to {out_path}", err=True)
    else:
        click.echo(payload)


@main.command("metrics")
@click.argument("export_dir", type=click.Path(exists=True, file_okay=False))
def metrics_cmd(export_dir) -> None:
    """Recompute the metric suite from a run export."""
    try:
        metrics = io_mod.metrics_from_export(export_dir)
    except ConfigError as exc:
        _fail(exc, CONFIG_ERROR_EXIT)
    except (SimulationAbort, UndefinedMetric) as exc:
        _fail(exc, RUNTIME_ERROR_EXIT)
    click.echo(json.dumps(metrics.as_dict(), indent=2, sort_keys=True))


@main.command("value")
@click.option("--mu-r", type=float, required=True, help="Expected per-slot reward.")
@click.option("--cost", type=float, default=0.0, help="Per-period carry cost.")
@click.option("--annual-rate", type=float, default=0.055)
@click.option("--slots-per-year", type=int, default=2628000)
@click.option("--tickets", "n", type=int, default=1, help="Outstanding tickets.")
@click.option("--capture-fraction", type=float, default=None,
              help="If set, also report the supply needed to capture this NPV fraction.")
def value_cmd(mu_r, cost, annual_rate, slots_per_year, n, capture_fraction) -> None:
    """Closed-form non-expiring ticket valuation and supply sizing."""
    try:
        d = slot_discount_rate(annual_rate, slots_per_year)
        params = PerpetualParams(mu_r=mu_r, c=cost, d=d, n=n)
        out = {
            "slot_discount_rate": d,
            "ticket_value": perpetual_ticket_value(params),
            "npv_all_rewards": npv_all_rewards(mu_r, d),
        }
        if capture_fraction is not None:
            out["min_tickets"] = min_tickets_for_capture(d, 1.0 - capture_fraction)
        click.echo(json.dumps(out, indent=2, sort_keys=True))
    except ConfigError as exc:
        _fail(exc, CONFIG_ERROR_EXIT)


if __name__ == "__main__":
    main()
