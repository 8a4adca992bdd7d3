"""Error types shared across the simulator."""


class ConfigError(ValueError):
    """A configuration field is missing, mistyped, or inconsistent."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


class SimulationAbort(RuntimeError):
    """An internal invariant was violated mid-run; the run is unusable."""


class UndefinedMetric(ValueError):
    """The requested metric is undefined for the given data (e.g. no trades)."""
