"""
Exception hierarchy for NetFactor.

Every rejected input raises a subclass of NetFactorError so the CLI can
report it on one line and exit non-zero.
"""

from typing import Optional


class NetFactorError(ValueError):
    """Base class for all NetFactor errors."""


class NetworkError(NetFactorError):
    """Invalid adjacency input (asymmetric, self-loop, out of range)."""


class EstimationError(NetFactorError):
    """Invalid estimator input (bad rank, non-finite panel, bad operator)."""


class TuningError(NetFactorError):
    """Invalid tuning request (empty grid, bad k_max)."""


class SimulationError(NetFactorError):
    """Invalid simulation configuration or degenerate generated design."""


class PanelError(NetFactorError):
    """Invalid panel for standardization or rolling validation."""


class DataFormatError(NetFactorError):
    """Malformed input file, with the location of the first offending cell."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.path = path
        self.line = line
        self.column = column

        location = []
        if path:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")

        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ReportError(NetFactorError):
    """Failure while writing an output file."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ConfigError(NetFactorError):
    """Invalid command-line configuration."""
