"""
Error metrics and per-method summaries.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import SimulationError


def mse_common(C_hat: np.ndarray, C: np.ndarray) -> float:
    """(pT)^{-1} ||C^ - C||_F^2."""
    C_hat = np.asarray(C_hat, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    if C_hat.shape != C.shape:
        raise SimulationError(f"shape mismatch: {C_hat.shape} vs {C.shape}")
    return float(np.mean((C_hat - C) ** 2))


@dataclass(frozen=True)
class MseSummary:
    mean: float
    sd: float
    n: int

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "MseSummary":
        values = np.asarray(values, dtype=np.float64)
        sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
        return cls(mean=float(values.mean()), sd=sd, n=int(values.size))


@dataclass(frozen=True)
class SelectionSummary:
    """Mean selected r with under- and over-estimation counts."""

    mean_r: float
    under: int
    over: int
    n: int

    @classmethod
    def from_values(cls, values: Sequence[int], true_r: int) -> "SelectionSummary":
        values = np.asarray(values, dtype=np.int64)
        return cls(
            mean_r=float(values.mean()),
            under=int(np.sum(values < true_r)),
            over=int(np.sum(values > true_r)),
            n=int(values.size),
        )

    def formatted(self, digits: int = 3) -> str:
        """a(b|c) layout of the selection tables."""
        return f"{self.mean_r:.{digits}f}({self.under}|{self.over})"
