"""
Factor-number selection: eigenvalue ratio and the one-step-further variant.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np

from ..errors import TuningError
from ..estimation import PenaltyKind, ShrinkageOperator, as_panel, identity_operator
from ..estimation.estimator import gram_eigen
from ..graph import LaplacianSpectrum
from .criterion import TuningGrids, TuningResult, tune

logger = logging.getLogger(__name__)

SelectionMethod = Literal["er", "one_step_lap", "one_step_proj"]

# lambda_{k+1} below this share of lambda_1 makes the ratio infinite
RATIO_FLOOR = 1e-12


@dataclass(frozen=True)
class FactorCountResult:
    """Selected factor number with the ratio profile behind it."""

    r_hat: int
    ratios: np.ndarray
    method: SelectionMethod
    eigvals: np.ndarray
    r_history: tuple[int, ...] = ()
    converged: bool = True
    tuning: Optional[TuningResult] = field(default=None, repr=False)


def eigenvalue_ratios(eigvals: np.ndarray, k_max: int) -> np.ndarray:
    """
    lambda_k / lambda_{k+1} for k = 1..k_max, eigenvalues sorted descending.

    The floor is relative to lambda_1, so ratios do not depend on the scale
    of the panel; an all-zero spectrum gives infinite ratios throughout.
    """
    eigvals = np.asarray(eigvals, dtype=np.float64)
    if k_max < 1 or k_max + 1 > eigvals.shape[0]:
        raise TuningError(f"k_max must lie in [1, {eigvals.shape[0] - 1}], got {k_max}")

    floor = RATIO_FLOOR * eigvals[0]
    ratios = np.empty(k_max)
    for k in range(k_max):
        denominator = eigvals[k + 1]
        ratios[k] = np.inf if denominator <= floor else eigvals[k] / denominator
    return ratios


def select_r_er(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    op: Optional[ShrinkageOperator] = None,
    k_max: int = 10,
    x_rotated: Optional[np.ndarray] = None,
) -> FactorCountResult:
    """
    Eigenvalue-ratio estimate of r on (pT)^{-1} X D^{-1} X^T.

    With op omitted (or the identity) this is the plain ER estimator.
    Ties go to the smallest k.
    """
    X = as_panel(X)
    T, p = X.shape
    if k_max < 1 or k_max + 1 > min(T, p):
        raise TuningError(f"k_max must satisfy 1 <= k_max < min(T, p) = {min(T, p)}, got {k_max}")

    op = op or identity_operator(spec)
    if x_rotated is None:
        x_rotated = X @ spec.eigvecs

    values, _ = gram_eigen(x_rotated, op.weights)
    eigvals = np.clip(values / (p * T), 0.0, None)
    ratios = eigenvalue_ratios(eigvals, k_max)
    r_hat = int(np.argmax(ratios)) + 1

    method: SelectionMethod = "er"
    if op.kind == PenaltyKind.LAPLACIAN:
        method = "one_step_lap"
    elif op.kind == PenaltyKind.PROJECTION:
        method = "one_step_proj"

    return FactorCountResult(
        r_hat=r_hat,
        ratios=ratios,
        method=method,
        eigvals=eigvals,
        r_history=(r_hat,),
    )


def select_r_one_step(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    kind: Union[PenaltyKind, str],
    k_max: int = 10,
    grids: Optional[TuningGrids] = None,
    max_steps: int = 1,
) -> FactorCountResult:
    """
    One step further: ER on the shrunk Gram matrix after C_L tuning.

    The pilot r comes from plain ER. Each step tunes at the current r and
    re-runs ER with the tuned operator; with max_steps > 1 the loop stops
    early once r repeats.

    Returns:
        FactorCountResult of the last stage, with the r history and whether
        the last step reproduced its input r
    """
    kind = PenaltyKind(kind)
    if kind == PenaltyKind.NONE:
        raise TuningError("one-step selection requires a laplacian or projection penalty")
    if max_steps < 1:
        raise TuningError(f"max_steps must be >= 1, got {max_steps}")

    X = as_panel(X)
    x_rotated = X @ spec.eigvecs

    pilot = select_r_er(X, spec, k_max=k_max, x_rotated=x_rotated)
    history = [pilot.r_hat]
    current = pilot.r_hat
    converged = False
    result = pilot
    tuning = None

    for _ in range(max_steps):
        tuning = tune(X, spec, kind, current, grids, x_rotated=x_rotated)
        result = select_r_er(X, spec, tuning.operator, k_max=k_max, x_rotated=x_rotated)
        history.append(result.r_hat)
        if result.r_hat == current:
            converged = True
            break
        current = result.r_hat

    logger.debug(f"One-step {kind.value}: r history {history}, converged={converged}")

    return FactorCountResult(
        r_hat=result.r_hat,
        ratios=result.ratios,
        method="one_step_lap" if kind == PenaltyKind.LAPLACIAN else "one_step_proj",
        eigvals=result.eigvals,
        r_history=tuple(history),
        converged=converged,
        tuning=tuning,
    )
