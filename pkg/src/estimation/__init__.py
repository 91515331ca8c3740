"""
Estimation module for PCA and network-penalized PCA.
"""

from .estimator import (
    FactorEstimate,
    as_panel,
    common_components,
    explained_variability,
    fit,
    penalized_objective,
)
from .shrinkage import (
    METHOD_KINDS,
    PenaltyKind,
    ShrinkageOperator,
    identity_operator,
    kind_for_method,
    shrink_weights,
)

__all__ = [
    "FactorEstimate",
    "as_panel",
    "common_components",
    "explained_variability",
    "fit",
    "penalized_objective",
    "METHOD_KINDS",
    "PenaltyKind",
    "ShrinkageOperator",
    "identity_operator",
    "kind_for_method",
    "shrink_weights",
]
