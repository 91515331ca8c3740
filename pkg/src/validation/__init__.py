"""
Validation module for rolling out-of-sample evaluation of real panels.
"""

from .recursive import (
    ValidationReport,
    ValidationStep,
    align_columns,
    recursive_validate,
    standardize,
)

__all__ = [
    "ValidationReport",
    "ValidationStep",
    "align_columns",
    "recursive_validate",
    "standardize",
]
