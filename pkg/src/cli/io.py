"""
CSV ingestion of panels and adjacency files, and matrix output.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..errors import DataFormatError, ReportError
from ..graph import AdjacencyFormat, Network, build_network

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


@dataclass(frozen=True)
class PanelData:
    """T x p observations, rows are periods and columns are series."""

    values: np.ndarray
    labels: Optional[list[str]] = None

    @property
    def T(self) -> int:
        return int(self.values.shape[0])

    @property
    def p(self) -> int:
        return int(self.values.shape[1])


def _read_cells(path: PathLike, header: bool) -> pd.DataFrame:
    """
    Read a CSV as strings, mapping parser failures to DataFormatError.

    The returned frame is indexed by 1-based file line, blank lines dropped.
    """
    path = Path(path)
    if not path.is_file():
        raise DataFormatError("file not found", path=str(path))

    try:
        frame = pd.read_csv(
            path,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        return pd.DataFrame()
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        line = int(match.group(1)) if match else None
        raise DataFormatError(f"ragged row: {e}", path=str(path), line=line) from None

    frame.index = np.arange(frame.shape[0]) + (2 if header else 1)
    blank = frame.fillna("").apply(lambda column: column.str.strip() == "").all(axis=1)
    frame = frame[~blank]

    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        raise DataFormatError(
            f"ragged row: expected {frame.shape[1]} fields",
            path=str(path),
            line=int(frame.index[np.flatnonzero(short)[0]]),
        )

    return frame.apply(lambda column: column.str.strip())


def _to_float(frame: pd.DataFrame, path: PathLike) -> np.ndarray:
    """Parse every cell exactly, rejecting non-numeric and non-finite values."""
    numeric = frame.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    bad = ~np.isfinite(numeric)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise DataFormatError(
            f"non-numeric or non-finite value {frame.iat[row, col]!r}",
            path=str(path),
            line=int(frame.index[row]),
            column=int(col) + 1,
        )
    # numpy's string parser is correctly rounded, so written values reload bit-exactly
    return frame.to_numpy(dtype=str).astype(np.float64)


def load_panel_csv(path: PathLike, header: bool = False) -> PanelData:
    """
    Load a rectangular numeric CSV panel (rows = time, columns = series).

    Args:
        path: CSV file
        header: First row holds series labels

    Returns:
        PanelData with labels when header is set

    Raises:
        DataFormatError: On ragged rows, non-numeric or non-finite cells
    """
    frame = _read_cells(path, header)
    if frame.empty:
        raise DataFormatError("panel is empty", path=str(path))

    values = _to_float(frame, path)
    labels = [str(label) for label in frame.columns] if header else None
    logger.info(f"Loaded panel {path}: T={values.shape[0]}, p={values.shape[1]}")
    return PanelData(values=values, labels=labels)


def load_adjacency(
    path: PathLike,
    fmt: AdjacencyFormat,
    p: int,
    one_based: bool = False,
) -> Network:
    """
    Load an edge list (two integer columns, no header) or a dense p x p matrix.

    Raises:
        DataFormatError: On parse failures or node indices out of range,
            with the offending line
        NetworkError: On invalid network structure (self-loops, asymmetry)
    """
    frame = _read_cells(path, header=False)

    if fmt == "dense":
        if frame.empty:
            raise DataFormatError("dense adjacency is empty", path=str(path))
        matrix = _to_float(frame, path)
        network = build_network(matrix, p, fmt="dense")

    elif fmt == "edges":
        if frame.empty:
            logger.warning(f"Edge list {path} is empty")
            return build_network([], p, fmt="edges")
        if frame.shape[1] != 2:
            raise DataFormatError(f"edge list must have 2 columns, got {frame.shape[1]}", path=str(path))

        values = _to_float(frame, path)
        offset = 1 if one_based else 0
        for row, pair in enumerate(values):
            for col, value in enumerate(pair):
                if value != np.floor(value):
                    raise DataFormatError(
                        f"node index {frame.iat[row, col]!r} is not an integer",
                        path=str(path), line=int(frame.index[row]), column=col + 1,
                    )
                node = int(value) - offset
                if not 0 <= node < p:
                    raise DataFormatError(
                        f"node {int(value)} outside the {p} panel series",
                        path=str(path), line=int(frame.index[row]), column=col + 1,
                    )
        network = build_network(values.astype(np.int64) - offset, p, fmt="edges")

    else:
        raise DataFormatError(f"unknown adjacency format {fmt}", path=str(path))

    logger.info(f"Loaded network {path}: p={p}, edges={network.n_edges}")
    return network


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> Path:
    """Write a matrix with 17 significant digits per value."""
    path = Path(path)
    try:
        np.savetxt(path, np.atleast_2d(matrix), delimiter=",", fmt=FLOAT_FORMAT)
    except OSError as e:
        raise ReportError(str(e), path=str(path)) from e
    return path
