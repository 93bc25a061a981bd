"""Revealed comparative advantage (Balassa) and its binary threshold."""

from __future__ import annotations

import numpy as np

from .errors import AllZeroRow, EmptyMatrix
from .model import BinaryIncidence, LabeledMatrix, ValuedMatrix, prune

# Relative slack on the threshold so that an RCA of exactly 1 computed with
# rounding error (0.9999999999999998) is still counted.
_THRESHOLD_RTOL = 1e-12


def rca(x: ValuedMatrix) -> ValuedMatrix:
    """Share of each category in an entity's total over its share in the grand total.

    Works the same way for export values (country x product) and patent
    counts (country x technology). A column nobody holds gets RCA 0.
    """
    values = np.asarray(x.values, dtype=float)
    total = values.sum()
    if values.size == 0 or total <= 0:
        raise EmptyMatrix("RCA needs at least one positive entry")
    row_tot = values.sum(axis=1)
    zero_rows = [lab for lab, s in zip(x.row_labels, row_tot) if s == 0]
    if zero_rows:
        raise AllZeroRow(f"entities with zero total: {zero_rows}")
    col_tot = values.sum(axis=0)
    # x * T / (row * col) is the same ratio of shares and stays exact for
    # integer-valued inputs, so uniform matrices give exactly 1.
    with np.errstate(divide="ignore", invalid="ignore"):
        out = values * total / np.outer(row_tot, col_tot)
    out[:, col_tot == 0] = 0.0
    return ValuedMatrix(x.row_labels, x.col_labels, out, x.axis_kinds)


def binarize(r: LabeledMatrix, threshold: float = 1.0) -> BinaryIncidence:
    """M = 1 where RCA >= threshold (inclusive), then prune empty rows/columns."""
    values = np.asarray(r.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("RCA matrix must be finite")
    cut = threshold - _THRESHOLD_RTOL * abs(threshold)
    m = (values >= cut).astype(float)
    if not m.any():
        raise EmptyMatrix(f"no entry reaches the threshold {threshold}")
    return prune(LabeledMatrix(r.row_labels, r.col_labels, m, r.axis_kinds))
