"""Labeled matrices and vectors shared by the computation modules.

Every container is frozen and holds a read-only copy of its array, so values
can be passed between threads without defensive copying.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyMatrix, NoOverlap

AXIS_KINDS = ("country", "product", "technology")

MARGIN_KINDS = {
    ("country", "product"): ("country_diversity", "product_ubiquity"),
    ("country", "technology"): ("country_tech_diversity", "tech_ubiquity"),
    ("product", "technology"): ("product_sophistication", "tech_product_ubiquity"),
}

INDEX_KINDS = ("ECI", "PCI", "PatCI", "TCI", "PTCI", "TPCI", "THCI")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def _check_labels(labels: Sequence[str], what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        seen = set()
        dups = sorted({x for x in labels if x in seen or seen.add(x)})
        raise ValueError(f"duplicate {what} labels: {dups}")
    return labels


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    """A dense matrix with labeled rows and columns.

    ``axis_kinds`` names what the rows and columns index, e.g.
    ``("country", "product")``.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: np.ndarray
    axis_kinds: tuple[str, str] = ("row", "col")

    def __post_init__(self):
        rows = _check_labels(self.row_labels, "row")
        cols = _check_labels(self.col_labels, "column")
        values = _frozen_array(self.values)
        if values.ndim != 2 or values.shape != (len(rows), len(cols)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(rows)} row and {len(cols)} column labels"
            )
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "axis_kinds", tuple(self.axis_kinds))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def labels(self, axis: int) -> tuple[str, ...]:
        return self.row_labels if axis == 0 else self.col_labels

    def equals(self, other: LabeledMatrix) -> bool:
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.axis_kinds == other.axis_kinds
            and np.array_equal(self.values, other.values)
        )

    def _rebuild(self, row_labels, col_labels, values, axis_kinds):
        return type(self)(row_labels, col_labels, values, axis_kinds)

    def take(self, rows: Iterable[str] | None = None, cols: Iterable[str] | None = None):
        """Restrict (and reorder) to the given labels. ``None`` keeps an axis as is."""
        rows = self.row_labels if rows is None else tuple(rows)
        cols = self.col_labels if cols is None else tuple(cols)
        rpos = {lab: i for i, lab in enumerate(self.row_labels)}
        cpos = {lab: i for i, lab in enumerate(self.col_labels)}
        try:
            ri = [rpos[r] for r in rows]
            ci = [cpos[c] for c in cols]
        except KeyError as exc:
            raise KeyError(f"unknown label {exc.args[0]!r}") from None
        sub = self.values[np.ix_(ri, ci)] if ri and ci else np.zeros((len(ri), len(ci)))
        return self._rebuild(rows, cols, sub, self.axis_kinds)

    def transpose(self):
        return self._rebuild(
            self.col_labels, self.row_labels, self.values.T, self.axis_kinds[::-1]
        )

    @property
    def T(self):
        return self.transpose()


@dataclass(frozen=True, eq=False)
class ValuedMatrix(LabeledMatrix):
    """Nonnegative export values or patent counts."""

    def __post_init__(self):
        super().__post_init__()
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        if np.any(self.values < 0):
            raise ValueError("values must be nonnegative")


@dataclass(frozen=True, eq=False)
class BinaryIncidence(LabeledMatrix):
    """A 0/1 matrix with no empty row or column.

    ``removed_rows`` / ``removed_cols`` record labels dropped by the pruning
    step that produced this matrix, if any.
    """

    removed_rows: tuple[str, ...] = ()
    removed_cols: tuple[str, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        _check_binary(self.values)
        if self.values.size == 0:
            raise EmptyMatrix("incidence matrix has no rows or no columns")
        zero_rows = [r for r, s in zip(self.row_labels, self.values.sum(axis=1)) if s == 0]
        zero_cols = [c for c, s in zip(self.col_labels, self.values.sum(axis=0)) if s == 0]
        if zero_rows or zero_cols:
            raise ValueError(
                f"incidence has empty rows {zero_rows} / columns {zero_cols}; prune it first"
            )
        object.__setattr__(self, "removed_rows", tuple(self.removed_rows))
        object.__setattr__(self, "removed_cols", tuple(self.removed_cols))

    def _rebuild(self, row_labels, col_labels, values, axis_kinds):
        # Restriction may empty a row or column, which an incidence cannot
        # hold; hand back a plain matrix and let the caller prune.
        return LabeledMatrix(row_labels, col_labels, values, axis_kinds)

    def transpose(self) -> BinaryIncidence:
        return BinaryIncidence(
            self.col_labels,
            self.row_labels,
            self.values.T,
            self.axis_kinds[::-1],
            removed_rows=self.removed_cols,
            removed_cols=self.removed_rows,
        )


def _check_binary(values: np.ndarray) -> None:
    if not np.all((values == 0) | (values == 1)):
        raise ValueError("incidence entries must be exactly 0 or 1")


@dataclass(frozen=True, eq=False)
class MarginVector:
    labels: tuple[str, ...]
    values: np.ndarray
    kind: str

    def __post_init__(self):
        labels = _check_labels(self.labels, "margin")
        values = _frozen_array(self.values)
        if values.shape != (len(labels),):
            raise ValueError("margin length does not match labels")
        if np.any(values < 0):
            raise ValueError("margins are nonnegative counts")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values.tolist()))


@dataclass(frozen=True, eq=False)
class ComplexityIndex:
    """A standardized index: mean 0, population standard deviation 1."""

    labels: tuple[str, ...]
    values: np.ndarray
    kind: str
    year: int | None = None
    eigenvalue: float | None = None

    def __post_init__(self):
        labels = _check_labels(self.labels, "index")
        values = _frozen_array(self.values)
        if values.shape != (len(labels),):
            raise ValueError("index length does not match labels")
        if abs(values.mean()) > 1e-9 or abs(values.std() - 1.0) > 1e-9:
            raise ValueError("index values are not standardized")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values.tolist()))

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.labels.index(label)])


@dataclass(frozen=True, eq=False)
class IndexPanel:
    """Entity x year table of index values.

    Missing cells are stored as NaN internally but never surface as numbers:
    accessors return ``None`` or leave the cell out.
    """

    entities: tuple[str, ...]
    years: tuple[int, ...]
    values: np.ndarray
    kind: str = ""

    def __post_init__(self):
        entities = _check_labels(self.entities, "entity")
        years = tuple(int(y) for y in self.years)
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError("years must be strictly increasing")
        values = _frozen_array(self.values)
        if values.shape != (len(entities), len(years)):
            raise ValueError("panel shape does not match entities x years")
        object.__setattr__(self, "entities", entities)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Mapping[int, float]], kind: str = "") -> IndexPanel:
        entities = list(data)
        years = sorted({int(y) for row in data.values() for y in row})
        arr = np.full((len(entities), len(years)), np.nan)
        col = {y: j for j, y in enumerate(years)}
        for i, e in enumerate(entities):
            for y, v in data[e].items():
                arr[i, col[int(y)]] = v
        return cls(tuple(entities), tuple(years), arr, kind)

    def value(self, entity: str, year: int) -> float | None:
        v = self.values[self.entities.index(entity), self.years.index(year)]
        return None if np.isnan(v) else float(v)

    def series(self, entity: str) -> dict[int, float]:
        row = self.values[self.entities.index(entity)]
        return {y: float(v) for y, v in zip(self.years, row) if not np.isnan(v)}

    def column(self, year: int) -> dict[str, float]:
        if year not in self.years:
            return {}
        col = self.values[:, self.years.index(year)]
        return {e: float(v) for e, v in zip(self.entities, col) if not np.isnan(v)}


def prune(matrix: LabeledMatrix) -> BinaryIncidence:
    """Drop empty rows and columns until none remain.

    Accepts any labeled 0/1 matrix. Surviving labels keep their original
    order; the dropped ones are recorded on the result (merged with anything
    the input had already recorded).
    """
    values = np.asarray(matrix.values)
    _check_binary(values)
    rmask = np.ones(values.shape[0], dtype=bool)
    cmask = np.ones(values.shape[1], dtype=bool)
    while True:
        sub = values[np.ix_(rmask, cmask)]
        new_r = rmask.copy()
        new_c = cmask.copy()
        new_r[rmask] = sub.sum(axis=1) > 0
        new_c[cmask] = sub.sum(axis=0) > 0
        if np.array_equal(new_r, rmask) and np.array_equal(new_c, cmask):
            break
        rmask, cmask = new_r, new_c
    if not rmask.any() or not cmask.any():
        raise EmptyMatrix("pruning removed every row or column")
    rows = [lab for lab, keep in zip(matrix.row_labels, rmask) if keep]
    cols = [lab for lab, keep in zip(matrix.col_labels, cmask) if keep]
    removed_rows = tuple(getattr(matrix, "removed_rows", ())) + tuple(
        lab for lab, keep in zip(matrix.row_labels, rmask) if not keep
    )
    removed_cols = tuple(getattr(matrix, "removed_cols", ())) + tuple(
        lab for lab, keep in zip(matrix.col_labels, cmask) if not keep
    )
    return BinaryIncidence(
        rows,
        cols,
        values[np.ix_(rmask, cmask)],
        matrix.axis_kinds,
        removed_rows=removed_rows,
        removed_cols=removed_cols,
    )


def align(a: LabeledMatrix, b: LabeledMatrix, axes=((0, 0),)):
    """Restrict ``a`` and ``b`` to shared labels on each paired axis.

    ``axes`` lists ``(axis_of_a, axis_of_b)`` pairs. Paired axes come back in
    sorted label order; unpaired axes are left untouched. Incidence inputs
    are returned as plain ``LabeledMatrix`` since the restriction may leave
    empty rows; run them through :func:`prune` afterwards.
    """
    sel_a: list = [None, None]
    sel_b: list = [None, None]
    for ax_a, ax_b in axes:
        common = sorted(set(a.labels(ax_a)) & set(b.labels(ax_b)))
        if not common:
            raise NoOverlap(
                f"no shared labels between {a.axis_kinds[ax_a]} axis of the first "
                f"matrix and {b.axis_kinds[ax_b]} axis of the second"
            )
        sel_a[ax_a] = common
        sel_b[ax_b] = common
    return a.take(*sel_a), b.take(*sel_b)
