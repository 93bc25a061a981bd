"""Tripartite country-product-technology system and the Triple-Helix index.

Two cycle matrices act on countries:

* clockwise, country -> technology -> product -> country::

    W[c, c'] = sum_t sum_p M_ct[c,t] M_pt[p,t] M_cp[c',p] / (rho_c[c] eta_t[t] k_p[p])

* counter-clockwise, country -> product -> technology -> country::

    V[c, c'] = sum_t sum_p M_cp[c,p] M_pt[p,t] M_ct[c',t] / (k_c[c] eta_p[p] rho_t[t])

THCI standardizes the sum of their informative eigenvectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyMatrix, NoOverlap
from .model import BinaryIncidence, LabeledMatrix
from .reflections import SpectralResult, spectral_select, standardize


@dataclass(frozen=True, eq=False)
class TripartiteSystem:
    cp: BinaryIncidence
    ct: BinaryIncidence
    pt: BinaryIncidence
    removed: dict | None = None

    def __post_init__(self):
        if self.cp.row_labels != self.ct.row_labels:
            raise ValueError("country labels of M_cp and M_ct differ")
        if self.cp.col_labels != self.pt.row_labels:
            raise ValueError("product labels of M_cp and M_pt differ")
        if self.ct.col_labels != self.pt.col_labels:
            raise ValueError("technology labels of M_ct and M_pt differ")
        if self.removed is None:
            object.__setattr__(
                self, "removed", {"country": (), "product": (), "technology": ()}
            )

    @property
    def countries(self) -> tuple[str, ...]:
        return self.cp.row_labels

    @property
    def products(self) -> tuple[str, ...]:
        return self.cp.col_labels

    @property
    def technologies(self) -> tuple[str, ...]:
        return self.ct.col_labels

    def mirror(self) -> TripartiteSystem:
        """Swap the roles of products and technologies."""
        return TripartiteSystem(self.ct, self.cp, self.pt.transpose(), self.removed)


def build_system(m_cp: LabeledMatrix, m_ct: LabeledMatrix, m_pt: LabeledMatrix) -> TripartiteSystem:
    """Align the three incidences on shared labels and prune them jointly.

    A label is dropped from its axis everywhere as soon as it has an empty
    margin in any matrix; dropping it can empty other margins, so this
    repeats until nothing changes. Shared axes end up in sorted order.
    """
    axes = {
        "country": (set(m_cp.row_labels), set(m_ct.row_labels)),
        "product": (set(m_cp.col_labels), set(m_pt.row_labels)),
        "technology": (set(m_ct.col_labels), set(m_pt.col_labels)),
    }
    keep = {}
    for axis, (a, b) in axes.items():
        common = a & b
        if not common:
            raise NoOverlap(f"no {axis} labels shared between the matrices")
        keep[axis] = sorted(common)
    removed = {axis: sorted((a | b) - set(keep[axis])) for axis, (a, b) in axes.items()}

    while True:
        cp = m_cp.take(keep["country"], keep["product"]).values
        ct = m_ct.take(keep["country"], keep["technology"]).values
        pt = m_pt.take(keep["product"], keep["technology"]).values
        ok = {
            "country": (cp.sum(axis=1) > 0) & (ct.sum(axis=1) > 0),
            "product": (cp.sum(axis=0) > 0) & (pt.sum(axis=1) > 0),
            "technology": (ct.sum(axis=0) > 0) & (pt.sum(axis=0) > 0),
        }
        if all(mask.all() for mask in ok.values()):
            break
        for axis, mask in ok.items():
            removed[axis].extend(lab for lab, good in zip(keep[axis], mask) if not good)
            keep[axis] = [lab for lab, good in zip(keep[axis], mask) if good]
            if not keep[axis]:
                raise EmptyMatrix(f"joint pruning removed every {axis}")

    def incidence(values, rows, cols, kinds, rr, rc):
        return BinaryIncidence(rows, cols, values, kinds, removed_rows=rr, removed_cols=rc)

    removed = {axis: tuple(sorted(labels)) for axis, labels in removed.items()}
    return TripartiteSystem(
        incidence(cp, keep["country"], keep["product"], ("country", "product"),
                  removed["country"], removed["product"]),
        incidence(ct, keep["country"], keep["technology"], ("country", "technology"),
                  removed["country"], removed["technology"]),
        incidence(pt, keep["product"], keep["technology"], ("product", "technology"),
                  removed["product"], removed["technology"]),
        removed,
    )


def w_clockwise(s: TripartiteSystem) -> LabeledMatrix:
    cp, ct, pt = (np.asarray(m.values, dtype=float) for m in (s.cp, s.ct, s.pt))
    rho_c = ct.sum(axis=1)
    eta_t = pt.sum(axis=0)
    k_p = cp.sum(axis=0)
    w = (ct / rho_c[:, None]) @ (pt / eta_t[None, :]).T @ (cp / k_p[None, :]).T
    return LabeledMatrix(s.countries, s.countries, w, ("country", "country"))


def w_counterclockwise(s: TripartiteSystem) -> LabeledMatrix:
    cp, ct, pt = (np.asarray(m.values, dtype=float) for m in (s.cp, s.ct, s.pt))
    k_c = cp.sum(axis=1)
    eta_p = pt.sum(axis=1)
    rho_t = ct.sum(axis=0)
    v = (cp / k_c[:, None]) @ (pt / eta_p[:, None]) @ (ct / rho_t[None, :]).T
    return LabeledMatrix(s.countries, s.countries, v, ("country", "country"))


def rotations(s: TripartiteSystem, rule: str = "largest_below_one") -> tuple[SpectralResult, SpectralResult]:
    """Selected eigenpairs of the clockwise and counter-clockwise matrices.

    Both eigenvectors are oriented against the same anchor, the
    country-product diversity, so their sum cannot cancel by accident of sign.
    """
    anchor = np.asarray(s.cp.values).sum(axis=1)
    return (
        spectral_select(w_clockwise(s), rule, anchor=anchor),
        spectral_select(w_counterclockwise(s), rule, anchor=anchor),
    )


def thci(s: TripartiteSystem, rule: str = "largest_below_one", year: int | None = None):
    """Triple-Helix Complexity Index over the system's countries.

    The two unit-norm rotation eigenvectors are added with equal weight and
    the sum is standardized once.
    """
    plus, minus = rotations(s, rule)
    return standardize(plus.eigenvector + minus.eigenvector, s.countries, "THCI", year)
