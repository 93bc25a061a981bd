"""Method of Reflections and its eigenvector formulation.

The bipartite indices (ECI, PCI, PatCI, TCI, PTCI, TPCI) are all the same
computation on different incidence matrices: build the row-stochastic
country-country matrix, pick its informative eigenvector, orient it and
standardize it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateIndex,
    DegenerateSpectrum,
    NoConvergence,
    NoRealEigenvalue,
    SpectralWarning,
)
from .model import MARGIN_KINDS, BinaryIncidence, ComplexityIndex, LabeledMatrix, MarginVector

UNIT_TOL = 1e-9
IMAG_TOL = 1e-9
ZERO_TOL = 1e-9
TIE_TOL = 1e-6
STD_TOL = 1e-12
CORR_TOL = 1e-12

RULES = ("second_largest", "largest_below_one")

_INDEX_KIND = {
    ("country", "product"): "ECI",
    ("product", "country"): "PCI",
    ("country", "technology"): "PatCI",
    ("technology", "country"): "TCI",
    ("product", "technology"): "PTCI",
    ("technology", "product"): "TPCI",
}


def normalize_rule(rule: str) -> str:
    rule = rule.replace("-", "_").lower()
    if rule not in RULES:
        raise ValueError(f"unknown eigenvalue rule {rule!r}; expected one of {RULES}")
    return rule


def margins(m: BinaryIncidence) -> tuple[MarginVector, MarginVector]:
    """Row sums (diversity) and column sums (ubiquity)."""
    kinds = MARGIN_KINDS.get(tuple(m.axis_kinds))
    if kinds is None:
        flipped = MARGIN_KINDS.get(tuple(m.axis_kinds[::-1]))
        kinds = flipped[::-1] if flipped else ("diversity", "ubiquity")
    values = np.asarray(m.values)
    return (
        MarginVector(m.row_labels, values.sum(axis=1), kinds[0]),
        MarginVector(m.col_labels, values.sum(axis=0), kinds[1]),
    )


@dataclass(frozen=True, eq=False)
class ReflectionState:
    n: int
    row_labels: tuple[str, ...]
    rows: np.ndarray
    col_labels: tuple[str, ...]
    cols: np.ndarray


def reflect(m: BinaryIncidence, n_steps: int) -> ReflectionState:
    """Run ``n_steps`` rounds of the reflection recursion.

    Both sides update from the previous round's other side:
    ``k_p[n] = M.T @ k_c[n-1] / k_p[0]`` and ``k_c[n] = M @ k_p[n-1] / k_c[0]``.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    values = np.asarray(m.values, dtype=float)
    kc0 = values.sum(axis=1)
    kp0 = values.sum(axis=0)
    kc, kp = kc0.copy(), kp0.copy()
    for _ in range(n_steps):
        kc, kp = values @ kp / kc0, values.T @ kc / kp0
    return ReflectionState(n_steps, m.row_labels, kc, m.col_labels, kp)


def w_bipartite(m: BinaryIncidence) -> LabeledMatrix:
    """W[c, c'] = sum_p M[c,p] M[c',p] / (k_c0[c] k_p0[p]); each row sums to 1."""
    values = np.asarray(m.values, dtype=float)
    kc0 = values.sum(axis=1)
    kp0 = values.sum(axis=0)
    w = (values / kc0[:, None]) @ (values / kp0[None, :]).T
    kind = m.axis_kinds[0]
    return LabeledMatrix(m.row_labels, m.row_labels, w, (kind, kind))


@dataclass(frozen=True, eq=False)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvalue: float
    eigenvector: np.ndarray
    rule: str
    labels: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())


def orient(vector: np.ndarray, anchor: np.ndarray | None = None) -> np.ndarray:
    """Flip ``vector`` so it correlates nonnegatively with ``anchor``.

    When there is no anchor, or the correlation is zero (including a constant
    anchor), the first non-negligible entry is made positive.
    """
    v = np.asarray(vector, dtype=float)
    if anchor is not None:
        a = np.asarray(anchor, dtype=float)
        vc, ac = v - v.mean(), a - a.mean()
        denom = np.linalg.norm(vc) * np.linalg.norm(ac)
        corr = float(vc @ ac / denom) if denom > 0 else 0.0
        if abs(corr) > CORR_TOL:
            return -v if corr < 0 else v
    nz = np.flatnonzero(np.abs(v) > CORR_TOL)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _unit_eigenvector(vals, vecs) -> np.ndarray:
    """Non-constant direction inside the eigenvalue-1 eigenspace.

    With several disconnected components the unit eigenvalue repeats; the
    constant vector is one member of the eigenspace and carries no
    information, so project it out and keep the dominant remaining direction.
    """
    near = np.abs(vals - 1.0) < UNIT_TOL
    basis = np.real(vecs[:, near])
    basis = basis - basis.mean(axis=0, keepdims=True)
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    if s.size == 0 or s[0] < 1e-12:
        raise DegenerateSpectrum("unit eigenspace holds only the constant vector")
    return u[:, 0]


def spectral_select(
    w, rule: str = "second_largest", anchor: Sequence[float] | None = None
) -> SpectralResult:
    """Pick the informative eigenpair of a row-stochastic matrix.

    The trivial eigenvalue (the one closest to 1) is dropped. ``second_largest``
    takes the next eigenvalue by modulus, which may be another copy of 1 when
    the network splits into components; ``largest_below_one`` takes the
    largest modulus strictly below 1. Complex candidates are skipped with a
    warning. The eigenvector is real, unit-norm and oriented by :func:`orient`.
    """
    rule = normalize_rule(rule)
    labels = tuple(w.row_labels) if isinstance(w, LabeledMatrix) else ()
    mat = np.asarray(w.values if isinstance(w, LabeledMatrix) else w, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("spectral_select needs a square matrix")
    vals, vecs = np.linalg.eig(mat)
    order = np.lexsort((-vals.real, -np.round(np.abs(vals), 12)))
    vals, vecs = vals[order], vecs[:, order]

    dist = np.abs(vals - 1.0)
    trivial = int(np.argmin(dist))
    if dist[trivial] > UNIT_TOL:
        raise ValueError("matrix is not row-stochastic: no eigenvalue at 1")
    candidates = [i for i in range(len(vals)) if i != trivial]
    if rule == "largest_below_one":
        candidates = [i for i in candidates if abs(vals[i]) < 1.0 - UNIT_TOL]
    if not candidates:
        raise DegenerateSpectrum("no nontrivial eigenvalue to select")

    notes = []
    chosen = None
    for pos, i in enumerate(candidates):
        if abs(vals[i].imag) > IMAG_TOL:
            notes.append(f"skipped complex eigenvalue {complex(vals[i]):.6g}")
            continue
        chosen = pos
        break
    if chosen is None:
        raise NoRealEigenvalue("all nontrivial eigenvalues are complex")
    idx = candidates[chosen]
    lam = float(vals[idx].real)
    if abs(lam) < ZERO_TOL:
        raise DegenerateSpectrum(f"selected eigenvalue {lam:.3g} is zero; index undefined")
    rest = [j for j in candidates[chosen + 1:] if abs(vals[j].imag) <= IMAG_TOL]
    if rest and abs(abs(vals[rest[0]]) - abs(lam)) < TIE_TOL and abs(lam - 1.0) >= UNIT_TOL:
        notes.append(
            f"selected eigenvalue {lam:.9g} is within {TIE_TOL:g} of the next "
            f"({vals[rest[0]].real:.9g}); direction is ill-conditioned"
        )

    if abs(lam - 1.0) < UNIT_TOL:
        vec = _unit_eigenvector(vals, vecs)
    else:
        vec = np.real(vecs[:, idx])
    vec = vec / np.linalg.norm(vec)
    vec = orient(vec, anchor)
    for note in notes:
        warnings.warn(note, SpectralWarning, stacklevel=2)
    return SpectralResult(vals, lam, vec, rule, labels, tuple(notes))


def standardize(
    values: Sequence[float],
    labels: Sequence[str] | None = None,
    kind: str = "index",
    year: int | None = None,
    eigenvalue: float | None = None,
) -> ComplexityIndex:
    """(v - mean) / std with the population standard deviation."""
    v = np.asarray(values, dtype=float)
    if labels is None:
        labels = [str(i) for i in range(len(v))]
    sd = v.std() if v.size else 0.0
    if v.size < 2 or sd <= STD_TOL:
        raise DegenerateIndex("index is constant; cannot standardize")
    return ComplexityIndex(tuple(labels), (v - v.mean()) / sd, kind, year, eigenvalue)


def index_kind(axis_kinds) -> str:
    return _INDEX_KIND.get(tuple(axis_kinds), "index")


def complexity_index(
    m: BinaryIncidence,
    side: str = "rows",
    rule: str = "second_largest",
    year: int | None = None,
) -> ComplexityIndex:
    """Complexity index of the rows (e.g. ECI) or columns (e.g. PCI) of ``m``."""
    if side not in ("rows", "cols"):
        raise ValueError("side must be 'rows' or 'cols'")
    if side == "cols":
        m = m.transpose()
    w = w_bipartite(m)
    diversity = np.asarray(m.values).sum(axis=1)
    spec = spectral_select(w, rule, anchor=diversity)
    return standardize(
        spec.eigenvector, m.row_labels, index_kind(m.axis_kinds), year, spec.eigenvalue
    )


class LimitVector(NamedTuple):
    labels: tuple[str, ...]
    values: np.ndarray
    iterations: int
    residual: float


def reflect_limit(
    m: BinaryIncidence, tol: float = 1e-12, max_iter: int = 100_000, seed: int = 0
) -> LimitVector:
    """Iterate the reflections to their informative limit.

    Plain iteration collapses onto the constant vector, so the constant
    component is removed after each step and the iterate renormalized. This
    is power iteration on the centered W and converges to the centered
    eigenvector that :func:`complexity_index` picks with ``second_largest``.

    The start vector is drawn from a seeded generator. Starting from the
    diversity vector is tempting but fails when diversity happens to be an
    eigenvector of a smaller eigenvalue: the iteration then never leaves it.
    """
    w = np.asarray(w_bipartite(m).values)
    diversity = np.asarray(m.values, dtype=float).sum(axis=1)
    x = np.random.default_rng(seed).standard_normal(len(diversity))
    x -= x.mean()
    x /= np.linalg.norm(x)
    residual = np.inf
    for it in range(1, max_iter + 1):
        y = w @ x
        y -= y.mean()
        size = np.linalg.norm(y)
        if size < ZERO_TOL:
            raise DegenerateSpectrum("iterate vanished: no nontrivial component")
        y /= size
        residual = min(np.linalg.norm(y - x), np.linalg.norm(y + x))
        x = y
        if residual < tol:
            return LimitVector(m.row_labels, orient(x, diversity), it, float(residual))
    raise NoConvergence(
        f"no convergence after {max_iter} iterations (residual {residual:.3g})", residual
    )
