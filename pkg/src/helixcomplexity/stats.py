"""Correlation and trend statistics over index panels."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy import stats as sps

from .errors import InsufficientOverlap, LengthMismatch, ZeroVariance
from .model import IndexPanel

METHODS = ("pearson", "spearman")
MIN_PAIRS = 3
EXACT_MAX_N = 10


@dataclass(frozen=True)
class CorrelationReport:
    method: str
    coefficient: float
    n_pairs: int
    lag: int = 0
    year: int | None = None
    scope: str = ""
    p_value: float | None = None

    def __post_init__(self):
        if not -1.0 - 1e-12 <= self.coefficient <= 1.0 + 1e-12:
            raise ValueError(f"coefficient {self.coefficient} outside [-1, 1]")
        if self.n_pairs < MIN_PAIRS:
            raise ValueError("a correlation report needs at least 3 pairs")


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"lengths differ: {x.shape} vs {y.shape}")
    if len(x) < MIN_PAIRS:
        raise InsufficientOverlap(f"need at least {MIN_PAIRS} pairs, got {len(x)}")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    x, y = _pair(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx, syy = float(xc @ xc), float(yc @ yc)
    # relative to the data scale, so affine rescaling cannot trip it
    if math.sqrt(sxx) <= 1e-12 * max(1.0, np.abs(x).max()) or math.sqrt(syy) <= 1e-12 * max(1.0, np.abs(y).max()):
        raise ZeroVariance("a series has zero variance")
    # one square root keeps identical rankings at exactly +-1
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def ranks(x: Sequence[float]) -> np.ndarray:
    """1-based ranks; ties share their average rank."""
    return sps.rankdata(np.asarray(x, dtype=float), method="average")


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    x, y = _pair(x, y)
    return pearson(ranks(x), ranks(y))


def correlate(x, y, method: str = "pearson") -> float:
    if method == "pearson":
        return pearson(x, y)
    if method == "spearman":
        return spearman(x, y)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def lagged_correlate(
    a: Mapping[int, float],
    b: Mapping[int, float],
    method: str = "spearman",
    lag: int = 0,
    scope: str = "",
) -> CorrelationReport:
    """Correlate a(t) with b(t + lag) over every year where both exist.

    A positive lag means ``a`` leads: its value is paired with ``b`` taken
    ``lag`` years later.
    """
    years = [t for t in sorted(a) if (t + lag) in b]
    if len(years) < MIN_PAIRS:
        raise InsufficientOverlap(
            f"only {len(years)} overlapping years at lag {lag}; need {MIN_PAIRS}"
        )
    x = [a[t] for t in years]
    y = [b[t + lag] for t in years]
    return CorrelationReport(method, correlate(x, y, method), len(years), lag=lag, scope=scope)


def _common_column(panels: Sequence[IndexPanel], year: int) -> tuple[list[str], list[np.ndarray]]:
    cols = [p.column(year) for p in panels]
    common = [e for e in panels[0].entities if all(e in c for c in cols)]
    return common, [np.array([c[e] for e in common]) for c in cols]


def cross_section_correlate(
    panels: Sequence[IndexPanel], year: int, method: str = "pearson"
) -> list[list[CorrelationReport]]:
    """Pairwise coefficients over the entities present in every panel that year."""
    for p in panels:
        if year not in p.years:
            raise InsufficientOverlap(f"panel {p.kind or '?'} has no {year} column")
    common, vectors = _common_column(panels, year)
    if len(common) < MIN_PAIRS:
        raise InsufficientOverlap(f"{len(common)} common entities in {year}; need {MIN_PAIRS}")
    scope = f"{len(common)} entities"
    out = []
    for i, (pi, xi) in enumerate(zip(panels, vectors)):
        row = []
        for j, (pj, xj) in enumerate(zip(panels, vectors)):
            r = 1.0 if i == j else correlate(xi, xj, method)
            row.append(CorrelationReport(method, r, len(common), year=year, scope=scope))
        out.append(row)
    return out


@dataclass(frozen=True)
class CorrelationSeries:
    reports: tuple[CorrelationReport, ...]
    skipped: tuple[tuple[int, str], ...] = ()

    def __iter__(self) -> Iterator[CorrelationReport]:
        return iter(self.reports)

    def __len__(self) -> int:
        return len(self.reports)

    def by_year(self) -> dict[int, float]:
        return {r.year: r.coefficient for r in self.reports}


def correlation_series(a: IndexPanel, b: IndexPanel, method: str = "pearson") -> CorrelationSeries:
    """One cross-sectional coefficient per year both panels cover.

    Years where the coefficient cannot be formed are listed in ``skipped``
    rather than raising.
    """
    reports, skipped = [], []
    for year in sorted(set(a.years) & set(b.years)):
        try:
            reports.append(cross_section_correlate([a, b], year, method)[0][1])
        except (InsufficientOverlap, ZeroVariance) as exc:
            skipped.append((year, str(exc)))
    return CorrelationSeries(tuple(reports), tuple(skipped))


def _exact_rank_pvalue(x_ranks: np.ndarray, rho: float) -> float:
    """Two-sided exact p-value of Spearman's rho against 1..n.

    Enumerates the distribution of sum_i i * r[pi(i)] over all n!
    permutations of the (possibly tied) ranks with a subset DP: position
    ``popcount(mask)`` is filled by each unused element in turn.
    """
    n = len(x_ranks)
    twice = np.rint(2 * x_ranks).astype(int)  # midranks are multiples of 1/2
    dp: list[Counter | None] = [None] * (1 << n)
    dp[0] = Counter({0: 1})
    for mask in range(1 << n):
        cur = dp[mask]
        if cur is None:
            continue
        pos = bin(mask).count("1") + 1
        for k in range(n):
            bit = 1 << k
            if mask & bit:
                continue
            nxt = dp[mask | bit]
            if nxt is None:
                nxt = dp[mask | bit] = Counter()
            add = pos * twice[k]
            for s, c in cur.items():
                nxt[s + add] += c
    dist = dp[(1 << n) - 1]
    total = math.factorial(n)

    t = np.arange(1, n + 1, dtype=float)
    tc = t - t.mean()
    rc = x_ranks - x_ranks.mean()
    denom = math.sqrt((tc @ tc) * (rc @ rc))
    mean_term = n * t.mean() * x_ranks.mean()

    def rho_of(s2):
        return (s2 / 2.0 - mean_term) / denom

    hits = sum(c for s, c in dist.items() if abs(rho_of(s)) >= abs(rho) - 1e-12)
    return hits / total


def trend_test(series: Sequence[float], scope: str = "") -> CorrelationReport:
    """Spearman rho between a series and its time index, with a two-sided p-value.

    Exact permutation p-value up to 10 points, Student-t approximation above.
    """
    x = np.asarray(series, dtype=float)
    if len(x) < MIN_PAIRS:
        raise InsufficientOverlap(f"trend test needs at least {MIN_PAIRS} points")
    t = np.arange(1, len(x) + 1, dtype=float)
    rho = spearman(t, x)
    n = len(x)
    if n <= EXACT_MAX_N:
        p = _exact_rank_pvalue(ranks(x), rho)
    elif abs(rho) >= 1.0:
        p = 0.0
    else:
        tstat = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        p = float(2 * sps.t.sf(abs(tstat), n - 2))
    return CorrelationReport("spearman", rho, n, scope=scope, p_value=min(1.0, p))
