"""Published-value checks against the bundled panels.

Each check carries its target, the computed value and the tolerance, so a
failure prints as a diff. The frozen row totals guard the transcription of
the panel files: any edited cell moves its row total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError
from .ingest import BUNDLED, bundled_dir, load_bundled
from .model import BinaryIncidence, ValuedMatrix
from .rca import rca
from .reflections import complexity_index, spectral_select, w_bipartite
from .stats import correlation_series, cross_section_correlate, lagged_correlate

USA = "United States"

# cross-section Pearson, 45 countries, 2014
CROSS_SECTION = [("ECI", "PatCI", 0.525), ("ECI", "THCI", 0.774), ("THCI", "PatCI", 0.375)]
CROSS_TOL = 0.005

# lagged Spearman, USA, THCI at t against the other index at t + shift
LAGGED = [("THCI", "ECI", 2, 0.582), ("THCI", "ECI", 0, -0.011), ("THCI", "PatCI", 3, 0.298)]
LAG_TOL = 0.02

ROW_TOTAL_TOL = 0.005


@dataclass(frozen=True)
class Check:
    name: str
    target: float
    computed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.computed)) and abs(self.computed - self.target) <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        diff = self.computed - self.target
        return (
            f"{status}  {self.name}: target {self.target:.6g}, computed {self.computed:.6g}, "
            f"diff {diff:+.3g}, tolerance {self.tolerance:g}"
        )


def _row_totals() -> dict:
    text = (resources.files("helixcomplexity") / "data" / "panel_row_totals.json").read_text()
    return json.loads(text)


def transcription_checks(panels) -> list[Check]:
    totals = _row_totals()
    checks = []
    for kind, fname in BUNDLED.items():
        expected = totals[Path(fname).stem]
        panel = panels[kind]
        checks.append(Check(f"{kind} fixture entity count", len(expected), len(panel.entities), 0))
        for entity, total in expected.items():
            if entity in panel.entities:
                got = float(np.nansum(panel.values[panel.entities.index(entity)]))
            else:
                got = float("nan")
            checks.append(Check(f"{kind} row total, {entity}", total, got, ROW_TOTAL_TOL))
    return checks


def published_checks(panels) -> list[Check]:
    checks = []
    for a, b, target in CROSS_SECTION:
        r = cross_section_correlate([panels[a], panels[b]], 2014, "pearson")[0][1]
        checks.append(Check(f"cross-section Pearson {a}-{b} 2014 (n={r.n_pairs})", target, r.coefficient, CROSS_TOL))
    for a, b, lag, target in LAGGED:
        r = lagged_correlate(panels[a].series(USA), panels[b].series(USA), "spearman", lag)
        checks.append(Check(f"lagged Spearman USA {a}-{b} shift {lag:+d}", target, r.coefficient, LAG_TOL))
    series = correlation_series(panels["ECI"], panels["PatCI"], "pearson").by_year()
    table1 = cross_section_correlate([panels["ECI"], panels["PatCI"]], 2014, "pearson")[0][1]
    checks.append(Check("series ECI-PatCI 2014 equals cross-section", table1.coefficient, series.get(2014, np.nan), 1e-12))
    checks.append(Check("series length (2000-2014)", 15, len(series), 0))
    checks.append(Check("ECI panel USA 2014", -0.23, panels["ECI"].value(USA, 2014), 1e-12))
    checks.append(Check("PatCI panel Japan 2000", 3.10, panels["PatCI"].value("Japan", 2000), 1e-12))
    return checks


def micro_checks() -> list[Check]:
    checks = []
    x = ValuedMatrix(("A", "B"), ("p1", "p2"), [[10, 0], [10, 10]], ("country", "product"))
    expected = np.array([[1.5, 0.0], [0.75, 1.5]])
    checks.append(Check("RCA 2x2 max abs error", 0.0, float(np.abs(rca(x).values - expected).max()), 1e-15))

    m = BinaryIncidence(("A", "B"), ("p", "q"), [[1, 1], [0, 1]], ("country", "product"))
    w = w_bipartite(m).values
    checks.append(Check("W 2x2 max abs error", 0.0, float(np.abs(w - [[0.75, 0.25], [0.5, 0.5]]).max()), 1e-15))
    checks.append(Check("W 2x2 selected eigenvalue", 0.25, spectral_select(w).eigenvalue, 1e-12))

    block = BinaryIncidence(
        ("A", "B", "C", "D"), ("p", "q", "r", "s"),
        [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]], ("country", "product"),
    )
    eci = complexity_index(block).values
    checks.append(Check("block ECI vs (+1,+1,-1,-1)", 0.0, float(np.abs(eci - [1, 1, -1, -1]).max()), 1e-9))
    return checks


def run_checks(fixture_dir=None) -> list[Check]:
    base = Path(fixture_dir) if fixture_dir is not None else bundled_dir()
    if not base.is_dir():
        raise ParseError("fixture directory not found", base)
    panels = load_bundled(base)
    return published_checks(panels) + transcription_checks(panels) + micro_checks()
