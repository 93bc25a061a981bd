"""Offline file loaders.

All inputs are UTF-8 CSV with a header row, ``.`` as decimal point, no
thousands separators, LF or CRLF line endings; an empty field is missing.

======================  ==========================================
trade                   ``year,country,product_code,value``
patents                 ``year,patent_id,class,country,share``
concordance             ``source_code,target_code``
panel                   ``entity,<year1>,<year2>,...``
======================  ==========================================
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BadShares,
    DuplicateEntity,
    EmptyMatrix,
    ParseError,
    SchemeMismatch,
    UnknownYear,
)
from .model import BinaryIncidence, IndexPanel, LabeledMatrix, ValuedMatrix, prune

TRADE_HEADER = ("year", "country", "product_code", "value")
PATENT_HEADER = ("year", "patent_id", "class", "country", "share")
CONCORDANCE_HEADER = ("source_code", "target_code")

SHARE_TOL = 1e-9


def _rows(path, header: Sequence[str] | None = None) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, fields) for the data rows; checks the header."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path) from None
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise ParseError("empty file", path, 1) from None
        except csv.Error as exc:
            raise ParseError(str(exc), path, 1) from None
        got = [h.strip() for h in first]
        if header is not None and tuple(got) != tuple(header):
            raise ParseError(f"expected header {','.join(header)}, got {','.join(got)}", path, 1)
        yield 1, got
        try:
            for fields in reader:
                if not fields or all(not f.strip() for f in fields):
                    continue
                yield reader.line_num, [f.strip() for f in fields]
        except csv.Error as exc:
            raise ParseError(str(exc), path, reader.line_num) from None


def _number(text: str, path, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", path, line) from None
    if not math.isfinite(value):
        raise ParseError(f"{what} {text!r} is not finite", path, line)
    return value


def _year(text: str, path, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"year {text!r} is not an integer", path, line) from None


def _matrix(cells: dict, kinds, path) -> ValuedMatrix:
    rows = sorted({r for r, _ in cells})
    cols = sorted({c for _, c in cells})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    arr = np.zeros((len(rows), len(cols)))
    for (r, c), v in cells.items():
        arr[ri[r], ci[c]] = v
    return ValuedMatrix(tuple(rows), tuple(cols), arr, kinds)


def load_trade(path, year: int, digit_level: int = 3) -> ValuedMatrix:
    """Country x product export values for one year.

    Product codes are cut to their first ``digit_level`` characters and
    values falling into the same cell are summed. Empty values are skipped.
    """
    if digit_level not in (2, 3):
        raise ValueError("digit_level must be 2 or 3")
    rows = _rows(path, TRADE_HEADER)
    next(rows)
    cells: dict = defaultdict(float)
    years_seen = set()
    for line, f in rows:
        if len(f) != 4:
            raise ParseError(f"expected 4 fields, got {len(f)}", path, line)
        y = _year(f[0], path, line)
        years_seen.add(y)
        country, code, raw = f[1], f[2], f[3]
        if not country or not code:
            raise ParseError("country and product_code are required", path, line)
        if len(code) < digit_level:
            raise ParseError(f"product code {code!r} shorter than {digit_level} digits", path, line)
        if raw == "":
            continue
        value = _number(raw, path, line, "value")
        if value < 0:
            raise ParseError(f"negative value {value}", path, line)
        if y == year:
            cells[(country, code[:digit_level])] += value
    if year not in years_seen:
        raise UnknownYear(f"{path}: no rows for year {year} (found {sorted(years_seen)})")
    if not cells:
        raise EmptyMatrix(f"{path}: no values for year {year}")
    return _matrix(cells, ("country", "product"), path)


@dataclass(frozen=True)
class PatentRecord:
    """One patent in one technology class with its inventor countries."""

    year: int
    patent_id: str
    tech_class: str
    inventors: tuple[tuple[str, float], ...]

    def __post_init__(self):
        shares = [s for _, s in self.inventors]
        if not shares or any(s <= 0 for s in shares) or abs(sum(shares) - 1.0) > SHARE_TOL:
            raise BadShares(
                f"patent {self.patent_id} class {self.tech_class}: shares {shares} "
                "must be positive and sum to 1"
            )


def read_patent_records(path, year: int | None = None) -> list[PatentRecord]:
    """Group patent rows by (patent, class).

    One row per inventor. Either every row of a group carries a share, or
    none does, in which case the patent is split equally over its inventors.
    """
    rows = _rows(path, PATENT_HEADER)
    next(rows)
    groups: dict = {}
    years_seen = set()
    for line, f in rows:
        if len(f) != 5:
            raise ParseError(f"expected 5 fields, got {len(f)}", path, line)
        y = _year(f[0], path, line)
        years_seen.add(y)
        pid, cls, country, raw = f[1], f[2], f[3], f[4]
        if not pid or not cls:
            raise ParseError("patent_id and class are required", path, line)
        if not country:
            raise ParseError(f"patent {pid} has an inventor without a country", path, line)
        share = None if raw == "" else _number(raw, path, line, "share")
        if share is not None and share <= 0:
            raise BadShares(f"{path}:{line}: inventor share must be positive, got {share}")
        key = (pid, cls)
        group = groups.setdefault(key, {"year": y, "rows": []})
        if group["year"] != y:
            raise ParseError(f"patent {pid} listed under two years", path, line)
        group["rows"].append((country, share))
    if year is not None and year not in years_seen:
        raise UnknownYear(f"{path}: no rows for year {year} (found {sorted(years_seen)})")

    records = []
    for (pid, cls), group in groups.items():
        if year is not None and group["year"] != year:
            continue
        inventors = group["rows"]
        given = [s for _, s in inventors if s is not None]
        if given and len(given) != len(inventors):
            raise BadShares(f"patent {pid} class {cls}: some shares given, some missing")
        if not given:
            inventors = [(c, 1.0 / len(inventors)) for c, _ in inventors]
        merged: dict = defaultdict(float)
        for c, s in inventors:
            merged[c] += s
        records.append(PatentRecord(group["year"], pid, cls, tuple(merged.items())))
    return records


def load_patents(path, year: int, counting: str = "fractional") -> ValuedMatrix:
    """Country x technology-class patent counts for one year.

    ``fractional`` credits each country with its inventor share;
    ``integer`` credits 1 to every country with at least one inventor. A
    patent in several classes counts fully in each of them.
    """
    if counting not in ("fractional", "integer"):
        raise ValueError("counting must be 'fractional' or 'integer'")
    cells: dict = defaultdict(float)
    for rec in read_patent_records(path, year):
        for country, share in rec.inventors:
            cells[(country, rec.tech_class)] += share if counting == "fractional" else 1.0
    if not cells:
        raise EmptyMatrix(f"{path}: no patents for year {year}")
    return _matrix(cells, ("country", "technology"), path)


@dataclass(frozen=True)
class ConcordanceTable:
    source: str
    target: str
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((str(s), str(t)) for s, t in self.pairs)
        if any(not s or not t for s, t in pairs):
            raise ValueError("concordance codes must be non-empty")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def truncated(self, source_digits: int | None = None, target_digits: int | None = None):
        """Collapse codes to a coarser level (e.g. SITC 5-digit to 3-digit)."""
        def cut(code, n):
            return code if n is None else code[:n]

        return ConcordanceTable(
            self.source,
            self.target,
            frozenset((cut(s, source_digits), cut(t, target_digits)) for s, t in self.pairs),
        )


def load_concordance(path, source: str, target: str) -> ConcordanceTable:
    rows = _rows(path, CONCORDANCE_HEADER)
    next(rows)
    pairs = set()
    for line, f in rows:
        if len(f) != 2 or not f[0] or not f[1]:
            raise ParseError("expected two non-empty codes", path, line)
        pairs.add((f[0], f[1]))
    return ConcordanceTable(source, target, frozenset(pairs))


def chain_concordances(tables: Sequence[ConcordanceTable]) -> ConcordanceTable:
    """Relational composition: (s, u) survives if some path s -> ... -> u exists."""
    if not tables:
        raise ValueError("need at least one concordance table")
    result = tables[0]
    for nxt in tables[1:]:
        if result.target != nxt.source:
            raise SchemeMismatch(
                f"cannot chain {result.source}->{result.target} with {nxt.source}->{nxt.target}"
            )
        forward = defaultdict(set)
        for s, t in nxt.pairs:
            forward[s].add(t)
        pairs = {(s, u) for s, t in result.pairs for u in forward.get(t, ())}
        result = ConcordanceTable(result.source, nxt.target, frozenset(pairs))
    return result


def concordance_to_incidence(
    table: ConcordanceTable,
    row_labels: Iterable[str],
    col_labels: Iterable[str],
    rows_are: str = "target",
    axis_kinds=("product", "technology"),
) -> BinaryIncidence:
    """0/1 matrix over the given labels, pruned.

    With the default ``rows_are="target"`` a pair (t, p) in a
    technology -> product table sets M[p, t] = 1.
    """
    if rows_are not in ("target", "source"):
        raise ValueError("rows_are must be 'target' or 'source'")
    rows = list(dict.fromkeys(row_labels))
    cols = list(dict.fromkeys(col_labels))
    if not rows or not cols:
        raise EmptyMatrix("label lists must be nonempty")
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    arr = np.zeros((len(rows), len(cols)))
    for s, t in table.pairs:
        r, c = (t, s) if rows_are == "target" else (s, t)
        if r in ri and c in ci:
            arr[ri[r], ci[c]] = 1.0
    return prune(LabeledMatrix(tuple(rows), tuple(cols), arr, tuple(axis_kinds)))


def load_panel(path, kind: str = "") -> IndexPanel:
    """Entity x year index table; blank cells are missing."""
    rows = _rows(path)
    _, header = next(rows)
    if len(header) < 2:
        raise ParseError("panel header needs an entity column and at least one year", path, 1)
    years = []
    for h in header[1:]:
        years.append(_year(h, path, 1))
    if any(b <= a for a, b in zip(years, years[1:])):
        raise ParseError("year columns must be strictly increasing", path, 1)
    entities, data = [], []
    for line, f in rows:
        if len(f) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(f)}", path, line)
        name = f[0]
        if not name:
            raise ParseError("empty entity name", path, line)
        if name in entities:
            raise DuplicateEntity(f"{path}:{line}: entity {name!r} appears twice")
        entities.append(name)
        data.append([np.nan if x == "" else _number(x, path, line, "value") for x in f[1:]])
    if not entities:
        raise ParseError("panel has no rows", path)
    return IndexPanel(tuple(entities), tuple(years), np.array(data, dtype=float), kind)


BUNDLED = {
    "ECI": "eci_panel.csv",
    "PatCI": "patci_panel.csv",
    "THCI": "thci_panel.csv",
}


def bundled_dir() -> Path:
    return Path(str(resources.files("helixcomplexity") / "data"))


def load_bundled(fixture_dir=None) -> dict[str, IndexPanel]:
    """The published 45-country ECI, PatCI and THCI tables for 2000-2014."""
    base = Path(fixture_dir) if fixture_dir is not None else bundled_dir()
    return {kind: load_panel(base / name, kind) for kind, name in BUNDLED.items()}


# Entity names in the bundled tables, keyed by ISO 3166 alpha-3.
ISO3 = {
    "ARG": "Argentina", "AUT": "Austria", "AUS": "Australia", "BEL": "Belgium",
    "BRA": "Brazil", "CAN": "Canada", "CHE": "Switzerland", "CHL": "Chile",
    "CHN": "China", "CZE": "Czech Republic", "DEU": "Germany", "DNK": "Denmark",
    "EST": "Estonia", "ESP": "Spain", "FIN": "Finland", "FRA": "France",
    "GBR": "United Kingdom", "GRC": "Greece", "HKG": "Hong Kong", "HUN": "Hungary",
    "IDN": "Indonesia", "IRL": "Ireland", "ISR": "Israel", "IND": "India",
    "ISL": "Iceland", "ITA": "Italy", "JPN": "Japan", "KOR": "Korea, Republic of",
    "LUX": "Luxembourg", "MEX": "Mexico", "MYS": "Malaysia", "NLD": "Netherlands",
    "NOR": "Norway", "NZL": "New Zealand", "POL": "Poland", "PRT": "Portugal",
    "ROU": "Romania", "RUS": "Russian Federation", "SWE": "Sweden", "SGP": "Singapore",
    "SVN": "Slovenia", "SVK": "Slovakia", "TUR": "Turkey", "USA": "United States",
    "ZAF": "South Africa",
}


def resolve_entity(panel: IndexPanel, code: str) -> str:
    """Accept either the entity name used in the panel or an ISO-3 code."""
    if code in panel.entities:
        return code
    name = ISO3.get(code.upper())
    if name in panel.entities:
        return name
    raise KeyError(f"entity {code!r} not in panel")
