"""Command line front end.

Exit codes: 0 success, 1 a reproduction check failed, 2 input or data
error, 3 the index is mathematically undefined for the data.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import DataError, DegeneracyError
from .ingest import (
    BUNDLED,
    bundled_dir,
    chain_concordances,
    concordance_to_incidence,
    load_concordance,
    load_panel,
    load_patents,
    load_trade,
    resolve_entity,
)
from .rca import binarize, rca
from .reflections import complexity_index, normalize_rule
from .reproduce import run_checks
from .stats import correlation_series, cross_section_correlate, lagged_correlate
from .triple_helix import build_system, rotations, thci

log = logging.getLogger("helixcomplexity")

DEFAULT_RULE = {"eci": "second_largest", "patci": "second_largest", "thci": "largest_below_one"}


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    year: int | None = None
    digits: int = 3
    counting: str = "fractional"
    rule: str = "second_largest"
    threshold: float = 1.0
    out: Path | None = None
    verbosity: int = 0
    options: dict = field(default_factory=dict)
    argv: tuple = ()


def _shared(p: argparse.ArgumentParser, index: bool = True) -> None:
    if index:
        p.add_argument("--year", type=int, required=True)
        p.add_argument("--digits", type=int, choices=(2, 3), default=3)
        p.add_argument("--counting", choices=("fractional", "integer"), default="fractional")
        p.add_argument("--rule", choices=("second-largest", "largest-below-one"))
        p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument("--out", type=Path, help="output file (default: standard output)")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helixcomplexity",
        description="Economic, patent and Triple-Helix complexity indices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eci", help="Economic Complexity Index from a trade file")
    p.add_argument("--trade", type=Path, required=True)
    _shared(p)

    p = sub.add_parser("patci", help="Patent Complexity Index from a patent file")
    p.add_argument("--patents", type=Path, required=True)
    _shared(p)

    p = sub.add_parser("thci", help="Triple-Helix Complexity Index")
    p.add_argument("--trade", type=Path, required=True)
    p.add_argument("--patents", type=Path, required=True)
    p.add_argument(
        "--concordance", type=Path, action="append", required=True,
        help="concordance table; repeat to chain technology -> ... -> product",
    )
    _shared(p)

    p = sub.add_parser("correlate", help="correlations between index panels")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--panel", type=Path, action="append", help="panel file (repeat)")
    src.add_argument(
        "--bundled", nargs="*", choices=tuple(BUNDLED), metavar="KIND",
        help="use the bundled published panels, in the given order (default: ECI PatCI THCI)",
    )
    p.add_argument("--method", choices=("pearson", "spearman"))
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--cross-section", type=int, metavar="YEAR")
    mode.add_argument("--lagged", action="store_true")
    mode.add_argument("--series", action="store_true")
    p.add_argument("--entity")
    p.add_argument("--lag", type=int, default=0)
    _shared(p, index=False)

    p = sub.add_parser("reproduce", help="check the published correlations")
    p.add_argument("--fixtures", type=Path, help="directory with the bundled panel CSV files")
    _shared(p, index=False)
    return parser


def validate(args: argparse.Namespace, argv) -> RunConfig:
    """Turn parsed arguments into a RunConfig; touches the filesystem only to stat paths."""
    cfg = RunConfig(command=args.command, out=args.out, verbosity=args.verbose, argv=tuple(argv))
    if args.command in DEFAULT_RULE:
        cfg.year = args.year
        cfg.digits = args.digits
        cfg.counting = args.counting
        cfg.rule = normalize_rule(args.rule) if args.rule else DEFAULT_RULE[args.command]
        if not args.threshold > 0:
            raise DataError("--threshold must be positive")
        cfg.threshold = args.threshold
        for name in ("trade", "patents"):
            if getattr(args, name, None) is not None:
                cfg.inputs[name] = args.__dict__[name]
        if args.command == "thci":
            cfg.inputs["concordance"] = list(args.concordance)
    elif args.command == "correlate":
        if args.panel is not None:
            if len(args.panel) < 2:
                raise DataError("correlate needs at least two --panel files")
            cfg.inputs["panels"] = [(path.stem, path) for path in args.panel]
        else:
            kinds = args.bundled or list(BUNDLED)
            if len(kinds) < 2:
                raise DataError("correlate needs at least two panels")
            cfg.inputs["panels"] = [(k, bundled_dir() / BUNDLED[k]) for k in kinds]
        if args.lagged and args.entity is None:
            raise DataError("--lagged requires --entity")
        if args.lagged:
            mode = "lagged"
        elif args.series:
            mode = "series"
        else:
            mode = "cross_section"
        method = args.method or ("spearman" if mode == "lagged" else "pearson")
        cfg.options = {
            "mode": mode, "method": method, "entity": args.entity,
            "lag": args.lag, "year": args.cross_section,
        }
    elif args.command == "reproduce":
        cfg.inputs["fixtures"] = args.fixtures

    for value in cfg.inputs.values():
        paths = value if isinstance(value, list) else [value]
        for path in paths:
            if isinstance(path, tuple):
                path = path[1]
            if path is None:
                continue
            if cfg.command == "reproduce":
                if not Path(path).is_dir():
                    raise DataError(f"fixture directory not found: {path}")
            elif not Path(path).is_file():
                raise DataError(f"input file not found: {path}")
    return cfg


def _header(cfg: RunConfig, extra: dict) -> str:
    lines = [f"# helixcomplexity {__version__}", "# command: " + " ".join(cfg.argv)]
    lines += [f"# {k}: {v}" for k, v in extra.items()]
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str, report: dict | None = None) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        if report is not None and cfg.verbosity:
            sys.stderr.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with open(cfg.out, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)
    if report is not None:
        sidecar = cfg.out.with_name(cfg.out.name + ".report.json")
        with open(sidecar, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _index_csv(index) -> str:
    buf = io.StringIO()
    buf.write("entity,value\n")
    for label, value in zip(index.labels, index.values.tolist()):
        buf.write(f"{_csv_field(label)},{value!r}\n")
    return buf.getvalue()


def _csv_field(text: str) -> str:
    return f'"{text}"' if ("," in text or '"' in text) else text


def _bipartite(cfg: RunConfig, values, side_kind: str) -> int:
    incidence = binarize(rca(values), cfg.threshold)
    index = complexity_index(incidence, "rows", cfg.rule, cfg.year)
    report = {
        "index": index.kind,
        "year": cfg.year,
        "rule": cfg.rule,
        "eigenvalue": index.eigenvalue,
        "threshold": cfg.threshold,
        "shape": list(incidence.shape),
        "removed": {"country": list(incidence.removed_rows), side_kind: list(incidence.removed_cols)},
    }
    header = _header(cfg, {"index": index.kind, "rule": cfg.rule, "eigenvalue": repr(index.eigenvalue)})
    _emit(cfg, header + _index_csv(index), report)
    return 0


def cmd_eci(cfg: RunConfig) -> int:
    trade = load_trade(cfg.inputs["trade"], cfg.year, cfg.digits)
    return _bipartite(cfg, trade, "product")


def cmd_patci(cfg: RunConfig) -> int:
    patents = load_patents(cfg.inputs["patents"], cfg.year, cfg.counting)
    return _bipartite(cfg, patents, "technology")


def cmd_thci(cfg: RunConfig) -> int:
    m_cp = binarize(rca(load_trade(cfg.inputs["trade"], cfg.year, cfg.digits)), cfg.threshold)
    m_ct = binarize(rca(load_patents(cfg.inputs["patents"], cfg.year, cfg.counting)), cfg.threshold)
    paths = cfg.inputs["concordance"]
    schemes = [f"step{i}" for i in range(len(paths) + 1)]
    tables = [load_concordance(p, schemes[i], schemes[i + 1]) for i, p in enumerate(paths)]
    chain = chain_concordances(tables).truncated(target_digits=cfg.digits)
    m_pt = concordance_to_incidence(chain, m_cp.col_labels, m_ct.col_labels)
    system = build_system(m_cp, m_ct, m_pt)
    plus, minus = rotations(system, cfg.rule)
    index = thci(system, cfg.rule, cfg.year)
    removed = {
        "country_product": {"country": list(m_cp.removed_rows), "product": list(m_cp.removed_cols)},
        "country_technology": {"country": list(m_ct.removed_rows), "technology": list(m_ct.removed_cols)},
        "product_technology": {"product": list(m_pt.removed_rows), "technology": list(m_pt.removed_cols)},
        "joint": {axis: list(labels) for axis, labels in system.removed.items()},
    }
    report = {
        "index": "THCI",
        "year": cfg.year,
        "rule": cfg.rule,
        "threshold": cfg.threshold,
        "clockwise": {"eigenvalue": plus.eigenvalue, "eigenvector": dict(zip(system.countries, plus.eigenvector.tolist())),
                      "warnings": list(plus.warnings)},
        "counterclockwise": {"eigenvalue": minus.eigenvalue, "eigenvector": dict(zip(system.countries, minus.eigenvector.tolist())),
                             "warnings": list(minus.warnings)},
        "removed": removed,
    }
    header = _header(cfg, {
        "index": "THCI", "rule": cfg.rule,
        "eigenvalue_clockwise": repr(plus.eigenvalue),
        "eigenvalue_counterclockwise": repr(minus.eigenvalue),
    })
    _emit(cfg, header + _index_csv(index), report)
    return 0


def cmd_correlate(cfg: RunConfig) -> int:
    opts = cfg.options
    panels = [(name, load_panel(path, name)) for name, path in cfg.inputs["panels"]]
    method = opts["method"]
    buf = io.StringIO()
    pairs = [(panels[i], panels[j]) for i in range(len(panels)) for j in range(i + 1, len(panels))]
    if opts["mode"] == "cross_section":
        year = opts["year"]
        matrix = cross_section_correlate([p for _, p in panels], year, method)
        buf.write("pair,year,n,coefficient\n")
        for i in range(len(panels)):
            for j in range(i + 1, len(panels)):
                r = matrix[i][j]
                buf.write(f"{panels[i][0]}-{panels[j][0]},{year},{r.n_pairs},{r.coefficient!r}\n")
    elif opts["mode"] == "series":
        buf.write("pair,year,n,coefficient\n")
        for (na, a), (nb, b) in pairs:
            series = correlation_series(a, b, method)
            for year, reason in series.skipped:
                log.warning("%s-%s %s skipped: %s", na, nb, year, reason)
            for r in series:
                buf.write(f"{na}-{nb},{r.year},{r.n_pairs},{r.coefficient!r}\n")
    else:
        buf.write("pair,lag,n,coefficient\n")
        for (na, a), (nb, b) in pairs:
            ea = resolve_entity(a, opts["entity"])
            eb = resolve_entity(b, opts["entity"])
            r = lagged_correlate(a.series(ea), b.series(eb), method, opts["lag"])
            buf.write(f"{na}-{nb},{opts['lag']},{r.n_pairs},{r.coefficient!r}\n")
    header = _header(cfg, {"method": method, "mode": opts["mode"]})
    _emit(cfg, header + buf.getvalue())
    return 0


def cmd_reproduce(cfg: RunConfig) -> int:
    checks = run_checks(cfg.inputs.get("fixtures"))
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0 if failed == 0 else 1


COMMANDS = {
    "eci": cmd_eci,
    "patci": cmd_patci,
    "thci": cmd_thci,
    "correlate": cmd_correlate,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        cfg = validate(args, argv)
        return COMMANDS[cfg.command](cfg)
    except DegeneracyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (DataError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
