import csv

import numpy as np
import pytest

from helixcomplexity import EmptyMatrix, LabeledMatrix, build_system, prune


def random_incidence(rng, n_rows, n_cols, density, kinds=("country", "product"), prefix=("c", "p")):
    raw = (rng.random((n_rows, n_cols)) < density).astype(float)
    return prune(
        LabeledMatrix(
            [f"{prefix[0]}{i:02d}" for i in range(n_rows)],
            [f"{prefix[1]}{j:02d}" for j in range(n_cols)],
            raw,
            kinds,
        )
    )


def random_system(rng, nc=None, np_=None, nt=None, density=None):
    """A valid tripartite system, retrying until joint pruning leaves >= 3 countries."""
    while True:
        c = nc or int(rng.integers(4, 12))
        p = np_ or int(rng.integers(4, 15))
        t = nt or int(rng.integers(4, 15))
        d = density or rng.uniform(0.25, 0.7)
        raw = [
            (rng.random(shape) < d).astype(float)
            for shape in ((c, p), (c, t), (p, t))
        ]
        cl = [f"c{i:02d}" for i in range(c)]
        pl = [f"p{i:02d}" for i in range(p)]
        tl = [f"t{i:02d}" for i in range(t)]
        try:
            s = build_system(
                LabeledMatrix(cl, pl, raw[0], ("country", "product")),
                LabeledMatrix(cl, tl, raw[1], ("country", "technology")),
                LabeledMatrix(pl, tl, raw[2], ("product", "technology")),
            )
        except EmptyMatrix:
            continue
        if len(s.countries) >= 3:
            return s


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(20170101)


# ---- acceptance summary: one PASS/FAIL line per criterion ----

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, text = marker.args
    ok, _ = _criteria.get(number, (True, text))
    _criteria[number] = (ok and rep.passed, text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        ok, text = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}")


# ---- synthetic input files for the command line ----

COUNTRIES = ("BRA", "DEU", "FRA", "JPN", "KOR", "USA")
# ten 3-digit groups that collapse to five 2-digit groups
PRODUCT_GROUPS = ("541", "542", "653", "711", "712", "713", "751", "752", "781", "782")
TECH_CLASSES = ("A61", "B60", "C07", "F02", "G01", "G06", "H01", "H04")
NACE = ("C20", "C21", "C26", "C27", "C28", "C29")


def synthetic_inputs(directory, seed=7):
    """Trade, patent and two-step concordance files for 2013 and 2014."""
    rng = np.random.default_rng(seed)
    trade_rows = []
    for year in (2013, 2014):
        for c in COUNTRIES:
            for g in PRODUCT_GROUPS:
                for sub in "12":
                    boost = 6.0 if rng.random() < 0.4 else 1.0
                    trade_rows.append((year, c, g + sub, round(float(rng.lognormal(3, 0.5) * boost), 2)))
    trade = write_csv(directory / "trade.csv", ("year", "country", "product_code", "value"), trade_rows)

    patent_rows = []
    for year in (2013, 2014):
        for k in range(60):
            pid = f"US{year}{k:04d}"
            classes = rng.choice(TECH_CLASSES, size=int(rng.integers(1, 3)), replace=False)
            inventors = rng.choice(COUNTRIES, size=int(rng.integers(1, 4)))
            for cls in sorted(classes):
                for c in inventors:
                    patent_rows.append((year, pid, cls, c, ""))
    patents = write_csv(directory / "patents.csv", ("year", "patent_id", "class", "country", "share"), patent_rows)

    step1 = sorted({(t, NACE[i % len(NACE)]) for i, t in enumerate(TECH_CLASSES)}
                   | {(t, str(rng.choice(NACE))) for t in TECH_CLASSES})
    step2 = sorted({(n, g + "1") for n in NACE for g in rng.choice(PRODUCT_GROUPS, size=3, replace=False)})
    c1 = write_csv(directory / "ipc_nace.csv", ("source_code", "target_code"), step1)
    c2 = write_csv(directory / "nace_sitc.csv", ("source_code", "target_code"), step2)
    return {"trade": trade, "patents": patents, "concordance": [c1, c2]}


def block_inputs(directory):
    """Two disconnected country blocks across trade, patents and concordance."""
    blocks = {("AAA", "BBB"): (("1111", "1121"), ("A01", "A02")),
              ("CCC", "DDD"): (("2211", "2221"), ("B01", "B02"))}
    trade_rows, patent_rows, conc_rows = [], [], []
    k = 0
    for countries, (products, techs) in blocks.items():
        for c in countries:
            for p in products:
                trade_rows.append((2014, c, p, 10))
            for t in techs:
                k += 1
                patent_rows.append((2014, f"P{k}", t, c, 1.0))
        conc_rows += [(t, p) for t in techs for p in products]
    return {
        "trade": write_csv(directory / "trade.csv", ("year", "country", "product_code", "value"), trade_rows),
        "patents": write_csv(directory / "patents.csv", ("year", "patent_id", "class", "country", "share"), patent_rows),
        "concordance": [write_csv(directory / "conc.csv", ("source_code", "target_code"), conc_rows)],
    }
