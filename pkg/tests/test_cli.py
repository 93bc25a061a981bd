import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from helixcomplexity import __version__
from helixcomplexity.cli import main
from helixcomplexity.ingest import BUNDLED, bundled_dir

from conftest import block_inputs, synthetic_inputs, write_csv

pytestmark = pytest.mark.filterwarnings("ignore::helixcomplexity.SpectralWarning")


def read_index(path):
    rows = [line.rsplit(",", 1) for line in path.read_text().splitlines() if not line.startswith("#")]
    assert rows[0] == ["entity", "value"]
    return {name.strip('"'): float(v) for name, v in rows[1:]}


def read_table(path):
    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    return lines[0], [line.split(",") for line in lines[1:]]


@pytest.fixture
def files(tmp_path):
    return synthetic_inputs(tmp_path)


def thci_args(files, *extra):
    args = ["thci", "--year", "2014", "--trade", str(files["trade"]), "--patents", str(files["patents"])]
    for c in files["concordance"]:
        args += ["--concordance", str(c)]
    return args + list(extra)


def assert_standardized(values):
    v = np.array(list(values))
    assert abs(v.mean()) < 1e-9 and abs(v.std() - 1) < 1e-9


# ---- eci ----

def test_eci_synthetic(files, tmp_path):
    out = tmp_path / "eci.csv"
    assert main(["eci", "--year", "2014", "--trade", str(files["trade"]), "--out", str(out)]) == 0
    index = read_index(out)
    assert_standardized(index.values())
    header = [line for line in out.read_text().splitlines() if line.startswith("#")]
    assert header[0] == f"# helixcomplexity {__version__}"
    assert any(line.startswith("# rule: second_largest") for line in header)
    assert any(line.startswith("# eigenvalue: ") for line in header)
    report = json.loads((tmp_path / "eci.csv.report.json").read_text())
    assert report["index"] == "ECI" and "removed" in report and report["eigenvalue"] is not None


def test_eci_digit_levels_differ(files, tmp_path):
    out2, out3 = tmp_path / "e2.csv", tmp_path / "e3.csv"
    base = ["eci", "--year", "2014", "--trade", str(files["trade"])]
    assert main(base + ["--digits", "2", "--out", str(out2)]) == 0
    assert main(base + ["--digits", "3", "--out", str(out3)]) == 0
    a, b = read_index(out2), read_index(out3)
    assert_standardized(a.values())
    assert_standardized(b.values())
    assert a != b
    assert json.loads((tmp_path / "e2.csv.report.json").read_text())["shape"][1] == 5


def test_eci_uniform_is_degenerate(tmp_path, capsys):
    rows = [(2014, c, p, 100) for c in ("A", "B", "C") for p in ("1111", "2222", "3333")]
    path = write_csv(tmp_path / "t.csv", ("year", "country", "product_code", "value"), rows)
    assert main(["eci", "--year", "2014", "--trade", str(path)]) == 3
    assert "DegenerateSpectrum" in capsys.readouterr().err


def test_eci_unknown_year(files):
    assert main(["eci", "--year", "1990", "--trade", str(files["trade"])]) == 2


def test_eci_to_stdout(files, capsys):
    assert main(["eci", "--year", "2014", "--trade", str(files["trade"])]) == 0
    out = capsys.readouterr().out
    assert "entity,value" in out and out.startswith("# helixcomplexity")


# ---- patci ----

@pytest.mark.parametrize("counting", ["fractional", "integer"])
def test_patci_counting_modes(files, tmp_path, counting):
    out = tmp_path / f"{counting}.csv"
    args = ["patci", "--year", "2014", "--patents", str(files["patents"]), "--counting", counting, "--out", str(out)]
    assert main(args) == 0
    assert_standardized(read_index(out).values())


def test_patci_bad_shares(tmp_path, capsys):
    path = write_csv(tmp_path / "p.csv", ("year", "patent_id", "class", "country", "share"),
                     [(2014, "X", "G06", "US", 0.7), (2014, "X", "G06", "DE", 0.7)])
    assert main(["patci", "--year", "2014", "--patents", str(path)]) == 2
    assert "BadShares" in capsys.readouterr().err


def test_patci_single_country(tmp_path):
    rows = [(2014, f"P{k}", cls, "US", 1.0) for k, cls in enumerate(["A61", "G06", "H04"])]
    path = write_csv(tmp_path / "p.csv", ("year", "patent_id", "class", "country", "share"), rows)
    assert main(["patci", "--year", "2014", "--patents", str(path)]) == 3


# ---- thci ----

def test_thci_synthetic(files, tmp_path):
    out = tmp_path / "thci.csv"
    assert main(thci_args(files, "--out", str(out))) == 0
    index = read_index(out)
    assert_standardized(index.values())
    report = json.loads((tmp_path / "thci.csv.report.json").read_text())
    assert report["rule"] == "largest_below_one"
    for side in ("clockwise", "counterclockwise"):
        vec = np.array(list(report[side]["eigenvector"].values()))
        assert abs(np.linalg.norm(vec) - 1) < 1e-12
        assert abs(report[side]["eigenvalue"]) < 1
    assert set(report["removed"]) == {"country_product", "country_technology", "product_technology", "joint"}


def test_thci_disjoint_countries(files, tmp_path, capsys):
    rows = [(2014, f"P{k}", cls, c, 1.0) for k, (cls, c) in enumerate([("A61", "XXA"), ("G06", "XXB"), ("H04", "XXC")])]
    files["patents"] = write_csv(tmp_path / "other.csv", ("year", "patent_id", "class", "country", "share"), rows)
    assert main(thci_args(files)) == 2
    assert "NoOverlap" in capsys.readouterr().err


def test_thci_block_pattern(tmp_path):
    files = block_inputs(tmp_path)
    out = tmp_path / "thci.csv"
    assert main(thci_args(files, "--rule", "second-largest", "--out", str(out))) == 0
    assert read_index(out) == pytest.approx({"AAA": 1.0, "BBB": 1.0, "CCC": -1.0, "DDD": -1.0}, abs=1e-12)


def test_thci_block_default_rule_degenerate(tmp_path):
    assert main(thci_args(block_inputs(tmp_path))) == 3


# ---- determinism and validation ----

@pytest.mark.parametrize("command", ["eci", "patci", "thci"])
def test_byte_identical_reruns(files, tmp_path, command):
    if command == "thci":
        args = thci_args(files)
    elif command == "eci":
        args = ["eci", "--year", "2014", "--trade", str(files["trade"])]
    else:
        args = ["patci", "--year", "2014", "--patents", str(files["patents"])]
    out = tmp_path / "out.csv"
    assert main(args + ["--out", str(out)]) == 0
    first = out.read_bytes(), (tmp_path / "out.csv.report.json").read_bytes()
    assert main(args + ["--out", str(out)]) == 0
    assert (out.read_bytes(), (tmp_path / "out.csv.report.json").read_bytes()) == first


def test_validation_before_loading(files, tmp_path):
    # the trade file is fine, the missing concordance must be caught first
    out = tmp_path / "never.csv"
    args = ["thci", "--year", "2014", "--trade", str(files["trade"]), "--patents", str(files["patents"]),
            "--concordance", str(tmp_path / "missing.csv"), "--out", str(out)]
    assert main(args) == 2
    assert not out.exists()


def test_bad_threshold(files):
    assert main(["eci", "--year", "2014", "--trade", str(files["trade"]), "--threshold", "0"]) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["eci", "--year", "2014"])
    assert info.value.code == 2


# ---- correlate ----

def test_correlate_cross_section(tmp_path):
    out = tmp_path / "t1.csv"
    assert main(["correlate", "--bundled", "--cross-section", "2014", "--out", str(out)]) == 0
    header, rows = read_table(out)
    assert header == "pair,year,n,coefficient"
    got = {r[0]: float(r[3]) for r in rows}
    assert got["ECI-PatCI"] == pytest.approx(0.525, abs=0.005)
    assert got["ECI-THCI"] == pytest.approx(0.774, abs=0.005)
    assert all(r[2] == "45" for r in rows)


def test_correlate_lagged_usa(tmp_path):
    out = tmp_path / "t3.csv"
    args = ["correlate", "--bundled", "THCI", "ECI", "--lagged", "--entity", "USA", "--lag", "2", "--out", str(out)]
    assert main(args) == 0
    header, rows = read_table(out)
    assert header == "pair,lag,n,coefficient"
    assert rows[0][0] == "THCI-ECI" and float(rows[0][3]) == pytest.approx(0.582, abs=0.02)


def test_correlate_series(tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["correlate", "--bundled", "ECI", "PatCI", "--series", "--out", str(out)]) == 0
    _, rows = read_table(out)
    assert [int(r[1]) for r in rows] == list(range(2000, 2015))


def test_correlate_panel_files(tmp_path):
    a = write_csv(tmp_path / "a.csv", ["entity", "2000"], [["X", "1"], ["Y", "2"], ["Z", "3"]])
    b = write_csv(tmp_path / "b.csv", ["entity", "2000"], [["X", "1"], ["Y", "3"], ["Z", "2"]])
    out = tmp_path / "r.csv"
    assert main(["correlate", "--panel", str(a), "--panel", str(b), "--cross-section", "2000", "--out", str(out)]) == 0
    assert read_table(out)[1] == [["a-b", "2000", "3", "0.5"]]


def test_correlate_insufficient_overlap(tmp_path):
    a = write_csv(tmp_path / "a.csv", ["entity", "2000"], [["X", "1"], ["Y", "2"]])
    assert main(["correlate", "--panel", str(a), "--panel", str(a), "--cross-section", "2000"]) == 2


def test_correlate_unknown_entity():
    assert main(["correlate", "--bundled", "--lagged", "--entity", "XYZ"]) == 2


# ---- reproduce ----

def test_reproduce_clean(capsys):
    assert main(["reproduce"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.strip().endswith("checks passed")


def test_reproduce_perturbed_fixture(tmp_path, capsys):
    fixtures = tmp_path / "fixtures"
    shutil.copytree(bundled_dir(), fixtures)
    path = fixtures / BUNDLED["ECI"]
    lines = path.read_text().splitlines()
    cells = lines[1].split(",")
    cells[5] = repr(float(cells[5]) + 1.0)
    lines[1] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n")
    assert main(["reproduce", "--fixtures", str(fixtures)]) == 1
    fails = [line for line in capsys.readouterr().out.splitlines() if line.startswith("FAIL")]
    assert fails and all("diff" in line for line in fails)


def test_reproduce_missing_directory(tmp_path):
    assert main(["reproduce", "--fixtures", str(tmp_path / "nowhere")]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "helixcomplexity", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
