import json
import math
import subprocess
import sys

import pytest

from nhqsl.cli import main

from conftest import TAU_WPT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_wpt(capsys):
    code, out, _ = run(capsys, "wpt", "--format", "json")
    assert code == 0
    doc = json.loads(out)[0]
    assert doc["regime"] == "PTSymmetric" and doc["tau_min"] == pytest.approx(TAU_WPT)


def test_fis(capsys):
    code, out, _ = run(capsys, "fis", "--format", "json")
    doc = json.loads(out)[0]
    assert code == 0 and doc["tau"] == pytest.approx(TAU_WPT, abs=1e-8)
    assert doc["f_ml"] == pytest.approx(math.pi / 2)


def test_bounds_two_level(capsys):
    code, out, _ = run(capsys, "bounds", "--mu", "1", "--nu", "0.5", "--alpha", str(math.pi / 4),
                       "--time", "1.0", "--format", "json")
    doc = json.loads(out)[0]
    assert code == 0
    assert doc["tau_g"] == pytest.approx(4.975246994592061, abs=1e-9)
    assert doc["f_wml"] >= doc["f_ml"]


def test_two_level_csv(capsys):
    code, out, _ = run(capsys, "two-level", "--mu", "1", "--nu", "0.3", "--n", "5")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,f_ml,f_mt,f_g" and len(lines) == 6


def test_scan(capsys):
    code, out, _ = run(capsys, "scan-regions", "--theta-grid", "4", "--alpha-grid", "3", "--format", "json")
    cells = json.loads(out)
    assert code == 0 and len(cells) == 12
    assert all((c["region"] == "C") == (c["delta_tau"] is None) for c in cells)


def test_near_fis(capsys):
    code, out, _ = run(capsys, "near-fis", "--ratio-alpha", "0.8", "--delta", "0.01", "--format", "json")
    doc = json.loads(out)[0]
    assert code == 0 and doc["alpha_ratio"] < 1 and doc["f_mt"] > math.pi / 2
    code, out, _ = run(capsys, "near-fis", "--ratio-alpha", "1.1", "--k", "16", "--format", "json")
    doc = json.loads(out)[0]
    assert code == 0 and doc["alpha_ratio"] > 1


def test_scatter_stdout_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "scatter", "--n", "20", "--seed", "5", "--inject-fis")
    assert code == 0
    lines = out.splitlines()
    assert lines[1].startswith("state_id,tau,f_ml,f_mt,c_re_0")
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "scatter", "--n", "20", "--seed", "5", "--inject-fis", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text() == "\n".join(lines) + "\n"


@pytest.mark.parametrize("argv,code", [
    (["bogus"], 2),
    (["wpt", "--kappa", "-1"], 2),
    (["scatter", "--n", "0"], 2),
    (["two-level"], 2),
    (["near-fis", "--ratio-alpha", "0.8", "--gammas", "0.1,0,0.2"], 2),
    (["bounds", "--kappa", str(1 / math.sqrt(2)), "--eta", "1"], 3),
    (["near-fis", "--ratio-alpha", "3", "--k", "1", "--gammas", "0.01,0.02", "--tau", "0.1"], 3),
    (["fis", "--kappa", "0", "--eta", "0"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code


def test_io_exit_code(capsys, tmp_path):
    assert main(["scatter", "--n", "2", "--out", str(tmp_path / "no" / "x.csv")]) == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nhqsl", "wpt"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("regime,")
