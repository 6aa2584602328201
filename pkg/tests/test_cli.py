import csv
import io
import json
import math
import subprocess
import sys

import pytest

from cantor_fiber.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_code_examples(capsys):
    code, out, _ = run(capsys, "code", "--t", "1/2", "--lambda", "1/4", "--digits", "6")
    res = json.loads(out)
    assert code == 0 and res["digits"] == "1,-1,-1,-1,-1,-1" and res["status"] == "unique"
    code, out, _ = run(capsys, "code", "--t", "1/3", "--lambda", "3/10", "--digits", "6")
    assert code == 2 and json.loads(out)["status"] == "not_member"
    code, out, _ = run(capsys, "code", "--t", "0", "--lambda", "1/5", "--digits", "4")
    assert code == 0 and json.loads(out)["digits"] == "0,0,0,0"


def test_boundary_coding_exits_zero(capsys):
    code, out, _ = run(capsys, "code", "--t", "1/9", "--lambda", "1/3", "--digits", "4", "--mode", "lazy")
    assert code == 0 and json.loads(out)["status"] == "boundary_lazy"


@pytest.mark.parametrize("argv", [
    ["code", "--t", "abc", "--lambda", "1/4"],
    ["code", "--t", "1/2"],
    ["code", "--t", "1/2", "--lambda", "1/2"],
    ["solve", "--coding", "1,x", "--t", "1/2"],
    ["cover", "--t", "1/2", "--window", "0.3"],
    ["cover", "--t", "1/2", "--depth", "-1"],
    ["gamma", "--grid", "10by4"],
    ["dim"],
    ["code", "--t", "1/2", "--lambda", "1/4", "--precision", "10"],
    ["nonsense"],
])
def test_input_errors_exit_one_with_json(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    last = err.strip().splitlines()[-1]
    assert "error" in json.loads(last)


def test_cover_example(capsys):
    code, out, _ = run(capsys, "cover", "--t", "1/2", "--depth", "10")
    res = json.loads(out)
    assert code == 0 and abs(float(res["min"]) - 0.25) < 1e-3
    assert res["max"].startswith("0.33333333333333333333333333333")
    assert not res["truncated"]


def test_cover_budget_exhaustion(capsys):
    code, out, _ = run(capsys, "cover", "--t", "1/2", "--depth", "10", "--budget", "500")
    assert code == 3 and json.loads(out)["truncated"]


def test_solve_example(capsys):
    code, out, _ = run(capsys, "solve", "--coding", "1,-1,-1:1", "--t", "1/2")
    roots = json.loads(out)["roots"]
    assert code == 0 and len(roots) == 1
    assert abs(float(roots[0]["lambda"]["value"]) - 0.2696) < 5e-4
    code, out, _ = run(capsys, "solve", "--coding", "1", "--t", "1/2")
    assert code == 2 and json.loads(out)["roots"] == []


def test_dim_variants(capsys):
    _, out, _ = run(capsys, "dim", "--level-set-beta", "0")
    assert json.loads(out)["hausdorff"].startswith("0.630929")
    _, out, _ = run(capsys, "dim", "--lambda", "1/3")
    assert float(json.loads(out)["hausdorff"]) == 1
    _, out, _ = run(capsys, "dim", "--coding", "0,1", "--lambda", "1/3")
    assert json.loads(out)["flags"] == ["double_coding"]
    _, out, _ = run(capsys, "dim", "--q", "2", "--lambda", "0.3")
    assert float(json.loads(out)["hausdorff"]) == pytest.approx(math.log(6) / (-3 * math.log(0.3)))
    code, out, _ = run(capsys, "dim", "--t", "1/2", "--window", "0.295,0.305", "--depth", "10")
    assert code == 0 and json.loads(out)["formula"] == "boxcount"


def test_csv_outputs(capsys):
    _, out, _ = run(capsys, "psi", "--t", "1/2", "--depth", "8", "--samples", "5")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lambda", "psi"] and len(rows) == 6 and float(rows[-1][1]) == 1.0
    _, out, _ = run(capsys, "gamma", "--depth", "2", "--grid", "3x3")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lambda", "t_lo", "t_hi", "word"]
    _, out, _ = run(capsys, "sigma", "--q", "1", "--m", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["m", "r_m", "freq_r", "ell_m", "freq_ell"] and rows[1][:2] == ["1", "6"]


def test_json_numbers_carry_enough_digits(capsys):
    for bits in (64, 128, 256):
        _, out, _ = run(capsys, "dim", "--lambda", "0.3", "--precision", str(bits))
        digits = json.loads(out)["hausdorff"].split(".")[1]
        assert len(digits) >= math.ceil(bits * math.log10(2)) - 2


@pytest.mark.parametrize("argv", [
    ["cover", "--t", "1/2", "--depth", "8"],
    ["psi", "--t", "0.4", "--depth", "8", "--samples", "7"],
    ["gamma", "--depth", "3", "--grid", "4x4", "--format", "json"],
    ["code", "--t", "0.3", "--lambda", "0.29", "--digits", "20"],
])
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_out_file_and_console_script(tmp_path):
    target = tmp_path / "s.csv"
    proc = subprocess.run([sys.executable, "-m", "cantor_fiber.cli", "sigma", "--q", "1", "--m", "2",
                           "--out", str(target)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    assert target.read_text().startswith("m,r_m,freq_r,ell_m,freq_ell\n")


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1,9")
    assert code == 0 and out.count("[PASS]") == 2
    code, _, _ = run(capsys, "verify", "--only", "99")
    assert code == 1
