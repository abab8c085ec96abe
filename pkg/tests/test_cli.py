import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from toricgcd.cli import run
from toricgcd.lattice_fan import standard_fan

GOLDEN = Path(__file__).parent / "golden"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def p1xp1_file(tmp_path):
    path = tmp_path / "p1xp1.json"
    path.write_text(standard_fan("P1xP1").to_json())
    return str(path)


def test_beta_command(capsys, p1xp1_file):
    code, out, _ = call(capsys, "beta", "--fan", p1xp1_file, "--blowup-center", "1,2",
                        "--L", "anticanonical", "--F", "pullback:3")
    assert code == 0
    obj = json.loads(out)
    assert obj["beta"] == "19/21"
    assert obj["gamma_eff"] == "2"


def test_gamma_eff_command(capsys):
    code, out, _ = call(capsys, "gamma-eff", "--fan", "P1xP1", "--blowup-center", "1,2",
                        "--L", "2*pullback:2+3*pullback:3", "--F", "exceptional")
    assert code == 0 and json.loads(out) == {"gamma_eff": "5"}


def test_fan_validate_rejects_non_primitive(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "rays": [[2, 0], [0, 1], [-1, -1]],
                               "max_cones": [[0, 1], [1, 2], [0, 2]]}))
    code, out, err = call(capsys, "fan-validate", "--fan", str(bad))
    assert code == 1 and out == ""
    obj = json.loads(err)
    assert obj["code"] == "NonPrimitiveRay" and obj["ray"] == [2, 0]


def test_fan_validate_ok(capsys):
    code, out, _ = call(capsys, "fan-validate", "--fan", "F2")
    assert code == 0
    assert json.loads(out)["smooth"] is True


def test_usage_errors(capsys):
    assert call(capsys, "beta", "--bogus")[0] == 2
    assert call(capsys)[0] == 2
    code, _, err = call(capsys, "examples", "nope")
    assert code == 1 and json.loads(err)["code"] == "UnknownExample"


def test_validation_error_for_bad_center(capsys):
    code, _, err = call(capsys, "blowup", "--fan", "P1xP1", "--center", "0,2")
    assert code == 1 and json.loads(err)["code"] == "NotACone"


def test_blowup_command(capsys):
    code, out, _ = call(capsys, "blowup", "--fan", "P2", "--center", "0,2")
    assert code == 0
    assert json.loads(out)["new_ray"] == [0, -1]


def test_polytope_command_and_svg(capsys, tmp_path):
    svg = tmp_path / "p.svg"
    code, out, _ = call(capsys, "polytope", "--fan", "P1xP1", "--blowup-center", "1,2", "--svg", str(svg))
    assert code == 0
    obj = json.loads(out)
    assert obj["volume"] == "7/2" and obj["volume_divisor"] == "7" and obj["lattice_points"] == 8
    assert "<polygon" in svg.read_text()


def test_gcd_bound_command(capsys):
    code, out, _ = call(capsys, "gcd-bound", "--fan", "P1xP1", "--blowup-center", "1,2",
                        "--epsilon", "1/100", "--beta-lower-bound", "7/8")
    assert code == 0
    obj = json.loads(out)
    assert obj["gamma"] == "21/19" and obj["delta"] == "2/19"
    assert obj["coeff_height"] == "219/2119"
    assert obj["beta_lower_bound"]["holds"] is True


def test_gcd_check_command(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = call(capsys, "gcd-check", "--grid", "20", "--places", "inf,2", "--csv", str(path))
    assert code == 0
    obj = json.loads(out)
    assert obj["samples"] == 400
    assert obj["places"] == ["inf", "2"]
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 400 and set(rows[0]) == {"alpha", "beta", "lhs", "rhs", "excess"}


@pytest.mark.parametrize("name,extra", [("p2-point", []), ("p1xp1-point", ["--a", "1", "--b", "1"]),
                                        ("p1xp1-gcd", [])])
def test_examples_match_golden(capsys, name, extra):
    code, out, _ = call(capsys, "examples", name, *extra)
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / f"{name}.json").read_text())
    assert json.loads(out)["match"] is True


def test_example_values(capsys):
    _, out, _ = call(capsys, "examples", "p2-point", "--a-values", "1")
    assert json.loads(out)["computed"]["cases"][0]["beta"] == "2/3"
    _, out, _ = call(capsys, "examples", "p1xp1-gcd")
    comp = json.loads(out)["computed"]
    assert comp["gamma"] == "21/19" and comp["delta"] == "2/19"
    assert [b["beta"] for b in comp["betas"]] == ["19/21"] * 4


def test_output_is_byte_deterministic():
    argv = [sys.executable, "-m", "toricgcd", "examples", "p1xp1-gcd"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert first == (GOLDEN / "p1xp1-gcd.json").read_bytes()


def test_module_exit_codes():
    bad = subprocess.run([sys.executable, "-m", "toricgcd", "examples", "nope"], capture_output=True)
    assert bad.returncode == 1
    usage = subprocess.run([sys.executable, "-m", "toricgcd", "frobnicate"], capture_output=True)
    assert usage.returncode == 2
