import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from essnormal import RationalMap
from essnormal.cli import main

from .conftest import GOLDEN

GOLDEN_SRC = "(z^2+2z+1)/(z^2-2z+5)"
GOLDEN_DATA = json.dumps({"n": 4, "a": [[0, 0], [1, 0], [0, 0], [1, 0], [0, 1]]})


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv, **kw):
    code, out, err = run(*argv, **kw)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize(
    "expr, verdict",
    [("z/2", "Compact"), ("z^2", "NotEssentiallyNormal"), (GOLDEN_SRC, "NonTriviallyEssentiallyNormal"), ("z", "OutOfScope")],
)
def test_check(expr, verdict, validate):
    obj = validate(run_json("check", expr), "classification")
    assert obj["verdict"] == verdict


def test_contact(validate):
    obj = validate(run_json("contact", GOLDEN_SRC), "contact_profile")
    assert obj["points"][0]["order"] == 4


def test_construct_golden(validate):
    obj = validate(run_json("construct", "--zeta", "1", "--steps", "0,1", "--tail", "i"), "construct")
    assert obj["expression"] == "(z^2+2*z+1)/(z^2-2*z+5)"
    assert RationalMap.from_json(obj["map"]) == GOLDEN


def test_construct_without_steps():
    obj = run_json("construct", "--tail", "i")
    assert obj["expression"] == "(-z-1)/(z-3)"


def test_decompose(validate):
    obj = validate(run_json("decompose", GOLDEN_SRC), "decompose")
    assert obj["certificate"] is True
    assert len(obj["basics"]) == 1 and obj["basics"][0]["order"] == 4


def test_combo(validate):
    obj = validate(run_json("combo", "--terms", "1:(1+z)/(3-z),-1:(1+z)/(3-z)"), "combination")
    assert obj["compact"] is True
    obj = run_json("combo", "--terms", f"1:{GOLDEN_SRC},-1:(1+z)/(3-z)")
    assert obj["compact"] is False


def test_commutator(validate):
    obj = validate(run_json("commutator", "z^2", "--sizes", "16,32"), "diagnostic")
    assert obj["verdict_hint"] == "non-decay"


def test_commutator_csv_stdout():
    code, out, _ = run("commutator", "z/2", "--sizes", "4", "--csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "k", "sigma"] and len(rows) == 5


def test_commutator_csv_file(tmp_path):
    path = tmp_path / "sv.csv"
    obj = run_json("commutator", "z/2", "--sizes", "4,8", "--csv", str(path))
    assert obj["sizes"] == [4, 8]
    assert len(path.read_text().splitlines()) == 1 + 4 + 8


def test_interp(validate):
    obj = validate(run_json("interp", "--data", GOLDEN_DATA), "interp")
    assert obj["chain"]["steps"] == [[0.0, 1.0], [0.0, 1.0]]
    F = RationalMap.from_json(obj["interpolant"])
    assert F.degree == 3


def test_interp_from_file(tmp_path):
    p = tmp_path / "data.json"
    p.write_text(GOLDEN_DATA)
    assert run_json("interp", "--data", f"@{p}")["chain"]["tail"] == [0.0, 1.0]


@pytest.mark.parametrize(
    "argv, error",
    [
        (("check", "2z"), "NotSelfMapOfDisk"),
        (("check", "z +"), "ParseError"),
        (("interp", "--data", '{"n":2,"a":[[0,0],[-1,0],[0,1]]}'), "NoSolution"),
        (("interp", "--data", "{bad json"), "ParseError"),
        (("interp", "--data", '{"n":3,"a":[0,1,0,1]}'), "InvalidCFData"),
        (("construct", "--steps", "0"), "ParseError"),
        (("construct", "--tail=-i"), "TailNotStrictlyUpper"),
        (("commutator", "z", "--sizes", "a,b"), "ParseError"),
        (("combo", "--terms", "z/2"), "ParseError"),
        (("interp", "--data", "@/nonexistent/file.json"), "ValidationError"),
    ],
)
def test_validation_errors_exit_2(argv, error, validate):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    obj = validate(json.loads(err), "error")
    assert obj["error"] == error


def test_parse_error_reports_position():
    _, _, err = run("check", "z + $")
    assert json.loads(err)["position"] == 4


def test_numerical_error_exits_3(validate):
    code, _, err = run("--eps-sep", "1e9", "interp", "--data", GOLDEN_DATA)
    assert code == 3
    assert validate(json.loads(err), "error")["error"] == "RegularValueSearchFailed"


def test_tolerance_override_changes_verdict():
    assert run_json("check", "(z+1)/2")["reason"] == "DerivativeNotOne"
    obj = run_json("--eps-derivative-one", "0.6", "check", "(z+1)/2")
    assert obj["verdict"] == "NonTriviallyEssentiallyNormal"


def test_json_request():
    req = {"command": "construct", "zeta": "1", "steps": "0,1", "tail": "i"}
    obj = run_json("--json", stdin=json.dumps(req))
    assert obj["expression"] == "(z^2+2*z+1)/(z^2-2*z+5)"


def test_json_request_with_tolerances_and_data():
    req = {"command": "check", "expr": "(z+1)/2", "tolerances": {"derivative_one": 0.6}}
    assert run_json("--json", stdin=json.dumps(req))["order"] == 2
    req = {"command": "interp", "data": json.loads(GOLDEN_DATA), "seed": 1}
    assert run_json("--json", stdin=json.dumps(req))["chain"]["tail"] == [0.0, 1.0]


def test_json_request_with_leading_minus():
    req = {"command": "check", "expr": "-z/2"}
    assert run_json("--json", stdin=json.dumps(req))["verdict"] == "Compact"
    req = {"command": "construct", "tail": "-1+i"}
    assert run_json("--json", stdin=json.dumps(req))["expression"]


@pytest.mark.parametrize("stdin", ["not json", "[1, 2]", '{"expr": "z"}'])
def test_bad_json_request(stdin):
    code, _, err = run("--json", stdin=stdin)
    assert code == 2
    assert json.loads(err)["error"] == "ParseError"


def test_missing_command():
    code, _, err = run()
    assert code == 2 and "usage" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "essnormal", "check", "z/2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "Compact"


def test_output_has_no_negative_zero():
    out = run_json("construct", "--tail", "i")
    flat = np.array(out["map"]["num"] + out["map"]["den"]).ravel()
    assert not any(np.signbit(x) and x == 0 for x in flat)
