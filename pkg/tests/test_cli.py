import io
import json
import subprocess
import sys

import jsonschema
import pytest

from qfedder.cli import run
from qfedder.report import REPORT_SCHEMA

EX1 = ["qfr", "--p", "2", "--vars", "x,y,z", "--n", "2", "--c", "x^4", "--e-range", "1..8",
       "--witness", "x^7*y^15*z", "z^2+x^3+y^2*z"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_fpure_text():
    code, out, _ = call("fpure", "--p", "2", "--vars", "x,y", "x*y")
    assert code == 0
    assert "verdict: F_PURE" in out
    assert "certificate.escaping_monomial: x*y" in out


def test_cubic_certificate_replay():
    code, out, _ = call(*EX1, "--json")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["verdict"] == "QFR_CERTIFIED"
    assert rep["parameters"]["e"] == 6
    cert = rep["certificate"]
    assert cert["escaping_monomial"] == "x*y*z" and cert["escaping_coefficient"] == 2
    assert cert["index_convention"] == "e+n-2"
    assert cert["multiplier"] == "x^7*y^15*z"


def test_height_fermat():
    code, out, _ = call("height", "--p", "2", "--vars", "x,y,z", "--n", "5", "--json", "x^3+y^3+z^3")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["verdict"] == "HEIGHT" and rep["certificate"]["height"] == 2


@pytest.mark.parametrize("argv", [
    ["fpure", "--p", "4", "--vars", "x", "x"],
    ["fpure", "--p", "2", "--vars", "x", "x +"],
    ["fpure", "--p", "2", "--vars", "x", "--bogus", "x"],
    ["fpure", "--p", "2", "--vars", "x", "y"],
    ["qfr", "--p", "2", "--vars", "x", "x"],
    ["qfr", "--p", "2", "--vars", "x", "--e-range", "a..b", "--c", "x", "x"],
    ["nosuch"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.startswith("error:") and out == ""


def test_bad_witness_is_loud():
    argv = list(EX1)
    argv[argv.index("x^7*y^15*z")] = "x"
    code, out, err = call(*argv)
    assert code == 2
    assert "verdict: INCONCLUSIVE" in out
    assert "does not certify" in err


def test_qfe_necessary_fallback():
    code, out, _ = call("qfe", "--p", "2", "--vars", "x", "--n", "1", "--json", "x^2")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "NOT_QFE_SPLIT_UP_TO_DEGREE" and rep["soundness"] == "EXACT"


def test_qfe_certified():
    code, out, _ = call("qfe", "--p", "3", "--vars", "x,y", "--json", "x*y")
    assert code == 0 and json.loads(out)["verdict"] == "QFE_SPLIT_CERTIFIED"


def test_qfr_finds_t_automatically():
    argv = [a for a in EX1 if a not in ("--witness", "x^7*y^15*z")] + ["--e", "6", "--json"]
    argv.remove("--e-range")
    argv.remove("1..8")
    code, out, _ = call(*argv)
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "QFR_CERTIFIED"
    assert rep["certificate"]["test_element_t"] == "x"
    assert rep["certificate"]["c_validation"] == "c in (t^4) mod p"


def test_tau_listing():
    code, out, _ = call("tau", "--p", "2", "--vars", "x,y,z", "--c", "x^4", "--json", "z^2+x^3+y^2*z")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert code == 0 and "x" in rep["certificate"]["closure"]
    assert rep["certificate"]["t_with_c_in_t4"] == "x"


def test_witt_selftest():
    code, out, _ = call("witt-selftest", "--p", "3", "--n", "2", "--trials", "20", "--json")
    data = json.loads(out)
    assert code == 0
    assert all(c["failed"] == 0 and c["trials"] == 20 for c in data["checks"])


def test_text_and_json_carry_same_fields():
    _, text, _ = call(*EX1)
    _, js, _ = call(*EX1, "--json")
    rep = json.loads(js)
    assert f"verdict: {rep['verdict']}" in text
    assert f"soundness: {rep['soundness']}" in text
    for k in rep["certificate"]:
        assert f"certificate.{k}:" in text


def test_output_is_byte_identical_across_processes_and_threads():
    argv = ["qfr", "--p", "2", "--vars", "x,y,z", "--n", "2", "--c", "x^4", "--e", "6",
            "--search-bound", "30", "--json", "z^2+x^3+y^2*z"]
    outs = set()
    for threads in ("1", "2", "1"):
        res = subprocess.run([sys.executable, "-m", "qfedder", *argv, "--threads", threads],
                             capture_output=True, text=True, check=True)
        outs.add(res.stdout)
    assert len(outs) == 1
