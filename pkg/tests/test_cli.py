import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from qhankel import cli
from qhankel.hankel.det import hankel_det
from qhankel.qseq import SeqContext

SCHEMA = json.loads(resources.files("qhankel").joinpath("schema/report.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_report(capsys):
    code, out, _ = run(capsys, "constants", "--precision", "128")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    th = {(t["d"], t["case"]): float(t["closed_form"]["value"]) for t in doc["result"]["thresholds"]}
    assert abs(th[(2, "lambda!=0")] - 9.43194241) < 1e-8
    assert doc["parameters"]["precision"] == 128


def test_det_n1_symbolic(capsys):
    code, out, _ = run(capsys, "det", "--n", "1", "--alpha", "sym", "--lambda", "sym", "--mu", "sym")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    from qhankel.exact.poly import MU, MultiPoly
    assert MultiPoly.from_record(doc["result"]["det"]) == MU - 1


def test_verify_cyclotomic(capsys):
    code, out, _ = run(capsys, "verify", "cyclotomic", "--nmax", "8", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    rows = doc["result"]["rows"]
    assert {"n", "l", "guaranteed", "found"} <= set(rows[0])


def test_unknown_suite_lists_suites(capsys):
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 2
    assert "lemma-dl" in err and "bezivin" in err


@pytest.mark.parametrize("argv", [
    ["det", "--n", "2", "--alpha", "0.5"],
    ["det", "--n", "2", "--alpha", "1/0"],
    ["det"],
    ["constants", "--precision", "8"],
    ["decay", "--nmax", "30"],
    ["sumel", "--a", "1", "--c", "2"],
    ["no-such-command"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verification_failure_exit_1(capsys, monkeypatch):
    from qhankel import verify

    def broken(**kw):
        res = verify.SuiteResult("kdet", {})
        res.fail("K_det = K_rec", "1", "2", n=0)
        return res

    monkeypatch.setitem(verify.SUITES, "kdet", broken)
    code, out, _ = run(capsys, "verify", "kdet")
    assert code == 1
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["result"]["first_failure"]["lhs"] == "1"


def test_csv_header(capsys):
    code, out, _ = run(capsys, "decay", "--nmax", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,log_ratio,err_bound"
    assert len(out.splitlines()) == 5


def test_text_format(capsys):
    code, out, _ = run(capsys, "asym", "--n", "100", "--format", "text")
    assert code == 0 and "ratio:" in out


def test_out_file_written_atomically(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "sumel", "--a", "3", "--c", "1", "--n", "50", "--out", str(target))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(target.read_text()), SCHEMA)
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_output_independent_of_memo_order(capsys):
    argv = ["det", "--n", "3", "--alpha", "2/3", "--lambda", "sym", "--mu", "5"]
    first = run(capsys, *argv)[1]
    # a context filled out of order must give the same polynomial
    ctx = SeqContext(alpha=Fraction(2, 3), x=5)
    for k in (4, 0, 2, 1, 3):
        ctx.v(k)
    assert hankel_det(ctx, 3) == hankel_det(SeqContext(alpha=Fraction(2, 3), x=5), 3)
    assert run(capsys, *argv)[1] == first


def test_subprocess_runs_are_byte_identical():
    argv = [sys.executable, "-m", "qhankel.cli", "factor", "--n", "4", "--alpha", "1/3",
            "--lambda", "2", "--mu", "5/7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b
    jsonschema.validate(json.loads(a), SCHEMA)
