import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from rcakit.cli import main
from schema import REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_apply(capsys):
    code, out, _ = run(capsys, "eval", "--n", "2", "--expr", "y1", "--apply", "x1")
    assert code == 0 and out.strip() == "1 - c"


def test_eval_with_rational_parameter(capsys):
    code, out, _ = run(capsys, "eval", "--n", "2", "--expr", "y1", "--apply", "x1", "--c", "1/3")
    assert code == 0 and out.strip() == "2/3"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "--n", "2", "--expr", "s(1,2)*x1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["operator"] == "x2*s(1,2)" and data["param"] == {"mode": "formal"}


def test_symbol(capsys):
    code, out, _ = run(capsys, "symbol", "--n", "2", "--expr", "e*d1*d2*e")
    assert code == 0
    assert "order: 2" in out and "spherical: (y1*y2) * e" in out


def test_hilbert(capsys):
    code, out, _ = run(capsys, "hilbert", "--n", "2", "--isotype", "sign", "--m", "1", "--maxdeg", "1,1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert {"i": "1", "j": "1", "dim": "2"} in rows


def test_verify_and_json_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "heckman", "--n", "2", "--json", str(path))
    assert code == 0 and "PASS" in out
    jsonschema.validate(json.loads(path.read_text()), REPORT_SCHEMA)


def test_verify_json_stdout_matches_schema(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "good_values", "--n", "3", "--format", "json", "--c", "-1/2")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 0 and data["param"] == {"mode": "rational", "value": "-1/2"}


def test_grtable_progress_goes_to_stderr(capsys):
    code, out, err = run(capsys, "grtable", "--n", "2", "--m", "1", "--side", "Q", "--maxdeg", "1,1", "--slack", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "i,j,span,target,status"
    assert "factor 1/1" in err and "factor" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "nope", "--n", "2"],
        ["eval", "--n", "2", "--expr", "x3"],
        ["eval", "--n", "2", "--expr", "x1 +"],
        ["eval", "--n", "1", "--expr", "x1"],
        ["eval", "--n", "2", "--expr", "x1", "--c", "0.5"],
        ["hilbert", "--n", "2", "--maxdeg", "1"],
        ["eval", "--n", "2", "--expr", "(c-1)^-1", "--c", "1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_output_file(capsys, tmp_path):
    path = tmp_path / "t.txt"
    code, out, _ = run(capsys, "hilbert", "--n", "2", "--m", "2", "--maxdeg", "2,0", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[-1].split()[-1] == "1"


def test_identical_invocations_identical_output(capsys):
    argv = ["hilbert", "--n", "3", "--isotype", "sign", "--m", "1", "--maxdeg", "3,2", "--format", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rcakit.cli", "eval", "--n", "2", "--expr", "y1", "--apply", "x1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1 - c"


def test_negative_values(capsys):
    code, out, _ = run(capsys, "eval", "--n", "2", "--expr", "-c^2", "--c", "-1/2")
    assert code == 0 and out.strip() == "-1/4"
