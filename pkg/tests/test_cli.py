import csv
import io
import json
import subprocess
import sys

import pytest

from csiszar.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def strip_timestamp(text):
    return [ln for ln in text.splitlines() if "timestamp" not in ln] + \
        [ln.split(" timestamp=")[0] for ln in text.splitlines() if ln.startswith("# ")]


def test_div_examples():
    code, out, _ = run("div", "--name", "kl", "--p", "0.5,0.5", "--q", "0.25,0.75")
    assert code == 0 and "0.143841036226" in out
    code, out, _ = run("div", "--name", "hellinger", "--p", "1,1", "--q", "1,1")
    assert code == 0 and out.splitlines()[-1] == "hellinger = 0"
    code, out, _ = run("div", "--f", "(t-1)^2", "--p", "1,1", "--q", "1,0")
    assert code == 0 and "+inf (convention: p/0)" in out


def test_div_json_header():
    code, out, _ = run("div", "--name", "chi2", "--p", "1,2", "--q", "1,1", "--format", "json")
    rep = json.loads(out)
    assert rep["result"]["value"] == 1.0
    assert set(rep["header"]) >= {"tool", "version", "seed", "trials", "tolerance", "timestamp"}


def test_div_errors():
    assert run("div", "--name", "kl", "--p", "1,2", "--q", "1")[0] == 2
    code, _, err = run("div", "--name", "kl", "--p", "1,x", "--q", "1,1")
    assert code == 1 and "p" in err
    assert run("div", "--name", "nope", "--p", "1", "--q", "1")[0] == 1
    assert run("div", "--name", "kl")[0] == 1


def test_div_input_file(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"p": [0.5, 0.5], "q": [0.25, 0.75]}))
    code, out, _ = run("div", "--name", "kl", "--input", str(path))
    assert code == 0 and "0.143841036226" in out
    code, _, err = run("div", "--name", "kl", "--input", str(path), "--p", "1,1")
    assert code == 1 and "p" in err
    col = tmp_path / "p.csv"
    col.write_text("0.5\n0.5\n")
    code, out, _ = run("div", "--name", "kl", "--p", f"@{col}", "--q", "0.25,0.75")
    assert code == 0 and "0.143841036226" in out


def test_classify_examples():
    code, out, _ = run("classify", "--name", "inv_sqrt", "--interval", "0.01:100")
    assert code == 0 and any(ln.startswith("AH") and "holds_on_samples" in ln for ln in out.splitlines())
    code, out, _ = run("classify", "--f", "t^2", "--interval", "0.5:4", "--format", "json")
    rep = json.loads(out)
    ah = rep["result"]["verdicts"]["AH"]
    assert code == 0 and ah["verdict"] == "fails" and ah["witness"] is not None


def test_classify_parse_error_caret():
    code, _, err = run("classify", "--f", "t**2", "--interval", "1:2")
    assert code == 1 and "^" in err


@pytest.mark.parametrize("fmt", ["json", "text", "csv"])
def test_classify_reproducible(fmt):
    args = ("classify", "--name", "exp", "--interval", "0.1:5", "--seed", "7", "--format", fmt)
    a, b = run(*args)[1], run(*args)[1]
    if fmt == "json":
        ja, jb = json.loads(a), json.loads(b)
        ja["header"].pop("timestamp"), jb["header"].pop("timestamp")
        assert ja == jb
    else:
        assert strip_timestamp(a) == strip_timestamp(b)


def test_csv_matches_json():
    args = ("classify", "--name", "power_r", "--param", "2", "--interval", "0.5:4", "--trials", "500")
    js = json.loads(run(*args, "--format", "json")[1])
    rows = list(csv.reader(io.StringIO(run(*args, "--format", "csv")[1])))
    table = {r[0]: r[1] for r in rows[1:]}
    for pair, rep in js["result"]["verdicts"].items():
        assert table[f"result.verdicts.{pair}.verdict"] == rep["verdict"]
        if rep["witness"]:
            for key in ("x", "y", "alpha", "lhs", "rhs"):
                assert float(table[f"result.verdicts.{pair}.witness.{key}"]) == rep["witness"][key]


def test_verify_counterexample():
    code, out, _ = run("verify", "counterexample")
    assert code == 0 and "PASS" in out and "5.19615242271" in out


def test_verify_trial_validation():
    assert run("verify", "thm32", "--trials", "0")[0] == 1
    assert run("verify", "nope")[0] == 1


def test_verify_sum_chains_and_subadditivity():
    assert run("verify", "thm24", "--trials", "200", "--seed", "1")[0] == 0
    assert run("verify", "subadditivity", "--trials", "200")[0] == 0


def test_verify_all():
    code, out, _ = run("verify", "all", "--trials", "1000", "--seed", "1")
    assert code == 0 and out.splitlines()[-1] == "total violations: 0"


def test_matrix_ops():
    code, out, _ = run("matrix", "eig", "--A", "[[2,1],[1,2]]")
    assert code == 0 and "eigenvalues: 1 3" in out
    code, out, _ = run("matrix", "jensen", "--A", "[[2,1],[1,2]]", "--eta", "1,0",
                       "--name", "power_r", "--param", "2", "--format", "json")
    res = json.loads(out)["result"]
    assert res["lhs"] == pytest.approx(4.0) and res["rhs"] == pytest.approx(5.0) and res["holds"]
    code, out, _ = run("matrix", "two-var", "--A", "[[1,0],[0,3]]", "--B", "[[2]]",
                       "--eta", "0.6,0.8", "--zeta", "1", "--h", "kl")
    assert code == 0 and "holds: True" in out
    code, _, _ = run("matrix", "func", "--A", "[[-1,0],[0,1]]", "--name", "kl")
    assert code == 2
    assert run("matrix", "eig", "--A", "[[1,2],[3,4]]")[0] == 2
    assert run("matrix", "eig", "--A", "[[1,2]")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "csiszar", "verify", "counterexample"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
