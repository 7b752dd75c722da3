import json
import math

import numpy as np
import pytest

from wqe import cli
from wqe.harness import records


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    assert f"{math.log(2):.10f}" in out and f"{2 * math.log(2):.10f}" in out
    assert "0.5623351" in out and "0.1438410" in out and f"{3 * math.log(2):.10f}" in out
    assert f"{4 * math.log(4):.10f}" in out and "satisfied" in out and "BAD" not in out


def test_verify_pass_and_out(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    code, text, _ = run(capsys, "verify", "gibbs", "--dims", "3", "--samples", "10", "--out", str(out),
                        "--workers", "1")
    assert code == 0 and "pass=10" in text
    code, text, _ = run(capsys, "summarize", str(out))
    assert code == 0 and "gibbs: pass=10" in text


def test_verify_failure_exit(capsys):
    code, _, _ = run(capsys, "verify", "lieb_triple", "--samples", "100", "--workers", "1")
    assert code == 1


def test_verify_json(capsys):
    code, text, _ = run(capsys, "verify", "ssa", "--dims", "2x2x2", "--ensemble", "classical",
                        "--samples", "20", "--json", "--workers", "1")
    assert code == 0 and json.loads(text)["samples"] == 20


def test_identity_weight(capsys):
    code, text, _ = run(capsys, "verify", "araki_lieb", "--dims", "2x2", "--identity-weight",
                        "--samples", "5", "--json", "--workers", "1")
    assert code == 0 and json.loads(text)["fail"] == 0


@pytest.mark.parametrize("argv", [
    ("verify", "ssa", "--dims", "2x2"),
    ("verify", "klein", "--ensemble", "product-state"),
    ("verify", "gibbs", "--samples", "0"),
    ("verify", "gibbs", "--dims", "9x9"),
    ("verify", "gibbs", "--dims", "axb"),
    ("verify", "unknown"),
    ("search", "nope"),
    ("summarize", "/nonexistent/file"),
    ("frobnicate",),
])
def test_config_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unwritable_out(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "gibbs", "--samples", "1", "--out", str(tmp_path / "x" / "y"))
    assert code == 2 and "cannot write" in err


def test_search_found(capsys):
    code, text, _ = run(capsys, "search", "gibbs:trace", "--max-trials", "10000")
    assert code == 1 and "violation found" in text


def test_search_exhausted(capsys):
    code, text, _ = run(capsys, "search", "subadditivity", "--max-trials", "50", "--json")
    data = json.loads(text)
    assert code == 0 and data["exhausted"] and data["trials"] == 50


def test_weight_override(capsys, tmp_path):
    f = tmp_path / "w.json"
    records.write_matrix(str(f), np.diag([1.0, 2.0, 3.0]))
    code, text, _ = run(capsys, "verify", "bounds", "--dims", "3", "--weight", str(f),
                        "--samples", "5", "--workers", "1")
    assert code == 0


def test_bad_override_file(capsys, tmp_path):
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"dims": [3], "re": [[1, 0], [0, 1]]}))
    code, _, err = run(capsys, "verify", "bounds", "--dims", "3", "--weight", str(f))
    assert code == 2 and "dims" in err


def test_summarize_failures_exit(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    run(capsys, "verify", "lieb_triple", "--samples", "60", "--out", str(out), "--workers", "1")
    code, text, _ = run(capsys, "summarize", str(out), "--json")
    assert code == 1 and json.loads(text)["theorems"]["lieb_triple"]["fail"] > 0
