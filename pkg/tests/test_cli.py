import json
from fractions import Fraction

import pytest

from stabdec.cli import corpus_dir, run
from stabdec import evaluate
from stabdec.formula import parse

CORPUS = corpus_dir()


def fixture(name):
    return str(CORPUS / name)


def out_json(capsys, argv):
    code = run(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_check_unstable(capsys):
    code, rep = out_json(capsys, ["check", fixture("a_lt.txt")])
    assert code == 10 and rep["verdict"] == "unstable"


def test_decompose_verify(capsys):
    code, rep = out_json(capsys, ["decompose", fixture("a_eq.txt"), "--verify"])
    assert code == 0
    assert rep["pieces"] == [{"Z": "(= x1 y1)", "W": "false", "X": "true", "Y": "true"}]
    assert rep["checks"]["equivalent"] and rep["checks"]["spot_check"]["mismatches"] == 0


def test_witness_length_10(capsys):
    code, rep = out_json(capsys, ["witness", fixture("a_sum_pos.txt"), "--length", "10", "--verify"])
    assert code == 10
    w = rep["witness"]
    assert w["k"] == 10 and len(w["a"]) == len(w["b"]) == 10
    assert rep["checks"]["ladder"]
    # independent re-evaluation of all 100 pairs from the serialized rationals
    p = parse(open(fixture("a_sum_pos.txt")).read())
    for i, a in enumerate(w["a"]):
        for j, b in enumerate(w["b"]):
            point = {"x1": Fraction(a[0]), "y1": Fraction(b[0])}
            assert evaluate(p.formula, point) == (i <= j)


def test_oracle_command(capsys):
    code, rep = out_json(capsys, ["oracle", fixture("a_eq.txt"), "--max-k", "3"])
    assert code == 0 and rep["oracle"] == {"1": True, "2": False, "3": False}
    code, rep = out_json(capsys, ["oracle", fixture("a_lt.txt"), "--max-k", "3", "--verify"])
    assert code == 10 and rep["checks"]["ladder"]


def test_resource_limit(capsys):
    assert run(["oracle", fixture("a_lt.txt"), "--max-k", "3", "--budget", "2"]) == 2


@pytest.mark.parametrize("text", [
    "theory dlo\nvars x: x1 ; y: y1\nformula (< (* 2 x1) y1)\n",
    "theory dlo\nvars x: x1 ; y: y1\nformula (< x1\n",
])
def test_input_errors(tmp_path, capsys, text):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    assert run(["check", str(f)]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file(capsys):
    assert run(["check", "/nonexistent/file.txt"]) == 1


def test_human_output(capsys):
    assert run(["decompose", fixture("b_pure_rewrite.txt")]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "stable"
    assert "X=(< x2 (* 2 x1))" in out


def test_corpus_parallel_matches_serial(capsys):
    code, serial = out_json(capsys, ["corpus", "--seed", "4"])
    code2, parallel = out_json(capsys, ["corpus", "--seed", "4", "--parallel"])
    assert code == code2 == 0
    assert serial == parallel
    assert all(e["verdict"] == e["expected"] for e in serial["fixtures"])


def test_corpus_mismatch_exit(tmp_path, capsys):
    (tmp_path / "f.txt").write_text("theory dlo\nvars x: x1 ; y: y1\nformula (< x1 y1)\n")
    (tmp_path / "EXPECTED.json").write_text('{"f.txt": "stable"}')
    assert run(["corpus", str(tmp_path)]) == 3
