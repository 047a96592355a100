import json
from pathlib import Path

import pytest

from fracmix.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_decide_bilinear_bounded(tmp_path):
    code, rep = run(tmp_path, "decide", "--problem", str(PROBLEMS / "bilinear_bounded.json"))
    assert code == 0
    assert rep["verdict"]["status"] == "Bounded"
    assert all(c["pass"] for c in rep["verdict"]["trace"])
    assert list(rep)[:3] == ["toolVersion", "inputHash", "seed"]


def test_decide_rank_deficient(tmp_path):
    code, rep = run(tmp_path, "decide", "--problem", str(PROBLEMS / "j_rank_deficient.json"))
    assert code == 10 and rep["verdict"]["reason"]["id"] == "TAILRANK"


def test_malformed_exponent(tmp_path, capsys):
    code, rep = run(tmp_path, "decide", "--problem", str(PROBLEMS / "bad_exponent.json"))
    assert code == 2 and rep is None
    assert "field 'p'" in capsys.readouterr().err


def test_outside_scope_exit(tmp_path):
    rows = [[str(int(i == j)) for j in range(6)] for i in range(6)]
    doc = {"kind": "T", "m": 2, "n": 2, "matrix": rows, "p": ["2", "2", "2"], "q": "4/3", "lambda": "5/2"}
    code, rep = run(tmp_path, "decide", "--problem", write(tmp_path, doc))
    assert code == 20 and rep["verdict"]["status"] == "OutsideTheoremScope"


def test_json_syntax_error_reports_line(tmp_path, capsys):
    code, _ = run(tmp_path, "decide", "--problem", write(tmp_path, '{\n  "kind": "J",\n  "m": 1,,\n}'))
    assert code == 2 and "line 3" in capsys.readouterr().err


@pytest.mark.parametrize("patch, field", [({"m": 0}, "'m'"), ({"matrix": [["1"]]}, "'matrix'"),
                                          ({"lambda": "x"}, "'lambda'"), ({"kind": "K"}, "'kind'")])
def test_field_diagnostics(tmp_path, capsys, patch, field):
    doc = {"kind": "J", "m": 2, "n": 1, "matrix": [["1"], ["1"]], "p": ["2", "2"], "q": "4", "lambda": "5/4"}
    doc.update(patch)
    code, _ = run(tmp_path, "decide", "--problem", write(tmp_path, doc))
    assert code == 2 and field in capsys.readouterr().err


def test_q_derived_when_omitted(tmp_path):
    doc = {"kind": "J", "m": 2, "n": 1, "matrix": [["1"], ["1"]], "p": ["2", "2"], "lambda": "5/4"}
    code, rep = run(tmp_path, "decide", "--problem", write(tmp_path, doc))
    assert code == 0 and rep["problem"]["q"] == "4"


def test_analyze_profile_and_pivots(tmp_path):
    code, rep = run(tmp_path, "analyze", "--problem", str(PROBLEMS / "j_profile.json"))
    an = rep["analysis"]
    assert an["rankProfile"]["ranks"] == [2, 1, 0, 0] and an["rankProfile"]["drops"] == [1, 2]
    assert an["pivots"] == [[1, 2], [2, 2]]
    assert an["canonicalForm"]["certificate"]["rank_G"] == 2


def test_analyze_identity_stack(tmp_path):
    doc = {"kind": "J", "m": 2, "n": 2, "matrix": [["1", "0"], ["0", "1"], ["1", "0"], ["0", "1"]],
           "p": ["2", "2"], "lambda": "3"}
    _, rep = run(tmp_path, "analyze", "--problem", write(tmp_path, doc))
    assert rep["analysis"]["pivots"] == [[2, 1], [2, 2]]


def test_analyze_single_block(tmp_path):
    doc = {"kind": "J", "m": 1, "n": 2, "matrix": [["1", "1"], ["0", "1"]], "p": ["3/2"], "lambda": "1"}
    _, rep = run(tmp_path, "analyze", "--problem", write(tmp_path, doc))
    assert rep["analysis"]["pivots"] == [[1, 1], [1, 2]]
    assert rep["analysis"]["canonicalForm"]["selectedRows"] == {"1": [1, 2]}


def test_probe_flags_override(tmp_path):
    code, rep = run(tmp_path, "probe", "--problem", str(PROBLEMS / "j_bounded.json"), "--family", "boxE",
                    "--params", "1/2,1", "--grid-n", "64")
    assert code == 0
    assert rep["probe"]["family"] == "boxE" and rep["probe"]["params"] == ["1/2", "1"]
    assert rep["probe"]["meta"]["inputGrid"][0][0] == 64
    assert rep["verdict"]["status"] == "Bounded"


def test_probe_float_format(tmp_path):
    _, rep = run(tmp_path, "probe", "--problem", str(PROBLEMS / "j_bounded.json"), "--grid-n", "64")
    for row in rep["probe"]["rows"]:
        assert len(repr(row["ratio"]).replace(".", "").lstrip("0")) <= 13


def test_selftest_exit(capsys):
    assert main(["selftest", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "block-inverse: 500 passed, 0 failed" in out


def test_riesz_kind(tmp_path):
    code, rep = run(tmp_path, "decide", "--problem", str(PROBLEMS / "riesz.json"))
    assert code == 0 and rep["problem"]["kind"] == "riesz"


@pytest.mark.slow
def test_selftest_across_seeds():
    assert all(main(["selftest", "--seed", str(s)]) == 0 for s in range(10))
