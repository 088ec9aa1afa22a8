import json
from pathlib import Path

import pytest

from domsets import cli

ROOT = Path(__file__).resolve().parents[1]


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


SMOKE = [
    ["eval", "--seq", "geom(1/2)", "--n", "3"],
    ["eval", "--gauge", "reclog()", "--r", "2^-8"],
    ["eval", "--gauge", "pow(1/2)", "--r", "1/4", "--inverse"],
    ["compare", "--gauge", "pow(1)", "--gauge2", "pow(2)"],
    ["compare", "--seq", "geom(1/2)", "--seq2", "harm(1)"],
    ["lp", "--seq", "harm(2)", "--p", "1"],
    ["criterion", "--gauge", "pow(1/2)", "--seq", "geom(1/2)", "--N", "1000"],
    ["asymp", "--gauge", "reclog()", "--seq", "geom(1/2)", "--N", "500"],
    ["doubling", "--gauge", "pow(1)", "--L", "2"],
    ["doubling", "--seq", "geom(1/2)"],
    ["construct", "ash", "--seq", "geom(1/2)", "--mode", "summable", "--N", "100"],
    ["construct", "ash2", "--gauge", "pow(1)", "--seq", "geom(1/2)", "--mode", "shrink", "--N", "40"],
    ["construct", "doubling11", "--gauge", "pow(1)", "--L", "2", "--N", "40"],
    ["construct", "twogauges", "--gauge", "pow(1)", "--seq", "harm(2)", "--N", "50"],
    ["construct", "dim2", "--alpha", "1/2", "--gauge", "pow(1/4)", "--seq", "geom(1/4)", "--N", "3"],
    ["construct", "fromseq", "--seq", "geom(1/2)"],
    ["construct", "versus4"],
    ["construct", "domhaus", "--variant", "paper"],
    ["construct", "witness", "--witness", "versus1_cube", "--gauge", "reclog()"],
    ["measure", "--set", "symcantor(geom(1/4),8)", "--gauge", "pow(1/2)"],
    ["dim", "--set", "symcantor(geom(1/2),10)", "--tol", "1/50"],
    ["dominate", "--set", "symcantor(dblexp(1/2),4)", "--seq", "scale(1/4,geom(1/2))", "--family", "1"],
    ["adversary", "build", "--seq", "mshift(2,dblexp(1/2))", "--depth", "3"],
    ["adversary", "refute", "--seq", "mshift(2,dblexp(1/2))", "--depth", "3", "--count", "5"],
    ["condition", "3sn", "--seq", "geom(1/2)", "--N", "200"],
]


@pytest.mark.parametrize("argv", SMOKE, ids=lambda a: " ".join(a[:2]))
def test_every_subcommand_reports_json(capsys, argv):
    code, out, err = run_main(capsys, *argv)
    assert code == 0, err
    rep = json.loads(out)
    assert rep["config"]["command"] == argv[0]
    assert "result" in rep and "timing" not in rep


def test_report_keys_sorted_and_exact(capsys):
    code, out, _ = run_main(capsys, "eval", "--gauge", "recloglog()", "--r", "2^-16")
    rep = json.loads(out)
    assert rep["result"]["value"] == "1/4"
    assert list(rep) == sorted(rep)


def test_expect_mismatch_exits_1(capsys):
    code, _, err = run_main(capsys, "criterion", "--gauge", "reclog()", "--seq", "geom(1/2)", "--expect", "holds")
    assert code == 1 and "expected holds" in err
    code, _, _ = run_main(capsys, "criterion", "--gauge", "reclog()", "--seq", "geom(1/2)", "--expect", "fails")
    assert code == 0


def test_parse_error_exits_2(capsys):
    code, _, err = run_main(capsys, "lp", "--seq", "geom(1/2", "--p", "1")
    assert code == 2 and "column 9" in err


def test_engine_error_exits_3(capsys):
    code, _, err = run_main(capsys, "construct", "ash", "--seq", "harm(2)", "--mode", "summable")
    assert code == 3 and err


def test_out_file_and_timing(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, out, _ = run_main(capsys, "eval", "--seq", "harm(1)", "--n", "3", "--out", str(p), "--timing")
    assert code == 0 and out == ""
    rep = json.loads(p.read_text(encoding="utf-8"))
    assert rep["result"]["value"] == "1/4" and "seconds" in rep["timing"]


def test_table_spec_from_demos(capsys, monkeypatch):
    monkeypatch.chdir(ROOT / "demos")
    code, out, _ = run_main(capsys, "adversary", "build", "--seq", "table:snots_s.txt", "--depth", "4",
                            "--expect", "holds")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["set"]["room_ok"] and rep["result"]["set"]["leaves"] == 504


def test_selftest_deterministic(capsys):
    _, a, _ = run_main(capsys, "selftest", "--seed", "5")
    _, b, _ = run_main(capsys, "selftest", "--seed", "5")
    assert a == b and json.loads(a)["status"] == "holds"
