import json
import subprocess
import sys

import pytest

from sdlkit.cli import main

from .conftest import ROBOTS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_consistent(capsys):
    code, out, _ = run(capsys, "check", ROBOTS)
    assert code == 0 and out.startswith("CONSISTENT")


def test_check_assume_conflicting_codes(capsys):
    code, out, _ = run(capsys, "check", ROBOTS, "--assume", "J*,O*")
    assert code == 1 and out.startswith("INCONSISTENT")


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", tmp_path / "nope.sdl")
    assert code == 2 and "cannot read" in err


def test_check_syntax_error(capsys, tmp_path):
    bad = tmp_path / "bad.sdl"
    bad.write_text("p &\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "line 1" in err


def test_query_guaranteed(capsys):
    code, out, _ = run(capsys, "query", ROBOTS, "--code", "O_star", "--outcome", "outcome_best")
    assert code == 0 and out.startswith("GUARANTEED") and "certificate" in out


def test_query_not_guaranteed_dot(capsys):
    code, out, _ = run(capsys, "query", ROBOTS, "--code", "J", "--outcome", "outcome_best",
                       "--format", "dot")
    assert code == 1 and out.startswith("digraph")


def test_query_unknown_outcome(capsys):
    code, _, err = run(capsys, "query", ROBOTS, "--code", "J", "--outcome", "no_such")
    assert code == 2 and "no_such" in err


def test_query_suggests_names(capsys):
    code, _, err = run(capsys, "query", ROBOTS, "--code", "J", "--outcome", "outcome_bets")
    assert code == 2 and "outcome_best" in err


def test_query_names_table_alias(capsys):
    code, out, _ = run(capsys, "query", ROBOTS, "--code", "O★", "--outcome", "(+!!)")
    assert code == 0 and out.startswith("GUARANTEED")


def test_query_json_matches_check_assume(capsys, tmp_path):
    _, q, _ = run(capsys, "query", ROBOTS, "--code", "J", "--outcome", "outcome_best",
                  "--format", "json", "--no-timing")
    path = tmp_path / "reduced.sdl"
    path.write_text(ROBOTS.read_text() + "formula: <>~outcome_best\n")
    code, c, _ = run(capsys, "check", path, "--assume", "J", "--format", "json", "--no-timing")
    assert code == 0
    assert json.loads(q)["witness"] == json.loads(c)["witness"]


def test_compare_table(capsys):
    code, out, _ = run(capsys, "compare", ROBOTS, "--codes", "J,J_star,O,O_star",
                       "--outcome", "outcome_best", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [(r["code"], r["verdict"]["kind"]) for r in rows] == [
        ("J", "NOT_GUARANTEED"), ("J_star", "NOT_GUARANTEED"),
        ("O", "NOT_GUARANTEED"), ("O_star", "GUARANTEED")]


def test_compare_vacuous(capsys):
    code, out, _ = run(capsys, "compare", ROBOTS, "--codes", "O_star", "--outcome",
                       "outcome_best", "--assume", "J_star,O_star", "--format", "json")
    assert json.loads(out)["rows"][0]["verdict"]["vacuous"] is True


def test_translate_native(capsys):
    code, out, _ = run(capsys, "translate", ROBOTS)
    assert code == 0
    assert "GCI top SUBCLASSOF exists r . top" in out.splitlines()


def test_translate_single_box(capsys, tmp_path):
    f = tmp_path / "one.sdl"
    f.write_text("[] p\n")
    _, out, _ = run(capsys, "translate", f)
    assert "ASSERT forall r . p ( a )" in out.splitlines()


def test_translate_tptp(capsys):
    _, out, _ = run(capsys, "translate", ROBOTS, "--format", "tptp")
    assert out.count("fof(") == 6


def test_translate_formula_lifting(capsys):
    _, out, _ = run(capsys, "translate", ROBOTS, "--lifting", "formula")
    assert [line for line in out.splitlines() if line.startswith("GCI")] == [
        "GCI top SUBCLASSOF exists r . top"]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", ROBOTS, "--format", "json", "--output", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["kind"] == "CONSISTENT"


def test_node_cap_floor(capsys):
    code, _, err = run(capsys, "check", ROBOTS, "--node-cap", "10")
    assert code == 2 and "node-cap" in err


def test_oracle_formula(capsys):
    code, out, _ = run(capsys, "oracle", "--formula", "<>p & <>~p")
    assert code == 0 and out.startswith("SAT")
    code, out, _ = run(capsys, "oracle", "--formula", "[]p & []~p")
    assert code == 1 and out.startswith("NO_MODEL_WITHIN_BOUND")


def test_oracle_system_bound(capsys):
    code, _, err = run(capsys, "oracle", ROBOTS)
    assert code == 2 and "exceeds" in err
    code, out, _ = run(capsys, "oracle", ROBOTS, "--assume", "J_star,O_star", "--max-worlds", "1")
    assert code == 1


def test_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["query", str(ROBOTS)]) == 2


@pytest.mark.parametrize("args", [
    ["compare", ROBOTS, "--codes", "J,J_star,O,O_star", "--outcome", "outcome_best", "--format", "json"],
    ["query", ROBOTS, "--code", "O_star", "--outcome", "outcome_best", "--format", "json"],
])
def test_byte_identical_runs(args):
    cmd = [sys.executable, "-m", "sdlkit", *map(str, args), "--no-timing"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.stdout == second.stdout and first.stdout
