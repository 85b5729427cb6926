import json
import subprocess
import sys

import pytest

from rcip.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_solve_pentagon(capsys, corpus_path):
    code, out = run(capsys, "solve", corpus_path("pentagon.json"), "--no-timing")
    assert code == 0 and out["status"] == "feasible" and out["witness"] == [1, 1]
    assert "seconds" not in out["stats"]


def test_solve_verify_canonical(capsys, corpus_path):
    code, out = run(capsys, "solve", corpus_path("two_balls.json"), "--verify", "--canonical", "--trace")
    assert code == 0 and out["stats"]["verified"] and out["trace"]


def test_oracle_pell(capsys, corpus_path):
    code, out = run(capsys, "oracle", corpus_path("pell_n5.json"), "--all")
    assert code == 0 and out["witness"] == [2, 1]
    assert [2, 1] in out["points"] and [9, 4] in out["points"]


def test_oracle_infeasible_exit_code(capsys, corpus_path):
    code, out = run(capsys, "oracle", corpus_path("an1_no.json"))
    assert code == 1 and out["status"] == "infeasible"


def test_refusals_exit_two(capsys, corpus_path):
    for name in ("pell_n5.json", "two_ellipsoids.json", "an1_yes.json"):
        code, _ = run(capsys, "solve", corpus_path(name))
        assert code == 2


def test_cells(capsys, corpus_path):
    code, out = run(capsys, "cells", corpus_path("three_lines.json"))
    assert code == 0 and out["count"] == 7


def test_hull(capsys, tmp_path):
    inst = {
        "dim": 2,
        "box": "3",
        "domains": [{"type": "polyhedron", "A": [["-1", "-1"], ["-1", "1"], ["0", "1"], ["1", "0"], ["1", "-1"]], "b": ["-1", "1", "2", "2", "1"]}],
        "removed": [],
    }
    p = tmp_path / "pentagon_only.json"
    p.write_text(json.dumps(inst))
    code, out = run(capsys, "hull", str(p))
    assert code == 0 and sorted(map(tuple, out)) == sorted([(1, 0), (0, 1), (1, 2), (2, 2), (2, 1)])


def test_decompose_both_engines(capsys, corpus_path):
    code, out = run(capsys, "decompose", corpus_path("two_balls.json"))
    assert code == 0 and out["engine"] == "boundary-cover" and out["pieces"]
    code, out = run(capsys, "decompose", corpus_path("polyhedra.json"))
    assert code == 0 and out["engine"] == "removing-polyhedra" and out["cells"]


def test_check_bhc(capsys, corpus_path, tmp_path):
    code, out = run(capsys, "check-bhc", corpus_path("two_balls.json"))
    assert code == 0 and out["ok"]
    inst = json.load(open(corpus_path("two_balls.json")))
    inst["cover"] = {"hyperplanes": [{"a": ["1", "0"], "b": "0"}]}
    p = tmp_path / "wrong.json"
    p.write_text(json.dumps(inst))
    code, out = run(capsys, "check-bhc", str(p))
    assert code == 1 and out["violations"]


def test_generate_round_trips(capsys, tmp_path):
    code, out = run(capsys, "generate", "--seed", "7", "--dim", "2", "--box", "4")
    assert code == 0
    p = tmp_path / "g.json"
    p.write_text(json.dumps(out))
    code, v = run(capsys, "solve", str(p), "--verify")
    assert code in (0, 1) and v["stats"]["verified"]


def test_malformed_input(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["solve", str(p)]) == 2
    p.write_text(json.dumps({"dim": 2, "box": "3", "domains": [{"type": "torus"}], "removed": []}))
    assert main(["solve", str(p)]) == 2
    assert main(["solve", str(tmp_path / "missing.json")]) == 2


def test_guard_exit_code(capsys, tmp_path):
    p = tmp_path / "big.json"
    p.write_text(json.dumps({"dim": 5, "box": "2", "domains": [{"type": "ball", "center": ["0"] * 5, "radius": "1"}], "removed": []}))
    assert main(["solve", str(p)]) == 2


def test_console_script(corpus_path):
    r = subprocess.run([sys.executable, "-m", "rcip.cli", "solve", corpus_path("pentagon.json"), "--no-timing"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["witness"] == [1, 1]


def test_internal_error_exit_code(capsys, corpus_path, monkeypatch):
    import rcip.cli

    def boom(*args, **kwargs):
        raise RuntimeError("unexpected")

    monkeypatch.setattr(rcip.cli, "solve", boom)
    assert main(["solve", corpus_path("pentagon.json")]) == 3
