"""Command line behavior: output formats, determinism, exit codes."""

import json
from fractions import Fraction

import pytest

from quadgame.cli import main
from quadgame.forms import parse_form
from quadgame.lattice import Window, enumerate_window


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_enumerate_streams_the_window(capsys):
    code, out, err = run(
        capsys, "enumerate", "--form", "1,1,-1", "--m", "0", "--lo", "1", "--hi", "10"
    )
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    expected = enumerate_window(
        parse_form("1,1,-1"), 0, Window(lo_sq=Fraction(1), hi_sq=Fraction(100))
    )
    assert len(lines) == len(expected)
    assert [tuple(rec["x"]) for rec in lines] == [p.x for p in expected]
    manifest = json.loads(err)
    assert manifest["command"] == "enumerate"
    assert manifest["config"]["m"] == "0/1"
    assert "wall_time_s" in manifest


def test_enumerate_budget_exit_code(capsys):
    code, out, err = run(
        capsys, "enumerate", "--form", "1,1,-1", "--m", "0",
        "--lo", "1", "--hi", "100000000",
    )
    assert code == 3
    assert out == ""
    assert "budget" in err


def test_matrix_input_is_diagonalized(capsys):
    code, out, _ = run(
        capsys, "enumerate", "--matrix", "[[1,0,0],[0,0,1],[0,1,0]]",
        "--m", "0", "--lo", "1", "--hi", "5",
    )
    assert code == 0
    for line in out.splitlines():
        rec = json.loads(line)
        assert set(rec) == {"x", "q1_sq", "q2_sq", "sup"}


def test_constants_document(capsys):
    code, out, _ = run(capsys, "constants", "--form", "1,1,-1", "--m", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["variant"] == "level"
    assert doc["R0_binding"] == "window_anchor"
    assert doc["kappa0"] == pytest.approx(214.0826, rel=1e-4)
    assert "report" in doc and "c_pi" in doc["report"]


def test_separation_document_and_csv(capsys, tmp_path):
    csv_path = tmp_path / "sep.csv"
    code, out, _ = run(
        capsys, "separation", "--form", "1,1,-1", "--m", "0", "--K", "5",
        "--csv", str(csv_path),
    )
    assert code == 0
    docs = json.loads(out)
    assert [d["kind"] for d in docs] == ["direction", "block"]
    assert docs[0]["min_dist_sq"] == "2/25"
    assert docs[0]["K"] == "5/1"
    header = csv_path.read_text().splitlines()[0]
    assert header == "K,count,min_dist,bound,ratio"


def test_play_is_byte_identical_and_verifiable(capsys, tmp_path):
    path = tmp_path / "game.json"
    args = [
        "play", "--form", "1,1,-1", "--m", "0", "--rounds", "3", "--seed", "2",
        "--transcript", str(path),
    ]
    code, out1, _ = run(capsys, *args)
    assert code == 0
    code, out2, _ = run(capsys, *args)
    assert out1 == out2
    assert json.loads(path.read_text()) == json.loads(out1)

    code, out, _ = run(capsys, "verify", "--transcript", str(path))
    assert code == 0
    verdict = json.loads(out)
    assert verdict["replay_matches"] is True
    assert verdict["margin_ok"] is True


def test_verify_flags_a_doctored_transcript(capsys, tmp_path):
    path = tmp_path / "game.json"
    run(
        capsys, "play", "--form", "1,1,-1", "--m", "0", "--rounds", "2",
        "--seed", "4", "--transcript", str(path),
    )
    data = json.loads(path.read_text())
    data["certificate"]["c"] *= 2  # someone inflated the certified constant
    path.write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", "--transcript", str(path))
    assert code == 4
    assert json.loads(out)["replay_matches"] is False
    assert "finding" in err


def test_escape_prefers_exact_arithmetic(capsys):
    code, out, _ = run(capsys, "escape", "--vector", "3/5,4/5,1", "--eps", "0.01")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 5 and doc["gap"] == 0.0
    assert "0/5" in doc["detail"]


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["enumerate", "--form", "1,1,-1"])  # missing --lo/--hi
    assert err.value.code == 2
