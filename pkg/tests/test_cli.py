from __future__ import annotations

import json
import subprocess
import sys

import pytest

from snowblower.cli import main
from snowblower.grid import parse_ascii
from snowblower.sim import ThrowModel, Tour, simulate

from conftest import DATA

BLOCK = "##\nG#\n"


@pytest.fixture
def block_map(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text(BLOCK)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("model", [m.value for m in ThrowModel])
def test_plan_then_simulate(capsys, tmp_path, block_map, model):
    tour = tmp_path / "tour.json"
    code, out, _ = run(capsys, "plan", "--model", model, "--depth", 2, "--in", block_map,
                       "--out", tour)
    assert code == 0
    row = json.loads(out)
    assert row["model"] == model and row["within_guarantee"] is True
    code, out, _ = run(capsys, "simulate", "--model", model, "--depth", 2, "--in", block_map,
                       "--tour", tour)
    assert code == 0
    report = json.loads(out)
    assert report["cleared"] and report["closed"]
    assert report["cost"] == row["alg_cost"]


def test_plan_output_is_byte_identical(capsys, tmp_path):
    maps = tmp_path / "maps"
    assert run(capsys, "gen", "--pixels", 40, "--seed", 3, "--count", 2, "--out-dir", maps)[0] == 0
    outputs = []
    for _ in range(2):
        code, out, _ = run(capsys, "plan", "--model", "fixed", "--depth", 3,
                           "--in", maps / "map_000003.txt")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_plan_directory_writes_tours_and_csv(capsys, tmp_path):
    maps = tmp_path / "maps"
    run(capsys, "gen", "--pixels", 30, "--seed", 1, "--count", 3, "--out-dir", maps)
    report = tmp_path / "report.csv"
    code, _, _ = run(capsys, "plan", "--model", "adjustable", "--depth", 4, "--in", maps,
                     "--report", report)
    assert code == 0
    lines = report.read_text().splitlines()
    assert lines[0].startswith("file,") and len(lines) == 4
    for name in ("map_000001", "map_000002", "map_000003"):
        domain = parse_ascii((maps / f"{name}.txt").read_text())
        tour = Tour.from_json((maps / f"{name}.tour.json").read_text())
        assert simulate(domain, tour, ThrowModel.ADJUSTABLE, 4).cleared


def test_oracle(capsys, block_map):
    code, out, _ = run(capsys, "oracle", "--model", "default", "--depth", 2, "--in", block_map,
                       "--max-states", "5e7")
    assert code == 0 and json.loads(out) == {"opt": 4}


def test_oracle_exhausted(capsys, block_map):
    code, _, err = run(capsys, "oracle", "--model", "default", "--depth", 2, "--in", block_map,
                       "--max-states", 1, "--error-json")
    assert code == 5
    assert json.loads(err)["error"] == "oracle-exhausted"


def test_bounds_and_decompose(capsys, block_map):
    code, out, _ = run(capsys, "bounds", "--depth", 2, "--in", block_map)
    assert code == 0 and json.loads(out) == {"snow": 3, "distance": "3/2"}
    code, out, _ = run(capsys, "decompose", "--in", block_map)
    trees = json.loads(out)
    assert code == 0 and sum(len(t["pixels"]) for t in trees) == 4


def test_gen_and_render(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--pixels", 50, "--seed", 7)
    assert code == 0 and out == (DATA / "gen_target50_seed7.txt").read_text()
    path = tmp_path / "m.txt"
    path.write_text(out)
    code, ascii_out, _ = run(capsys, "render", "--in", path)
    assert code == 0 and ascii_out == out
    code, svg, _ = run(capsys, "render", "--in", path, "--format", "svg")
    assert code == 0 and svg.startswith("<svg")


def test_render_after_a_tour(capsys, tmp_path, block_map):
    tour = tmp_path / "t.json"
    run(capsys, "plan", "--model", "default", "--depth", 2, "--in", block_map, "--out", tour)
    code, svg, _ = run(capsys, "render", "--in", block_map, "--format", "svg", "--tour", tour,
                       "--model", "default", "--depth", 2)
    assert code == 0 and "<svg" in svg


@pytest.mark.parametrize("text, code, kind", [
    ("##\n##\n", 2, "parse"),
    ("#G#\n", 3, "validation"),
])
def test_error_exit_codes(capsys, tmp_path, text, code, kind):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    got, _, err = run(capsys, "--error-json", "plan", "--model", "default", "--depth", 2,
                      "--in", path)
    assert got == code
    payload = json.loads(err)
    assert (payload["error"], payload["exit_code"]) == (kind, code) and payload["message"]


def test_simulation_violation_exit_code(capsys, tmp_path, block_map):
    tour = tmp_path / "t.json"
    tour.write_text('{"start": [0, 0], "moves": [{"step": "E", "throw": "B"}]}')
    code, _, err = run(capsys, "simulate", "--model", "fixed", "--depth", 2, "--in", block_map,
                       "--tour", tour)
    assert code == 6 and "simulation" in err


def test_missing_file_is_a_parse_error(capsys, tmp_path):
    code, _, _ = run(capsys, "bounds", "--depth", 2, "--in", tmp_path / "nope.txt")
    assert code == 2


def test_missing_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["plan", "--model", "default"])
    assert e.value.code == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text(BLOCK)
    done = subprocess.run([sys.executable, "-m", "snowblower.cli", "bounds", "--depth", "2",
                           "--in", str(path)], capture_output=True, text=True, check=True)
    assert json.loads(done.stdout)["snow"] == 3
