import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from template_mset import GridSpec
from template_mset.cli import run
from template_mset.export import read_pgm

from oracles import naive_members

GOLDEN = Path(__file__).parent / "golden"


def call(argv, capsys):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def summary(out):
    lines = out.strip().splitlines()
    assert len(lines) == 1
    return json.loads(lines[0])


def test_fixed_map_csv_matches_oracle(tmp_path, capsys):
    path = tmp_path / "set.csv"
    code, out, _ = call(["fixed-map", "--c0", "0,0", "--c1", "-1,0", "--depth", 12,
                         "--mode", "regular", "--out", path], capsys)
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0] == "depth,index"
    idx = [int(r.split(",")[1]) for r in rows[1:]]
    assert all(r.startswith("12,") for r in rows[1:])
    assert idx == naive_members(0, -1, 12).tolist()
    s = summary(out)
    assert set(s) == {"subcommand", "params", "elapsed_ms", "output_files", "headline_value"}
    assert s["subcommand"] == "fixed-map"
    assert s["headline_value"] == 1.0
    assert s["output_files"] == [str(path)]


def test_accum_identity_staircase(tmp_path, capsys):
    path = tmp_path / "phi.csv"
    code, _, _ = call(["accum", "--c0", "0,0", "--c1", "0,0", "--depth", 4, "--out", path], capsys)
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0] == "t,phi"
    assert len(rows) == 18
    for j, row in enumerate(rows[1:]):
        t, phi = map(float, row.split(","))
        assert t == phi == j / 16


def test_hybrid_pgm_contains_quarter_disc(tmp_path, capsys):
    path = tmp_path / "b.pgm"
    code, _, _ = call(["hybrid", "--c0", "0,0", "--grid", "-2,2,-2,2,64,64", "--depth", 8,
                       "--out", path], capsys)
    assert code == 0
    raw = path.read_bytes()
    assert raw.startswith(b"P5\n64 64\n255\n")
    img = read_pgm(path)
    grid = GridSpec.parse("-2,2,-2,2,64,64")
    assert img[grid.cell_of(0.1)] == 255


def test_png_matches_pgm_bytes(tmp_path, capsys):
    from PIL import Image

    args = ["hybrid", "--c0", "-0.75,0", "--grid", "-2,2,-2,2,24,20", "--depth", 7]
    assert call(args + ["--out", tmp_path / "b.pgm"], capsys)[0] == 0
    assert call(args + ["--out", tmp_path / "b.png"], capsys)[0] == 0
    png = np.asarray(Image.open(tmp_path / "b.png"))
    assert np.array_equal(png, read_pgm(tmp_path / "b.pgm"))


def test_json_field_output(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, _, _ = call(["classical", "--grid", "-2,1,-1,1,6,4", "--iters", 20, "--out", path], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["grid"]["cols"] == 6 and len(doc["data"]) == 4


def test_random_root_command(tmp_path, capsys):
    path = tmp_path / "root.txt"
    code, out, _ = call(["random-root", "--p", 0.5, "--len", 20, "--seed", 42, "--out", path], capsys)
    assert code == 0
    golden = json.loads((GOLDEN / "random_root.json").read_text())
    assert summary(out)["headline_value"] == golden["p=0.5,len=20,seed=42"]
    assert path.read_text().strip() == golden["p=0.5,len=20,seed=42"]


@pytest.mark.parametrize("argv", [
    ["fixed-map", "--c0", "0", "--c1", "0,0", "--depth", "4", "--out", "x.csv"],
    ["fixed-map", "--c0", "0,0", "--c1", "0,0", "--depth", "31", "--out", "x.csv"],
    ["hybrid", "--c0", "0,0", "--grid", "2,-2,-2,2,4,4", "--out", "x.csv"],
    ["nonsense"],
    ["fixed-map", "--c0", "0,0", "--c1", "0,0", "--depth", "4", "--out", "x.pgm"],
    ["julia-mask", "--c0", "0,0", "--c1", "3,0", "--root", "01", "--z-grid", "-2,2,-2,2,5,5",
     "--out", "x.pgm"],
    ["julia-mask", "--c0", "0,0", "--c1", "0,0", "--root", "0120", "--out", "x.pgm"],
    ["random-root", "--p", "1.5", "--len", "3", "--seed", "0"],
])
def test_argument_errors_exit_2(argv, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, err = call(argv, capsys)
    assert code == 2
    assert out == ""
    assert err
    assert not list(tmp_path.iterdir())


def test_budget_exit_3(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, out, err = call(["hybrid", "--c0", "0,0", "--grid", "-2,2,-2,2,64,64", "--depth", 20,
                           "--out", path], capsys)
    assert code == 3
    assert str(64 * 64 * 2**20 * 20) in err
    assert not path.exists()
    code, _, _ = call(["fixed-map", "--c0", "0,0", "--c1", "0,0", "--depth", 25, "--out", path], capsys)
    assert code == 3
    code, _, _ = call(["fixed-map", "--c0", "0,0", "--c1", "0,0", "--depth", 12, "--max-depth", 10,
                       "--out", path], capsys)
    assert code == 3


def test_io_failure_exit_1(tmp_path, capsys):
    code, _, err = call(["classical", "--grid", "-2,1,-1,1,4,4", "--out",
                         tmp_path / "missing" / "m.pgm"], capsys)
    assert code == 1
    assert "I/O" in err


def test_no_temporary_files_left(tmp_path, capsys):
    call(["classical", "--grid", "-2,1,-1,1,4,4", "--out", tmp_path / "m.pgm"], capsys)
    assert [p.name for p in tmp_path.iterdir()] == ["m.pgm"]


def test_threads_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TEMPLATE_MSET_THREADS", "3")
    code, _, _ = call(["classical", "--grid", "-2,1,-1,1,4,4", "--out", tmp_path / "m.csv"], capsys)
    assert code == 0
    monkeypatch.setenv("TEMPLATE_MSET_THREADS", "-1")
    code, _, _ = call(["classical", "--grid", "-2,1,-1,1,4,4", "--out", tmp_path / "m.csv"], capsys)
    assert code == 2


def test_multi_voxels_and_slices(tmp_path, capsys):
    vox = tmp_path / "v.csv"
    code, out, _ = call(["multi", "--c0-line", "--re-range", "-2,1", "--re-samples", 4,
                         "--grid", "-2,2,-2,2,8,8", "--depth", 6, "--out", vox], capsys)
    assert code == 0
    rows = vox.read_text().splitlines()
    assert rows[0] == "re_c0,re_c1,im_c1"
    assert summary(out)["headline_value"] == len(rows) - 1
    code, _, _ = call(["multi", "--fix-c1", "0,-0.1", "--grid", "-2,1,-1.5,1.5,8,8", "--depth", 6,
                       "--out", tmp_path / "m.pgm"], capsys)
    assert code == 0


def test_loglog_all_lengths_flag(tmp_path, capsys):
    path = tmp_path / "ll.csv"
    code, _, _ = call(["loglog", "--c0", "-0.75,0", "--c1", "-0.117,-0.856", "--depth", 8,
                       "--all-lengths", "--out", path], capsys)
    assert code == 0
    assert len(path.read_text().splitlines()) == 1 + 256


def test_module_entry_point(tmp_path):
    path = tmp_path / "phi.csv"
    proc = subprocess.run([sys.executable, "-m", "template_mset", "accum", "--c0", "0,0", "--c1",
                           "-1,0", "--depth", "3", "--out", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["headline_value"] == 1.0
