"""Byte-for-byte regression on every emitted file format.

Set REGEN_GOLDEN=1 to rewrite the stored files after an intended change.
"""

import os
from pathlib import Path

import pytest

from template_mset.cli import run

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("REGEN_GOLDEN") == "1"

PAIR = ["--c0", "-0.117,-0.76", "--c1", "-0.62,-0.62"]

CASES = {
    "fixed_map.csv": ["fixed-map", *PAIR, "--depth", "10", "--mode", "multicritical"],
    "accum.csv": ["accum", *PAIR, "--depth", "8"],
    "plateaus.csv": ["plateaus", *PAIR, "--depth", "12"],
    "loglog.csv": ["loglog", *PAIR, "--depth", "12"],
    "hybrid.pgm": ["hybrid", "--c0", "-0.75,0", "--grid", "-2,2,-2,2,32,32", "--depth", "8"],
    "hybrid.csv": ["hybrid", "--c0", "0.3,0.5", "--grid", "-2,2,-2,2,12,10", "--depth", "8",
                   "--mode", "multicritical"],
    "hybrid.png": ["hybrid", "--c0", "0,0", "--grid", "-2,2,-2,2,24,24", "--depth", "8",
                   "--plateau"],
    "contour.csv": ["contour", "--grid-c0", "-2,1,-1.5,1.5,6,6", "--grid-c1", "-2,2,-2,2,12,12",
                    "--depth", "6"],
    "multi.pgm": ["multi", "--fix-c0", "-0.75,0", "--grid", "-2,2,-2,2,32,32", "--depth", "8"],
    "voxels.csv": ["multi", "--c0-line", "--re-range", "-2,1", "--re-samples", "6",
                   "--grid", "-2,2,-2,2,12,12", "--depth", "6"],
    "classical.pgm": ["classical", "--grid", "-2.2,0.8,-1.3,1.3,60,52", "--iters", "20"],
    "julia_mask.pgm": ["julia-mask", "--c0", "0,0", "--c1", "-0.8,0.5", "--p", "0.5",
                       "--len", "50", "--seed", "3", "--z-grid", "-2.2,2.2,-2.2,2.2,81,81"],
    "julia_connect.csv": ["julia-connect", "--c0", "0,0", "--c1-grid", "-1,1,-1,1,4,4",
                          "--root", "0110100110010110", "--z-grid", "-2.2,2.2,-2.2,2.2,61,61"],
    "random_root.txt": ["random-root", "--p", "0.3", "--len", "64", "--seed", "2024"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_output_matches_golden(name, tmp_path, capsys):
    path = tmp_path / name
    assert run(CASES[name] + ["--threads", "1", "--out", str(path)]) == 0
    capsys.readouterr()
    ref = GOLDEN / name
    if REGEN:
        ref.write_bytes(path.read_bytes())
    assert ref.exists(), f"missing golden {ref}; run with REGEN_GOLDEN=1"
    assert path.read_bytes() == ref.read_bytes()
