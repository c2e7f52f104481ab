import json
import subprocess
import sys

import numpy as np
import pytest

from qmorph.cli import cli_main
from qmorph.neqr import GrayImage, random_image
from qmorph.netpbm import write_pgm


@pytest.fixture
def pgm(tmp_path):
    def make(img, name="in.pgm"):
        path = tmp_path / name
        write_pgm(img, path)
        return str(path)
    return make


def test_segment_constant_gives_zeros(pgm, tmp_path, capsys):
    src = pgm(GrayImage(np.full((4, 4), 5), 3))
    out = tmp_path / "out.pbm"
    assert cli_main(["segment", src, "--threshold", "1", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[:2] == ["P1", "4 4"] and all(set(l.split()) == {"0"} for l in lines[2:])


def test_compare_many(pgm, rng, capsys):
    for i in range(50):
        src = pgm(random_image(rng, 2, 3), f"r{i}.pgm")
        assert cli_main(["compare", src, "--mode", "tophat", "--threshold", "1"]) == 0
    assert "match" in capsys.readouterr().out


def test_oracle_matches_segment(pgm, rng, tmp_path):
    src = pgm(random_image(rng, 2, 3))
    a, b = tmp_path / "a.pbm", tmp_path / "b.pbm"
    cli_main(["segment", src, "--threshold", "3", "-o", str(a)])
    cli_main(["oracle", src, "--threshold", "3", "-o", str(b)])
    assert a.read_text() == b.read_text()


def test_histogram_document(pgm, rng, tmp_path):
    src = pgm(random_image(rng, 2, 3))
    out = tmp_path / "h.json"
    assert cli_main(["histogram", src, "--shots", "8192", "--seed", "1", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["counts"]) == 16 and sum(doc["counts"].values()) == 8192
    assert all(len(k) == 5 for k in doc["exact"])
    assert doc["result_register"] == "c_main" and doc["format"] == 1


def test_cost_without_image(capsys):
    assert cli_main(["cost", "--n", "2", "--q", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["units"]["copy"] == {"measured": 3, "published": 3}
    assert doc["units"]["comparator"]["published"] == 41
    assert doc["pipeline_includes_oracle"] is False


def test_cost_with_image(pgm, rng, capsys):
    assert cli_main(["cost", pgm(random_image(rng, 2, 3))]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pipeline"]["weighted_total"] > doc["pipeline"]["charged_total"]


def test_export_qasm(pgm, rng, capsys):
    assert cli_main(["export-qasm", pgm(random_image(rng, 1, 2))]) == 0
    text = capsys.readouterr().out
    assert text.startswith("OPENQASM 2.0;") and text.count("measure") == 3


@pytest.mark.parametrize("argv", [
    ["segment", "/nonexistent.pgm"],
    ["cost"],
    ["cost", "--n", "2", "--q", "3", "--threshold", "9"],
])
def test_error_exits(argv, capsys):
    assert cli_main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_bad_threshold_and_file(pgm, tmp_path, capsys):
    assert cli_main(["segment", pgm(GrayImage(np.zeros((2, 2), int), 2)), "--threshold", "4"]) == 1
    bad = tmp_path / "bad.pgm"
    bad.write_text("P2\n3 3\n7\n" + "0 " * 9)
    assert cli_main(["oracle", str(bad)]) == 1


def test_module_entry_point(pgm):
    src = pgm(GrayImage(np.zeros((2, 2), int), 2))
    res = subprocess.run([sys.executable, "-m", "qmorph", "oracle", src, "--threshold", "0"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "P1\n2 2\n1 1\n1 1\n"
    assert "MSB first" in subprocess.run([sys.executable, "-m", "qmorph", "--help"],
                                         capture_output=True, text=True).stdout
