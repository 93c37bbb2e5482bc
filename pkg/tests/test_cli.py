import csv
import json

import pytest

from antiramsey import ArcColoring, Tournament, extremal_coloring, random_tournament
from antiramsey.cli import main, parse_n_range
from antiramsey.coloring import random_coloring
from antiramsey.formats import (
    FormatError,
    dumps_clr,
    dumps_trn,
    loads_clr,
    loads_trn,
    loads_witness,
    read_clr,
    write_clr,
    write_trn,
)
from antiramsey.tournament import make_rng


@pytest.fixture
def files(tmp_path, cycle3, transitive4, transitive3, regular5):
    paths = {}
    for name, t in [("c3", cycle3), ("t3", transitive3), ("t4", transitive4), ("r5", regular5)]:
        paths[name] = tmp_path / f"{name}.trn"
        write_trn(paths[name], t)
    return paths


def test_trn_roundtrip():
    for seed in range(20):
        t = random_tournament(1 + seed % 9, seed)
        assert loads_trn(dumps_trn(t)) == t


def test_trn_whitespace_tolerant():
    assert loads_trn("  3\n0 1\n0\n\n") == Tournament.from_bitstring(3, "010")


@pytest.mark.parametrize("text", ["", "x\n010", "3\n01", "3\n012", "0\n"])
def test_trn_rejects(text):
    with pytest.raises(FormatError):
        loads_trn(text)


def test_clr_roundtrip():
    rng = make_rng(1)
    for k in range(1, 16):
        g = random_coloring(15, k, rng)
        assert loads_clr(dumps_clr(g)) == g
    assert dumps_clr(ArcColoring((0, 1, 0))) == "3 2\n0 1 0\n"


@pytest.mark.parametrize("text", ["3", "3 2\n0 1", "3 3\n0 1 1", "3 2\n0 2 0", "3 2\na b c"])
def test_clr_rejects(text):
    with pytest.raises(FormatError):
        loads_clr(text)


def test_parse_n_range():
    assert parse_n_range("3..5") == [3, 4, 5]
    assert parse_n_range("7") == [7]
    assert parse_n_range("3,6") == [3, 6]


def test_compute_text(files, capsys):
    assert main(["compute", str(files["c3"])]) == 0
    out = capsys.readouterr().out
    assert "delta3=3" in out and "h=2" in out


def test_compute_json(files, capsys):
    assert main(["compute", str(files["t4"]), "--format", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec == {"n": 4, "in_degrees": [0, 1, 2, 3], "delta3": 3, "triples": [[0, 1, 2]], "h": 5}
    assert main(["compute", str(files["r5"]), "--format", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["delta3"] == 6 and rec["h"] == 6


def test_compute_parse_error(tmp_path):
    bad = tmp_path / "bad.trn"
    bad.write_text("3\n01\n")
    assert main(["compute", str(bad)]) == 2
    assert main(["compute", str(tmp_path / "missing.trn")]) == 2


def test_extremal_files(files, tmp_path, capsys):
    out = tmp_path / "e.clr"
    assert main(["extremal", str(files["c3"]), "--out", str(out)]) == 0
    assert read_clr(out) == ArcColoring.monochromatic(3)
    assert main(["extremal", str(files["t4"]), "--out", str(out)]) == 0
    assert read_clr(out).k == 4
    capsys.readouterr()


def test_extremal_non_minimizing_warns(tmp_path, capsys):
    t = Tournament.transitive(5)
    path = tmp_path / "t5.trn"
    write_trn(path, t)
    assert main(["extremal", str(path), "--triple", "2,3,4", "--out", str(tmp_path / "x.clr")]) == 0
    err = capsys.readouterr().err
    assert "warning" in err
    # C(5,2) - (2+3+4) + 1 = 2 colors, h - 1 = 8
    assert read_clr(tmp_path / "x.clr").k == 2


def test_extremal_bad_triple(files):
    assert main(["extremal", str(files["c3"]), "--triple", "0,0,1"]) == 2
    assert main(["extremal", str(files["c3"]), "--triple", "0,1,9"]) == 2


def test_search_exit_codes(files, tmp_path, capsys, regular5):
    rainbow = tmp_path / "rb.clr"
    write_clr(rainbow, ArcColoring.rainbow(10))
    assert main(["search", str(files["r5"]), str(rainbow)]) == 0
    tree = loads_witness(capsys.readouterr().out)
    assert len(tree.tree_arcs()) == 4

    ext = tmp_path / "ext.clr"
    write_clr(ext, extremal_coloring(regular5, (0, 1, 2)))
    assert main(["search", str(files["r5"]), str(ext)]) == 1
    assert capsys.readouterr().out.strip() == "none"

    assert main(["search", str(files["r5"]), str(ext), "--budget", "0"]) == 3
    assert main(["search", str(files["t4"]), str(ext)]) == 2


def test_count(files, capsys):
    assert main(["count", str(files["c3"])]) == 0
    assert capsys.readouterr().out.strip() == "1,1,1"
    assert main(["count", str(files["t3"])]) == 0
    assert capsys.readouterr().out.strip() == "2,0,0"
    assert main(["count", str(files["r5"]), "--format", "json"]) == 0
    counts = json.loads(capsys.readouterr().out)
    assert sum(counts.values()) >= 1


def test_gen(tmp_path, capsys):
    a, b = tmp_path / "a.trn", tmp_path / "b.trn"
    assert main(["gen", "--n", "6", "--seed", "5", "--out", str(a)]) == 0
    assert main(["gen", "--n", "6", "--seed", "5", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text() == dumps_trn(random_tournament(6, 5))
    assert main(["gen", "--n", "4", "--out", str(a)]) == 0
    assert "seed:" in capsys.readouterr().err
    assert main(["gen", "--n", "5", "--kind", "rotational", "--coloring", "random", "--k", "6",
                 "--seed", "1", "--out", str(a), "--clr-out", str(b)]) == 0
    assert read_clr(b).k == 6


def test_verify_small(tmp_path, capsys):
    out = tmp_path / "v"
    assert main(["verify", "--n-range", "3..4", "--out", str(out), "--no-timings", "--jobs", "1"]) == 0
    lines = out.joinpath("reports.jsonl").read_text().splitlines()
    assert len(lines) == 6
    assert all(json.loads(x)["verdict"] == "consistent" for x in lines)
    with open(out / "summary.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "digest", "delta3", "h", "mode", "checked", "failures", "elapsed_ms"]
    assert len(rows) == 7
    first = out.joinpath("reports.jsonl").read_bytes()
    assert main(["verify", "--n-range", "3..4", "--out", str(out), "--no-timings", "--jobs", "1"]) == 0
    assert out.joinpath("reports.jsonl").read_bytes() == first
    capsys.readouterr()


def test_verify_usage_errors(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["verify", "--n-range", "3", "--out", str(blocker)]) == 2
    assert main(["verify", "--n-range", "x..y"]) == 2
    assert main(["verify", "--n-range", "6", "--jobs", "1"]) == 2


def test_verify_inconclusive(capsys):
    assert main(["verify", "--n-range", "5", "--budget", "100", "--jobs", "1"]) == 3
    capsys.readouterr()


def test_verify_sampled(capsys):
    argv = ["verify", "--n-range", "6", "--mode", "sampled", "--samples", "200",
            "--tournaments", "2", "--seed", "3", "--jobs", "1"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert out.count("consistent") == 2


def test_bench(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["bench", "--n", "6", "--trials", "100", "--seed", "8", "--out", str(a)]) == 0
    assert main(["bench", "--n", "6", "--trials", "100", "--seed", "8", "--out", str(b)]) == 0
    ra = list(csv.DictReader(a.open()))
    rb = list(csv.DictReader(b.open()))
    assert len(ra) == 100
    strip = lambda rows: [{k: v for k, v in r.items() if k != "elapsed_us"} for r in rows]
    assert strip(ra) == strip(rb)
    assert all(r["found"] == "1" for r in ra)
    assert main(["bench", "--n", "2", "--seed", "1"]) == 2
    capsys.readouterr()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
