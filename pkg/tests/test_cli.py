import csv
import io as _io
import json
import subprocess
import sys

import numpy as np
import pytest

from fareyrank import io
from fareyrank.cli import main, parse_orders, UsageError
from fareyrank.synthetic import rasterize, square_bitmap


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_seq_csv(capsys):
    code, out, _ = run(capsys, "seq", "--order", "5", "--format", "csv")
    rows = list(csv.reader(_io.StringIO(out)))
    assert code == 0 and len(rows) == 11
    assert rows[0] == ["1", "0", "1"] and rows[-1] == ["11", "1", "1"]


def test_seq_order_one_and_zero(capsys):
    code, out, _ = run(capsys, "seq", "--order", "1", "--format", "csv")
    assert out.splitlines() == ["1,0,1", "2,1,1"]
    code, _, err = run(capsys, "seq", "--order", "0")
    assert code == 2 and "order" in err


def test_seq_writes_figure(capsys, tmp_path):
    out = tmp_path / "f7.csv"
    assert run(capsys, "seq", "--order", "7", "--format", "csv", "--out", str(out))[0] == 0
    assert len(out.read_text().splitlines()) == 19
    assert (tmp_path / "f7.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("frac, want", [("2/4", "4"), ("0/3", "1"), ("1/1", "7")])
def test_rank(capsys, frac, want):
    code, out, _ = run(capsys, "rank", "--order", "4", "--frac", frac)
    assert code == 0 and out.strip() == want


def test_rank_outside_table(capsys):
    code, _, err = run(capsys, "rank", "--order", "4", "--frac", "3/5")
    assert code == 4 and "OutOfTable" in err
    code, _, _ = run(capsys, "rank", "--order", "4", "--frac", "5/3")
    assert code == 4


def test_closest_worked_example(capsys):
    code, out, _ = run(capsys, "closest", "--order", "55", "--frac", "341/556", "--stats")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "27/44"
    assert "rank 578" in lines


def test_closest_member(capsys):
    assert run(capsys, "closest", "--order", "4", "--frac", "1/2")[1].strip() == "1/2"


def test_closest_algorithms_agree(capsys):
    got = {run(capsys, "closest", "--order", "75", "--frac", "78/145", "--algo", a)[1]
           for a in ("binary", "regula", "brute")}
    assert len(got) == 1


def test_closest_json(capsys):
    code, out, _ = run(capsys, "closest", "--order", "4", "--frac", "2/5", "--format", "json")
    doc = json.loads(out)
    assert doc["closest"] == "1/3" and doc["rank"] == 3


@pytest.mark.parametrize("frac", ["3/2", "1/0", "abc", "-1/2"])
def test_closest_bad_fraction(capsys, frac):
    assert run(capsys, "closest", "--order", "10", f"--frac={frac}")[0] == 2


def test_missing_order(capsys):
    assert run(capsys, "closest", "--frac", "1/2")[0] == 2


def test_parse_orders():
    assert parse_orders("50..400:50") == [50, 100, 150, 200, 250, 300, 350, 400]
    assert parse_orders("3") == [3]
    assert parse_orders("1..3,7") == [1, 2, 3, 7]
    for bad in ("", "5..1", "a..b", "0", "1..5:0"):
        with pytest.raises(UsageError):
            parse_orders(bad)


def test_bench_deterministic_with_figure(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["bench", "--orders", "10..40:10", "--trials", "50", "--seed", "1"]
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.reader(a.open()))
    assert rows[0] == ["order", "algo", "trials", "mean_iters", "min_iters", "max_iters",
                       "agreement"]
    assert len(rows) == 9
    assert all(r[6] == "50" for r in rows[1:])
    assert (tmp_path / "a.png").stat().st_size > 0


def test_bench_bad_trials(capsys):
    assert run(capsys, "bench", "--orders", "10", "--trials", "0")[0] == 2


@pytest.fixture
def square_pbm(tmp_path):
    path = tmp_path / "sq.pbm"
    io.write_pbm(path, square_bitmap(10))
    return path


def test_approx_square(capsys, square_pbm):
    code, out, _ = run(capsys, "approx", "--order", "50", "--delta-f", "0", "--input", str(square_pbm))
    doc = json.loads(out)
    assert code == 0 and doc["metrics"]["vertex_count"] == 4
    assert doc["metrics"]["max_deviation_sq"] == "0"


def test_approx_delta_sweep(capsys, tmp_path):
    path = tmp_path / "tri.pbm"
    io.write_pbm(path, rasterize([(5, 5), (60, 20), (20, 55)], 64, 64))
    counts = []
    for df in (0, 4, 8, 16, 32):
        code, out, _ = run(capsys, "approx", "--order", "5", "--delta-f", str(df), "--input", str(path))
        counts.append(json.loads(out)["metrics"]["vertex_count"])
    assert counts == sorted(counts, reverse=True) and counts[0] > counts[-1]


def test_approx_svg_and_figure(capsys, square_pbm, tmp_path):
    out = tmp_path / "sq.svg"
    code, _, _ = run(capsys, "approx", "--order", "20", "--input", str(square_pbm),
                     "--format", "svg", "--out", str(out))
    assert code == 0 and out.read_text().startswith("<svg")
    assert (tmp_path / "sq.png").exists()


def test_approx_malformed_pbm(capsys, tmp_path):
    bad = tmp_path / "bad.pbm"
    bad.write_text("P1\n4 4\n0 1 q\n")
    code, _, err = run(capsys, "approx", "--order", "10", "--input", str(bad))
    assert code == 3 and "offset 11" in err


def test_approx_missing_file(capsys, tmp_path):
    assert run(capsys, "approx", "--order", "10", "--input", str(tmp_path / "nope.pbm"))[0] == 3


def test_approx_empty_bitmap(capsys, tmp_path):
    path = tmp_path / "empty.pbm"
    io.write_pbm(path, np.zeros((5, 5), dtype=bool))
    code, _, err = run(capsys, "approx", "--order", "10", "--input", str(path))
    assert code == 4 and "NoObject" in err


def test_shape_compare_quarter_turn(capsys, tmp_path):
    img = rasterize([(5, 5), (40, 8), (30, 30), (12, 36)], 48, 48)
    a, b = tmp_path / "a.pbm", tmp_path / "b.pbm"
    io.write_pbm(a, img)
    io.write_pbm(b, np.rot90(img))
    code, out, _ = run(capsys, "shape", "--order", "50", "--input", str(a), "--input", str(b))
    doc = json.loads(out)
    assert code == 0 and doc["score"] == "0"
    assert len(doc["descriptors"]) == 2


def test_shape_single(capsys, square_pbm):
    code, out, _ = run(capsys, "shape", "--order", "50", "--input", str(square_pbm))
    doc = json.loads(out)
    assert doc["entries"] == [doc["d_total"] // 4] * 4


def test_table_report(capsys):
    code, out, _ = run(capsys, "table", "--order", "30")
    assert code == 0 and "rows_decreasing True" in out


def test_cache_used_and_bypassed(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FAREYRANK_CACHE_DIR", str(tmp_path / "c"))
    run(capsys, "rank", "--order", "9", "--frac", "1/3")
    assert (tmp_path / "c" / "ftbl-9.bin").exists()
    (tmp_path / "c" / "ftbl-9.bin").write_bytes(b"junk")
    code, out, err = run(capsys, "rank", "--order", "9", "--frac", "1/3")
    assert code == 0 and "rebuilding" in err
    code, out, _ = run(capsys, "rank", "--order", "11", "--frac", "1/3", "--no-cache")
    assert not (tmp_path / "c" / "ftbl-11.bin").exists()


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fareyrank", "seq", "--order", "3",
                          "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[-1] == "5,1,1"
