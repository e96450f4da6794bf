import csv
import io
import subprocess
import sys

import pytest

from xigemm.cli import main
from xigemm.config import read_config, write_config
from xigemm.harness import COLUMNS

HEADER = "method,dist,size,bits,threshold,density_a,density_b,path,e_r,e_delta,stage,time_ns"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def rows_of(text):
    assert text.splitlines()[0] == HEADER
    return list(csv.DictReader(io.StringIO(text)))


def usage_code(*argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    return exc.value.code


def test_header_matches_columns():
    assert ",".join(COLUMNS) == HEADER


def test_precision_rows(capsys):
    code, out = run(capsys, "precision", "--size", "32", "--th", "1", "0.5")
    assert code == 0
    rows = rows_of(out)
    # per distribution: origin, full, and xigemm at each threshold
    assert len(rows) == 5 * (2 + 2)
    assert {r["dist"] for r in rows} == {"uniform", "normal", "esp", "poison", "kar"}
    for r in rows:
        assert r["stage"] == "total" and float(r["e_delta"]) >= 0
        assert (r["threshold"] == "") == (r["method"] != "xigemm")


def test_precision_kar_improvement(capsys):
    code, out = run(capsys, "precision", "--bits", "8", "--dist", "kar", "--th", "0.5")
    assert code == 0
    e = {r["method"]: float(r["e_delta"]) for r in rows_of(out)}
    assert e["xigemm"] <= 0.2 * e["origin"]


def test_precision_size_one(capsys):
    code, out = run(capsys, "precision", "--size", "1", "--dist", "uniform")
    assert code == 0
    for r in rows_of(out):
        # one product of two grid-rounded numbers in [0, 1): error far below a step
        assert float(r["e_delta"]) <= 1.0 / 127


def test_precision_markdown_file(tmp_path, capsys):
    out = tmp_path / "p.md"
    code, _ = run(capsys, "precision", "--size", "16", "--dist", "normal", "--th", "0.5", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("| method | dist |") and text.count("\n") == 2 + 3


def test_density_monotone_and_limits(capsys):
    code, out = run(capsys, "density", "--size", "64", "--dist", "uniform")
    assert code == 0
    rows = rows_of(out)
    assert [float(r["threshold"]) for r in rows] == pytest.approx([0.1 * i for i in range(1, 11)])
    dens = [float(r["density_a"]) for r in rows]
    assert all(x >= y for x, y in zip(dens, dens[1:]))
    _, out = run(capsys, "density", "--size", "32", "--dist", "uniform", "--th", "1e-9", "1e9")
    lo, hi = rows_of(out)
    assert float(lo["density_a"]) == pytest.approx(1.0) and float(lo["density_b"]) == pytest.approx(1.0)
    assert float(hi["density_a"]) == 0 and float(hi["density_b"]) == 0


def test_timing_rows(capsys):
    code, out = run(capsys, "timing", "--size", "16", "--repeats", "1")
    assert code == 0
    rows = rows_of(out)
    assert [r["stage"] for r in rows] == ["quant", "xxmm", "reduce", "package"]
    assert all(int(r["time_ns"]) >= 0 for r in rows)


def test_qr_float_method(capsys):
    code, out = run(capsys, "qr", "--size", "32", "--method", "float")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "| matrix type | method | size | int4 ER | int8 ER |"
    assert len(lines) == 2 + 4
    for line in lines[2:]:
        assert all(float(v) <= 1e-5 for v in line.strip("| ").split(" | ")[3:])


def test_qr_normal_direction(tmp_path, capsys):
    out = tmp_path / "qr.csv"
    code, _ = run(capsys, "qr", "--dist", "normal", "--bits", "8", "--out", str(out))
    assert code == 0
    e = {r["method"]: float(r["e_delta"]) for r in rows_of(out.read_text())}
    assert e["origin"] > e["xigemm"]


def test_deterministic(capsys):
    def values(text):
        return [{k: v for k, v in r.items() if k != "time_ns"} for r in rows_of(text)]
    args = ("precision", "--size", "24", "--seed", "7", "--th", "0.5")
    _, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert values(first) == values(second)
    _, other = run(capsys, "precision", "--size", "24", "--seed", "8", "--th", "0.5")
    assert values(first) != values(other)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "x.cfg"
    write_config(cfg, {"eta": 1e-9, "threshold": 1e-9})
    code, out = run(capsys, "precision", "--size", "16", "--dist", "uniform", "--config", str(cfg))
    assert code == 0
    xi = [r for r in rows_of(out) if r["method"] == "xigemm"]
    assert len(xi) == 1 and float(xi[0]["threshold"]) == 1e-9
    assert xi[0]["path"] == "dense_residual"  # limit 1e-9 rules out the sparse path
    # flags win over the file
    _, out = run(capsys, "precision", "--size", "16", "--dist", "uniform", "--config", str(cfg),
                 "--eta", "1", "--th", "1e9")
    xi = [r for r in rows_of(out) if r["method"] == "xigemm"]
    assert xi[0]["path"] == "sparse_residual"


def test_calibrate_writes_config(tmp_path, capsys):
    out = tmp_path / "cal.cfg"
    code, text = run(capsys, "calibrate", "--size", "32", "--threshold", "0.3", "--out", str(out))
    assert code == 0 and text.startswith("eta = ")
    conf = read_config(out)
    assert 0 < conf["eta"] <= 1 and conf["threshold"] == 0.3


@pytest.mark.parametrize("argv", [
    ("precision", "--bits", "16"),
    ("precision", "--dist", "cauchy"),
    ("precision", "--th", "0"),
    ("precision", "--th", "abc"),
    ("precision", "--size", "-3"),
    ("precision", "--seed", "-1"),
    ("precision", "--eta", "1.5"),
    ("qr", "--method", "bf16"),
    ("timing", "--th", "0.1", "0.2"),
    ("precision", "--config", "/nonexistent/x.cfg"),
    ("bogus",),
    (),
])
def test_usage_errors_exit_2(argv, capsys):
    assert usage_code(*argv) == 2


def test_runtime_failure_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[xigemm]\neta = fast\n")
    assert main(["precision", "--size", "8", "--config", str(bad)]) == 1
    assert main(["calibrate", "--size", "16", "--out", str(tmp_path / "no" / "dir.cfg")]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xigemm", "precision", "--size", "8", "--dist", "uniform",
                           "--th", "0.5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith(HEADER)
    proc = subprocess.run([sys.executable, "-m", "xigemm", "precision", "--bits", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
