import csv
import io
import json
import math
import subprocess
import sys

import pytest

from ivsqrt import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    return dict(line[2:].split(": ", 1) for line in text.splitlines() if line.startswith("# "))


class TestSolve:
    def test_both_methods_agree(self, capsys):
        code, out, _ = run(capsys, "solve", "--u0", "1", "--d0", "4", "--d1=-5",
                           "--t-max", "20", "--dt-out", "0.5", "--method", "both")
        assert code == 0
        table = rows(out)
        assert len(table) == 41
        assert max(float(r["abs_diff_a2"]) for r in table) <= 1e-6
        assert all(abs(float(r["norm"]) - 1) < 1e-8 for r in table)
        assert meta(out)["command"] == "solve"

    def test_resonant_rabi_peak(self, capsys):
        t = math.pi / 2
        code, out, _ = run(capsys, "solve", "--u0", "1", "--d0", "0", "--d1", "0",
                           "--t-max", str(t), "--dt-out", str(t))
        assert code == 0
        assert abs(float(rows(out)[-1]["p2"]) - 1) < 1e-12

    def test_deterministic(self, capsys):
        argv = ["solve", "--u0", "1", "--d0", "4", "--d1=-5", "--t-max", "3", "--method", "ode"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "solve", "--u0", "1", "--d0", "4", "--d1=-5",
                           "--t-max", "1", "--dt-out", "0.5", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["columns"][0] == "t" and len(doc["rows"]) == 3

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.csv"
        code, out, _ = run(capsys, "solve", "--u0", "1", "--d0", "4", "--d1=-5",
                           "--t-max", "1", "-o", str(target))
        assert code == 0 and out == "" and len(rows(target.read_text())) == 101

    def test_unnormalized_initial_state(self, capsys):
        code, _, err = run(capsys, "solve", "--u0", "1", "--d0", "4", "--d1=-5", "--a2", "1")
        assert code == 2 and "invalid input" in err


class TestFigure:
    def test_figure1_crossing_marker(self, capsys):
        code, out, _ = run(capsys, "figure", "1", "--points", "11")
        assert code == 0
        marks = {float(r["Delta1"]): float(r["t"]) for r in rows(out) if r["series"] == "crossing"}
        assert marks[-5.0] == pytest.approx(1.5625, abs=1e-12)

    def test_figure2_populations(self, capsys):
        code, out, _ = run(capsys, "figure", "2", "--points", "5")
        table = rows(out)
        assert code == 0 and len(table) == 25
        assert all(0 <= float(r["p1_0"]) <= 1 for r in table)

    def test_figure3_asymptotes(self, capsys):
        code, out, _ = run(capsys, "figure", "3", "--points", "3")
        table = rows(out)
        small, large = table[0], table[-1]
        for name in ("nu0", "xi0"):
            assert float(small[f"{name}_small_U0"]) == pytest.approx(float(small[name]), rel=1e-2)
            assert float(large[f"{name}_large_U0"]) == pytest.approx(float(large[name]), rel=1e-2)

    def test_figure4_columns(self, capsys):
        code, out, _ = run(capsys, "figure", "4", "--points", "4")
        assert code == 0
        assert list(rows(out)[0]) == ["U0", "p2_exact", "p2_weak_field", "p2_strong_field"]

    def test_unknown_figure(self, capsys):
        code, _, err = run(capsys, "figure", "9")
        assert code == 2 and "figure id" in err


class TestScan:
    def test_grid(self, capsys):
        code, out, _ = run(capsys, "scan", "--u0", "0.5:2:4", "--d1=-5:5:3")
        table = rows(out)
        assert code == 0 and len(table) == 12
        assert all(abs(float(r["p1_0"]) + float(r["p2_0"]) - 1) < 1e-12 for r in table)

    def test_parallel_matches_serial(self, capsys):
        argv = ["scan", "--u0", "0.5:2:4", "--log-u0", "--format", "json"]
        serial = json.loads(run(capsys, *argv)[1])
        parallel = json.loads(run(capsys, *argv, "--jobs", "2")[1])
        assert serial["rows"] == parallel["rows"]

    def test_bad_grid(self, capsys):
        assert run(capsys, "scan", "--u0", "1:2")[0] == 2


class TestVerify:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "verify", "--list")
        assert code == 0 and len(out.splitlines()) == 9

    def test_single_criterion_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--only", "specfun_kernel", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert [c["key"] for c in doc["criteria"]] == ["specfun_kernel"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ivsqrt", "verify", "--list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "asymptotics" in proc.stdout
