import json
import pathlib
import subprocess
import sys

import pytest

DATA = pathlib.Path(__file__).parent / "data" / "table3.csv"


def run_cli(*args, env=None):
    import os
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "bpdp.cli", *args],
                          capture_output=True, text=True, env=full_env)


class TestPi:
    def test_json_record(self):
        r = run_cli("pi", "--log2-inv-p", "2")
        assert r.returncode == 0
        rec = json.loads(r.stdout)
        assert rec["command"] == "pi"
        assert rec["outputs"]["L"] == 12
        assert rec["outputs"]["p"] == 0.25
        assert "log_pi" in rec["outputs"]
        assert "wall_time_seconds" in rec and "tool_version" in rec

    def test_trivial_threshold(self):
        r = run_cli("pi", "--p", "0.9", "--threshold", "2")
        rec = json.loads(r.stdout)
        assert rec["outputs"]["log_pi"] == 0.0

    def test_deterministic_apart_from_wall_time(self):
        a = json.loads(run_cli("pi", "--log2-inv-p", "3").stdout)
        b = json.loads(run_cli("pi", "--log2-inv-p", "3").stdout)
        a.pop("wall_time_seconds")
        b.pop("wall_time_seconds")
        assert a == b

    def test_usage_error_exit_1(self):
        assert run_cli("pi").returncode == 1
        assert run_cli("pi", "--p", "1.5").returncode == 1
        assert run_cli("pi", "--p", "0.5", "--log2-inv-p", "2").returncode == 1

    def test_env_variable_default(self):
        rec = json.loads(run_cli("pi", "--log2-inv-p", "3",
                                 env={"BPDP_PI_CONVENTION": "at-least"}).stdout)
        assert rec["outputs"]["convention"] == "at-least"

    def test_flag_beats_env(self):
        rec = json.loads(run_cli("pi", "--log2-inv-p", "3",
                                 "--convention", "exact",
                                 env={"BPDP_PI_CONVENTION": "at-least"}).stdout)
        assert rec["outputs"]["convention"] == "exact"

    def test_memory_cap_exit_3(self):
        r = run_cli("pi", "--log2-inv-p", "6", "--memory-cap-bytes", "1000")
        assert r.returncode == 3
        assert "cap" in r.stderr

    def test_csv_append(self, tmp_path):
        out = tmp_path / "pi.csv"
        run_cli("pi", "--log2-inv-p", "2", "--csv", str(out))
        run_cli("pi", "--log2-inv-p", "3", "--csv", str(out))
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "log2_inv_p,p,log_pi"
        assert len(lines) == 3


class TestScan:
    def test_streams_rows(self):
        r = run_cli("scan", "--log2-inv-p-range", "2..4")
        lines = r.stdout.strip().splitlines()
        assert lines[0] == "log2_inv_p,log_pi"
        assert len(lines) == 4
        assert [int(l.split(",")[0]) for l in lines[1:]] == [2, 3, 4]

    def test_empty_range_header_only(self):
        r = run_cli("scan", "--log2-inv-p-range", "5..4")
        assert r.stdout.strip() == "log2_inv_p,log_pi"

    def test_resume_skips_completed(self, tmp_path):
        out = tmp_path / "scan.csv"
        run_cli("scan", "--log2-inv-p-range", "2..3", "--output", str(out))
        before = out.read_text()
        r = run_cli("scan", "--log2-inv-p-range", "2..4", "--output", str(out),
                    "--resume")
        assert r.returncode == 0
        after = out.read_text()
        assert after.startswith(before)
        assert len(after.strip().splitlines()) == 4

    def test_fit_roundtrip_matches_in_process(self, tmp_path):
        out = tmp_path / "scan.csv"
        run_cli("scan", "--log2-inv-p-range", "2..6", "--output", str(out))
        rec = json.loads(run_cli("fit", "--input", str(out)).stdout)
        import csv
        from bpdp.fitting import PiDataset, fit_first_order
        rows = []
        with open(out, newline="") as fh:
            for line in csv.DictReader(fh):
                rows.append((int(line["log2_inv_p"]), float(line["log_pi"])))
        want = fit_first_order(PiDataset(tuple(rows)))
        assert rec["outputs"]["first_order"]["alpha"] == pytest.approx(
            want["alpha"], rel=1e-12)


class TestOtherCommands:
    def test_constants(self):
        rec = json.loads(run_cli("constants").stdout)
        assert rec["outputs"]["lambda2_f"] == pytest.approx(
            5.80490630427886, abs=1e-10)
        assert rec["outputs"]["lambda2_2n"] == pytest.approx(7.054547, abs=5e-6)

    def test_functions_monotone_columns(self):
        r = run_cli("functions", "--grid", "1e-6..60", "--points", "50")
        lines = r.stdout.strip().splitlines()
        assert lines[0] == "z,f,g,h,h2,h2_mod,alpha"
        rows = [list(map(float, l.split(","))) for l in lines[1:]]
        for col in (1, 2, 3, 4, 5):          # f, g, h, h2, h2_mod decrease
            vals = [row[col] for row in rows]
            assert all(b < a for a, b in zip(vals, vals[1:]))
        alphas = [row[6] for row in rows]    # alpha increasing, capped at 2
        assert all(1.0 < a <= 2.0 for a in alphas)
        assert all(b >= a for a, b in zip(alphas, alphas[1:]))

    def test_fit_table3(self):
        rec = json.loads(run_cli("fit", "--input", str(DATA)).stdout)
        out = rec["outputs"]
        assert out["four_param"]["alpha"] == pytest.approx(0.99978, rel=1e-3)
        assert out["second_order"]["lambda2"] == pytest.approx(5.027234, abs=1e-4)
        assert "coordinates" in out

    def test_simulate_occupied(self):
        rec = json.loads(run_cli("simulate", "--event", "O", "--width", "2",
                                 "--height", "2", "--p", "0.5", "--n", "4000",
                                 "--seed", "1").stdout)
        out = rec["outputs"]
        assert abs(out["p_hat"] - out["expected"]) <= 4 * out["std_err"]
        assert rec["seed"] == 1

    def test_simulate_reproducible(self):
        args = ("simulate", "--event", "G|", "--width", "3", "--height", "4",
                "--p", "0.2", "--n", "2000", "--seed", "7")
        a = json.loads(run_cli(*args).stdout)
        b = json.loads(run_cli(*args).stdout)
        assert a["outputs"]["p_hat"] == b["outputs"]["p_hat"]

    def test_matrix_report(self):
        r = run_cli("matrix")
        assert r.returncode == 0
        assert "[pass]" in r.stdout and "FAIL" not in r.stdout

    def test_verify_stochasticity(self):
        r = run_cli("verify", "--suite", "stochasticity")
        assert r.returncode == 0
        assert "[pass]" in r.stdout
