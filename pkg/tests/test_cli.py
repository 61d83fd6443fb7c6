import csv
import math
import subprocess
import sys

import pytest

from bornsim.cli import main

SQ2 = 1.0 / math.sqrt(2.0)
BENCH = f"{SQ2},0.5,0.5"


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestAnalytic:
    def test_rod_eigenstate(self, capsys):
        assert main(["analytic", "--model", "rod", "--state", "1,0,0",
                     "--frame", "identity"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        values = {l.split()[0]: float(l.split()[1]) for l in lines}
        assert values == {"o1": 1.0, "o2": 0.0, "o3": 0.0}

    def test_sphere_sixty_degrees(self, capsys):
        state = f"0.5,{math.sqrt(3) / 2},0"
        assert main(["analytic", "--model", "sphere2d", "--state", state]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        values = {l.split()[0]: float(l.split()[1]) for l in lines}
        assert values["o1"] == pytest.approx(0.75, abs=1e-12)
        assert values["o2"] == pytest.approx(0.25, abs=1e-12)

    def test_rod_uniform_variant(self, capsys):
        assert main(["analytic", "--model", "rod", "--weight", "uniform-variant",
                     "--state", BENCH]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        probs = [float(l.split()[1]) for l in lines]
        # table values carry 12 significant digits
        assert sum(probs) == pytest.approx(1.0, abs=1e-9)
        assert probs[2] == pytest.approx(0.292015924466717, abs=1e-9)

    def test_csv_output(self, tmp_path, capsys):
        out = tmp_path / "analytic.csv"
        assert main(["analytic", "--model", "ks", "--state", "0,0,1",
                     "--frame", "1,0,0", "--out", str(out)]) == 0
        capsys.readouterr()
        rows = read_csv(out)
        assert [r["outcome"] for r in rows] == ["up", "down"]
        assert float(rows[0]["probability"]) == pytest.approx(0.5, abs=1e-12)
        assert rows[0]["frame_id"] == "custom"

    def test_invalid_state_exits_2(self, capsys):
        assert main(["analytic", "--model", "rod", "--state", "0,0,0"]) == 2
        assert "error" in capsys.readouterr().err


class TestSimulate:
    def test_quantum_self_check_passes(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        code = main(["simulate", "--model", "rod", "--state", BENCH,
                     "--trials", "200000", "--seed", "11", "--out", str(out)])
        captured = capsys.readouterr()
        assert code == 0
        assert "verdict=PASS" in captured.err
        rows = read_csv(out)
        assert len(rows) == 3
        assert sum(int(r["count"]) for r in rows) == 200000
        for r in rows:
            assert float(r["ci_low"]) <= float(r["frequency"]) <= float(r["ci_high"])

    def test_variant_against_born_fails_with_exit_3(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        code = main(["simulate", "--model", "rod", "--weight", "uniform-variant",
                     "--state", BENCH, "--trials", "1000000", "--seed", "12",
                     "--expect", "born", "--out", str(out)])
        captured = capsys.readouterr()
        assert code == 3
        assert "verdict=FAIL" in captured.err

    def test_single_trial_has_no_verdict(self, tmp_path, capsys):
        out = tmp_path / "one.csv"
        code = main(["simulate", "--model", "sphere2d", "--state", "0,1,0",
                     "--trials", "1", "--seed", "1", "--out", str(out)])
        captured = capsys.readouterr()
        assert code == 0
        assert "no verdict" in captured.err
        assert "verdict=" not in captured.err
        rows = read_csv(out)
        assert sum(int(r["count"]) for r in rows) == 1

    def test_csv_bytes_are_reproducible(self, tmp_path, capsys):
        args = ["simulate", "--model", "ks", "--state", "0,0,1",
                "--frame", "random:5", "--trials", "50000", "--seed", "33"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_csv_schema(self, tmp_path, capsys):
        out = tmp_path / "schema.csv"
        main(["simulate", "--model", "rod", "--state", BENCH,
              "--trials", "2000", "--seed", "4", "--out", str(out)])
        capsys.readouterr()
        header = out.read_text().splitlines()[0]
        assert header == ("model,weight,state_x,state_y,state_z,frame_id,"
                          "outcome,count,frequency,expected,ci_low,ci_high")

    def test_workers_flag_keeps_counts(self, tmp_path, capsys):
        args = ["simulate", "--model", "rod", "--state", BENCH,
                "--trials", "400000", "--seed", "21"]
        a, b = tmp_path / "w1.csv", tmp_path / "w8.csv"
        assert main(args + ["--workers", "1", "--out", str(a)]) == 0
        assert main(args + ["--workers", "8", "--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


class TestSweep:
    def test_step_count_must_be_at_least_two(self, capsys):
        assert main(["sweep", "--model", "rod", "--state", "1,0,0",
                     "--steps", "1"]) == 2
        assert "steps" in capsys.readouterr().err

    def test_rod_quantum_sweep_tracks_cosine_squared(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--model", "rod", "--state", "1,0,0",
                     "--steps", "9", "--trials", "100000", "--seed", "123",
                     "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 9
        assert float(rows[0]["analytic"]) == 1.0
        assert float(rows[-1]["analytic"]) == pytest.approx(0.0, abs=1e-30)
        mid = rows[4]
        assert float(mid["analytic"]) == pytest.approx(0.5, abs=1e-9)
        for r in rows:
            angle = float(r["angle"])
            # CSV carries 12 significant digits
            assert float(r["analytic"]) == pytest.approx(
                math.cos(angle) ** 2, abs=1e-9
            )
            # empirical column within its confidence interval of analytic
            assert float(r["ci_low"]) - 1e-12 <= float(r["analytic"]) <= float(r["ci_high"]) + 1e-12

    def test_sphere_sweep_analytic_column(self, tmp_path, capsys):
        out = tmp_path / "sweep2.csv"
        assert main(["sweep", "--model", "sphere2d", "--state", "1,0,0",
                     "--steps", "5", "--trials", "50000", "--seed", "5",
                     "--out", str(out)]) == 0
        capsys.readouterr()
        rows = read_csv(out)
        for r in rows:
            angle = float(r["angle"])
            assert float(r["analytic"]) == pytest.approx(
                (1 + math.cos(angle)) / 2, abs=1e-9
            )


class TestFramecheck:
    def test_gleason_is_additive(self, capsys):
        assert main(["framecheck", "--measure", "gleason", "--state", BENCH,
                     "--trials", "300", "--seed", "9"]) == 0
        out = capsys.readouterr().out
        assert "additive_within_1e-12=yes" in out

    def test_rod_variant_reports(self, tmp_path, capsys):
        out = tmp_path / "fc.csv"
        assert main(["framecheck", "--measure", "rod", "--weight", "uniform-variant",
                     "--state", BENCH, "--trials", "40", "--seed", "9",
                     "--out", str(out)]) == 0
        capsys.readouterr()
        rows = read_csv(out)
        assert len(rows) == 40
        for r in rows:
            assert abs(float(r["sum"]) - 1.0) < 1e-12


class TestInputHandling:
    def test_config_file_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "# benchmark configuration\n"
            "model = rod\n"
            f"state = {BENCH}\n"
            "trials = 5000\n"
            "seed = 77\n"
        )
        out = tmp_path / "from_config.csv"
        code = main(["simulate", "--config", str(cfg), "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        rows = read_csv(out)
        assert sum(int(r["count"]) for r in rows) == 5000

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(f"model = rod\nstate = {BENCH}\ntrials = 5000\nseed = 77\n")
        out = tmp_path / "override.csv"
        assert main(["simulate", "--config", str(cfg), "--trials", "2500",
                     "--out", str(out)]) == 0
        capsys.readouterr()
        rows = read_csv(out)
        assert sum(int(r["count"]) for r in rows) == 2500

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bogus = 1\n")
        assert main(["simulate", "--config", str(cfg), "--model", "rod",
                     "--state", BENCH]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_seed_env_var_sets_default(self, tmp_path, capsys, monkeypatch):
        out1, out2 = tmp_path / "e1.csv", tmp_path / "e2.csv"
        monkeypatch.setenv("BORNSIM_SEED", "4242")
        assert main(["simulate", "--model", "rod", "--state", BENCH,
                     "--trials", "20000", "--out", str(out1)]) == 0
        monkeypatch.delenv("BORNSIM_SEED")
        assert main(["simulate", "--model", "rod", "--state", BENCH,
                     "--trials", "20000", "--seed", "4242", "--out", str(out2)]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_malformed_state_and_frame_exit_2(self, capsys):
        assert main(["analytic", "--model", "rod", "--state", "1,2"]) == 2
        assert main(["analytic", "--model", "rod", "--state", "1,0,zebra"]) == 2
        assert main(["analytic", "--model", "rod", "--state", "1,0,0",
                     "--frame", "1,0,0,1,0,0,0,0,1"]) == 2
        capsys.readouterr()

    def test_frame_reorthonormalized_within_tolerance(self, capsys):
        # slightly off-orthonormal input is accepted and cleaned up
        eps = 5e-7
        frame = f"1,{eps},0,0,1,0,0,0,1"
        assert main(["analytic", "--model", "rod", "--state", "1,0,0",
                     "--frame", frame]) == 0
        capsys.readouterr()

    def test_missing_model_or_state(self, capsys):
        assert main(["analytic", "--state", "1,0,0"]) == 2
        assert main(["analytic", "--model", "rod"]) == 2
        capsys.readouterr()

    def test_alpha_restricted_to_tabulated_values(self, capsys):
        assert main(["simulate", "--model", "rod", "--state", BENCH,
                     "--trials", "2000", "--alpha", "0.2"]) == 2
        capsys.readouterr()


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "bornsim.cli", "analytic", "--model", "rod",
         "--state", "1,0,0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "o1 1"
