import json
import os

import numpy as np
import pytest

from spikegate.cli import main
from spikegate.ingest import parse_recording, write_column, write_recording
from spikegate.model import TimeSeries


@pytest.fixture()
def no_env_seed(monkeypatch):
    monkeypatch.delenv("SPIKEGATE_SEED", raising=False)


def impulse_recording(path, times, n=600, height=10.0):
    x = np.zeros(n)
    for t in times:
        x[int(t)] = height
    path.write_text(write_recording([TimeSeries(0.0, 1.0, x)]), encoding="utf-8")


class TestSimulate(object):
    def test_round_trips_through_parser(self, tmp_path, no_env_seed):
        out = tmp_path / "rec.csv"
        rc = main([
            "simulate", "--profile", "L-Asp", "--duration", "200000",
            "--seed", "7", "--out", str(out),
        ])
        assert rc == 0
        channels = parse_recording(out.read_text(encoding="utf-8"))
        assert len(channels) == 1
        assert len(channels[0]) == 200000

    def test_duration_zero_header_only(self, tmp_path, no_env_seed):
        out = tmp_path / "rec.csv"
        rc = main([
            "simulate", "--profile", "L-Asp", "--duration", "0", "--out", str(out),
        ])
        assert rc == 0
        assert out.read_text(encoding="utf-8") == "time_s,ch1_mV\n"

    def test_unknown_profile_exit_2(self, tmp_path, no_env_seed, capsys):
        rc = main([
            "simulate", "--profile", "L-Unobtainium", "--duration", "10",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert rc == 2
        assert "unknown profile" in capsys.readouterr().err

    def test_profile_file(self, tmp_path, no_env_seed):
        pf = tmp_path / "prof.json"
        pf.write_text(json.dumps({
            "name": "custom", "period_mean": 500.0, "period_std": 50.0,
            "amplitude_mean": 2.0, "amplitude_std": 0.2,
        }), encoding="utf-8")
        out = tmp_path / "rec.csv"
        rc = main([
            "simulate", "--profile-file", str(pf), "--duration", "5000",
            "--seed", "1", "--out", str(out),
        ])
        assert rc == 0
        assert len(parse_recording(out.read_text(encoding="utf-8"))[0]) == 5000

    def test_schedule_file_used(self, tmp_path, no_env_seed):
        sched = tmp_path / "sched.txt"
        sched.write_text(
            "cycle white 186600 lux 1800s on 1800s off repeat 6\n", encoding="utf-8"
        )
        out = tmp_path / "rec.csv"
        rc = main([
            "simulate", "--profile", "L-Asp", "--duration", "20000", "--seed", "3",
            "--schedule", str(sched), "--factor-white", "0.5", "--out", str(out),
        ])
        assert rc == 0

    def test_seed_env_and_flag_precedence(self, tmp_path, monkeypatch):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        out_c = tmp_path / "c.csv"
        args = ["simulate", "--profile", "L-Asp", "--duration", "20000",
                "--noise-std", "0.01"]
        monkeypatch.delenv("SPIKEGATE_SEED", raising=False)
        main(args + ["--out", str(out_a)])  # default seed 0
        monkeypatch.setenv("SPIKEGATE_SEED", "99")
        main(args + ["--out", str(out_b)])  # env seed 99
        main(args + ["--out", str(out_c), "--seed", "0"])  # flag beats env
        assert out_a.read_bytes() != out_b.read_bytes()
        assert out_a.read_bytes() == out_c.read_bytes()


class TestAnalyze(object):
    def test_impulse_fixture_periods_exact(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [100, 200, 300, 400, 500])
        out = tmp_path / "out"
        rc = main([
            "analyze", str(rec), "--threshold", "5", "--refractory", "50",
            "--rate-bin", "100", "--out-dir", str(out),
        ])
        assert rc == 0
        periods_text = (out / "ch1" / "periods.csv").read_text(encoding="utf-8")
        assert periods_text == "period_s\n100\n100\n100\n100\n"

    def test_quartiles_keys_present(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [100, 200, 300])
        out = tmp_path / "out"
        assert main([
            "analyze", str(rec), "--threshold", "5", "--out-dir", str(out),
        ]) == 0
        quart = json.loads((out / "ch1" / "quartiles.json").read_text(encoding="utf-8"))
        assert {"q25", "median", "q75"} <= set(quart)

    def test_artifact_set_per_channel(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        x = np.zeros(400)
        x[100] = x[300] = 8.0
        rec.write_text(
            write_recording([TimeSeries(0.0, 1.0, x), TimeSeries(0.0, 1.0, x * 2)]),
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert main([
            "analyze", str(rec), "--threshold", "5", "--out-dir", str(out),
        ]) == 0
        for ch in ("ch1", "ch2"):
            for name in ("periods.csv", "histogram.csv", "quartiles.json",
                         "fft.csv", "rates.csv"):
                assert (out / ch / name).is_file()

    def test_empty_file_exit_1(self, tmp_path, no_env_seed, capsys):
        rec = tmp_path / "rec.csv"
        rec.write_text("", encoding="utf-8")
        rc = main(["analyze", str(rec), "--threshold", "5",
                   "--out-dir", str(tmp_path / "out")])
        assert rc == 1
        assert "no header" in capsys.readouterr().err

    def test_svg_emission_does_not_change_csv(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [100, 200, 300, 450])
        out_plain = tmp_path / "plain"
        out_plot = tmp_path / "plot"
        main(["analyze", str(rec), "--threshold", "5", "--out-dir", str(out_plain)])
        main(["analyze", str(rec), "--threshold", "5", "--out-dir", str(out_plot),
              "--plot"])
        for name in ("periods.csv", "histogram.csv", "quartiles.json", "fft.csv",
                     "rates.csv"):
            assert (out_plain / "ch1" / name).read_bytes() == (
                out_plot / "ch1" / name
            ).read_bytes()
        assert (out_plot / "ch1" / "trace.svg").is_file()
        assert (out_plot / "ch1" / "histogram.svg").is_file()


class TestGates(object):
    def write_trials(self, path):
        path.write_text(
            "onset_s,input_label\n0,01\n10000,10\n20000,11\n", encoding="utf-8"
        )

    def test_and_fixture(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [20500], n=30000)
        trials = tmp_path / "trials.csv"
        self.write_trials(trials)
        out = tmp_path / "gate.json"
        rc = main([
            "gates", str(rec), "--trials", str(trials), "--threshold", "5",
            "--out", str(out),
        ])
        assert rc == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["gate"] == "AND"
        assert doc["expression"] == "xy"

    def test_or_fixture_expression(self, tmp_path, no_env_seed):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [500, 10500, 20500], n=30000)
        trials = tmp_path / "trials.csv"
        self.write_trials(trials)
        out = tmp_path / "gate.json"
        assert main([
            "gates", str(rec), "--trials", str(trials), "--threshold", "5",
            "--out", str(out),
        ]) == 0
        assert json.loads(out.read_text(encoding="utf-8"))["expression"] == "x+y"

    def test_missing_pair_exit_2(self, tmp_path, no_env_seed, capsys):
        rec = tmp_path / "rec.csv"
        impulse_recording(rec, [500], n=30000)
        trials = tmp_path / "trials.csv"
        trials.write_text("onset_s,input_label\n0,01\n20000,11\n", encoding="utf-8")
        rc = main([
            "gates", str(rec), "--trials", str(trials), "--threshold", "5",
            "--out", str(tmp_path / "gate.json"),
        ])
        assert rc == 2
        assert "(10)" in capsys.readouterr().err


class TestLogic(object):
    def test_all_below_threshold_and_column(self, tmp_path, no_env_seed):
        p1 = tmp_path / "p1.csv"
        p2 = tmp_path / "p2.csv"
        p1.write_text(write_column("period_s", [3417.83, 2174.0]), encoding="utf-8")
        p2.write_text(write_column("period_s", [3265.83, 759.32]), encoding="utf-8")
        out = tmp_path / "logic.csv"
        rc = main(["logic", str(p1), str(p2), "--out", str(out)])
        assert rc == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        header = lines[0].split(",")
        and_col = header.index("AND")
        assert [row.split(",")[and_col] for row in lines[1:]] == ["1", "1"]

    def test_three_inputs_accepted(self, tmp_path, no_env_seed):
        paths = []
        for i, vals in enumerate(([100.0, 200.0], [100.0, 5000.0], [100.0, 100.0])):
            p = tmp_path / f"p{i}.csv"
            p.write_text(write_column("period_s", vals), encoding="utf-8")
            paths.append(str(p))
        out = tmp_path / "logic.csv"
        assert main(["logic", *paths, "--out", str(out)]) == 0
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith("in1,in2,in3,AND,OR,XOR,NAND,NOR,XNOR")
        assert "NOT_in3" in header

    def test_length_mismatch_exit_2(self, tmp_path, no_env_seed):
        p1 = tmp_path / "p1.csv"
        p2 = tmp_path / "p2.csv"
        p1.write_text(write_column("period_s", [1.0, 2.0]), encoding="utf-8")
        p2.write_text(write_column("period_s", [1.0]), encoding="utf-8")
        rc = main(["logic", str(p1), str(p2), "--out", str(tmp_path / "o.csv")])
        assert rc == 2

    def test_single_input_exit_2(self, tmp_path, no_env_seed):
        p1 = tmp_path / "p1.csv"
        p1.write_text(write_column("period_s", [1.0]), encoding="utf-8")
        rc = main(["logic", str(p1), "--out", str(tmp_path / "o.csv")])
        assert rc == 2

    def test_convention_flag(self, tmp_path, no_env_seed):
        p1 = tmp_path / "p1.csv"
        p2 = tmp_path / "p2.csv"
        p1.write_text(write_column("period_s", [5000.0]), encoding="utf-8")
        p2.write_text(write_column("period_s", [5000.0]), encoding="utf-8")
        out = tmp_path / "logic.csv"
        assert main(["logic", str(p1), str(p2), "--convention", "above_is_1",
                     "--out", str(out)]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        and_col = lines[0].split(",").index("AND")
        assert lines[1].split(",")[and_col] == "1"


class TestFm(object):
    def write_sine_message(self, path, n=8192, fs=2000.0):
        t = np.arange(n) / fs
        path.write_text(
            write_column("message", np.sin(2 * np.pi * 1.0 * t)), encoding="utf-8"
        )

    def test_sine_round_trip_artifacts(self, tmp_path, no_env_seed, capsys):
        msg = tmp_path / "msg.csv"
        self.write_sine_message(msg)
        out = tmp_path / "fmout"
        rc = main(["fm", "--message", str(msg), "--fs", "2000",
                   "--out-dir", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "roundtrip_correlation=" in printed
        corr = float(printed.split("roundtrip_correlation=")[1].split()[0])
        assert corr >= 0.99
        assert (out / "modulated.csv").is_file()
        assert (out / "demodulated.csv").is_file()
        fit = json.loads((out / "pdf-fit.json").read_text(encoding="utf-8"))
        assert fit["reference"]["mu"] == -0.0008
        assert fit["reference"]["sigma"] == 0.7076
        assert fit["roundtrip_correlation"] >= 0.99

    def test_default_carrier_and_deviation(self):
        # defaults are 200 Hz carrier / 50 Hz deviation
        from spikegate.cli import build_parser

        args = build_parser().parse_args(
            ["fm", "--message", "m.csv", "--fs", "2000", "--out-dir", "d"]
        )
        assert args.carrier == 200.0
        assert args.deviation == 50.0

    def test_nyquist_exit_2(self, tmp_path, no_env_seed):
        msg = tmp_path / "msg.csv"
        self.write_sine_message(msg, n=512)
        rc = main(["fm", "--message", str(msg), "--fs", "300",
                   "--out-dir", str(tmp_path / "o")])
        assert rc == 2

    def test_periods_input_records_normalization(self, tmp_path, no_env_seed):
        per = tmp_path / "periods.csv"
        per.write_text(
            write_column("period_s", np.linspace(2000.0, 4000.0, 2000)),
            encoding="utf-8",
        )
        out = tmp_path / "fmout"
        assert main(["fm", "--periods", str(per), "--fs", "2000",
                     "--out-dir", str(out)]) == 0
        fit = json.loads((out / "pdf-fit.json").read_text(encoding="utf-8"))
        assert fit["normalization"] == {
            "min": 2000.0, "max": 4000.0, "hold_samples": 100,
        }
        # with levels held past the filter transient the round trip is clean
        assert fit["roundtrip_correlation"] >= 0.95


class TestPhaseAndPendulum(object):
    def test_phase_outputs(self, tmp_path, no_env_seed, capsys):
        rec = tmp_path / "rec.csv"
        rc0 = main(["simulate", "--profile", "L-Glu:L-Phe:L-His", "--duration",
                    "60000", "--seed", "21", "--noise-std", "0.02",
                    "--out", str(rec)])
        assert rc0 == 0
        out = tmp_path / "ph"
        rc = main(["phase", str(rec), "--out-dir", str(out), "--plot"])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "phase_jump_ratio=" in printed
        ratio = float(printed.split("phase_jump_ratio=")[1].split()[0])
        assert ratio > 10.0
        assert (out / "portrait.csv").is_file()
        assert (out / "portrait.svg").is_file()

    def test_pendulum_ellipse_svg(self, tmp_path, no_env_seed):
        out = tmp_path / "pen"
        rc = main(["pendulum", "--omega", "1", "--zeta", "0", "--dt", "0.001",
                   "--steps", "10000", "--out-dir", str(out), "--plot"])
        assert rc == 0
        body = (out / "portrait.svg").read_text(encoding="utf-8")
        assert body.startswith("<svg")
        # undamped: the portrait curve must close on itself (an ellipse)
        rows = (out / "portrait.csv").read_text(encoding="utf-8").splitlines()[1:]
        xs = np.array([float(r.split(",")[0]) for r in rows])
        vs = np.array([float(r.split(",")[1]) for r in rows])
        r2 = xs**2 + vs**2
        assert np.abs(r2 - 1.0).max() < 1e-6

    def test_pendulum_spiral_shrinks(self, tmp_path, no_env_seed):
        out = tmp_path / "pen"
        assert main(["pendulum", "--omega", "1", "--zeta", "0.1", "--dt", "0.001",
                     "--steps", "20000", "--out-dir", str(out)]) == 0
        rows = (out / "portrait.csv").read_text(encoding="utf-8").splitlines()[1:]
        xs = np.array([float(r.split(",")[0]) for r in rows])
        vs = np.array([float(r.split(",")[1]) for r in rows])
        r = np.sqrt(xs**2 + vs**2)
        assert r[-1] < 0.2 * r[0]


class TestProfilesCommand(object):
    def test_lists_five(self, capsys):
        assert main(["profiles"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 5
        assert any(line.startswith("L-Asp:") for line in out)


class TestUsageErrors(object):
    def test_no_command_exit_2(self, capsys):
        assert main([]) == 2

    def test_bad_flag_exit_2(self, capsys):
        assert main(["simulate", "--nope"]) == 2

    def test_missing_input_file_exit_1(self, tmp_path, capsys):
        rc = main(["analyze", str(tmp_path / "absent.csv"), "--threshold", "1",
                   "--out-dir", str(tmp_path / "o")])
        assert rc == 1
