"""Command-line interface.

Verbs: simulate, analyze, gates, logic, fm, phase, pendulum, profiles.
Exit codes: 0 success, 1 data/runtime error, 2 usage error. All outputs are
deterministic for fixed inputs, flags, and seed; JSON uses fixed key order and
9-significant-digit numbers, CSV uses the ingest module's formatting. SVG
plots are rendered from the CSV files already written, never from live
arrays, so plotting can never perturb numeric outputs.

The default seed is 0; the SPIKEGATE_SEED environment variable overrides it
and the --seed flag overrides both.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, fm, gates, ingest, simulate, stats, svgplot
from .errors import (
    EmptyInput,
    InvalidParams,
    SpikegateError,
    UnknownProfile,
    USAGE_ERRORS,
)
from .model import LightSchedule, ProteinoidProfile, builtin_profiles

DEFAULT_SEED = 0
SEED_ENV_VAR = "SPIKEGATE_SEED"

#: Reference Gaussian fit of a demodulated signal, published alongside the
#: recordings this package models; raw source data is unavailable, so these
#: are reported as metadata only and never asserted against.
REFERENCE_PDF_FIT = {"mu": -0.0008, "sigma": 0.7076}


# --- small shared helpers ---------------------------------------------------


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _round9(obj):
    """Round floats to 9 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.9g}") if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _write_json(path, obj) -> None:
    _write_text(path, json.dumps(_round9(obj), indent=2, ensure_ascii=False) + "\n")


def _write_rows_csv(path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(fields) for fields in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _read_csv_columns(path) -> tuple[list[str], list[list[float]]]:
    """Parse a small CSV written by this CLI back into columns (for SVGs)."""
    names: list[str] = []
    columns: list[list[float]] = []
    for line in ingest._content_lines(_read_text(path)):
        fields = line.split(",")
        if not names:
            names = [f.strip() for f in fields]
            columns = [[] for _ in names]
            continue
        for col, field in zip(columns, fields):
            col.append(float(field))
    return names, columns


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidParams(
                f"{SEED_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return DEFAULT_SEED


def _load_profile(args) -> ProteinoidProfile:
    if args.profile is not None:
        profiles = builtin_profiles()
        if args.profile not in profiles:
            known = ", ".join(profiles)
            raise UnknownProfile(f"unknown profile {args.profile!r} (known: {known})")
        return profiles[args.profile]
    raw = json.loads(_read_text(args.profile_file))
    return ProteinoidProfile(
        name=raw.get("name", Path(args.profile_file).stem),
        period_mean=float(raw["period_mean"]),
        period_std=float(raw["period_std"]),
        amplitude_mean=float(raw["amplitude_mean"]),
        amplitude_std=float(raw["amplitude_std"]),
        fast_period=float(raw.get("fast_period", 128.0)),
    )


def _detect_params(args) -> analysis.DetectParams:
    return analysis.DetectParams(
        threshold=args.threshold,
        refractory=args.refractory,
        smooth_window=args.smooth,
        detrend=args.detrend,
    )


def _add_detect_args(sp) -> None:
    sp.add_argument("--threshold", type=float, required=True,
                    help="minimum smoothed peak height, mV")
    sp.add_argument("--refractory", type=float, default=0.0,
                    help="minimum spacing between spikes, s")
    sp.add_argument("--smooth", type=int, default=1,
                    help="moving-average width in samples (odd)")
    sp.add_argument("--detrend", action="store_true",
                    help="subtract a linear trend before detection")


# --- subcommands --------------------------------------------------------------


def cmd_profiles(args) -> int:
    for name, p in builtin_profiles().items():
        print(
            f"{name}: period_mean={p.period_mean:g} s period_std={p.period_std:g} s "
            f"amplitude_mean={p.amplitude_mean:g} mV amplitude_std={p.amplitude_std:g} mV "
            f"fast_period={p.fast_period:g} s"
        )
    return 0


def cmd_simulate(args) -> int:
    profile = _load_profile(args)
    schedule = (
        ingest.parse_schedule(_read_text(args.schedule))
        if args.schedule
        else None
    )
    params = simulate.SimParams(
        profile=profile,
        schedule=schedule if schedule is not None else LightSchedule(),
        duration=args.duration,
        seed=_resolve_seed(args),
        noise_std=args.noise_std,
        light_period_factor={
            "white": args.factor_white,
            "black": args.factor_black,
            "off": args.factor_off,
        },
        spike_tau=args.spike_tau,
    )
    ts = simulate.synth_proteinoid(params)
    _write_text(args.out, ingest.write_recording([ts]))
    return 0


def _analyze_channel(ts, args, out_dir: Path) -> None:
    train = analysis.detect_spikes(ts, _detect_params(args))
    per = analysis.periods(train)
    _write_text(out_dir / "periods.csv", ingest.write_column("period_s", per))

    if per.size:
        lo, hi = float(per.min()), float(per.max())
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        else:
            hi = float(np.nextafter(hi, np.inf))
        hist = analysis.histogram(per, np.linspace(lo, hi, args.bins + 1))
        rows = [
            (ingest.format_value(a), ingest.format_value(b), str(int(c)))
            for a, b, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts)
        ]
        rows.append((f"# out_of_range={hist.out_of_range}",))
    else:
        rows = [("# out_of_range=0",)]
    _write_rows_csv(out_dir / "histogram.csv", "bin_lo_s,bin_hi_s,count", rows)

    if per.size:
        q25, med, q75 = analysis.quartiles(per)
        quart = {"n": int(per.size), "q25": q25, "median": med, "q75": q75}
    else:
        quart = {"n": 0, "q25": None, "median": None, "q75": None}
    _write_json(out_dir / "quartiles.json", quart)

    freqs, mags = analysis.fft_spectrum(ts)
    _write_rows_csv(
        out_dir / "fft.csv",
        "freq_hz,magnitude",
        (
            (ingest.format_value(f), ingest.format_value(m))
            for f, m in zip(freqs, mags)
        ),
    )

    centers, rates = analysis.binned_rate(
        train, ts.t0, ts.t0 + ts.duration, args.rate_bin
    )
    _write_rows_csv(
        out_dir / "rates.csv",
        "bin_center_s,rate_hz",
        (
            (ingest.format_time(c), ingest.format_value(r))
            for c, r in zip(centers, rates)
        ),
    )


def _plot_channel(recording_path, channel_index: int, out_dir: Path) -> None:
    # Every figure is re-read from CSV already on disk.
    names, cols = _read_csv_columns(recording_path)
    _write_text(
        out_dir / "trace.svg",
        svgplot.line_chart(
            cols[0], cols[1 + channel_index],
            title=f"channel {channel_index + 1}", xlabel="time, s", ylabel="mV",
        ),
    )
    _, hist_cols = _read_csv_columns(out_dir / "histogram.csv")
    if hist_cols and hist_cols[0]:
        edges = hist_cols[0] + [hist_cols[1][-1]]
        _write_text(
            out_dir / "histogram.svg",
            svgplot.bar_chart(edges, hist_cols[2], title="period histogram",
                              xlabel="period, s"),
        )
    _, fft_cols = _read_csv_columns(out_dir / "fft.csv")
    _write_text(
        out_dir / "fft.svg",
        svgplot.line_chart(fft_cols[0], fft_cols[1], title="amplitude spectrum",
                           xlabel="frequency, Hz", ylabel="mV"),
    )
    _, rate_cols = _read_csv_columns(out_dir / "rates.csv")
    _write_text(
        out_dir / "rates.svg",
        svgplot.line_chart(rate_cols[0], rate_cols[1], title="binned firing rate",
                           xlabel="time, s", ylabel="Hz"),
    )


def cmd_analyze(args) -> int:
    channels = ingest.parse_recording(_read_text(args.recording))
    for i, ts in enumerate(channels):
        out_dir = Path(args.out_dir) / f"ch{i + 1}"
        _analyze_channel(ts, args, out_dir)
        if args.plot:
            _plot_channel(args.recording, i, out_dir)
    return 0


def cmd_gates(args) -> int:
    channels = ingest.parse_recording(_read_text(args.recording))
    ts = channels[0]
    train = analysis.detect_spikes(ts, _detect_params(args))
    trials = ingest.parse_trials(_read_text(args.trials))
    report = gates.mine_gate(train, trials, args.window)
    doc = report.to_json() + "\n"
    _write_text(args.out, doc)
    sys.stdout.write(doc)
    return 0


def cmd_logic(args) -> int:
    vectors = [
        gates.binarize_periods(
            ingest.parse_column(_read_text(path), "period_s"),
            args.threshold,
            args.convention,
        )
        for path in args.periods_files
    ]
    table = gates.eval_logic(vectors)
    k = len(vectors)
    header = ",".join(
        [f"in{i}" for i in range(1, k + 1)] + list(table.keys())
    )
    n = vectors[0].size
    rows = (
        [str(int(vec[j])) for vec in vectors]
        + [str(int(table[name][j])) for name in table]
        for j in range(n)
    )
    _write_rows_csv(args.out, header, rows)
    return 0


def cmd_fm(args) -> int:
    out_dir = Path(args.out_dir)
    normalization = None
    if args.message:
        message = ingest.parse_column(_read_text(args.message), "message")
    else:
        per = ingest.parse_column(_read_text(args.periods), "period_s")
        if per.size == 0:
            raise EmptyInput("periods file has no values")
        lo, hi = float(per.min()), float(per.max())
        message = (
            np.zeros_like(per) if hi == lo else 2.0 * (per - lo) / (hi - lo) - 1.0
        )
        # hold each period level so it outlasts the demodulator transient
        message = np.repeat(message, args.hold)
        normalization = {"min": lo, "max": hi, "hold_samples": args.hold}

    params = fm.FmParams(
        sample_rate_hz=args.fs, carrier_hz=args.carrier, deviation_hz=args.deviation
    )
    signal = fm.fm_modulate(message, params)
    estimate = fm.fm_demodulate(signal, params)
    dt = 1.0 / args.fs
    _write_rows_csv(
        out_dir / "modulated.csv",
        "t_s,signal",
        (
            (ingest.format_time(i * dt), ingest.format_value(v))
            for i, v in enumerate(signal)
        ),
    )
    _write_rows_csv(
        out_dir / "demodulated.csv",
        "t_s,estimate",
        (
            (ingest.format_time(i * dt), ingest.format_value(v))
            for i, v in enumerate(estimate)
        ),
    )

    trim = min(100, message.size // 4)
    core_msg = np.clip(message, -1.0, 1.0)[trim : message.size - trim]
    core_est = estimate[trim : estimate.size - trim]
    correlation = None
    if core_msg.size >= 2 and core_msg.std() > 0 and core_est.std() > 0:
        correlation = float(np.corrcoef(core_msg, core_est)[0, 1])
        print(f"roundtrip_correlation={correlation:.9g}")

    fit_doc = {"n": None, "mu": None, "sigma": None, "nll": None}
    try:
        fit = stats.fit_gaussian(core_est)
        fit_doc = {"n": fit.n, "mu": fit.mu, "sigma": fit.sigma, "nll": fit.nll}
    except SpikegateError:
        pass
    _write_json(
        out_dir / "pdf-fit.json",
        {
            **fit_doc,
            "edge_trim_samples": trim,
            "roundtrip_correlation": correlation,
            "normalization": normalization,
            "reference": {
                **REFERENCE_PDF_FIT,
                "note": "published reference fit; raw source data unavailable",
            },
        },
    )
    return 0


def _write_portrait(portrait_x, portrait_v, out_dir: Path, plot: bool, title: str) -> None:
    _write_rows_csv(
        out_dir / "portrait.csv",
        "x_mV,v_mV_per_s",
        (
            (ingest.format_value(x), ingest.format_value(v))
            for x, v in zip(portrait_x, portrait_v)
        ),
    )
    if plot:
        _, cols = _read_csv_columns(out_dir / "portrait.csv")
        _write_text(
            out_dir / "portrait.svg",
            svgplot.line_chart(cols[0], cols[1], title=title,
                               xlabel="x, mV", ylabel="dx/dt, mV/s"),
        )


def cmd_phase(args) -> int:
    channels = ingest.parse_recording(_read_text(args.recording))
    portrait = analysis.phase_portrait(channels[0], args.smooth)
    steps = np.hypot(np.diff(portrait.x), np.diff(portrait.v))
    med = float(np.median(steps)) if steps.size else 0.0
    if med > 0:
        ratio = float(steps.max()) / med
    else:
        ratio = float("inf") if steps.size and steps.max() > 0 else 0.0
    print(f"phase_jump_ratio={ratio:.9g}")
    _write_portrait(portrait.x, portrait.v, Path(args.out_dir), args.plot,
                    "phase portrait")
    return 0


def cmd_pendulum(args) -> int:
    params = simulate.PendulumParams(
        omega=args.omega, zeta=args.zeta, theta0=args.theta0, v0=args.v0,
        dt=args.dt, n=args.steps,
    )
    displacement, velocity = simulate.pendulum(params)
    _write_portrait(displacement.samples, velocity.samples, Path(args.out_dir),
                    args.plot, "pendulum phase portrait")
    return 0


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikegate",
        description="Spike statistics, Boolean gate mining, and FM tooling "
        "for slow-voltage recordings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profiles", help="list built-in proteinoid profiles")
    sp.set_defaults(func=cmd_profiles)

    sp = sub.add_parser("simulate", help="generate a synthetic recording CSV")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--profile", help="built-in profile name")
    group.add_argument("--profile-file", help="JSON file with profile fields")
    sp.add_argument("--schedule", help="light schedule file")
    sp.add_argument("--duration", type=float, required=True, help="run length, s")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--noise-std", type=float, default=0.0, help="noise sigma, mV")
    sp.add_argument("--factor-white", type=float, default=1.0,
                    help="gap multiplier under white light")
    sp.add_argument("--factor-black", type=float, default=1.0,
                    help="gap multiplier under black light")
    sp.add_argument("--factor-off", type=float, default=1.0,
                    help="gap multiplier in darkness")
    sp.add_argument("--spike-tau", type=float, default=48.0,
                    help="burst envelope decay, s")
    sp.add_argument("--out", required=True, help="output recording CSV")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("analyze", help="periods, histogram, quartiles, FFT, rates")
    sp.add_argument("recording", help="recording CSV")
    _add_detect_args(sp)
    sp.add_argument("--bins", type=int, default=16, help="histogram bin count")
    sp.add_argument("--rate-bin", type=float, default=3600.0,
                    help="firing-rate bin width, s")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--plot", action="store_true", help="also write SVG figures")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("gates", help="mine the Boolean gate from stimulation trials")
    sp.add_argument("recording", help="recording CSV (first channel is used)")
    sp.add_argument("--trials", required=True,
                    help="CSV of onset_s,input_label with labels 01/10/11")
    sp.add_argument("--window", type=float, default=gates.SIMULTANEITY_WINDOW,
                    help="simultaneity/response window, s")
    _add_detect_args(sp)
    sp.add_argument("--out", required=True, help="output GateReport JSON")
    sp.set_defaults(func=cmd_gates)

    sp = sub.add_parser("logic", help="threshold period vectors and evaluate logic")
    sp.add_argument("periods_files", nargs="+", metavar="periods.csv")
    sp.add_argument("--threshold", type=float, default=gates.PERIOD_THRESHOLD,
                    help="period binarization threshold, s")
    sp.add_argument("--convention", choices=["below_is_1", "above_is_1"],
                    default="below_is_1")
    sp.add_argument("--out", required=True, help="output logic-table CSV")
    sp.set_defaults(func=cmd_logic)

    sp = sub.add_parser("fm", help="frequency-modulate a message or period vector")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", help="one-column CSV (header 'message')")
    group.add_argument("--periods",
                       help="one-column CSV (header 'period_s'), min-max "
                       "normalized to [-1, 1]")
    sp.add_argument("--carrier", type=float, default=200.0, help="carrier, Hz")
    sp.add_argument("--deviation", type=float, default=50.0,
                    help="frequency deviation, Hz")
    sp.add_argument("--fs", type=float, required=True, help="sample rate, Hz")
    sp.add_argument("--hold", type=int, default=100,
                    help="samples each period level is held for (periods input only)")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_fm)

    sp = sub.add_parser("phase", help="phase portrait of a recording")
    sp.add_argument("recording", help="recording CSV (first channel is used)")
    sp.add_argument("--smooth", type=int, default=1,
                    help="moving-average width before differentiation (odd)")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(func=cmd_phase)

    sp = sub.add_parser("pendulum", help="damped-pendulum reference portrait")
    sp.add_argument("--omega", type=float, required=True, help="natural frequency, rad/s")
    sp.add_argument("--zeta", type=float, default=0.0, help="damping ratio")
    sp.add_argument("--theta0", type=float, default=1.0)
    sp.add_argument("--v0", type=float, default=0.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--plot", action="store_true")
    sp.set_defaults(func=cmd_pendulum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpikegateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
