"""Text formats: recording CSV, light schedules, trials, and column CSVs.

All formats are UTF-8 with '\\n' line endings; blank lines and lines starting
with '#' are ignored. Recordings are plain CSV with a mandatory header
(``time_s,ch1_mV,...``). Parse errors carry a row number that counts data
rows from 1 (the header, comments, and blank lines are not counted), so the
number survives arbitrarily commented files.

Numbers are written with 9 significant digits, which exceeds 24-bit ADC
resolution and keeps golden files byte-stable; time values that 9 digits
cannot represent exactly fall back to the shortest exact decimal so that
parse(write(x)) recovers x.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyFile,
    MalformedRow,
    MismatchedSeries,
    NonMonotonicTime,
    NonUniformSpacing,
)
from .gates import StimulusTrial
from .model import LightSchedule, LightSegment, LightSource, SpikeTrain, TimeSeries

#: Tolerance for "uniform" sample spacing, seconds.
SPACING_TOL = 1e-9

#: dt assumed when a recording has fewer than two rows (1 Hz logger regime).
DEFAULT_DT = 1.0


def format_value(x: float) -> str:
    """Format a data value with 9 significant digits."""
    return f"{float(x):.9g}"


def format_time(t: float) -> str:
    """Format a time: 9 significant digits when exact, else shortest exact."""
    t = float(t)
    s = f"{t:.9g}"
    return s if float(s) == t else repr(t)


def _content_lines(text: str | Iterable[str]):
    """Yield stripped, non-blank, non-comment lines."""
    lines = text.splitlines() if isinstance(text, str) else text
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line


# --- recordings ---------------------------------------------------------------


def parse_recording(text: str | Iterable[str]) -> list[TimeSeries]:
    """Parse a recording CSV into one TimeSeries per channel.

    The header must start with ``time_s`` followed by at least one channel
    column. Times must strictly increase with uniform spacing (tolerance
    ``SPACING_TOL``). With fewer than two data rows, dt falls back to
    ``DEFAULT_DT`` and t0 to the sole row time (or 0).
    """
    rows: list[list[float]] = []
    n_channels = None
    prev_time = None
    dt = None
    for line in _content_lines(text):
        fields = line.split(",")
        if n_channels is None:
            if fields[0].strip() != "time_s" or len(fields) < 2:
                raise MalformedRow(
                    "header must be 'time_s' followed by channel columns"
                )
            n_channels = len(fields) - 1
            continue
        row = len(rows) + 1
        if len(fields) != n_channels + 1:
            raise MalformedRow(
                f"expected {n_channels + 1} columns, got {len(fields)}", row
            )
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise MalformedRow(f"non-numeric field in {line!r}", row) from None
        t = values[0]
        if prev_time is not None:
            if t <= prev_time:
                raise NonMonotonicTime(
                    f"time {t:g} does not increase past {prev_time:g}", row
                )
            gap = t - prev_time
            if dt is None:
                dt = gap
            elif abs(gap - dt) > SPACING_TOL:
                raise NonUniformSpacing(
                    f"spacing {gap!r} differs from {dt!r} by more than "
                    f"{SPACING_TOL:g} s",
                    row,
                )
        prev_time = t
        rows.append(values)

    if n_channels is None:
        raise EmptyFile("no header found")
    if not rows:
        return [
            TimeSeries(0.0, DEFAULT_DT, np.empty(0)) for _ in range(n_channels)
        ]
    t0 = rows[0][0]
    if dt is None:
        dt = DEFAULT_DT
    data = np.asarray(rows, dtype=np.float64)
    return [TimeSeries(t0, dt, data[:, 1 + c]) for c in range(n_channels)]


def write_recording(series: Sequence[TimeSeries]) -> str:
    """Serialize channels sharing t0/dt/length to recording CSV text."""
    if not series:
        raise MismatchedSeries("need at least one series")
    first = series[0]
    for i, s in enumerate(series[1:], start=2):
        if (s.t0, s.dt, len(s)) != (first.t0, first.dt, len(first)):
            raise MismatchedSeries(
                f"series {i} (t0={s.t0}, dt={s.dt}, n={len(s)}) does not match "
                f"series 1 (t0={first.t0}, dt={first.dt}, n={len(first)})"
            )
    header = "time_s," + ",".join(f"ch{i}_mV" for i in range(1, len(series) + 1))
    out = [header]
    for i in range(len(first)):
        t = first.t0 + i * first.dt
        row = [format_time(t)] + [format_value(s.samples[i]) for s in series]
        out.append(",".join(row))
    return "\n".join(out) + "\n"


# --- light schedules ----------------------------------------------------------


def _parse_seconds(token: str, row: int) -> float:
    if not token.endswith("s"):
        raise MalformedRow(f"expected a duration like '1800s', got {token!r}", row)
    try:
        return float(token[:-1])
    except ValueError:
        raise MalformedRow(f"bad duration {token!r}", row) from None


def parse_schedule(text: str | Iterable[str]) -> LightSchedule:
    """Parse a light schedule file.

    Directives, one per line:

    - ``segment <source> <intensity_lux> <start_s> <duration_s>``
    - ``cycle <source> <intensity> lux <on>s on <off>s off repeat <n> [start <t_s>]``

    The cycle shorthand expands to ``n`` ON segments separated by OFF gaps,
    starting at t=0 unless ``start`` says otherwise. An empty file is a valid
    schedule (always off).
    """
    segments: list[LightSegment] = []
    for row, line in enumerate(_content_lines(text), start=1):
        tokens = line.split()
        kind = tokens[0].lower()
        if kind == "segment":
            if len(tokens) != 5:
                raise MalformedRow(
                    "segment needs: source intensity_lux start_s duration_s", row
                )
            source = LightSource.parse(tokens[1])
            try:
                intensity, start, duration = (float(t) for t in tokens[2:5])
            except ValueError:
                raise MalformedRow(f"non-numeric field in {line!r}", row) from None
            segments.append(LightSegment(start, duration, source, intensity))
        elif kind == "cycle":
            if len(tokens) not in (10, 12):
                raise MalformedRow(
                    "cycle needs: source intensity lux <on>s on <off>s off "
                    "repeat <n> [start <t_s>]",
                    row,
                )
            source = LightSource.parse(tokens[1])
            try:
                intensity = float(tokens[2])
            except ValueError:
                raise MalformedRow(f"bad intensity {tokens[2]!r}", row) from None
            if tokens[3].lower() != "lux":
                raise MalformedRow(f"expected 'lux', got {tokens[3]!r}", row)
            on = _parse_seconds(tokens[4], row)
            if tokens[5].lower() != "on":
                raise MalformedRow(f"expected 'on', got {tokens[5]!r}", row)
            off = _parse_seconds(tokens[6], row)
            if tokens[7].lower() != "off":
                raise MalformedRow(f"expected 'off', got {tokens[7]!r}", row)
            if tokens[8].lower() != "repeat":
                raise MalformedRow(f"expected 'repeat', got {tokens[8]!r}", row)
            try:
                repeats = int(tokens[9])
            except ValueError:
                raise MalformedRow(f"bad repeat count {tokens[9]!r}", row) from None
            if repeats < 1:
                raise MalformedRow("repeat count must be >= 1", row)
            start = 0.0
            if len(tokens) == 12:
                if tokens[10].lower() != "start":
                    raise MalformedRow(f"expected 'start', got {tokens[10]!r}", row)
                try:
                    start = float(tokens[11])
                except ValueError:
                    raise MalformedRow(f"bad start {tokens[11]!r}", row) from None
            for k in range(repeats):
                segments.append(
                    LightSegment(start + k * (on + off), on, source, intensity)
                )
        else:
            raise MalformedRow(f"unknown directive {tokens[0]!r}", row)
    return LightSchedule(tuple(segments))


# --- spike trains ---------------------------------------------------------------


def write_spike_train(train: SpikeTrain) -> str:
    """Serialize a spike train as ``time_s,amplitude_mV`` CSV."""
    out = ["time_s,amplitude_mV"]
    for s in train:
        out.append(f"{format_time(s.time)},{format_value(s.amplitude)}")
    return "\n".join(out) + "\n"


def parse_spike_train(text: str | Iterable[str]) -> SpikeTrain:
    """Parse the ``time_s,amplitude_mV`` format back into a SpikeTrain."""
    times: list[float] = []
    amps: list[float] = []
    saw_header = False
    for line in _content_lines(text):
        if not saw_header:
            if line.split(",")[0].strip() != "time_s":
                raise MalformedRow("expected header 'time_s,amplitude_mV'")
            saw_header = True
            continue
        row = len(times) + 1
        fields = line.split(",")
        if len(fields) != 2:
            raise MalformedRow(f"expected 2 columns, got {len(fields)}", row)
        try:
            t, a = float(fields[0]), float(fields[1])
        except ValueError:
            raise MalformedRow(f"non-numeric field in {line!r}", row) from None
        if times and t <= times[-1]:
            raise NonMonotonicTime(f"time {t:g} does not increase", row)
        times.append(t)
        amps.append(a)
    if not saw_header:
        raise EmptyFile("no header found")
    return SpikeTrain.from_arrays(times, amps)


# --- stimulation trials ----------------------------------------------------------


def parse_trials(text: str | Iterable[str]) -> list[StimulusTrial]:
    """Parse a trials CSV (header ``onset_s,input_label``, onsets increasing)."""
    trials: list[StimulusTrial] = []
    saw_header = False
    for line in _content_lines(text):
        fields = [f.strip() for f in line.split(",")]
        if not saw_header:
            if fields[0] != "onset_s" or len(fields) != 2:
                raise MalformedRow("expected header 'onset_s,input_label'")
            saw_header = True
            continue
        row = len(trials) + 1
        if len(fields) != 2:
            raise MalformedRow(f"expected 2 columns, got {len(fields)}", row)
        try:
            onset = float(fields[0])
        except ValueError:
            raise MalformedRow(f"bad onset {fields[0]!r}", row) from None
        if trials and onset <= trials[-1].onset:
            raise NonMonotonicTime(f"onset {onset:g} does not increase", row)
        trials.append(StimulusTrial(onset, fields[1]))
    if not saw_header:
        raise EmptyFile("no header found")
    return trials


# --- single-column CSVs -----------------------------------------------------------


def write_column(name: str, values) -> str:
    """Serialize one named column of numbers (used for periods, messages)."""
    out = [name]
    out.extend(format_value(v) for v in np.asarray(values, dtype=np.float64))
    return "\n".join(out) + "\n"


def parse_column(text: str | Iterable[str], name: str | None = None) -> np.ndarray:
    """Parse a one-column CSV; checks the header name when given."""
    values: list[float] = []
    saw_header = False
    for line in _content_lines(text):
        if not saw_header:
            if name is not None and line.strip() != name:
                raise MalformedRow(f"expected header {name!r}")
            saw_header = True
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise MalformedRow(
                f"non-numeric value {line!r}", len(values) + 1
            ) from None
    if not saw_header:
        raise EmptyFile("no header found")
    return np.asarray(values, dtype=np.float64)
