"""Spike detection and descriptive statistics.

Detection is deliberately simple: optional linear detrend, centered moving
average, then local maxima above a threshold with a greedy refractory rule.
The spikes this package cares about are minutes wide and high-SNR after
smoothing, so nothing fancier is warranted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadEdges,
    EmptyInput,
    InvalidParams,
    InvalidRange,
    NonPositiveWindow,
    NoPeak,
    TooShort,
)
from .model import PhasePortrait, Spike, SpikeTrain, TimeSeries


def moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average of odd width; edges padded with edge values."""
    if window < 1 or window % 2 == 0:
        raise InvalidParams(f"smoothing window must be odd and >= 1, got {window}")
    x = np.asarray(x, dtype=np.float64)
    if window == 1 or x.size == 0:
        return x.copy()
    pad = window // 2
    padded = np.pad(x, pad, mode="edge")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(padded, kernel, mode="valid")


def detrend_linear(x: np.ndarray) -> np.ndarray:
    """Subtract the least-squares line through the samples."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        return x - (x if x.size == 0 else x[0])
    idx = np.arange(x.size, dtype=np.float64)
    slope, intercept = np.polyfit(idx, x, 1)
    return x - (slope * idx + intercept)


@dataclass(frozen=True)
class DetectParams:
    """Spike detection knobs.

    threshold: minimum height (mV) of the smoothed, optionally detrended
    signal at a local maximum. refractory: minimum spacing (s) between
    accepted spikes; candidates are taken greedily in time order.
    """

    threshold: float
    refractory: float = 0.0
    smooth_window: int = 1
    detrend: bool = False

    def __post_init__(self):
        if not math.isfinite(self.threshold):
            raise InvalidParams("threshold must be finite")
        if not (math.isfinite(self.refractory) and self.refractory >= 0):
            raise InvalidParams(f"refractory must be >= 0, got {self.refractory!r}")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise InvalidParams(
                f"smooth_window must be odd and >= 1, got {self.smooth_window!r}"
            )


def detect_spikes(ts: TimeSeries, p: DetectParams) -> SpikeTrain:
    """Detect spikes as smoothed local maxima above threshold.

    Candidates are local maxima (left-strict, right-non-strict, so a flat top
    is counted once) of the conditioned signal with value >= threshold,
    accepted greedily in time order while skipping any candidate closer than
    ``refractory`` to the last accepted spike. Reported amplitudes come from
    the unsmoothed (but detrended, when enabled) signal at the detected index.
    """
    base = np.asarray(ts.samples, dtype=np.float64)
    if p.detrend:
        base = detrend_linear(base)
    y = moving_average(base, p.smooth_window)
    if y.size < 3:
        return SpikeTrain(())

    interior = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]) & (y[1:-1] >= p.threshold)
    candidates = np.flatnonzero(interior) + 1

    spikes = []
    last_time = -math.inf
    for i in candidates:
        t = ts.t0 + i * ts.dt
        if t - last_time < p.refractory:
            continue
        spikes.append(Spike(t, base[i]))
        last_time = t
    return SpikeTrain(tuple(spikes))


def periods(train: SpikeTrain) -> np.ndarray:
    """Consecutive differences of spike times, seconds (n-1 values)."""
    times = train.times
    return np.diff(times) if times.size else np.empty(0)


def mean_firing_rate(train: SpikeTrain, window_start: float, window_len: float) -> float:
    """Spike count in [window_start, window_start+window_len) divided by the window."""
    if not (math.isfinite(window_len) and window_len > 0):
        raise NonPositiveWindow(f"window length must be > 0, got {window_len!r}")
    times = train.times
    lo, hi = np.searchsorted(times, [window_start, window_start + window_len])
    return float(hi - lo) / window_len


def binned_rate(
    train: SpikeTrain, t0: float, t1: float, bin_width: float
) -> tuple[np.ndarray, np.ndarray]:
    """Firing rate per bin over [t0, t1): (bin_centers, rates_hz).

    The last bin may be partial and is divided by its true width, so
    sum(rate*width) always equals the spike count in [t0, t1).
    """
    if not (math.isfinite(bin_width) and bin_width > 0) or not t1 > t0:
        raise InvalidRange(f"need t1 > t0 and bin > 0, got {t0!r}, {t1!r}, {bin_width!r}")
    n_bins = int(math.ceil((t1 - t0) / bin_width))
    starts = t0 + bin_width * np.arange(n_bins)
    ends = np.minimum(starts + bin_width, t1)
    times = train.times
    counts = np.searchsorted(times, ends) - np.searchsorted(times, starts)
    widths = ends - starts
    return (starts + ends) / 2.0, counts / widths


@dataclass(frozen=True)
class Histogram:
    """Counts over half-open bins [e_i, e_{i+1}); out_of_range counts the rest."""

    edges: np.ndarray
    counts: np.ndarray
    out_of_range: int = 0

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise BadEdges("edges must be strictly increasing with >= 2 entries")
        if counts.size != edges.size - 1 or np.any(counts < 0):
            raise BadEdges("counts must be non-negative with length len(edges)-1")


def histogram(values, edges) -> Histogram:
    """Histogram with half-open bins; values at or past the last edge are out of range."""
    edges = np.asarray(edges, dtype=np.float64)
    if edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise BadEdges("edges must be strictly increasing with >= 2 entries")
    values = np.asarray(values, dtype=np.float64)
    in_range = (values >= edges[0]) & (values < edges[-1])
    idx = np.searchsorted(edges, values[in_range], side="right") - 1
    counts = np.bincount(idx, minlength=edges.size - 1)
    return Histogram(edges, counts, int(values.size - in_range.sum()))


def quartiles(values) -> tuple[float, float, float]:
    """(q25, median, q75) by linear interpolation at rank (n-1)*p/100."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyInput("quartiles need at least one value")
    q25, q50, q75 = np.percentile(values, [25.0, 50.0, 75.0])
    return float(q25), float(q50), float(q75)


def fft_spectrum(ts: TimeSeries) -> tuple[np.ndarray, np.ndarray]:
    """One-sided amplitude spectrum of the mean-subtracted signal.

    Returns (frequencies_hz, magnitudes); frequency resolution is 1/(n*dt) and
    any length n >= 2 is supported. Magnitudes are scaled so a pure sinusoid
    of amplitude A lands in its bin with magnitude A.
    """
    n = len(ts)
    if n < 2:
        raise TooShort(f"FFT needs at least 2 samples, got {n}")
    x = ts.samples - ts.samples.mean()
    spectrum = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(n, ts.dt)
    mags = np.abs(spectrum) * (2.0 / n)
    mags[0] /= 2.0
    if n % 2 == 0:
        mags[-1] /= 2.0
    return freqs, mags


def dominant_frequency(ts: TimeSeries) -> float:
    """Frequency (Hz) of the largest non-DC spectral magnitude.

    Ties break toward the lower frequency. A flat signal has no peak.
    """
    freqs, mags = fft_spectrum(ts)
    tail = mags[1:]
    floor = 1e-12 * max(1.0, float(np.max(np.abs(ts.samples))))
    if tail.size == 0 or float(tail.max()) <= floor:
        raise NoPeak("no spectral energy outside the DC bin")
    return float(freqs[1 + int(np.argmax(tail))])


def phase_portrait(ts: TimeSeries, smooth_window: int = 1) -> PhasePortrait:
    """Smoothed signal against its derivative (central differences, one-sided ends)."""
    if len(ts) < 3:
        raise TooShort(f"phase portrait needs at least 3 samples, got {len(ts)}")
    x = moving_average(ts.samples, smooth_window)
    v = np.gradient(x, ts.dt)
    return PhasePortrait(x, v)
