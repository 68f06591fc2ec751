"""Shared domain types and the built-in proteinoid parameter sets.

Voltage is always millivolts, time always seconds. Every type validates its
invariants on construction and is immutable afterwards, so instances are safe
to share across threads.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidParams,
    InvalidSegment,
    NegativeIntensity,
    NonFinite,
    NonMonotonicTime,
    NonPositiveDt,
    NonPositiveSigma,
    OverlappingSegments,
    TooFewValues,
    UnknownSource,
)


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise InvalidParams("expected a one-dimensional value vector")
    arr.setflags(write=False)
    return arr


def _check_timeseries(t0: float, dt: float, samples: np.ndarray) -> None:
    if not math.isfinite(dt) or dt <= 0:
        raise NonPositiveDt(f"dt must be positive and finite, got {dt!r}")
    if not math.isfinite(t0):
        raise NonFinite(f"t0 must be finite, got {t0!r}")
    if samples.size and not np.all(np.isfinite(samples)):
        bad = int(np.flatnonzero(~np.isfinite(samples))[0])
        raise NonFinite(f"sample {bad} is not finite")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled voltage trace; sample i sits at exactly t0 + i*dt."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "samples", _readonly(self.samples))
        _check_timeseries(self.t0, self.dt, self.samples)

    def __len__(self) -> int:
        return self.samples.size

    def times(self) -> np.ndarray:
        """Sample times t0 + i*dt, seconds."""
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def duration(self) -> float:
        return self.dt * self.samples.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.t0 == other.t0
            and self.dt == other.dt
            and np.array_equal(self.samples, other.samples)
        )


def validate_timeseries(ts: TimeSeries) -> None:
    """Re-check TimeSeries invariants; raises NonPositiveDt or NonFinite.

    Constructors already enforce these, so this mainly guards values built or
    mutated outside the normal path.
    """
    _check_timeseries(ts.t0, ts.dt, np.asarray(ts.samples, dtype=np.float64))


@dataclass(frozen=True)
class Spike:
    """One spike event: absolute time (s) and signed peak value (mV)."""

    time: float
    amplitude: float

    def __post_init__(self):
        object.__setattr__(self, "time", float(self.time))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        if not math.isfinite(self.time) or not math.isfinite(self.amplitude):
            raise NonFinite(f"spike fields must be finite: {self}")


@dataclass(frozen=True)
class SpikeTrain:
    """Ordered spike events with strictly increasing times."""

    spikes: tuple[Spike, ...]

    def __post_init__(self):
        spikes = tuple(self.spikes)
        object.__setattr__(self, "spikes", spikes)
        for a, b in zip(spikes, spikes[1:]):
            if b.time <= a.time:
                raise NonMonotonicTime(
                    f"spike times must strictly increase ({a.time} then {b.time})"
                )

    @classmethod
    def from_arrays(cls, times, amplitudes=None) -> "SpikeTrain":
        times = np.asarray(times, dtype=np.float64)
        if amplitudes is None:
            amplitudes = np.zeros_like(times)
        return cls(tuple(Spike(t, a) for t, a in zip(times, amplitudes)))

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.spikes], dtype=np.float64)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([s.amplitude for s in self.spikes], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.spikes)

    def __iter__(self):
        return iter(self.spikes)


class LightSource(enum.Enum):
    """Illumination source; OFF means no light."""

    WHITE = "white"
    BLACK = "black"
    OFF = "off"

    @classmethod
    def parse(cls, name: str) -> "LightSource":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise UnknownSource(
                f"unknown light source {name!r} (expected white, black, or off)"
            ) from None


@dataclass(frozen=True)
class LightSegment:
    """One timed illumination interval [start, start+duration)."""

    start: float
    duration: float
    source: LightSource
    intensity: float  # lux

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "intensity", float(self.intensity))
        if not math.isfinite(self.start):
            raise NonFinite("segment start must be finite")
        if not math.isfinite(self.duration) or self.duration <= 0:
            raise InvalidSegment(f"duration must be > 0, got {self.duration!r}")
        if not math.isfinite(self.intensity) or self.intensity < 0:
            raise NegativeIntensity(f"intensity must be >= 0, got {self.intensity!r}")
        if (self.intensity == 0) != (self.source is LightSource.OFF):
            raise InvalidSegment(
                "intensity must be 0 exactly for source 'off' and positive otherwise"
            )

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class LightSchedule:
    """Non-overlapping light segments; gaps between segments mean OFF."""

    segments: tuple[LightSegment, ...] = ()

    def __post_init__(self):
        segments = tuple(sorted(self.segments, key=lambda s: s.start))
        object.__setattr__(self, "segments", segments)
        for a, b in zip(segments, segments[1:]):
            if b.start < a.end:
                raise OverlappingSegments(
                    f"segment at {b.start} s starts before segment at "
                    f"{a.start} s ends ({a.end} s)"
                )
        object.__setattr__(self, "_starts", tuple(s.start for s in segments))

    def source_at(self, t: float) -> LightSource:
        """Active source at time t (OFF outside every segment)."""
        i = bisect.bisect_right(self._starts, t) - 1
        if i >= 0 and t < self.segments[i].end:
            return self.segments[i].source
        return LightSource.OFF

    @property
    def end(self) -> float:
        return self.segments[-1].end if self.segments else 0.0


@dataclass(frozen=True)
class ProteinoidProfile:
    """Named spiking parameter set for one proteinoid blend.

    period_mean/period_std describe inter-spike intervals measured under
    alternating black/white illumination; amplitude_mean/amplitude_std come
    from periodic white-light runs. No single condition provides both, so a
    profile deliberately mixes the two. fast_period is the within-spike
    oscillation period; 128 s is the only measured value and is used for all
    blends.
    """

    name: str
    period_mean: float
    period_std: float
    amplitude_mean: float
    amplitude_std: float
    fast_period: float = 128.0

    def __post_init__(self):
        if not (math.isfinite(self.period_mean) and self.period_mean > 0):
            raise InvalidParams(f"period_mean must be > 0, got {self.period_mean!r}")
        if not (math.isfinite(self.period_std) and self.period_std >= 0):
            raise InvalidParams(f"period_std must be >= 0, got {self.period_std!r}")
        if not (math.isfinite(self.fast_period) and self.fast_period > 0):
            raise InvalidParams(f"fast_period must be > 0, got {self.fast_period!r}")
        if not (
            math.isfinite(self.amplitude_mean) and math.isfinite(self.amplitude_std)
        ):
            raise NonFinite("amplitude statistics must be finite")


def builtin_profiles() -> dict[str, ProteinoidProfile]:
    """The five built-in proteinoid profiles.

    L-Asp was never measured under the white-light condition that produced the
    amplitude statistics, so it carries a nominal 1.0 +/- 0.1 mV amplitude to
    keep synthesis usable; its period statistics are measured values.
    """
    rows = [
        ("L-Glu:L-Phe:L-His", 3247.9, 760.83, 6.68, 0.61),
        ("L-Glu:L-Phe", 3534.3, 453.94, 2.87, 0.47),
        ("L-Phe:L-Lys", 3742.9, 517.55, 23.77, 0.83),
        ("L-Phe", 3400.8, 1144.8, 0.82, 0.43),
        ("L-Asp", 2237.4, 745.87, 1.0, 0.1),
    ]
    return {
        name: ProteinoidProfile(name, pm, ps, am, asd)
        for name, pm, ps, am, asd in rows
    }


#: Published 25th/75th percentile periods (s) per blend, kept as reference
#: metadata only: the raw recordings behind them are unavailable, so nothing
#: in this package asserts against these numbers.
REFERENCE_PERIOD_QUARTILES = {
    "L-Glu:L-Phe:L-His": (3328.64, 3548.0),
    "L-Glu:L-Phe": (3412.75, 3676.57),
    "L-Phe:L-Lys": (3541.38, 4154.73),
    "L-Asp": (2251.13, 4316.33),
    "L-Phe": (1807.8, 2529.9),
}


@dataclass(frozen=True)
class GaussianFit:
    """Maximum-likelihood Gaussian fit: mean, MLE sigma, NLL, sample count."""

    mu: float
    sigma: float
    nll: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise NonPositiveSigma(f"sigma must be > 0, got {self.sigma!r}")
        if not math.isfinite(self.nll):
            raise NonFinite("nll must be finite")
        if self.n < 2:
            raise TooFewValues(f"a fit needs n >= 2, got {self.n}")


class GateClass(enum.Enum):
    """Two-input gate implied by which input pairs (01, 10, 11) evoke a spike."""

    OR = "OR"
    SELECT_Y = "SELECT_Y"
    XOR = "XOR"
    SELECT_X = "SELECT_X"
    NOTX_AND_Y = "NOTX_AND_Y"
    X_AND_NOTY = "X_AND_NOTY"
    AND = "AND"
    CONST_FALSE = "CONST_FALSE"


@dataclass(frozen=True, eq=False)
class PhasePortrait:
    """Signal x (mV) against its time derivative v (mV/s), pointwise."""

    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _readonly(self.x))
        object.__setattr__(self, "v", _readonly(self.v))
        if self.x.size != self.v.size:
            raise InvalidParams("x and v must have equal length")
        for name, arr in (("x", self.x), ("v", self.v)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise NonFinite(f"phase portrait {name} contains non-finite values")

    def __len__(self) -> int:
        return self.x.size

    def points(self) -> np.ndarray:
        """(n, 2) array of (x, v) pairs."""
        return np.column_stack([self.x, self.v])
