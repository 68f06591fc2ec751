"""Deterministic synthetic signals.

The proteinoid generator draws Gaussian inter-spike gaps and amplitudes and
renders each spike as a damped sinusoidal burst; its detected statistics
converge to the profile parameters, which is what makes the analysis pipeline
testable against known ground truth. Randomness comes from three independent
PCG64 streams (gaps, amplitudes, noise) derived from one seed via
``numpy.random.SeedSequence(seed).spawn(3)``, so adding or removing noise
never perturbs the spike placement and determinism survives refactoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidParams, NonPositiveDiameter
from .model import LightSchedule, LightSource, ProteinoidProfile, TimeSeries

#: Gaussian gap draws are clipped from below at this floor, seconds.
MIN_GAP = 60.0

#: Amplitude draws are clipped from below at this fraction of the mean.
MIN_AMPLITUDE_FRACTION = 0.1

#: Burst support in units of spike_tau; beyond this the envelope is below
#: float64 resolution of any realistic trace.
BURST_SUPPORT_TAUS = 40.0


def _normalize_factors(factors) -> dict[LightSource, float]:
    out = {src: 1.0 for src in LightSource}
    if factors:
        for key, value in factors.items():
            src = key if isinstance(key, LightSource) else LightSource.parse(str(key))
            out[src] = float(value)
    for src, value in out.items():
        if not (math.isfinite(value) and value > 0):
            raise InvalidParams(f"light_period_factor[{src.value}] must be > 0")
    return out


@dataclass(frozen=True)
class SimParams:
    """Parameters for the proteinoid generator.

    light_period_factor multiplies each inter-spike gap by the factor of the
    source active at the gap's start (default 1.0 per source: whether a given
    light shortens or lengthens periods is not quantified anywhere, so callers
    set it explicitly).
    """

    profile: ProteinoidProfile
    schedule: LightSchedule = field(default_factory=LightSchedule)
    duration: float = 0.0
    seed: int = 0
    noise_std: float = 0.0
    light_period_factor: Mapping = None
    spike_tau: float = 48.0

    def __post_init__(self):
        object.__setattr__(
            self, "light_period_factor", _normalize_factors(self.light_period_factor)
        )
        if not (math.isfinite(self.duration) and self.duration >= 0):
            raise InvalidParams(f"duration must be >= 0, got {self.duration!r}")
        if not (math.isfinite(self.noise_std) and self.noise_std >= 0):
            raise InvalidParams(f"noise_std must be >= 0, got {self.noise_std!r}")
        if not (math.isfinite(self.spike_tau) and self.spike_tau > 0):
            raise InvalidParams(f"spike_tau must be > 0, got {self.spike_tau!r}")


def _streams(seed: int):
    root = np.random.SeedSequence(int(seed))
    return [np.random.Generator(np.random.PCG64(child)) for child in root.spawn(3)]


def _draw_onsets(rng_gaps, params: SimParams) -> list[float]:
    profile = params.profile
    onsets: list[float] = []
    t = 0.0
    while True:
        gap = max(rng_gaps.normal(profile.period_mean, profile.period_std), MIN_GAP)
        gap *= params.light_period_factor[params.schedule.source_at(t)]
        t += gap
        if t >= params.duration:
            break
        onsets.append(t)
    return onsets


def spike_times(params: SimParams) -> np.ndarray:
    """Spike onset times implied by the gap process, without rendering.

    Gap k starts at the previous onset (t=0 for the first); the draw is
    clipped at MIN_GAP and scaled by the light factor of the source active at
    the gap's start. One Gaussian draw per gap regardless of clipping keeps
    the stream aligned across parameter changes.
    """
    rng_gaps, _, _ = _streams(params.seed)
    return np.asarray(_draw_onsets(rng_gaps, params), dtype=np.float64)


def synth_proteinoid(params: SimParams) -> TimeSeries:
    """Render a synthetic proteinoid trace at 1 sample per second.

    Each spike at onset t_s contributes A*exp(-(t-t_s)/spike_tau) *
    sin(2*pi*(t-t_s)/fast_period) for t >= t_s, with A drawn from
    Normal(amplitude_mean, amplitude_std) clipped at
    MIN_AMPLITUDE_FRACTION*amplitude_mean. Gaussian noise of noise_std is
    added on top. Identical params (seed included) give bit-identical output.
    """
    rng_gaps, rng_amps, rng_noise = _streams(params.seed)
    profile = params.profile
    n = int(math.floor(params.duration))
    out = np.zeros(n, dtype=np.float64)
    onsets = _draw_onsets(rng_gaps, params)

    support = int(math.ceil(BURST_SUPPORT_TAUS * params.spike_tau))
    amp_floor = MIN_AMPLITUDE_FRACTION * profile.amplitude_mean
    for t_s in onsets:
        a = rng_amps.normal(profile.amplitude_mean, profile.amplitude_std)
        if profile.amplitude_mean >= 0:
            a = max(a, amp_floor)
        else:
            a = min(a, amp_floor)
        i0 = int(math.ceil(t_s))
        i1 = min(n, i0 + support)
        if i0 >= i1:
            continue
        rel = np.arange(i0, i1, dtype=np.float64) - t_s
        out[i0:i1] += (
            a * np.exp(-rel / params.spike_tau) * np.sin(2.0 * np.pi * rel / profile.fast_period)
        )

    if params.noise_std > 0 and n:
        out += rng_noise.normal(0.0, params.noise_std, n)
    return TimeSeries(0.0, 1.0, out)


@dataclass(frozen=True)
class PendulumParams:
    """Damped harmonic oscillator x'' + 2*zeta*omega*x' + omega^2*x = 0."""

    omega: float
    zeta: float = 0.0
    theta0: float = 1.0
    v0: float = 0.0
    dt: float = 0.01
    n: int = 1000

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidParams(f"omega must be > 0, got {self.omega!r}")
        if not (math.isfinite(self.zeta) and self.zeta >= 0):
            raise InvalidParams(f"zeta must be >= 0, got {self.zeta!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidParams(f"dt must be > 0, got {self.dt!r}")
        if self.n < 1:
            raise InvalidParams(f"n must be >= 1, got {self.n!r}")


def pendulum(params: PendulumParams) -> tuple[TimeSeries, TimeSeries]:
    """Integrate the damped oscillator with classic RK4.

    Returns (displacement, velocity) series of length n+1 (initial state
    included), starting at t=0 with the requested dt.
    """
    omega2 = params.omega * params.omega
    damping = 2.0 * params.zeta * params.omega
    dt = params.dt

    def accel(x, v):
        return -damping * v - omega2 * x

    xs = np.empty(params.n + 1, dtype=np.float64)
    vs = np.empty(params.n + 1, dtype=np.float64)
    x, v = float(params.theta0), float(params.v0)
    xs[0], vs[0] = x, v
    for i in range(1, params.n + 1):
        k1x = v
        k1v = accel(x, v)
        k2x = v + 0.5 * dt * k1v
        k2v = accel(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
        k3x = v + 0.5 * dt * k2v
        k3v = accel(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
        k4x = v + dt * k3v
        k4v = accel(x + dt * k3x, v + dt * k3v)
        x += dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        xs[i], vs[i] = x, v
    return TimeSeries(0.0, dt, xs), TimeSeries(0.0, dt, vs)


def sphere_metrics(diameter: float) -> tuple[float, float]:
    """Surface area (m^2) and volume (m^3) of a sphere of the given diameter."""
    if not (math.isfinite(diameter) and diameter > 0):
        raise NonPositiveDiameter(f"diameter must be > 0, got {diameter!r}")
    area = math.pi * diameter * diameter
    volume = math.pi * diameter ** 3 / 6.0
    return area, volume
