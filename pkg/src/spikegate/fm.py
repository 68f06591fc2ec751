"""Frequency modulation and demodulation.

Modulation integrates the message into the carrier phase by cumulative sum
(rectangle rule): exactness is not the point, determinism and invertibility by
the paired demodulator are. Demodulation mixes the signal down with the
carrier, low-passes, unwraps the phase, and differentiates to recover the
instantaneous frequency offset.

The sampling guard enforces fs >= 2*(carrier + deviation), stricter than the
folk 2*carrier rule: the looser bound lets the upper sideband alias. Both
bounds are carried in the error payload.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    EmptyMessage,
    InvalidParams,
    NonFinite,
    NyquistViolation,
    TooShort,
    ZeroDeviation,
)

#: The demodulator applies its carrier-period moving average this many times.
#: One pass leaves ~14% of the 2*fc mixing image (steady-state error 0.4);
#: three passes bring the constant-message error under 0.002 and round-trip
#: correlation above 0.999. Transient: LOWPASS_PASSES*round(fs/fc) samples
#: at each edge.
LOWPASS_PASSES = 3


@dataclass(frozen=True, kw_only=True)
class FmParams:
    """Carrier/deviation/sampling parameters (defaults: 200 Hz / 50 Hz)."""

    sample_rate_hz: float
    carrier_hz: float = 200.0
    deviation_hz: float = 50.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.carrier_hz) and self.carrier_hz > 0):
            raise InvalidParams(f"carrier_hz must be > 0, got {self.carrier_hz!r}")
        if not (math.isfinite(self.deviation_hz) and self.deviation_hz >= 0):
            raise InvalidParams(f"deviation_hz must be >= 0, got {self.deviation_hz!r}")
        if not (math.isfinite(self.sample_rate_hz) and self.sample_rate_hz > 0):
            raise InvalidParams(
                f"sample_rate_hz must be > 0, got {self.sample_rate_hz!r}"
            )
        if not (math.isfinite(self.amplitude) and self.amplitude > 0):
            raise InvalidParams(f"amplitude must be > 0, got {self.amplitude!r}")


def nyquist_ok(p: FmParams) -> None:
    """Raise NyquistViolation unless fs >= 2*(carrier + deviation)."""
    if p.sample_rate_hz < 2.0 * (p.carrier_hz + p.deviation_hz):
        raise NyquistViolation(p.sample_rate_hz, p.carrier_hz, p.deviation_hz)


def fm_modulate(message, p: FmParams, analytic: bool = False) -> np.ndarray:
    """Frequency-modulate a message in [-1, 1] onto the carrier.

    s[i] = A*cos(2*pi*fc*t_i + 2*pi*df*sum_{j<=i} m[j]*dt). Message samples
    outside [-1, 1] are clipped (with a warning reporting the count). With
    ``analytic=True`` the complex signal A*exp(j*phase) is returned instead;
    its modulus is the (constant) envelope.
    """
    nyquist_ok(p)
    m = np.asarray(message, dtype=np.float64)
    if m.size == 0:
        raise EmptyMessage("message must contain at least one sample")
    if not np.all(np.isfinite(m)):
        raise NonFinite("message contains non-finite samples")
    clipped = np.clip(m, -1.0, 1.0)
    n_clipped = int(np.count_nonzero(clipped != m))
    if n_clipped:
        warnings.warn(
            f"{n_clipped} message sample(s) clipped to [-1, 1]", stacklevel=2
        )
    dt = 1.0 / p.sample_rate_hz
    t = np.arange(m.size) * dt
    phase = 2.0 * np.pi * p.carrier_hz * t + (
        2.0 * np.pi * p.deviation_hz * np.cumsum(clipped) * dt
    )
    if analytic:
        return p.amplitude * np.exp(1j * phase)
    return p.amplitude * np.cos(phase)


def _carrier_ma(signal: np.ndarray, p: FmParams) -> np.ndarray:
    width = max(1, int(round(p.sample_rate_hz / p.carrier_hz)))
    kernel = np.full(width, 1.0 / width)
    out = signal
    for _ in range(LOWPASS_PASSES):
        out = np.convolve(out, kernel, mode="same")
    return out


def fm_demodulate(signal, p: FmParams) -> np.ndarray:
    """Recover the message estimate (f_inst - fc)/df from a real FM signal.

    Quadrature-mix with the carrier, low-pass (moving average of width
    round(fs/fc), applied LOWPASS_PASSES times), unwrap the phase, and
    differentiate with central differences. Expect a transient of roughly
    LOWPASS_PASSES*round(fs/fc) samples at each edge.
    """
    nyquist_ok(p)
    if p.deviation_hz == 0:
        raise ZeroDeviation("cannot normalize by a zero frequency deviation")
    s = np.asarray(signal, dtype=np.float64)
    if s.size < 3:
        raise TooShort(f"demodulation needs at least 3 samples, got {s.size}")
    dt = 1.0 / p.sample_rate_hz
    t = np.arange(s.size) * dt
    z = s * np.exp(-2j * np.pi * p.carrier_hz * t)
    z = _carrier_ma(z, p)
    phase = np.unwrap(np.angle(z))
    f_offset = np.gradient(phase, dt) / (2.0 * np.pi)
    return f_offset / p.deviation_hz


def carson_bandwidth(deviation_hz: float, max_message_hz: float) -> float:
    """Carson's approximate occupied bandwidth 2*(deviation + message)."""
    if deviation_hz < 0 or max_message_hz < 0:
        raise DegenerateInput("deviation and message frequency must be >= 0")
    if deviation_hz == 0 and max_message_hz == 0:
        raise DegenerateInput("deviation and message frequency cannot both be 0")
    return 2.0 * (deviation_hz + max_message_hz)
