"""spikegate: spike-train statistics, Boolean gate mining, and FM tooling
for slow voltage recordings from light-stimulated proteinoid samples.

The package is organized around a small set of immutable domain types
(:mod:`spikegate.model`) plus pure functions: text formats in
:mod:`spikegate.ingest`, deterministic synthesis in :mod:`spikegate.simulate`,
spike statistics in :mod:`spikegate.analysis`, Gaussian fitting in
:mod:`spikegate.stats`, gate extraction in :mod:`spikegate.gates`, and
frequency modulation in :mod:`spikegate.fm`. The ``spikegate`` CLI wraps it
all; see :mod:`spikegate.cli`.
"""

from .analysis import (
    DetectParams,
    Histogram,
    binned_rate,
    detect_spikes,
    dominant_frequency,
    fft_spectrum,
    histogram,
    mean_firing_rate,
    periods,
    phase_portrait,
    quartiles,
)
from .errors import SpikegateError
from .fm import FmParams, carson_bandwidth, fm_demodulate, fm_modulate, nyquist_ok
from .gates import (
    GateReport,
    StimulusTrial,
    binarize_periods,
    classify_gate,
    eval_logic,
    group_simultaneous,
    mine_gate,
    response_bit,
)
from .ingest import (
    parse_recording,
    parse_schedule,
    parse_spike_train,
    parse_trials,
    write_recording,
    write_spike_train,
)
from .model import (
    GateClass,
    GaussianFit,
    LightSchedule,
    LightSegment,
    LightSource,
    PhasePortrait,
    ProteinoidProfile,
    REFERENCE_PERIOD_QUARTILES,
    Spike,
    SpikeTrain,
    TimeSeries,
    builtin_profiles,
    validate_timeseries,
)
from .simulate import (
    PendulumParams,
    SimParams,
    pendulum,
    sphere_metrics,
    synth_proteinoid,
)
from .stats import fit_gaussian, gaussian_pdf, nll

__version__ = "0.1.0"

__all__ = [
    "DetectParams",
    "FmParams",
    "GateClass",
    "GateReport",
    "GaussianFit",
    "Histogram",
    "LightSchedule",
    "LightSegment",
    "LightSource",
    "PendulumParams",
    "PhasePortrait",
    "ProteinoidProfile",
    "REFERENCE_PERIOD_QUARTILES",
    "SimParams",
    "Spike",
    "SpikeTrain",
    "SpikegateError",
    "StimulusTrial",
    "TimeSeries",
    "binarize_periods",
    "binned_rate",
    "builtin_profiles",
    "carson_bandwidth",
    "classify_gate",
    "detect_spikes",
    "dominant_frequency",
    "eval_logic",
    "fft_spectrum",
    "fit_gaussian",
    "fm_demodulate",
    "fm_modulate",
    "gaussian_pdf",
    "group_simultaneous",
    "histogram",
    "mean_firing_rate",
    "mine_gate",
    "nll",
    "nyquist_ok",
    "parse_recording",
    "parse_schedule",
    "parse_spike_train",
    "parse_trials",
    "pendulum",
    "periods",
    "phase_portrait",
    "quartiles",
    "response_bit",
    "sphere_metrics",
    "synth_proteinoid",
    "validate_timeseries",
    "write_recording",
    "write_spike_train",
]
