import numpy as np
import pytest

from spikegate.analysis import dominant_frequency
from spikegate.errors import (
    DegenerateInput,
    EmptyMessage,
    InvalidParams,
    NyquistViolation,
    TooShort,
    ZeroDeviation,
)
from spikegate.fm import (
    FmParams,
    LOWPASS_PASSES,
    carson_bandwidth,
    fm_demodulate,
    fm_modulate,
    nyquist_ok,
)
from spikegate.model import TimeSeries
from spikegate.stats import fit_gaussian

FS = 2000.0
P = FmParams(sample_rate_hz=FS)


def sine_message(freq_hz=1.0, n=8192, fs=FS):
    return np.sin(2 * np.pi * freq_hz * np.arange(n) / fs)


def energy_bandwidth(signal, fs, fraction=0.99):
    """Oracle: width of the central band holding `fraction` of spectral energy."""
    spectrum = np.abs(np.fft.rfft(signal - np.mean(signal))) ** 2
    freqs = np.fft.rfftfreq(len(signal), 1.0 / fs)
    cum = np.cumsum(spectrum) / np.sum(spectrum)
    lo = freqs[int(np.searchsorted(cum, (1.0 - fraction) / 2.0))]
    hi = freqs[int(np.searchsorted(cum, 1.0 - (1.0 - fraction) / 2.0))]
    return hi - lo


class TestFmParams:
    def test_defaults(self):
        assert P.carrier_hz == 200.0
        assert P.deviation_hz == 50.0

    def test_positivity(self):
        with pytest.raises(InvalidParams):
            FmParams(sample_rate_hz=0.0)
        with pytest.raises(InvalidParams):
            FmParams(sample_rate_hz=2000.0, carrier_hz=-1.0)
        with pytest.raises(InvalidParams):
            FmParams(sample_rate_hz=2000.0, deviation_hz=-1.0)


class TestNyquist:
    def test_paper_parameters_pass(self):
        nyquist_ok(P)  # fs=2000, fc=200, df=50

    def test_fs_300_rejected(self):
        # below even the loose 2*carrier bound
        with pytest.raises(NyquistViolation) as err:
            nyquist_ok(FmParams(sample_rate_hz=300.0))
        assert err.value.textbook_bound == 400.0
        assert err.value.strict_bound == 500.0

    def test_fs_450_rejected_by_strict_bound(self):
        # meets 2*fc=400 but not 2*(fc+df)=500
        with pytest.raises(NyquistViolation) as err:
            nyquist_ok(FmParams(sample_rate_hz=450.0))
        assert err.value.sample_rate_hz >= err.value.textbook_bound
        assert err.value.sample_rate_hz < err.value.strict_bound

    def test_exact_bound_accepted(self):
        nyquist_ok(FmParams(sample_rate_hz=500.0))

    def test_aliasing_demonstration_at_450(self):
        # why 450 Hz must be refused: a full-deviation tone sits at 250 Hz,
        # above Nyquist 225, and folds down to |450-250| = 200 Hz
        fs_bad = 450.0
        n = 9000
        t = np.arange(n) / fs_bad
        aliased = np.cos(2 * np.pi * 250.0 * t)
        seen = dominant_frequency(TimeSeries(0.0, 1.0 / fs_bad, aliased))
        assert seen == pytest.approx(200.0, abs=fs_bad / n + 1e-9)
        # at an admissible rate the same tone is seen where it really is
        fs_ok = 2000.0
        t = np.arange(8000) / fs_ok
        honest = np.cos(2 * np.pi * 250.0 * t)
        seen_ok = dominant_frequency(TimeSeries(0.0, 1.0 / fs_ok, honest))
        assert seen_ok == pytest.approx(250.0, abs=fs_ok / 8000 + 1e-9)


class TestModulate:
    def test_zero_message_is_pure_carrier(self):
        signal = fm_modulate(np.zeros(4096), P)
        ts = TimeSeries(0.0, 1.0 / FS, signal)
        assert dominant_frequency(ts) == pytest.approx(200.0, abs=FS / 4096)

    def test_unit_peak_and_envelope(self):
        m = sine_message()
        signal = fm_modulate(m, P)
        assert np.abs(signal).max() == pytest.approx(1.0, abs=1e-12)
        envelope = np.abs(fm_modulate(m, P, analytic=True))
        assert envelope.max() - envelope.min() <= 1e-6

    def test_instantaneous_frequency_confined(self):
        m = sine_message()
        phase = np.unwrap(np.angle(fm_modulate(m, P, analytic=True)))
        f_inst = np.diff(phase) / (2 * np.pi / FS)
        assert f_inst.min() >= 150.0 - 1e-9
        assert f_inst.max() <= 250.0 + 1e-9

    def test_clipping_warns_with_count(self):
        m = np.array([0.0, 2.0, -3.0, 0.5])
        with pytest.warns(UserWarning, match="2 message sample"):
            fm_modulate(m, FmParams(sample_rate_hz=2000.0))

    def test_empty_message(self):
        with pytest.raises(EmptyMessage):
            fm_modulate([], P)

    def test_nyquist_enforced(self):
        with pytest.raises(NyquistViolation):
            fm_modulate(np.zeros(100), FmParams(sample_rate_hz=450.0))

    def test_amplitude_scales(self):
        p = FmParams(sample_rate_hz=FS, amplitude=2.5)
        signal = fm_modulate(np.zeros(64), p)
        assert signal[0] == pytest.approx(2.5)


class TestDemodulate:
    def test_round_trip_sine(self):
        m = sine_message()
        estimate = fm_demodulate(fm_modulate(m, P), P)
        corr = np.corrcoef(m[100:-100], estimate[100:-100])[0, 1]
        assert corr >= 0.99

    def test_constant_message_steady_state(self):
        m = np.full(8192, 0.5)
        estimate = fm_demodulate(fm_modulate(m, P), P)
        transient = LOWPASS_PASSES * int(round(FS / P.carrier_hz))
        core = estimate[4 * transient : -4 * transient]
        assert np.abs(core - 0.5).max() <= 0.01

    def test_pure_carrier_estimates_zero(self):
        signal = fm_modulate(np.zeros(8192), P)
        estimate = fm_demodulate(signal, P)
        assert np.abs(estimate[200:-200]).max() <= 0.01

    def test_seeded_random_band_limited_round_trip(self):
        # random Fourier series below the demod filter cutoff; a message with
        # energy above it is unrecoverable by construction
        rng = np.random.default_rng(31)
        n = 8192
        t = np.arange(n) / FS
        m = np.zeros(n)
        for _ in range(8):
            f = rng.uniform(0.5, 20.0)
            a = rng.uniform(0.2, 1.0)
            phi = rng.uniform(0, 2 * np.pi)
            m += a * np.sin(2 * np.pi * f * t + phi)
        m /= np.abs(m).max()
        estimate = fm_demodulate(fm_modulate(m, P), P)
        corr = np.corrcoef(m[100:-100], estimate[100:-100])[0, 1]
        assert corr >= 0.99

    def test_gaussian_message_sigma_preserved(self):
        # Gaussian levels held 100 samples each; read back mid-plateau.
        rng = np.random.default_rng(2)
        sigma_true = 0.3
        n_levels, hold = 2000, 100
        levels = rng.normal(0.0, sigma_true, n_levels)
        assert np.abs(levels).max() <= 1.0  # seed chosen so nothing clips
        estimate = fm_demodulate(fm_modulate(np.repeat(levels, hold), P), P)
        mid = estimate[np.arange(n_levels) * hold + hold // 2]
        fit = fit_gaussian(mid)
        assert abs(fit.mu) <= 0.02
        assert abs(fit.sigma - sigma_true) / sigma_true <= 0.05

    def test_zero_deviation(self):
        p = FmParams(sample_rate_hz=2000.0, deviation_hz=0.0)
        with pytest.raises(ZeroDeviation):
            fm_demodulate(np.zeros(100), p)

    def test_too_short(self):
        with pytest.raises(TooShort):
            fm_demodulate(np.zeros(2), P)


class TestBandwidth:
    def test_formula(self):
        assert carson_bandwidth(50.0, 1.0) == 102.0

    def test_am_like_limit(self):
        assert carson_bandwidth(0.0, 5.0) == 10.0

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            carson_bandwidth(0.0, 0.0)
        with pytest.raises(DegenerateInput):
            carson_bandwidth(-1.0, 1.0)

    def test_measured_bandwidth_within_carson(self):
        m = sine_message(freq_hz=1.0, n=65536)
        signal = fm_modulate(m, P)
        measured = energy_bandwidth(signal, FS)
        assert measured <= carson_bandwidth(50.0, 1.0) * 1.2

    def test_modulation_broadens_any_nonconstant_message(self):
        for freq in (1.0, 3.0):
            m = sine_message(freq_hz=freq, n=32768)
            signal = fm_modulate(m, P)
            assert energy_bandwidth(signal, FS) > energy_bandwidth(m, FS)
