import math

import numpy as np
import pytest

from thermolab.integrators import Trajectory
from thermolab.spectral import (
    EmptyAfterExclusionError,
    amplitude_spectrum,
    dominant_peak,
    measure_frequency_ratio,
)


def tone(n, h, k, amplitude=1.0, phase=0.0):
    t = h * np.arange(n)
    return amplitude * np.cos(2.0 * math.pi * k * t / (n * h) + phase)


# ---------------------------------------------------------------------------
# amplitude_spectrum
# ---------------------------------------------------------------------------

def test_pure_cosine_lands_on_its_bin():
    n, h = 256, 0.125
    spec = amplitude_spectrum(tone(n, h, 7), h)
    k, amp = dominant_peak(spec)
    assert k == 7
    assert spec.bin_frequencies[7] == pytest.approx(2.0 * math.pi * 7 / (n * h))
    off_bins = np.delete(spec.amplitudes, 7)
    assert np.max(np.abs(off_bins)) < 1e-12 * amp


def test_constant_series_demeaned_is_zero():
    spec = amplitude_spectrum(np.full(128, 3.7), 0.5, demean=True)
    assert np.max(spec.amplitudes) < 1e-14


def test_two_tone_amplitude_ratio():
    n, h = 1024, 0.03125
    series = tone(n, h, 20, 1.0) + tone(n, h, 45, 0.3, phase=0.4)
    spec = amplitude_spectrum(series, h)
    k, _ = dominant_peak(spec)
    assert k == 20
    k2, _ = dominant_peak(spec, exclude=[(18, 22)])
    assert k2 == 45
    assert spec.amplitudes[45] / spec.amplitudes[20] == pytest.approx(0.3, abs=1e-6)


def test_parseval_and_roundtrip_random_series():
    rng = np.random.default_rng(17)
    for n in (64, 96, 101, 256):  # composite and odd lengths both supported
        x = rng.normal(size=n)
        spec = amplitude_spectrum(x, 0.25)
        power = float(np.mean(x * x))
        assert np.sum(spec.amplitudes ** 2) == pytest.approx(power, rel=1e-9)
        back = np.fft.irfft(np.fft.rfft(x), n=n)
        assert np.max(np.abs(back - x)) < 1e-10


def test_spectrum_input_validation():
    with pytest.raises(ValueError):
        amplitude_spectrum([1.0, 2.0], 0.1)
    with pytest.raises(ValueError):
        amplitude_spectrum(np.ones(8), -1.0)


# ---------------------------------------------------------------------------
# dominant_peak with beats
# ---------------------------------------------------------------------------

def test_carrier_with_sidebands():
    n, h = 2048, 0.0625
    series = (tone(n, h, 235, 1.0) + tone(n, h, 134, 0.25) + tone(n, h, 335, 0.2))
    spec = amplitude_spectrum(series, h)
    assert dominant_peak(spec)[0] == 235
    # masking the carrier returns the larger sideband
    assert dominant_peak(spec, exclude=[(230, 240)])[0] == 134
    with pytest.raises(EmptyAfterExclusionError):
        dominant_peak(spec, exclude=[(0, n // 2)])


# ---------------------------------------------------------------------------
# measure_frequency_ratio
# ---------------------------------------------------------------------------

def synthetic_trajectory(n, h, k_slow, k_fast):
    t = h * np.arange(n + 1)
    states = np.column_stack([
        1.0 + 0.1 * np.cos(2 * math.pi * k_fast * t / (n * h)),   # r
        np.zeros(n + 1),                                          # p_r
        t % (2 * math.pi),                                        # theta
        np.ones(n + 1),                                           # p_theta
        2.0 + 0.05 * np.cos(2 * math.pi * k_slow * t / (n * h)),  # s
        0.01 * np.sin(2 * math.pi * k_slow * t / (n * h)),        # S
    ])
    return Trajectory(times=t, columns=("r", "p_r", "theta", "p_theta", "s", "S"),
                      states=states, observables={}, step_h=h, sample_stride=1)


def test_ratio_of_synthetic_modes():
    n, h = 4096, 2.0 ** -5
    traj = synthetic_trajectory(n, h, k_slow=16, k_fast=163)
    est = measure_frequency_ratio(traj, n_fft=n)
    assert (est.k1, est.k2) == (16, 163)
    assert est.eta_hat == pytest.approx(16 / 163)
    assert est.uncertainty == pytest.approx(17 / 162 - 15 / 164)
    assert est.lower <= est.eta_hat <= est.upper
    assert est.omega1 == pytest.approx(2 * math.pi * 16 / (n * h))


def test_uncertainty_shrinks_with_run_length():
    h = 2.0 ** -5
    omega_slow, omega_fast = 0.35, 2.1
    bands = []
    for n in (2 ** 11, 2 ** 12, 2 ** 13, 2 ** 14):
        k_slow = round(omega_slow * n * h / (2 * math.pi))
        k_fast = round(omega_fast * n * h / (2 * math.pi))
        traj = synthetic_trajectory(n, h, k_slow, k_fast)
        bands.append(measure_frequency_ratio(traj, n_fft=n).uncertainty)
    assert all(b2 < b1 for b1, b2 in zip(bands, bands[1:]))


def test_ratio_requires_resolved_fast_mode():
    traj = synthetic_trajectory(64, 0.125, k_slow=0, k_fast=1)
    with pytest.raises(ValueError, match="k2"):
        measure_frequency_ratio(traj, n_fft=64)
