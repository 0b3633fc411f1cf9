"""FFT amplitude spectra and bin-based frequency-ratio estimation.

A real series of length N sampled at spacing h has bin frequencies
omega_k = 2 pi k / (N h) for k = 0..N/2.  Frequencies are read off as
dominant-peak bin indices; the ratio of a slow (thermostat) and a fast
(internal) mode carries the conservative uncertainty

    (k1 + 1)/(k2 - 1) - (k1 - 1)/(k2 + 1),

the spread of the ratio when each peak is off by one bin.  No windowing is
applied; leakage is absorbed by these error bars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .integrators import Trajectory

__all__ = [
    "Spectrum",
    "RatioEstimate",
    "amplitude_spectrum",
    "dominant_peak",
    "measure_frequency_ratio",
    "EmptyAfterExclusionError",
]


class EmptyAfterExclusionError(ValueError):
    """All bins were masked out before peak picking."""


@dataclass(frozen=True)
class Spectrum:
    """One-sided amplitude spectrum of a real series.

    Amplitudes are scaled so that sum(amplitudes**2) equals the mean power
    of the (possibly demeaned) series: amplitude_k = |X_k| sqrt(w_k) / N with
    w_k = 2 except at k = 0 and the Nyquist bin.
    """

    bin_frequencies: np.ndarray
    amplitudes: np.ndarray
    sample_count: int
    spacing: float
    demeaned: bool

    def __len__(self) -> int:
        return len(self.amplitudes)


def amplitude_spectrum(series: Sequence[float], h: float,
                       demean: bool = False) -> Spectrum:
    """One-sided FFT amplitude spectrum of a uniformly sampled real series.

    ``demean`` subtracts the series mean before transforming; required for
    series like s whose oscillation rides on a large constant level.  Any
    composite length N >= 4 is accepted.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or len(x) < 4:
        raise ValueError("series must be one-dimensional with at least 4 samples")
    if h <= 0.0:
        raise ValueError("sample spacing h must be positive")
    n = len(x)
    if demean:
        x = x - x.mean()
    X = np.fft.rfft(x)
    weights = np.full(len(X), 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    amplitudes = np.abs(X) * np.sqrt(weights) / n
    freqs = 2.0 * np.pi * np.arange(len(X)) / (n * h)
    return Spectrum(bin_frequencies=freqs, amplitudes=amplitudes,
                    sample_count=n, spacing=h, demeaned=demean)


def dominant_peak(spec: Spectrum,
                  exclude: Sequence[tuple[int, int]] = ()) -> tuple[int, float]:
    """Bin index and amplitude of the largest non-excluded bin (k = 0 skipped).

    ``exclude`` lists inclusive bin-index ranges to mask, e.g. harmonics of a
    known mode.  Raises :class:`EmptyAfterExclusionError` if nothing is left.
    """
    amps = spec.amplitudes.copy()
    amps[0] = -np.inf
    for lo, hi in exclude:
        amps[max(lo, 0):hi + 1] = -np.inf
    k = int(np.argmax(amps))
    if amps[k] == -np.inf:
        raise EmptyAfterExclusionError("no bins remain after exclusions")
    return k, float(spec.amplitudes[k])


@dataclass(frozen=True)
class RatioEstimate:
    """Measured frequency ratio of the slow and fast modes with its error bar."""

    k1: int
    k2: int
    eta_hat: float
    uncertainty: float
    omega1: float
    omega2: float

    @property
    def lower(self) -> float:
        return (self.k1 - 1) / (self.k2 + 1)

    @property
    def upper(self) -> float:
        return (self.k1 + 1) / (self.k2 - 1)


def measure_frequency_ratio(traj: Trajectory,
                            slow_series: str = "s",
                            fast_series: str | None = None,
                            exclude_slow: Sequence[tuple[int, int]] = (),
                            exclude_fast: Sequence[tuple[int, int]] = (),
                            n_fft: int | None = None) -> RatioEstimate:
    """Empirical frequency ratio from the dominant spectral peaks of two series.

    The slow (thermostat) mode is read from the demeaned ``slow_series``
    (default the thermostat coordinate s); the fast (internal) mode from
    ``fast_series`` (default the radial/positional column).  ``n_fft``
    truncates both series to their first ``n_fft`` samples so that recorded
    trajectories with N+1 points can be transformed on a power-of-two grid.
    Exclusion masks allow skipping harmonics of the other mode.
    """
    if fast_series is None:
        fast_series = "r" if "r" in traj.columns else "x"
    h = traj.sample_spacing
    slow = traj.series(slow_series)
    fast = traj.series(fast_series)
    if n_fft is not None:
        slow = slow[:n_fft]
        fast = fast[:n_fft]
    spec_slow = amplitude_spectrum(slow, h, demean=True)
    spec_fast = amplitude_spectrum(fast, h, demean=True)
    k1, _ = dominant_peak(spec_slow, exclude=exclude_slow)
    k2, _ = dominant_peak(spec_fast, exclude=exclude_fast)
    if k2 <= 1:
        raise ValueError(f"fast-mode bin k2 = {k2} too small for the uncertainty formula")
    uncertainty = (k1 + 1) / (k2 - 1) - (k1 - 1) / (k2 + 1)
    return RatioEstimate(k1=k1, k2=k2, eta_hat=k1 / k2, uncertainty=uncertainty,
                         omega1=float(spec_slow.bin_frequencies[k1]),
                         omega2=float(spec_fast.bin_frequencies[k2]))
