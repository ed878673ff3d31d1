"""Averaged-periodogram power spectra and reference-peak band arithmetic.

Spectra are one-sided power spectral densities calibrated so the Riemann
sum psd * bin_width recovers total signal power. Segments are rectangular
and non-overlapping by default (a Hann window with fractional overlap is
available for leakage-sensitive work).

Hot/cold spectra from a 1-bit digitizer cannot be compared directly because
the comparator erases absolute levels. ``power_ratio`` therefore rescales
both spectra to a common injected-reference peak power, removes the bins
around the reference, and ratios the remaining in-band power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import signal as _sps

from .digitizer import BitStream
from .errors import (
    DegenerateBandError,
    DegenerateReferenceError,
    InsufficientDataError,
    ParameterError,
    ShapeError,
)
from .signals import SampledSignal

__all__ = [
    "Spectrum",
    "psd",
    "find_reference_peak",
    "normalize_to_reference",
    "band_power",
    "band_width_hz",
    "PowerRatioResult",
    "power_ratio",
    "power_ratio_detail",
]

_WINDOWS = {"rectangular": "boxcar", "hann": "hann"}
MAX_OVERLAP_FRACTION = 0.75


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided PSD on a uniform frequency grid from DC to Nyquist."""

    freq_hz: np.ndarray
    psd: np.ndarray
    fft_size: int
    n_segments: int
    bin_width_hz: float

    def __post_init__(self):
        freq = np.asarray(self.freq_hz, dtype=np.float64)
        dens = np.asarray(self.psd, dtype=np.float64)
        if freq.ndim != 1 or dens.ndim != 1 or freq.size != dens.size:
            raise ShapeError("freq_hz and psd must be one-dimensional and equally long")
        if freq.size != self.fft_size // 2 + 1:
            raise ShapeError(
                f"expected fft_size/2 + 1 = {self.fft_size // 2 + 1} bins, got {freq.size}"
            )
        if self.n_segments < 1:
            raise ParameterError(f"n_segments must be >= 1, got {self.n_segments}")
        if self.bin_width_hz <= 0.0:
            raise ParameterError(f"bin_width_hz must be positive, got {self.bin_width_hz}")
        freq.setflags(write=False)
        dens.setflags(write=False)
        object.__setattr__(self, "freq_hz", freq)
        object.__setattr__(self, "psd", dens)

    @property
    def nyquist_hz(self) -> float:
        return float(self.freq_hz[-1])

    @property
    def sample_rate_hz(self) -> float:
        return self.bin_width_hz * self.fft_size

    def total_power(self) -> float:
        """Riemann-sum power across the whole spectrum."""
        return float(self.psd.sum() * self.bin_width_hz)


def _signal_values(x) -> tuple[np.ndarray, float]:
    if isinstance(x, BitStream):
        return x.bits.astype(np.float64), x.sample_rate_hz
    if isinstance(x, SampledSignal):
        return x.samples, x.sample_rate_hz
    raise ParameterError(f"expected SampledSignal or BitStream, got {type(x).__name__}")


def psd(x, fft_size: int, window: str = "rectangular", overlap_fraction: float = 0.0) -> Spectrum:
    """Averaged-periodogram PSD of a signal or bitstream.

    Splits the record into fft_size-long segments (dropping any tail),
    averages their one-sided periodograms, and scales to power per Hz so
    that sum(psd) * bin_width equals the record's total power.
    """
    values, sample_rate_hz = _signal_values(x)
    if int(fft_size) != fft_size or fft_size < 2:
        raise ParameterError(f"fft_size must be an integer >= 2, got {fft_size!r}")
    fft_size = int(fft_size)
    if fft_size % 2 != 0:
        raise ParameterError(f"fft_size must be even, got {fft_size}")
    if fft_size > values.size:
        raise InsufficientDataError(
            f"fft_size {fft_size} exceeds record length {values.size}"
        )
    if window not in _WINDOWS:
        raise ParameterError(f"window must be one of {sorted(_WINDOWS)}, got {window!r}")
    if not (0.0 <= overlap_fraction <= MAX_OVERLAP_FRACTION):
        raise ParameterError(
            f"overlap_fraction must lie in [0, {MAX_OVERLAP_FRACTION}], got {overlap_fraction}"
        )
    noverlap = int(round(fft_size * overlap_fraction))
    step = fft_size - noverlap
    n_segments = (values.size - noverlap) // step
    freq, dens = _sps.welch(
        values,
        fs=sample_rate_hz,
        window=_WINDOWS[window],
        nperseg=fft_size,
        noverlap=noverlap,
        detrend=False,
        return_onesided=True,
        scaling="density",
    )
    return Spectrum(
        freq_hz=freq,
        psd=dens,
        fft_size=fft_size,
        n_segments=int(n_segments),
        bin_width_hz=sample_rate_hz / fft_size,
    )


def find_reference_peak(
    s: Spectrum,
    f_ref_hz: float,
    search_halfwidth_bins: int = 5,
) -> tuple[int, float]:
    """Locate the injected reference peak near f_ref_hz.

    The peak bin is the strongest bin within +-search_halfwidth_bins of the
    bin nearest f_ref_hz; the returned power integrates that bin plus one
    guard bin each side, which keeps the estimate stable when the reference
    does not land exactly on a bin center and leaks into its neighbours.
    """
    if not (0.0 <= f_ref_hz <= s.nyquist_hz):
        raise ParameterError(
            f"f_ref_hz must lie in [0, {s.nyquist_hz}], got {f_ref_hz}"
        )
    if search_halfwidth_bins < 0:
        raise ParameterError(f"search_halfwidth_bins must be >= 0, got {search_halfwidth_bins}")
    center = int(round(f_ref_hz / s.bin_width_hz))
    lo = center - search_halfwidth_bins
    hi = center + search_halfwidth_bins
    if lo < 0 or hi >= s.freq_hz.size:
        raise ParameterError(
            f"search window [{lo}, {hi}] falls outside the spectrum (0..{s.freq_hz.size - 1})"
        )
    best_bin = lo + int(np.argmax(s.psd[lo : hi + 1]))
    g_lo = max(best_bin - 1, 0)
    g_hi = min(best_bin + 1, s.freq_hz.size - 1)
    peak_power = float(s.psd[g_lo : g_hi + 1].sum() * s.bin_width_hz)
    return best_bin, peak_power


def normalize_to_reference(
    s: Spectrum,
    target_peak_power: float,
    own_peak_power: float,
) -> Spectrum:
    """Rescale a spectrum so its reference peak carries target_peak_power."""
    if own_peak_power <= 0.0:
        raise DegenerateReferenceError(
            f"cannot normalize by a non-positive peak power ({own_peak_power})"
        )
    if target_peak_power <= 0.0:
        raise ParameterError(f"target_peak_power must be positive, got {target_peak_power}")
    scale = target_peak_power / own_peak_power
    return Spectrum(
        freq_hz=s.freq_hz,
        psd=s.psd * scale,
        fft_size=s.fft_size,
        n_segments=s.n_segments,
        bin_width_hz=s.bin_width_hz,
    )


def _band_mask(s: Spectrum, f_lo_hz: float, f_hi_hz: float, excluded) -> np.ndarray:
    if not (0.0 <= f_lo_hz < f_hi_hz <= s.nyquist_hz):
        raise ParameterError(
            f"band must satisfy 0 <= f_lo < f_hi <= {s.nyquist_hz}, got [{f_lo_hz}, {f_hi_hz}]"
        )
    mask = (s.freq_hz >= f_lo_hz) & (s.freq_hz <= f_hi_hz)
    half = 0.5 * s.bin_width_hz
    for ex_lo, ex_hi in excluded:
        if ex_lo > ex_hi:
            raise ParameterError(f"excluded interval [{ex_lo}, {ex_hi}] is reversed")
        overlap = (s.freq_hz + half > ex_lo) & (s.freq_hz - half < ex_hi)
        mask &= ~overlap
    return mask


def band_power(s: Spectrum, f_lo_hz: float, f_hi_hz: float, excluded=()) -> float:
    """Integrated power over [f_lo, f_hi], skipping bins that touch any
    excluded (f_lo, f_hi) interval."""
    mask = _band_mask(s, f_lo_hz, f_hi_hz, excluded)
    if not mask.any():
        raise DegenerateBandError(
            f"no bins remain in [{f_lo_hz}, {f_hi_hz}] Hz after exclusions"
        )
    return float(s.psd[mask].sum() * s.bin_width_hz)


def band_width_hz(s: Spectrum, f_lo_hz: float, f_hi_hz: float, excluded=()) -> float:
    """Effective integration width (bin count times bin width) of band_power."""
    mask = _band_mask(s, f_lo_hz, f_hi_hz, excluded)
    if not mask.any():
        raise DegenerateBandError(
            f"no bins remain in [{f_lo_hz}, {f_hi_hz}] Hz after exclusions"
        )
    return float(mask.sum() * s.bin_width_hz)


class PowerRatioResult(NamedTuple):
    """Diagnostics from a normalized hot/cold band-power comparison."""

    y: float
    peak_bin_hot: int
    peak_bin_cold: int
    peak_power_hot: float
    peak_power_cold: float
    band_power_hot: float
    band_power_cold: float


def _check_same_grid(hot: Spectrum, cold: Spectrum):
    if hot.fft_size != cold.fft_size or hot.bin_width_hz != cold.bin_width_hz:
        raise ShapeError(
            "spectra are on different grids: "
            f"fft {hot.fft_size}/{cold.fft_size}, bin {hot.bin_width_hz}/{cold.bin_width_hz}"
        )


def power_ratio_detail(
    hot: Spectrum,
    cold: Spectrum,
    band: tuple[float, float],
    f_ref_hz: float,
    ref_exclusion_halfwidth_bins: int = 3,
    search_halfwidth_bins: int = 5,
) -> PowerRatioResult:
    """Hot/cold band-power ratio after reference-peak normalization.

    Both spectra are rescaled so their reference peaks carry equal power,
    the bins within +-ref_exclusion_halfwidth_bins of either peak are
    dropped from the band (whether or not the reference sits inside it),
    and the remaining band powers are ratioed. The returned band powers are
    the normalized ones, so y = band_power_hot / band_power_cold.
    """
    _check_same_grid(hot, cold)
    if ref_exclusion_halfwidth_bins < 0:
        raise ParameterError(
            f"ref_exclusion_halfwidth_bins must be >= 0, got {ref_exclusion_halfwidth_bins}"
        )
    bin_hot, peak_hot = find_reference_peak(hot, f_ref_hz, search_halfwidth_bins)
    bin_cold, peak_cold = find_reference_peak(cold, f_ref_hz, search_halfwidth_bins)
    hot_n = normalize_to_reference(hot, 1.0, peak_hot)
    cold_n = normalize_to_reference(cold, 1.0, peak_cold)

    # Both integrations must skip the same bins, so exclude around each
    # spectrum's own peak in both (they coincide in normal operation).
    half = ref_exclusion_halfwidth_bins
    excluded = []
    for b in sorted({bin_hot, bin_cold}):
        lo = max(b - half, 0)
        hi = min(b + half, hot.freq_hz.size - 1)
        excluded.append(
            (hot.freq_hz[lo] - 0.5 * hot.bin_width_hz, hot.freq_hz[hi] + 0.5 * hot.bin_width_hz)
        )
    f_lo, f_hi = band
    bp_hot = band_power(hot_n, f_lo, f_hi, excluded)
    bp_cold = band_power(cold_n, f_lo, f_hi, excluded)
    return PowerRatioResult(
        y=bp_hot / bp_cold,
        peak_bin_hot=bin_hot,
        peak_bin_cold=bin_cold,
        peak_power_hot=peak_hot,
        peak_power_cold=peak_cold,
        band_power_hot=bp_hot,
        band_power_cold=bp_cold,
    )


def power_ratio(
    hot: Spectrum,
    cold: Spectrum,
    band: tuple[float, float],
    f_ref_hz: float,
    ref_exclusion_halfwidth_bins: int = 3,
    search_halfwidth_bins: int = 5,
) -> float:
    """Y-factor estimate from hot and cold spectra (see power_ratio_detail)."""
    return power_ratio_detail(
        hot, cold, band, f_ref_hz, ref_exclusion_halfwidth_bins, search_halfwidth_bins
    ).y
