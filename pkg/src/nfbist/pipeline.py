"""End-to-end simulated noise-figure experiments.

The Y-factor chain is: two-state noise source, DUT (gain + added noise),
auxiliary post-DUT power gain, then a comparator that slices the waveform
against a square-wave reference. Spectra of the resulting bitstreams are
normalized to the reference peak and ratioed in a measurement band.

The injected reference amplitude is specified as a fraction of the
cold-state RMS at the comparator. Because that RMS includes the post-DUT
gain, changing the gain rescales signal and reference together and the
comparator output does not change at all; this is what makes the Y-factor
method immune to gain error, unlike the direct method.
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .digitizer import BitStream, digitize
from .dut import DutSpec, apply_dut, nominal_f
from .errors import NonphysicalResultWarning, ParameterError, ShapeError
from .nfcore import f_from_y_temps, f_to_nf, ideal_y
from .signals import NoiseSourceSpec, SampledSignal, gaussian_noise, source_output, square_wave
from .spectral import band_power, band_width_hz, power_ratio_detail, psd

__all__ = [
    "ExperimentConfig",
    "MeasurementResult",
    "GainSensitivityRow",
    "simulate_bitstreams",
    "run_y_factor_experiment",
    "run_direct_experiment",
    "analyze_bitstreams",
    "sweep_reference_amplitude",
    "th_uncertainty_study",
    "gain_sensitivity_study",
]

SEARCH_HALFWIDTH_BINS = 5


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one simulated measurement."""

    source: NoiseSourceSpec
    dut: DutSpec
    sample_rate_hz: float = 50_000.0
    n_samples: int = 1_000_000
    fft_size: int = 10_000
    f_ref_hz: float = 3_000.0
    ref_amplitude: float = 0.25
    band: tuple[float, float] = (500.0, 1_500.0)
    ref_exclusion_halfwidth_bins: int = 3
    post_dut_gain_linear: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.source, NoiseSourceSpec):
            raise ParameterError("source must be a NoiseSourceSpec")
        if not isinstance(self.dut, DutSpec):
            raise ParameterError("dut must be a DutSpec")
        if self.sample_rate_hz <= 0.0:
            raise ParameterError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ParameterError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if int(self.fft_size) != self.fft_size or self.fft_size < 2 or self.fft_size % 2 != 0:
            raise ParameterError(f"fft_size must be a positive even integer, got {self.fft_size!r}")
        if self.n_samples < self.fft_size:
            raise ParameterError(
                f"n_samples ({self.n_samples}) must be >= fft_size ({self.fft_size})"
            )
        nyquist = self.sample_rate_hz / 2.0
        if not (0.0 < self.f_ref_hz < nyquist):
            raise ParameterError(
                f"f_ref_hz must lie in (0, {nyquist}), got {self.f_ref_hz}"
            )
        if not (math.isfinite(self.ref_amplitude) and self.ref_amplitude > 0.0):
            raise ParameterError(f"ref_amplitude must be positive, got {self.ref_amplitude!r}")
        band = tuple(float(f) for f in self.band)
        if len(band) != 2 or not (0.0 <= band[0] < band[1] <= nyquist):
            raise ParameterError(
                f"band must satisfy 0 <= f_lo < f_hi <= {nyquist}, got {self.band!r}"
            )
        object.__setattr__(self, "band", band)
        if (
            int(self.ref_exclusion_halfwidth_bins) != self.ref_exclusion_halfwidth_bins
            or self.ref_exclusion_halfwidth_bins < 0
        ):
            raise ParameterError(
                "ref_exclusion_halfwidth_bins must be a non-negative integer, "
                f"got {self.ref_exclusion_halfwidth_bins!r}"
            )
        if self.post_dut_gain_linear <= 0.0:
            raise ParameterError(
                f"post_dut_gain_linear must be positive, got {self.post_dut_gain_linear}"
            )
        if int(self.seed) != self.seed:
            raise ParameterError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome of one simulated or re-analyzed measurement.

    Fields that a given method does not produce (e.g. reference peaks for
    the direct method) are None. For Y-factor results the band powers are
    post-normalization, so y = band_power_hot / band_power_cold.
    """

    f: float
    nf_db: float
    n_segments: int
    y: float | None = None
    ref_peak_hot: float | None = None
    ref_peak_cold: float | None = None
    band_power_hot: float | None = None
    band_power_cold: float | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)


class GainSensitivityRow(NamedTuple):
    method: str
    gain_ratio: float
    nf_bias_db: float


def _sub_seeds(seed: int, count: int) -> list[int]:
    """Deterministic, well-separated child seeds for one experiment."""
    state = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def _comparator_cold_rms(cfg: ExperimentConfig) -> float:
    """Analytic cold-state RMS at the comparator, before post-DUT gain."""
    src, dut = cfg.source, cfg.dut
    return math.sqrt(dut.gain_linear * src.power_scale * src.t_cold_k + dut.added_noise_power)


def _nf_and_warnings(f: float) -> tuple[float, list[str]]:
    if f > 0.0:
        return f_to_nf(f), []
    return float("nan"), [f"noise factor {f:.6g} is not positive; nf_db undefined"]


def simulate_bitstreams(cfg: ExperimentConfig) -> tuple[BitStream, BitStream]:
    """Synthesize the (hot, cold) comparator bitstreams for a configuration.

    The square-wave reference amplitude is cfg.ref_amplitude times the
    analytic cold-state RMS at the comparator. Both the observed waveform
    and the reference carry the same sqrt(post_dut_gain_linear) factor, as
    a single multiplication each, so the comparator decisions are invariant
    under post-DUT gain changes.
    """
    seeds = _sub_seeds(cfg.seed, 6)
    post_amp = math.sqrt(cfg.post_dut_gain_linear)
    ref_base = cfg.ref_amplitude * _comparator_cold_rms(cfg)
    reference = square_wave(
        cfg.n_samples, cfg.sample_rate_hz, cfg.f_ref_hz, post_amp * ref_base
    )
    out = []
    for state, (seed_src, seed_dut) in (("hot", seeds[0:2]), ("cold", seeds[2:4])):
        raw = source_output(cfg.source, state, cfg.n_samples, cfg.sample_rate_hz, seed_src)
        amplified = apply_dut(cfg.dut, raw, seed_dut)
        observed = SampledSignal(cfg.sample_rate_hz, post_amp * amplified.samples)
        out.append(digitize(observed, reference))
    return out[0], out[1]


def run_y_factor_experiment(
    cfg: ExperimentConfig,
    window: str = "rectangular",
    overlap_fraction: float = 0.0,
) -> MeasurementResult:
    """Simulate hot and cold 1-bit acquisitions and estimate F from their ratio."""
    hot, cold = simulate_bitstreams(cfg)
    notes = []
    if cfg.ref_amplitude > 1.0:
        notes.append(
            f"reference amplitude is {cfg.ref_amplitude:g} of the cold-state RMS; "
            "levels above 1 distort the comparator statistics"
        )
    result = analyze_bitstreams(
        hot, cold, cfg, window=window, overlap_fraction=overlap_fraction
    )
    return replace(result, warnings=tuple(notes) + result.warnings)


def analyze_bitstreams(
    hot: BitStream,
    cold: BitStream,
    cfg: ExperimentConfig,
    window: str = "rectangular",
    overlap_fraction: float = 0.0,
) -> MeasurementResult:
    """Spectral Y-factor analysis of two existing bitstreams.

    Uses the bitstreams' own sample rate; cfg supplies the FFT size, the
    reference frequency, the measurement band and the source temperatures.
    """
    if hot.sample_rate_hz != cold.sample_rate_hz:
        raise ShapeError(
            f"hot and cold sample rates differ: {hot.sample_rate_hz} vs {cold.sample_rate_hz}"
        )
    spec_hot = psd(hot, cfg.fft_size, window=window, overlap_fraction=overlap_fraction)
    spec_cold = psd(cold, cfg.fft_size, window=window, overlap_fraction=overlap_fraction)
    detail = power_ratio_detail(
        spec_hot,
        spec_cold,
        cfg.band,
        cfg.f_ref_hz,
        ref_exclusion_halfwidth_bins=cfg.ref_exclusion_halfwidth_bins,
        search_halfwidth_bins=SEARCH_HALFWIDTH_BINS,
    )

    notes = []
    if detail.y < 1.0:
        notes.append(
            f"measured Y = {detail.y:.6g} is below 1; hot and cold may be swapped"
        )
    if spec_hot.n_segments != spec_cold.n_segments:
        notes.append(
            f"hot/cold segment counts differ: {spec_hot.n_segments} vs {spec_cold.n_segments}"
        )
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        f = f_from_y_temps(
            detail.y, cfg.source.t_hot_k, cfg.source.t_cold_k, cfg.source.t0_k
        )
    notes.extend(
        str(w.message) for w in caught if issubclass(w.category, NonphysicalResultWarning)
    )
    nf_db, nf_notes = _nf_and_warnings(f)
    return MeasurementResult(
        f=f,
        nf_db=nf_db,
        n_segments=spec_hot.n_segments,
        y=detail.y,
        ref_peak_hot=detail.peak_power_hot,
        ref_peak_cold=detail.peak_power_cold,
        band_power_hot=detail.band_power_hot,
        band_power_cold=detail.band_power_cold,
        warnings=tuple(notes + nf_notes),
    )


def run_direct_experiment(
    cfg: ExperimentConfig,
    assumed_gain_linear: float,
    window: str = "rectangular",
    overlap_fraction: float = 0.0,
) -> MeasurementResult:
    """Direct-method measurement on the analog (multi-bit) path.

    A single acquisition with the source replaced by a matched load at the
    reference temperature T0. The in-band output power is divided by the
    in-band input power at T0 times the assumed end-to-end power gain, so
    any mismatch between assumed and actual gain biases F proportionally.
    """
    if assumed_gain_linear <= 0.0:
        raise ParameterError(f"assumed_gain_linear must be positive, got {assumed_gain_linear}")
    seeds = _sub_seeds(cfg.seed, 6)
    src = cfg.source
    sigma_t0 = math.sqrt(src.power_scale * src.t0_k)
    raw = gaussian_noise(cfg.n_samples, sigma_t0, seeds[4], sample_rate_hz=cfg.sample_rate_hz)
    amplified = apply_dut(cfg.dut, raw, seeds[5])
    observed = SampledSignal(
        cfg.sample_rate_hz, math.sqrt(cfg.post_dut_gain_linear) * amplified.samples
    )
    spectrum = psd(observed, cfg.fft_size, window=window, overlap_fraction=overlap_fraction)
    f_lo, f_hi = cfg.band
    measured = band_power(spectrum, f_lo, f_hi)
    width = band_width_hz(spectrum, f_lo, f_hi)
    input_band_power_t0 = src.power_scale * src.t0_k * width / (cfg.sample_rate_hz / 2.0)
    f = measured / (input_band_power_t0 * assumed_gain_linear)

    notes = []
    if f < 1.0:
        notes.append(f"direct method: noise factor {f:.6g} is below 1 (nonphysical)")
    nf_db, nf_notes = _nf_and_warnings(f)
    return MeasurementResult(
        f=f,
        nf_db=nf_db,
        n_segments=spectrum.n_segments,
        band_power_cold=measured,
        warnings=tuple(notes + nf_notes),
    )


def sweep_reference_amplitude(
    cfg: ExperimentConfig,
    fractions,
    n_seeds: int = 10,
    window: str = "rectangular",
    overlap_fraction: float = 0.0,
) -> list[tuple[float, float]]:
    """Mean |Y error| of the 1-bit chain as the reference level varies.

    For each fraction of the cold-state RMS, runs n_seeds independent
    experiments and averages |y_est - y_ideal| / y_ideal, where y_ideal
    comes from the DUT's nominal noise factor. Returns (fraction, error)
    pairs in the order given.
    """
    fractions = [float(a) for a in fractions]
    if not fractions:
        raise ParameterError("at least one amplitude fraction is required")
    if any(not (a > 0.0) for a in fractions):
        raise ParameterError(f"amplitude fractions must be positive, got {fractions}")
    if n_seeds < 1:
        raise ParameterError(f"n_seeds must be >= 1, got {n_seeds}")
    src = cfg.source
    f_nominal = nominal_f(cfg.dut, t0_k=src.t0_k, power_scale=src.power_scale)
    y_ideal = ideal_y(f_nominal, src.t_hot_k, src.t_cold_k, src.t0_k)
    results = []
    for fraction in fractions:
        errors = []
        for k in range(n_seeds):
            run_cfg = replace(cfg, ref_amplitude=fraction, seed=cfg.seed + k)
            out = run_y_factor_experiment(run_cfg, window=window, overlap_fraction=overlap_fraction)
            errors.append(abs(out.y - y_ideal) / y_ideal)
        results.append((fraction, float(np.mean(errors))))
    return results


def th_uncertainty_study(cfg: ExperimentConfig, rel_errors) -> list[tuple[float, float]]:
    """Noise-figure shift caused by a miscalibrated hot temperature.

    Holds the measured Y at its ideal value and redoes only the
    temperature-to-F conversion with Th scaled by (1 + rel_error); returns
    (rel_error, delta_nf_db) pairs. Purely analytic, no simulation.
    """
    rel_errors = [float(e) for e in rel_errors]
    if any(e <= -1.0 for e in rel_errors):
        raise ParameterError("rel_errors must keep the hot temperature positive")
    src = cfg.source
    f_nominal = nominal_f(cfg.dut, t0_k=src.t0_k, power_scale=src.power_scale)
    y_true = ideal_y(f_nominal, src.t_hot_k, src.t_cold_k, src.t0_k)
    nf_nominal = f_to_nf(f_nominal)
    out = []
    for e in rel_errors:
        f_perturbed = f_from_y_temps(y_true, src.t_hot_k * (1.0 + e), src.t_cold_k, src.t0_k)
        out.append((e, f_to_nf(f_perturbed) - nf_nominal))
    return out


def gain_sensitivity_study(
    cfg: ExperimentConfig,
    gain_ratios,
    window: str = "rectangular",
    overlap_fraction: float = 0.0,
) -> list[GainSensitivityRow]:
    """Measured-NF bias of both methods when the actual gain drifts.

    Every run keeps the assumed end-to-end gain at its nominal value while
    the actual post-DUT gain is multiplied by gain_ratio; the bias is the
    NF difference against the same-seed run at ratio 1. The direct method
    inherits the full gain error; the Y-factor method sees identical
    bitstreams (the comparator only keeps signs) and so zero bias.
    """
    gain_ratios = [float(r) for r in gain_ratios]
    if any(not (r > 0.0) for r in gain_ratios):
        raise ParameterError(f"gain ratios must be positive, got {gain_ratios}")
    assumed = cfg.dut.gain_linear * cfg.post_dut_gain_linear
    base_direct = run_direct_experiment(cfg, assumed, window=window, overlap_fraction=overlap_fraction)
    base_y = run_y_factor_experiment(cfg, window=window, overlap_fraction=overlap_fraction)
    rows = []
    for ratio in gain_ratios:
        drifted = replace(cfg, post_dut_gain_linear=cfg.post_dut_gain_linear * ratio)
        direct = run_direct_experiment(
            drifted, assumed, window=window, overlap_fraction=overlap_fraction
        )
        yfac = run_y_factor_experiment(drifted, window=window, overlap_fraction=overlap_fraction)
        rows.append(GainSensitivityRow("direct", ratio, direct.nf_db - base_direct.nf_db))
        rows.append(GainSensitivityRow("y_factor", ratio, yfac.nf_db - base_y.nf_db))
    return rows
