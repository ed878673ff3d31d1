"""Noise-figure measurement toolkit built around a 1-bit comparator chain.

Simulates Y-factor and direct-method noise-figure measurements, including
the comparator digitizer, reference-normalized spectra and the supporting
noise algebra.
"""

__version__ = "0.1.0"

from .capture import read_capture, write_capture
from .digitizer import BitStream, arcsine_map, decimate, digitize, empirical_autocorr
from .dut import (
    DutSpec,
    OpampNoiseModel,
    apply_dut,
    dut_from_nf,
    nominal_f,
    opamp_noise_figure,
)
from .errors import (
    CaptureCorruptError,
    CaptureFormatError,
    ConfigError,
    DegenerateBandError,
    DegenerateReferenceError,
    InsufficientDataError,
    NfbistError,
    NonphysicalResultWarning,
    ParameterError,
    ShapeError,
    SingularYError,
)
from .nfcore import (
    BOLTZMANN_J_PER_K,
    T0_K,
    NoiseFigureResult,
    direct_gain_error,
    f_direct,
    f_from_snr,
    f_from_y_powers,
    f_from_y_temps,
    f_to_nf,
    friis_cascade,
    ideal_y,
    nf_to_f,
    snr_db,
    y_factor,
)
from .pipeline import (
    ExperimentConfig,
    GainSensitivityRow,
    MeasurementResult,
    analyze_bitstreams,
    gain_sensitivity_study,
    run_direct_experiment,
    run_y_factor_experiment,
    simulate_bitstreams,
    sweep_reference_amplitude,
    th_uncertainty_study,
)
from .signals import (
    NoiseSourceSpec,
    SampledSignal,
    gaussian_noise,
    mix,
    source_output,
    square_wave,
)
from .spectral import (
    PowerRatioResult,
    Spectrum,
    band_power,
    band_width_hz,
    find_reference_peak,
    normalize_to_reference,
    power_ratio,
    power_ratio_detail,
    psd,
)

__all__ = [
    "__version__",
    "BOLTZMANN_J_PER_K",
    "T0_K",
    "SampledSignal",
    "NoiseSourceSpec",
    "gaussian_noise",
    "square_wave",
    "mix",
    "source_output",
    "DutSpec",
    "OpampNoiseModel",
    "apply_dut",
    "dut_from_nf",
    "nominal_f",
    "opamp_noise_figure",
    "BitStream",
    "digitize",
    "decimate",
    "arcsine_map",
    "empirical_autocorr",
    "Spectrum",
    "psd",
    "find_reference_peak",
    "normalize_to_reference",
    "band_power",
    "band_width_hz",
    "PowerRatioResult",
    "power_ratio",
    "power_ratio_detail",
    "NoiseFigureResult",
    "snr_db",
    "f_from_snr",
    "f_to_nf",
    "nf_to_f",
    "f_direct",
    "direct_gain_error",
    "y_factor",
    "f_from_y_temps",
    "f_from_y_powers",
    "ideal_y",
    "friis_cascade",
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
    "read_capture",
    "write_capture",
    "NfbistError",
    "ParameterError",
    "ShapeError",
    "InsufficientDataError",
    "DegenerateReferenceError",
    "DegenerateBandError",
    "SingularYError",
    "ConfigError",
    "CaptureFormatError",
    "CaptureCorruptError",
    "NonphysicalResultWarning",
]
