"""Source module - PDC joint spectral amplitudes and Schmidt decomposition."""

from .pdc import (
    PhasematchSpec,
    PumpSpec,
    SchmidtData,
    bell_state,
    build_jsa,
    gaussian_mode_width,
    gaussian_schmidt_coefficients,
    phasematching,
    pump_amplitude,
    schmidt_decompose,
    schmidt_number,
)
from .presets import bell_jsa, state_a_jsa, state_a_sources, state_b_jsa, state_b_sources

__all__ = [
    "PhasematchSpec",
    "PumpSpec",
    "SchmidtData",
    "bell_state",
    "build_jsa",
    "gaussian_mode_width",
    "gaussian_schmidt_coefficients",
    "phasematching",
    "pump_amplitude",
    "schmidt_decompose",
    "schmidt_number",
    "bell_jsa",
    "state_a_jsa",
    "state_a_sources",
    "state_b_jsa",
    "state_b_sources",
]
