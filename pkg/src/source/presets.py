"""
Calibrated source presets for the two experimental states.

State A: narrow Gaussian pump on 45° phasematching, frequency anti-correlated
and multimode. State B: first-order Hermite-Gauss pump with matched
bandwidths, close to a temporal-mode Bell state.

Calibration: the quoted 0.84 nm and 1.43 nm are the intensity standard
deviations of the fundamental idler Schmidt mode. The phasematching widths are
derived from them, not measured.
"""

from typing import Tuple

import numpy as np

from ..spectral.grid import FrequencyAxis, JointAmplitude, bandwidth_to_omega, make_axis
from ..spectral.modes import ModeBasis
from .pdc import PhasematchSpec, PumpSpec, bell_state, build_jsa

CENTER_NM = 1540.7

STATE_A_PUMP_SIGMA_NM = 0.3
STATE_A_MODE_SIGMA_NM = 0.84
STATE_A_SPAN_NM = 32.0

STATE_B_MODE_SIGMA_NM = 1.43
STATE_B_ASYMMETRY = 0.05
STATE_B_SPAN_NM = 20.0

DEFAULT_POINTS = 512
STATE_A_POINTS = 1024


def intensity_sigma_to_width(sigma_nm: float, wavelength_nm: float) -> float:
    """Width parameter (rad/s) of a Gaussian amplitude whose intensity std is `sigma_nm`."""
    return float(np.sqrt(2.0) * bandwidth_to_omega(sigma_nm, wavelength_nm))


def state_a_sources(
    axis: FrequencyAxis,
    pump_sigma_nm: float = STATE_A_PUMP_SIGMA_NM,
    pump_reference_nm: float = CENTER_NM,
    mode_sigma_nm: float = STATE_A_MODE_SIGMA_NM,
    profile: str = "gaussian",
) -> Tuple[PumpSpec, PhasematchSpec]:
    """
    Pump and phasematching for State A.

    The phasematching width follows from σ_mode² = w_p·w_m/4 for the Gaussian
    model so the fundamental Schmidt mode has `mode_sigma_nm`.
    """
    pump_width = intensity_sigma_to_width(pump_sigma_nm, pump_reference_nm)
    sigma = bandwidth_to_omega(mode_sigma_nm, axis.center_wavelength_nm)
    pm_width = 4.0 * sigma ** 2 / pump_width
    pump = PumpSpec(center=2.0 * axis.center, width=pump_width)
    return pump, PhasematchSpec(pm_width=pm_width, profile=profile, angle=45.0)


def state_b_sources(
    axis: FrequencyAxis,
    mode_sigma_nm: float = STATE_B_MODE_SIGMA_NM,
    asymmetry: float = STATE_B_ASYMMETRY,
    profile: str = "gaussian",
) -> Tuple[PumpSpec, PhasematchSpec]:
    """
    HG1 pump with pump and phasematching widths matched.

    With matched width w the single-photon modes have width w/√2, so w = 2σ.
    """
    width = 2.0 * bandwidth_to_omega(mode_sigma_nm, axis.center_wavelength_nm)
    pump = PumpSpec(center=2.0 * axis.center, width=width, coefficients=(0.0, 1.0))
    return pump, PhasematchSpec(pm_width=width, profile=profile, angle=45.0, asymmetry=asymmetry)


def state_a_jsa(
    n_points: int = STATE_A_POINTS, span_nm: float = STATE_A_SPAN_NM, **kwargs
) -> JointAmplitude:
    axis = make_axis(CENTER_NM, span_nm, n_points)
    pump, pm = state_a_sources(axis, **kwargs)
    return build_jsa(pump, pm, axis, axis)


def state_b_jsa(
    n_points: int = DEFAULT_POINTS, span_nm: float = STATE_B_SPAN_NM, **kwargs
) -> JointAmplitude:
    axis = make_axis(CENTER_NM, span_nm, n_points)
    pump, pm = state_b_sources(axis, **kwargs)
    return build_jsa(pump, pm, axis, axis)


def bell_jsa(
    n_points: int = DEFAULT_POINTS,
    span_nm: float = STATE_B_SPAN_NM,
    mode_sigma_nm: float = STATE_B_MODE_SIGMA_NM,
    weights: Tuple[float, float] = (0.5, 0.5),
) -> JointAmplitude:
    """Ideal Bell state on State B's mode family."""
    axis = make_axis(CENTER_NM, span_nm, n_points)
    basis = ModeBasis.from_nm(CENTER_NM, mode_sigma_nm)
    return bell_state(axis, axis, basis, basis, weights)
