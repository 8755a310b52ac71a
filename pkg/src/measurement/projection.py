"""
Quantum-pulse-gate projections and remote state preparation.

The gate is an ideal projector onto a programmable idler mode: conditioned on
a successful projection the signal is left in ψ_s(ω_s) = ∫dω_i conj(m(ω_i))·f(ω_s, ω_i).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
import structlog

from ..errors import AxisMismatchError, InvalidArgumentError, NullProjectionError
from ..source.pdc import SchmidtData, schmidt_decompose
from ..spectral.grid import (
    ComplexAmplitude,
    JointAmplitude,
    WavelengthSpectrum,
    normalize,
    to_wavelength_spectrum,
)
from ..spectral.modes import ModeBasis, SuperpositionSpec, bloch_projection, fit_basis, superpose

logger = structlog.get_logger()

NULL_THRESHOLD = 1e-12
NORM_TOLERANCE = 1e-6

ProjectionBasis = Union[ModeBasis, SchmidtData, None]


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Outcome of projecting the idler onto one mode."""

    probability: float
    conditional_amplitude: ComplexAmplitude
    mode: ComplexAmplitude
    projection_mode: Optional[SuperpositionSpec] = None
    theta: Optional[float] = None


def conditional_state(jsa: JointAmplitude, mode: ComplexAmplitude) -> ComplexAmplitude:
    """Unnormalized signal amplitude left after projecting the idler onto `mode`."""
    if mode.axis != jsa.axis_i:
        raise AxisMismatchError("projection mode must live on the JSA idler axis")
    values = jsa.values @ mode.values.conj() * jsa.axis_i.step
    return ComplexAmplitude(jsa.axis_s, values)


def project(
    jsa: JointAmplitude,
    mode: ComplexAmplitude,
    spec: Optional[SuperpositionSpec] = None,
    theta: Optional[float] = None,
) -> ProjectionResult:
    """
    Project the idler onto a unit-norm mode.

    Returns:
        ProjectionResult: success probability ‖ψ_s‖² and the renormalized
        conditional signal amplitude
    """
    norm = mode.norm()
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise InvalidArgumentError(f"projection mode must have unit norm, got {norm:.9f}")
    psi = conditional_state(jsa, mode)
    probability = psi.norm() ** 2
    if probability < NULL_THRESHOLD:
        raise NullProjectionError(probability)
    return ProjectionResult(
        probability=float(probability),
        conditional_amplitude=normalize(psi),
        mode=mode,
        projection_mode=spec,
        theta=theta,
    )


def conditional_spectrum(result: ProjectionResult) -> WavelengthSpectrum:
    """Conditional signal spectrum as a unit-area density over wavelength."""
    amplitude = result.conditional_amplitude
    return to_wavelength_spectrum(amplitude.axis, amplitude.intensity())


def marginal_spectrum(jsa: JointAmplitude, which: str = "signal") -> WavelengthSpectrum:
    """Non-mode-resolved spectrum of one photon."""
    intensity = jsa.intensity()
    if which == "signal":
        density = intensity.sum(axis=1) * jsa.axis_i.step
    elif which == "idler":
        density = intensity.sum(axis=0) * jsa.axis_s.step
    else:
        raise InvalidArgumentError(f"which must be 'signal' or 'idler', got {which!r}")
    return to_wavelength_spectrum(jsa.axis(which), density)


def resolve_basis(jsa: JointAmplitude, basis: ProjectionBasis = None) -> Union[ModeBasis, SchmidtData]:
    """
    Default projection basis: Hermite-Gauss family fitted to the first idler Schmidt mode.

    The mode order is detected, so a leading mode that is itself HG1 (as on a
    Bell state) still yields the family it belongs to.
    """
    if basis is not None:
        return basis
    schmidt = schmidt_decompose(jsa, rank=2)
    fitted = fit_basis(schmidt.idler_modes[0], order=None)
    logger.debug("Fitted projection basis", center_nm=fitted.center_nm, sigma_nm=fitted.sigma_nm)
    return fitted


def superposition_mode(
    jsa: JointAmplitude, theta: float, phi: float, basis: Union[ModeBasis, SchmidtData]
):
    """cos θ|0⟩ + e^{iφ} sin θ|1⟩ rendered on the idler axis, with its spec if any."""
    if isinstance(basis, SchmidtData):
        if basis.rank < 2:
            raise InvalidArgumentError("Schmidt basis needs at least two idler modes")
        h0, h1 = basis.idler_modes[0], basis.idler_modes[1]
        values = np.cos(theta) * h0.values + np.exp(1j * phi) * np.sin(theta) * h1.values
        return normalize(ComplexAmplitude(jsa.axis_i, values)), None
    spec = bloch_projection(theta, phi, basis)
    return superpose(spec, jsa.axis_i), spec


def composite_mode(
    jsa: JointAmplitude, coefficients: Sequence[complex], basis: Union[ModeBasis, SchmidtData]
):
    """Σ c_k|k⟩ over Hermite-Gauss orders or idler Schmidt modes, with its spec if any."""
    coefficients = np.asarray(coefficients, dtype=complex)
    if isinstance(basis, SchmidtData):
        if len(coefficients) > basis.rank:
            raise InvalidArgumentError(
                f"superposition uses {len(coefficients)} Schmidt modes, only {basis.rank} available"
            )
        values = coefficients @ basis.idler_matrix[: len(coefficients), :]
        return normalize(ComplexAmplitude(jsa.axis_i, values)), None
    spec = SuperpositionSpec.from_coefficients(coefficients, basis)
    return superpose(spec, jsa.axis_i), spec


def rsp_sweep(
    jsa: JointAmplitude,
    thetas: Sequence[float],
    phi: float = 0.0,
    basis: ProjectionBasis = None,
) -> List[ProjectionResult]:
    """
    Remote state preparation over a list of superposition angles.

    Args:
        jsa: Two-photon state
        thetas: Superposition angles θ, results keep this order
        phi: Relative phase of the HG1 term
        basis: Hermite-Gauss family, the state's own Schmidt modes, or None to
            fit a Hermite-Gauss family to the first idler Schmidt mode
    """
    if len(thetas) == 0:
        raise InvalidArgumentError("thetas must not be empty")
    resolved = resolve_basis(jsa, basis)
    results = []
    for theta in thetas:
        mode, spec = superposition_mode(jsa, theta, phi, resolved)
        results.append(project(jsa, mode, spec=spec, theta=float(theta)))
    return results
