"""
Coherent versus incoherent models of the conditional signal spectrum.

Two state models (the pure JSA, or the incoherent mixture of its Schmidt pairs)
crossed with two measurement models (a coherent projection, or an
intensity-only filter shaped like |mode|²) give four cases:

    case 1: coherent state, coherent projection
    case 2: mixed state, coherent projection
    case 3: coherent state, intensity filter
    case 4: mixed state, intensity filter

Only case 1 keeps the phase between the Schmidt pairs, so it is the only one
that shows the lopsided spectra of superposition projections.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..errors import AxisMismatchError, InvalidArgumentError, InvalidDistributionError
from ..source.pdc import SchmidtData, schmidt_decompose
from ..spectral.grid import ComplexAmplitude, FrequencyAxis, JointAmplitude, WavelengthSpectrum, to_wavelength_spectrum
from ..spectral.modes import ModeBasis
from .projection import resolve_basis, superposition_mode

logger = structlog.get_logger()

CASES = (1, 2, 3, 4)
NEGATIVE_TOLERANCE = 1e-12
WEIGHT_TOLERANCE = 1e-9


class StateModel(ABC):
    """Two-photon state as seen by a conditional-spectrum measurement."""

    coherent: bool

    @property
    @abstractmethod
    def axis_s(self) -> FrequencyAxis:
        pass

    @property
    @abstractmethod
    def axis_i(self) -> FrequencyAxis:
        pass

    @abstractmethod
    def projected_density(self, mode: ComplexAmplitude) -> np.ndarray:
        """Signal density over ω_s after projecting the idler onto `mode`."""
        pass

    @abstractmethod
    def filtered_density(self, profile: np.ndarray) -> np.ndarray:
        """Signal density over ω_s after an idler intensity filter."""
        pass


@dataclass(frozen=True, eq=False)
class CoherentState(StateModel):
    jsa: JointAmplitude
    coherent: bool = field(default=True, init=False)

    @property
    def axis_s(self) -> FrequencyAxis:
        return self.jsa.axis_s

    @property
    def axis_i(self) -> FrequencyAxis:
        return self.jsa.axis_i

    def projected_density(self, mode: ComplexAmplitude) -> np.ndarray:
        psi = self.jsa.values @ mode.values.conj() * self.axis_i.step
        return np.abs(psi) ** 2

    def filtered_density(self, profile: np.ndarray) -> np.ndarray:
        return self.jsa.intensity() @ profile * self.axis_i.step


@dataclass(frozen=True, eq=False)
class MixedState(StateModel):
    """Incoherent mixture Σ λ_k |g_k⟩⟨g_k| ⊗ |h_k⟩⟨h_k| of the Schmidt pairs."""

    schmidt: SchmidtData
    coherent: bool = field(default=False, init=False)

    def __post_init__(self):
        total = float(np.sum(self.schmidt.coefficients))
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidArgumentError(
                f"mixed state needs Schmidt weights summing to 1, got {total:.12f}"
            )

    @classmethod
    def from_jsa(cls, jsa: JointAmplitude) -> "MixedState":
        return cls(schmidt_decompose(jsa))

    @property
    def axis_s(self) -> FrequencyAxis:
        return self.schmidt.axis_s

    @property
    def axis_i(self) -> FrequencyAxis:
        return self.schmidt.axis_i

    def _mixture(self, idler_weights: np.ndarray) -> np.ndarray:
        weights = self.schmidt.coefficients * idler_weights
        return np.abs(self.schmidt.signal_matrix) ** 2 @ weights

    def projected_density(self, mode: ComplexAmplitude) -> np.ndarray:
        overlaps = self.schmidt.idler_matrix @ mode.values.conj() * self.axis_i.step
        return self._mixture(np.abs(overlaps) ** 2)

    def filtered_density(self, profile: np.ndarray) -> np.ndarray:
        transmitted = np.abs(self.schmidt.idler_matrix) ** 2 @ profile * self.axis_i.step
        return self._mixture(transmitted)


class MeasurementModel(ABC):
    """Idler-side measurement heralding the signal."""

    coherent: bool

    @property
    @abstractmethod
    def axis(self) -> FrequencyAxis:
        pass

    @abstractmethod
    def apply(self, state: StateModel) -> np.ndarray:
        pass


@dataclass(frozen=True, eq=False)
class CoherentProjection(MeasurementModel):
    mode: ComplexAmplitude
    coherent: bool = field(default=True, init=False)

    @property
    def axis(self) -> FrequencyAxis:
        return self.mode.axis

    def apply(self, state: StateModel) -> np.ndarray:
        return state.projected_density(self.mode)


@dataclass(frozen=True, eq=False)
class IntensityFilter(MeasurementModel):
    """Non-negative transmission profile over ω_i, unit area."""

    filter_axis: FrequencyAxis
    profile: np.ndarray
    coherent: bool = field(default=False, init=False)

    def __post_init__(self):
        profile = np.array(self.profile, dtype=float)
        if profile.shape != (self.filter_axis.n_points,):
            raise AxisMismatchError("filter profile does not match its axis")
        if profile.min() < 0:
            raise InvalidArgumentError("filter profile must be non-negative")
        area = profile.sum() * self.filter_axis.step
        if area <= 0:
            raise InvalidArgumentError("filter profile has no area")
        profile = profile / area
        profile.setflags(write=False)
        object.__setattr__(self, "profile", profile)

    @classmethod
    def from_mode(cls, mode: ComplexAmplitude) -> "IntensityFilter":
        """Filter with the spectral intensity shape of a temporal mode."""
        return cls(mode.axis, mode.intensity())

    @classmethod
    def uniform(cls, axis: FrequencyAxis) -> "IntensityFilter":
        return cls(axis, np.ones(axis.n_points))

    @property
    def axis(self) -> FrequencyAxis:
        return self.filter_axis

    def apply(self, state: StateModel) -> np.ndarray:
        return state.filtered_density(self.profile)


def case_number(state: StateModel, meas: MeasurementModel) -> int:
    if state.coherent:
        return 1 if meas.coherent else 3
    return 2 if meas.coherent else 4


def conditional_spectrum_case(state: StateModel, meas: MeasurementModel) -> WavelengthSpectrum:
    """Unit-area conditional signal spectrum for one (state, measurement) pairing."""
    if meas.axis != state.axis_i:
        raise AxisMismatchError("measurement axis does not match the state's idler axis")
    density = np.clip(meas.apply(state), 0.0, None)
    return to_wavelength_spectrum(state.axis_s, density)


def similarity(p: WavelengthSpectrum, q: WavelengthSpectrum) -> float:
    """
    Bhattacharyya coefficient Σ √(p·q)·Δλ of two spectra on a shared axis.

    Both spectra are renormalized to unit area first; negatives down to
    -1e-12 are treated as rounding noise and clipped.
    """
    if not p.same_axis(q):
        raise AxisMismatchError("spectra must share one wavelength axis")
    densities = []
    for spectrum in (p, q):
        low = float(spectrum.density.min())
        if low < -NEGATIVE_TOLERANCE:
            raise InvalidDistributionError(f"spectrum has negative density {low:.3e}")
        densities.append(spectrum.with_density(np.clip(spectrum.density, 0.0, None)).normalized())
    a, b = densities
    value = float(np.sum(np.sqrt(a.density * b.density) * a.weights_nm))
    return min(value, 1.0)


@dataclass(frozen=True, eq=False)
class CaseReport:
    """Similarity of each case to the reference spectrum, one row per θ."""

    thetas: np.ndarray
    cases: Tuple[int, ...]
    matrix: np.ndarray
    spectra: List[Dict[int, WavelengthSpectrum]]
    references: List[WavelengthSpectrum]

    def row(self, theta_index: int) -> Dict[int, float]:
        return {case: float(self.matrix[theta_index, j]) for j, case in enumerate(self.cases)}

    def best_case(self, theta_index: int) -> int:
        return self.cases[int(np.argmax(self.matrix[theta_index]))]


CaseBasis = Union[str, ModeBasis, SchmidtData]


def _case_basis(jsa: JointAmplitude, schmidt: SchmidtData, basis: CaseBasis):
    if isinstance(basis, str):
        if basis == "schmidt":
            return schmidt
        if basis == "hermite":
            return resolve_basis(jsa, None)
        raise InvalidArgumentError(f"basis must be 'schmidt' or 'hermite', got {basis!r}")
    return basis


def case_report(
    jsa: JointAmplitude,
    thetas: Sequence[float],
    phi: float = 0.0,
    basis: CaseBasis = "schmidt",
    measured: Optional[Sequence[WavelengthSpectrum]] = None,
    cases: Sequence[int] = CASES,
) -> CaseReport:
    """
    Compare the four coherence cases over a set of superposition angles.

    Args:
        jsa: Two-photon state
        thetas: Superposition angles of the projection cos θ|0⟩ + e^{iφ} sin θ|1⟩
        phi: Relative phase
        basis: "schmidt" projects onto superpositions of the state's own first
            two idler Schmidt modes, "hermite" onto a Hermite-Gauss family fitted
            to them; a ModeBasis or SchmidtData is used as given
        measured: Optional reference spectra, one per θ; case 1 is the
            reference when omitted
        cases: Subset of {1, 2, 3, 4} to evaluate

    Returns:
        CaseReport: similarity matrix of shape (len(thetas), len(cases))
    """
    cases = tuple(sorted(set(int(c) for c in cases)))
    if not cases or any(c not in CASES for c in cases):
        raise InvalidArgumentError(f"cases must be a non-empty subset of {CASES}, got {cases}")
    if measured is not None and len(measured) != len(thetas):
        raise InvalidArgumentError("need one measured spectrum per θ")

    schmidt = schmidt_decompose(jsa)
    states = {True: CoherentState(jsa), False: MixedState(schmidt)}
    resolved = _case_basis(jsa, schmidt, basis)

    matrix = np.zeros((len(thetas), len(cases)))
    spectra = []
    references = []
    for row, theta in enumerate(thetas):
        mode, _ = superposition_mode(jsa, float(theta), phi, resolved)
        measurements = {True: CoherentProjection(mode), False: IntensityFilter.from_mode(mode)}
        by_case = {}
        for case in CASES:
            state = states[case in (1, 3)]
            meas = measurements[case in (1, 2)]
            if case in cases or (case == 1 and measured is None):
                by_case[case] = conditional_spectrum_case(state, meas)
        reference = measured[row] if measured is not None else by_case[1]
        for col, case in enumerate(cases):
            matrix[row, col] = similarity(reference, by_case[case])
        spectra.append({case: by_case[case] for case in cases})
        references.append(reference)
        logger.debug("Case comparison", theta=float(theta), similarities=matrix[row].tolist())

    return CaseReport(
        thetas=np.asarray(thetas, dtype=float),
        cases=cases,
        matrix=matrix,
        spectra=spectra,
        references=references,
    )
