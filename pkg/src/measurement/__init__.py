"""Measurement module - mode-selective projections, coherence cases and tomography."""

from .coherence import (
    CaseReport,
    CoherentProjection,
    CoherentState,
    IntensityFilter,
    MixedState,
    case_report,
    conditional_spectrum_case,
    similarity,
)
from .projection import (
    ProjectionResult,
    conditional_spectrum,
    conditional_state,
    marginal_spectrum,
    project,
    rsp_sweep,
)
from .tomography import (
    ModalDensityMatrix,
    default_qubit_projections,
    linear_inversion,
    reduced_density_matrix,
    simulate_tomography,
)

__all__ = [
    "CaseReport",
    "CoherentProjection",
    "CoherentState",
    "IntensityFilter",
    "MixedState",
    "case_report",
    "conditional_spectrum_case",
    "similarity",
    "ProjectionResult",
    "conditional_spectrum",
    "conditional_state",
    "marginal_spectrum",
    "project",
    "rsp_sweep",
    "ModalDensityMatrix",
    "default_qubit_projections",
    "linear_inversion",
    "reduced_density_matrix",
    "simulate_tomography",
]
