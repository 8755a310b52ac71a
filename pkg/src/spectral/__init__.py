"""Spectral module - discretization and Hermite-Gauss mode alphabet."""

from .grid import (
    ComplexAmplitude,
    FrequencyAxis,
    JointAmplitude,
    WavelengthSpectrum,
    inner_product,
    make_axis,
    normalize,
    to_wavelength_spectrum,
)
from .modes import (
    HermiteGaussSpec,
    ModeBasis,
    SuperpositionSpec,
    bloch_projection,
    fit_basis,
    hermite_gauss,
    superpose,
)

__all__ = [
    "ComplexAmplitude",
    "FrequencyAxis",
    "JointAmplitude",
    "WavelengthSpectrum",
    "inner_product",
    "make_axis",
    "normalize",
    "to_wavelength_spectrum",
    "HermiteGaussSpec",
    "ModeBasis",
    "SuperpositionSpec",
    "bloch_projection",
    "fit_basis",
    "hermite_gauss",
    "superpose",
]
