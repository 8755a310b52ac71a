"""
Spectral discretization and the inner-product algebra.

Everything is sampled on uniform angular-frequency axes (rad/s). Wavelength
only appears at the boundary, through `make_axis` and `WavelengthSpectrum`.
Integrals are plain Riemann sums with the uniform step.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from ..errors import AxisMismatchError, DegenerateInputError, InvalidArgumentError

NM = 1e-9
TWO_PI_C = 2.0 * np.pi * SPEED_OF_LIGHT


def wavelength_to_omega(wavelength_nm):
    """Angular frequency (rad/s) of a vacuum wavelength given in nm."""
    return TWO_PI_C / (np.asarray(wavelength_nm, dtype=float) * NM)


def omega_to_wavelength(omega):
    """Vacuum wavelength in nm of an angular frequency in rad/s."""
    return TWO_PI_C / np.asarray(omega, dtype=float) / NM


def bandwidth_to_omega(delta_nm: float, wavelength_nm: float) -> float:
    """Convert a small wavelength interval at `wavelength_nm` to rad/s."""
    return float(TWO_PI_C * delta_nm * NM / (wavelength_nm * NM) ** 2)


def omega_to_bandwidth(delta_omega: float, wavelength_nm: float) -> float:
    """Inverse of `bandwidth_to_omega`."""
    return float(delta_omega * (wavelength_nm * NM) ** 2 / TWO_PI_C / NM)


@dataclass(frozen=True)
class FrequencyAxis:
    """Uniform angular-frequency axis for one photon's marginal space."""

    center: float
    span: float
    n_points: int

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise InvalidArgumentError(f"n_points must be an integer >= 2, got {self.n_points}")
        if not np.isfinite(self.span) or self.span <= 0:
            raise InvalidArgumentError(f"span must be positive, got {self.span}")
        if not np.isfinite(self.center) or self.center <= 0:
            raise InvalidArgumentError(f"center must be a positive frequency, got {self.center}")

    @property
    def step(self) -> float:
        return self.span / (self.n_points - 1)

    @property
    def offsets(self) -> np.ndarray:
        """Detunings from the center; exactly antisymmetric about it."""
        return (np.arange(self.n_points) - (self.n_points - 1) / 2.0) * self.step

    @property
    def omega(self) -> np.ndarray:
        return self.center + self.offsets

    @property
    def wavelengths_nm(self) -> np.ndarray:
        """Sample wavelengths, in axis order (descending)."""
        return omega_to_wavelength(self.omega)

    @property
    def center_wavelength_nm(self) -> float:
        return float(omega_to_wavelength(self.center))

    def with_points(self, n_points: int) -> "FrequencyAxis":
        return FrequencyAxis(self.center, self.span, n_points)

    def describe(self) -> dict:
        return {
            "center_nm": self.center_wavelength_nm,
            "span_rad_s": self.span,
            "n_points": self.n_points,
        }


def make_axis(center_wavelength: float, span_wavelength: float, n_points: int) -> FrequencyAxis:
    """
    Build a uniform frequency axis covering a wavelength window.

    Args:
        center_wavelength: Window center in nm
        span_wavelength: Full window width in nm
        n_points: Number of samples (>= 2)

    Returns:
        FrequencyAxis: centered on 2πc/center_wavelength, spanning the
        frequencies of the window edges
    """
    if span_wavelength <= 0:
        raise InvalidArgumentError(f"span_wavelength must be positive, got {span_wavelength}")
    if n_points < 2:
        raise InvalidArgumentError(f"n_points must be >= 2, got {n_points}")
    if center_wavelength <= span_wavelength / 2:
        raise InvalidArgumentError("wavelength window must stay at positive wavelengths")

    center = float(wavelength_to_omega(center_wavelength))
    high = wavelength_to_omega(center_wavelength - span_wavelength / 2)
    low = wavelength_to_omega(center_wavelength + span_wavelength / 2)
    return FrequencyAxis(center=center, span=float(high - low), n_points=int(n_points))


@dataclass(frozen=True, eq=False)
class ComplexAmplitude:
    """Complex spectral amplitude of one field sampled on an axis."""

    axis: FrequencyAxis
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.axis.n_points,):
            raise AxisMismatchError(
                f"values of shape {values.shape} do not match axis with {self.axis.n_points} points"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.axis.step))

    def intensity(self) -> np.ndarray:
        """|values|², a density over angular frequency."""
        return np.abs(self.values) ** 2

    def scaled(self, factor: complex) -> "ComplexAmplitude":
        return ComplexAmplitude(self.axis, self.values * factor)

    def __add__(self, other: "ComplexAmplitude") -> "ComplexAmplitude":
        _require_same_axis(self.axis, other.axis)
        return ComplexAmplitude(self.axis, self.values + other.values)


@dataclass(frozen=True, eq=False)
class JointAmplitude:
    """Discretized joint spectral amplitude f(ω_s, ω_i); rows are signal samples."""

    axis_s: FrequencyAxis
    axis_i: FrequencyAxis
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        expected = (self.axis_s.n_points, self.axis_i.n_points)
        if values.shape != expected:
            raise AxisMismatchError(f"JSA of shape {values.shape} does not match axes {expected}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def cell(self) -> float:
        return self.axis_s.step * self.axis_i.step

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))

    def intensity(self) -> np.ndarray:
        """Joint spectral intensity |f|²."""
        return np.abs(self.values) ** 2

    def axis(self, which: str) -> FrequencyAxis:
        if which == "signal":
            return self.axis_s
        if which == "idler":
            return self.axis_i
        raise InvalidArgumentError(f"which must be 'signal' or 'idler', got {which!r}")


Amplitude = Union[ComplexAmplitude, JointAmplitude]


def _require_same_axis(a: FrequencyAxis, b: FrequencyAxis):
    if a != b:
        raise AxisMismatchError(f"axis mismatch: {a} vs {b}")


def inner_product(a: ComplexAmplitude, b: ComplexAmplitude) -> complex:
    """Riemann-sum overlap ⟨a|b⟩ = Σ conj(a)·b·step."""
    _require_same_axis(a.axis, b.axis)
    return complex(np.vdot(a.values, b.values) * a.axis.step)


def normalize(a: Amplitude) -> Amplitude:
    """Rescale an amplitude to unit norm by a positive real factor."""
    n = a.norm()
    if not np.isfinite(n) or n == 0.0:
        raise DegenerateInputError("cannot normalize an all-zero amplitude")
    if isinstance(a, JointAmplitude):
        return JointAmplitude(a.axis_s, a.axis_i, a.values / n)
    return ComplexAmplitude(a.axis, a.values / n)


@dataclass(frozen=True, eq=False)
class WavelengthSpectrum:
    """
    Real spectral density over wavelength.

    Samples are ascending in wavelength. `weights_nm` is the wavelength width
    each sample represents (Jacobian of the frequency step), so the area is
    Σ density·weights_nm.
    """

    wavelengths_nm: np.ndarray
    density: np.ndarray
    weights_nm: np.ndarray

    def __post_init__(self):
        for name in ("wavelengths_nm", "density", "weights_nm"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.wavelengths_nm.shape == self.density.shape == self.weights_nm.shape):
            raise AxisMismatchError("spectrum arrays must share one shape")

    def area(self) -> float:
        return float(np.sum(self.density * self.weights_nm))

    def normalized(self) -> "WavelengthSpectrum":
        area = self.area()
        if area <= 0:
            raise DegenerateInputError("spectrum has no area")
        return self.with_density(self.density / area)

    def with_density(self, density: np.ndarray) -> "WavelengthSpectrum":
        return WavelengthSpectrum(self.wavelengths_nm, density, self.weights_nm)

    def same_axis(self, other: "WavelengthSpectrum") -> bool:
        return self.wavelengths_nm.shape == other.wavelengths_nm.shape and bool(
            np.array_equal(self.wavelengths_nm, other.wavelengths_nm)
        )

    def mean(self) -> float:
        return float(np.sum(self.wavelengths_nm * self.density * self.weights_nm) / self.area())

    def std(self) -> float:
        mu = self.mean()
        var = np.sum((self.wavelengths_nm - mu) ** 2 * self.density * self.weights_nm) / self.area()
        return float(np.sqrt(var))


def to_wavelength_spectrum(axis: FrequencyAxis, density_omega: np.ndarray) -> WavelengthSpectrum:
    """
    Map a density over angular frequency to a unit-area density over wavelength.
    """
    density_omega = np.asarray(density_omega, dtype=float)
    if density_omega.shape != (axis.n_points,):
        raise AxisMismatchError("density does not match axis")
    omega = axis.omega
    weights = TWO_PI_C / omega ** 2 * axis.step / NM
    mass = density_omega * axis.step
    total = mass.sum()
    if total <= 0:
        raise DegenerateInputError("density has no weight")
    order = slice(None, None, -1)
    return WavelengthSpectrum(
        wavelengths_nm=omega_to_wavelength(omega)[order],
        density=(mass / weights / total)[order],
        weights_nm=weights[order],
    )
