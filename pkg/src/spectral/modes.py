"""
Hermite-Gauss spectral modes and their superpositions.

Width convention: a mode of order n is H_n(x)·exp(-x²/2) with
x = (ω - center)/width. The order-0 intensity exp(-(ω - center)²/width²) has
standard deviation σ_intensity = width/√2, which is the number quoted for
measured spectra (e.g. 0.84 nm, 1.43 nm).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..errors import InvalidArgumentError
from .grid import (
    ComplexAmplitude,
    FrequencyAxis,
    bandwidth_to_omega,
    inner_product,
    normalize,
    omega_to_bandwidth,
    omega_to_wavelength,
    wavelength_to_omega,
)

logger = structlog.get_logger()

MAX_ORDER = 10


def hermite_polynomial(order: int, x: np.ndarray) -> np.ndarray:
    """Physicists' Hermite polynomial by the three-term recurrence."""
    if order < 0:
        raise InvalidArgumentError(f"order must be non-negative, got {order}")
    x = np.asarray(x, dtype=float)
    previous = np.zeros_like(x)
    current = np.ones_like(x)
    for n in range(order):
        previous, current = current, 2.0 * x * current - 2.0 * n * previous
    return current


def hermite_function(order: int, x: np.ndarray) -> np.ndarray:
    """Unnormalized Hermite-Gauss function H_n(x)·exp(-x²/2)."""
    x = np.asarray(x, dtype=float)
    return hermite_polynomial(order, x) * np.exp(-0.5 * x ** 2)


@dataclass(frozen=True)
class HermiteGaussSpec:
    """One Hermite-Gauss mode: order, center (rad/s) and width (rad/s)."""

    order: int
    center: float
    width: float
    max_order: int = MAX_ORDER

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidArgumentError(f"width must be positive, got {self.width}")
        if int(self.order) != self.order or self.order < 0:
            raise InvalidArgumentError(f"order must be a non-negative integer, got {self.order}")
        if self.order > self.max_order:
            raise InvalidArgumentError(
                f"order {self.order} exceeds the configured maximum {self.max_order}"
            )


@dataclass(frozen=True)
class ModeBasis:
    """A Hermite-Gauss family sharing one center and width."""

    center: float
    width: float
    max_order: int = MAX_ORDER

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidArgumentError(f"width must be positive, got {self.width}")

    @classmethod
    def dimensionless(cls) -> "ModeBasis":
        """Unit family used for coefficient-only specs; rebind with `on`."""
        return cls(center=0.0, width=1.0)

    @classmethod
    def from_nm(cls, center_nm: float, sigma_nm: float, max_order: int = MAX_ORDER) -> "ModeBasis":
        """Family whose order-0 intensity has standard deviation `sigma_nm` at `center_nm`."""
        width = np.sqrt(2.0) * bandwidth_to_omega(sigma_nm, center_nm)
        return cls(center=float(wavelength_to_omega(center_nm)), width=float(width), max_order=max_order)

    @property
    def center_nm(self) -> float:
        return float(omega_to_wavelength(self.center))

    @property
    def sigma_nm(self) -> float:
        return omega_to_bandwidth(self.width / np.sqrt(2.0), self.center_nm)

    def spec(self, order: int) -> HermiteGaussSpec:
        return HermiteGaussSpec(order, self.center, self.width, self.max_order)

    def mode(self, order: int, axis: FrequencyAxis) -> ComplexAmplitude:
        return hermite_gauss(self.spec(order), axis)

    def modes(self, axis: FrequencyAxis, dim: int) -> List[ComplexAmplitude]:
        return [self.mode(k, axis) for k in range(dim)]


@dataclass(frozen=True)
class SuperpositionSpec:
    """
    Normalized superposition Σ c_k |HG_k⟩ over one Hermite-Gauss family.

    Coefficients are rescaled at construction so Σ|c_k|² = 1.
    """

    terms: Tuple[Tuple[complex, HermiteGaussSpec], ...]

    def __post_init__(self):
        terms = tuple((complex(c), spec) for c, spec in self.terms)
        if not terms:
            raise InvalidArgumentError("a superposition needs at least one term")
        first = terms[0][1]
        orders = set()
        for _, spec in terms:
            if spec.center != first.center or spec.width != first.width:
                raise InvalidArgumentError("all superposition terms must share center and width")
            if spec.order in orders:
                raise InvalidArgumentError(f"order {spec.order} appears twice")
            orders.add(spec.order)
        weight = sum(abs(c) ** 2 for c, _ in terms)
        if weight == 0:
            raise InvalidArgumentError("superposition coefficients are all zero")
        scale = 1.0 / np.sqrt(weight)
        object.__setattr__(self, "terms", tuple((c * scale, spec) for c, spec in terms))

    @classmethod
    def from_coefficients(
        cls, coefficients: Sequence[complex], basis: Optional[ModeBasis] = None
    ) -> "SuperpositionSpec":
        """Superposition with coefficient k on order k; zero coefficients are dropped."""
        basis = basis or ModeBasis.dimensionless()
        terms = [(c, basis.spec(k)) for k, c in enumerate(coefficients) if c != 0]
        return cls(tuple(terms))

    @property
    def basis(self) -> ModeBasis:
        first = self.terms[0][1]
        return ModeBasis(first.center, first.width, first.max_order)

    @property
    def orders(self) -> List[int]:
        return [spec.order for _, spec in self.terms]

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=complex)

    def on(self, basis: ModeBasis) -> "SuperpositionSpec":
        """Same coefficients on another Hermite-Gauss family."""
        return SuperpositionSpec(tuple((c, basis.spec(spec.order)) for c, spec in self.terms))

    def vector(self, dim: int) -> np.ndarray:
        """Coefficient vector in the first `dim` orders."""
        if max(self.orders) >= dim:
            raise InvalidArgumentError(
                f"superposition uses order {max(self.orders)}, outside dimension {dim}"
            )
        vec = np.zeros(dim, dtype=complex)
        for c, spec in self.terms:
            vec[spec.order] = c
        return vec

    def label(self) -> str:
        parts = []
        for c, spec in self.terms:
            parts.append(f"({c.real:+.4f}{c.imag:+.4f}j)HG{spec.order}")
        return " ".join(parts)


def hermite_gauss(spec: HermiteGaussSpec, axis: FrequencyAxis) -> ComplexAmplitude:
    """
    Sample a Hermite-Gauss mode on an axis, normalized to unit norm.

    The result is real and has parity (-1)^order about `spec.center`.
    """
    reach = 3.0 * spec.width * np.sqrt(spec.order + 1)
    low = axis.offsets[0] + axis.center
    high = axis.offsets[-1] + axis.center
    if spec.center - low < reach or high - spec.center < reach:
        logger.warning(
            "Axis does not cover Hermite-Gauss mode",
            order=spec.order,
            required_half_span=reach,
            available=(spec.center - low, high - spec.center),
        )
    x = (axis.offsets + (axis.center - spec.center)) / spec.width
    return normalize(ComplexAmplitude(axis, hermite_function(spec.order, x)))


def superpose(spec: SuperpositionSpec, axis: FrequencyAxis) -> ComplexAmplitude:
    """Render Σ c_k·HG_k on an axis with unit norm."""
    if not spec.terms:
        raise InvalidArgumentError("empty superposition")
    values = np.zeros(axis.n_points, dtype=complex)
    for coefficient, mode_spec in spec.terms:
        values += coefficient * hermite_gauss(mode_spec, axis).values
    return normalize(ComplexAmplitude(axis, values))


def bloch_projection(
    theta: float, phi: float = 0.0, basis: Optional[ModeBasis] = None
) -> SuperpositionSpec:
    """cos θ|HG0⟩ + e^{iφ} sin θ|HG1⟩ on `basis` (dimensionless if omitted)."""
    basis = basis or ModeBasis.dimensionless()
    return SuperpositionSpec(
        (
            (np.cos(theta), basis.spec(0)),
            (np.exp(1j * phi) * np.sin(theta), basis.spec(1)),
        )
    )


def fit_basis(mode: ComplexAmplitude, max_order: int = MAX_ORDER, order: Optional[int] = 0) -> ModeBasis:
    """
    Hermite-Gauss family matched to the first two intensity moments of a mode.

    An order-k mode has intensity variance width²·(2k+1)/2, so its family is
    recovered exactly once the order is known. With `order=None` the order is
    taken as the one whose moment-matched HG_k overlaps the mode best.
    """
    intensity = mode.intensity()
    total = intensity.sum()
    if total == 0:
        raise InvalidArgumentError("cannot fit a basis to an all-zero mode")
    offsets = mode.axis.offsets
    mean = float(np.sum(offsets * intensity) / total)
    var = float(np.sum((offsets - mean) ** 2 * intensity) / total)
    if order is None:
        order = _closest_order(mode, mean, var, max_order)
    elif not 0 <= order <= max_order:
        raise InvalidArgumentError(f"order must lie in [0, {max_order}], got {order}")
    width = float(np.sqrt(2.0 * var / (2 * order + 1)))
    return ModeBasis(center=mode.axis.center + mean, width=width, max_order=max_order)


def _closest_order(mode: ComplexAmplitude, mean: float, var: float, max_order: int) -> int:
    target = normalize(mode)
    overlaps = []
    for k in range(max_order + 1):
        width = np.sqrt(2.0 * var / (2 * k + 1))
        candidate = normalize(ComplexAmplitude(mode.axis, hermite_function(k, (mode.axis.offsets - mean) / width)))
        overlaps.append(abs(inner_product(candidate, target)))
    best = int(np.argmax(overlaps))
    logger.debug("Detected Hermite-Gauss order", order=best, overlap=overlaps[best])
    return best


def gram_matrix(modes: Sequence[ComplexAmplitude]) -> np.ndarray:
    """Matrix of pairwise overlaps ⟨m_j|m_k⟩."""
    n = len(modes)
    gram = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            gram[j, k] = inner_product(modes[j], modes[k])
    return gram
