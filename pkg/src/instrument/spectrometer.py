"""
Time-of-flight spectrometer and photon-counting model.

A dispersive fibre maps wavelength onto arrival time linearly. Timing jitter
and drift are lumped into one Gaussian resolution kernel, and a finite number
of detection events is drawn from the blurred spectrum.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog
from scipy.stats import norm

from ..errors import AxisMismatchError, InvalidArgumentError
from ..spectral.grid import WavelengthSpectrum

logger = structlog.get_logger()

DEFAULT_DISPERSION_NS_PER_NM = 0.58
DEFAULT_RESOLUTION_NM = 0.15
DEFAULT_BIN_WIDTH_NM = 0.1
CONVENTIONS = ("sigma", "fwhm")

FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))


@dataclass(frozen=True)
class SpectrometerSpec:
    """
    Dispersion in ns/nm and resolution in nm.

    `convention` says how `resolution_nm` is read: as the standard deviation
    of the Gaussian kernel ("sigma") or as its full width at half maximum.
    """

    dispersion_ns_per_nm: float = DEFAULT_DISPERSION_NS_PER_NM
    resolution_nm: float = DEFAULT_RESOLUTION_NM
    convention: str = "sigma"
    reference_wavelength_nm: float = 1540.7

    def __post_init__(self):
        if not self.dispersion_ns_per_nm > 0:
            raise InvalidArgumentError(f"dispersion must be positive, got {self.dispersion_ns_per_nm}")
        if not self.resolution_nm >= 0:
            raise InvalidArgumentError(f"resolution must be non-negative, got {self.resolution_nm}")
        if self.convention not in CONVENTIONS:
            raise InvalidArgumentError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    @property
    def kernel_sigma_nm(self) -> float:
        if self.convention == "fwhm":
            return self.resolution_nm / FWHM_PER_SIGMA
        return self.resolution_nm


def tof_map(delta_wavelength_nm, spec: SpectrometerSpec):
    """Arrival-time delay in ns for a wavelength shift in nm."""
    return spec.dispersion_ns_per_nm * np.asarray(delta_wavelength_nm, dtype=float)


def tof_inverse(delay_ns, spec: SpectrometerSpec):
    """Wavelength shift in nm for an arrival-time delay in ns."""
    return np.asarray(delay_ns, dtype=float) / spec.dispersion_ns_per_nm


def apply_resolution(spectrum: WavelengthSpectrum, spec: SpectrometerSpec) -> WavelengthSpectrum:
    """
    Blur a spectrum with the spectrometer's Gaussian kernel.

    The samples need not be evenly spaced. Each column of the kernel matrix is
    rescaled to unit quadrature weight so the area is preserved exactly.
    """
    sigma = spec.kernel_sigma_nm
    if sigma == 0:
        return spectrum
    step = float(np.max(spectrum.weights_nm))
    if step > sigma / 3.0:
        logger.warning(
            "Grid is coarse for the spectrometer resolution",
            step_nm=step,
            kernel_sigma_nm=sigma,
        )

    wavelengths = spectrum.wavelengths_nm
    weights = spectrum.weights_nm
    kernel = norm.pdf(wavelengths[:, None] - wavelengths[None, :], scale=sigma)
    kernel = kernel / (weights @ kernel)
    blurred = kernel @ (spectrum.density * weights)
    return spectrum.with_density(np.clip(blurred, 0.0, None))


@dataclass(frozen=True, eq=False)
class CountRecord:
    """Detection events histogrammed over wavelength bins."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total_events: int
    seed: int

    def __post_init__(self):
        edges = np.array(self.bin_edges, dtype=float)
        counts = np.array(self.counts, dtype=np.int64)
        if edges.shape != (counts.size + 1,):
            raise AxisMismatchError("need one more bin edge than bins")
        if counts.min(initial=0) < 0:
            raise InvalidArgumentError("counts must be non-negative")
        if int(counts.sum()) != self.total_events:
            raise InvalidArgumentError("counts do not add up to total_events")
        for arr in (edges, counts):
            arr.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountRecord):
            return NotImplemented
        return (
            self.total_events == other.total_events
            and self.seed == other.seed
            and np.array_equal(self.bin_edges, other.bin_edges)
            and np.array_equal(self.counts, other.counts)
        )

    __hash__ = None

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def to_spectrum(self) -> WavelengthSpectrum:
        """Empirical unit-area density over the bins."""
        density = self.counts / (self.total_events * self.bin_widths)
        return WavelengthSpectrum(self.bin_centers, density, self.bin_widths)

    def arrival_times(self, spec: SpectrometerSpec) -> np.ndarray:
        """Bin centers as delays (ns) relative to the reference wavelength."""
        return tof_map(self.bin_centers - spec.reference_wavelength_nm, spec)


def bin_edges_for(spectrum: WavelengthSpectrum, bin_width_nm: Optional[float] = DEFAULT_BIN_WIDTH_NM) -> np.ndarray:
    """
    Histogram edges covering a spectrum's samples.

    With `bin_width_nm=None` there is one bin per sample, split at the sample
    midpoints.
    """
    wavelengths = spectrum.wavelengths_nm
    low = wavelengths[0] - 0.5 * spectrum.weights_nm[0]
    high = wavelengths[-1] + 0.5 * spectrum.weights_nm[-1]
    if bin_width_nm is None:
        middle = 0.5 * (wavelengths[:-1] + wavelengths[1:])
        return np.concatenate([[low], middle, [high]])
    if not bin_width_nm > 0:
        raise InvalidArgumentError(f"bin width must be positive, got {bin_width_nm}")
    n_bins = max(1, int(np.ceil((high - low) / bin_width_nm - 1e-9)))
    return low + bin_width_nm * np.arange(n_bins + 1)


def bin_probabilities(spectrum: WavelengthSpectrum, edges: np.ndarray) -> np.ndarray:
    """Probability mass of a spectrum falling in each bin."""
    mass = np.clip(spectrum.density, 0.0, None) * spectrum.weights_nm
    probabilities, _ = np.histogram(spectrum.wavelengths_nm, bins=edges, weights=mass)
    total = probabilities.sum()
    if total <= 0:
        raise InvalidArgumentError("spectrum has no mass inside the bins")
    return probabilities / total


def rebin(spectrum: WavelengthSpectrum, edges: np.ndarray) -> WavelengthSpectrum:
    """Expected binned density, on the same bins as a CountRecord."""
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return WavelengthSpectrum(centers, bin_probabilities(spectrum, edges) / widths, widths)


def sample_counts(
    spectrum: WavelengthSpectrum,
    n_events: int,
    seed: int,
    bin_width_nm: Optional[float] = DEFAULT_BIN_WIDTH_NM,
) -> CountRecord:
    """
    Draw `n_events` detections from a spectrum.

    Returns:
        CountRecord: multinomial counts over bins of `bin_width_nm`,
        reproducible for a fixed seed
    """
    if isinstance(n_events, bool) or int(n_events) != n_events or n_events < 1:
        raise InvalidArgumentError(f"n_events must be a positive integer, got {n_events}")
    edges = bin_edges_for(spectrum, bin_width_nm)
    probabilities = bin_probabilities(spectrum, edges)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(int(n_events), probabilities)
    return CountRecord(bin_edges=edges, counts=counts, total_events=int(n_events), seed=int(seed))
