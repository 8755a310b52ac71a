"""
Tabular artifacts.

Each artifact is a `Table`: `#`-prefixed metadata lines, one header row naming
every column with its unit, then rows in fixed `%.10e` notation so identical
inputs give byte-identical files.
"""

import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import AxisMismatchError, InvalidArgumentError
from ..instrument.spectrometer import CountRecord, SpectrometerSpec, rebin
from ..measurement.coherence import CaseReport
from ..measurement.tomography import ModalDensityMatrix
from ..source.pdc import SchmidtData, schmidt_number
from ..spectral.grid import JointAmplitude, WavelengthSpectrum

VALUE_FORMAT = "%.10e"
AXIS_FORMAT = "{:.6f}"


@dataclass
class Table:
    """One CSV artifact."""
    name: str
    columns: List[str]
    rows: np.ndarray
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.size == 0:
            rows = rows.reshape(0, len(self.columns))
        if rows.shape[1] != len(self.columns):
            raise InvalidArgumentError(
                f"table {self.name!r} has {rows.shape[1]} value columns but {len(self.columns)} headers"
            )
        self.rows = rows

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key, value in self.metadata.items():
            buffer.write(f"# {key}: {value}\n")
        buffer.write(",".join(self.columns) + "\n")
        if len(self.rows):
            np.savetxt(buffer, self.rows, fmt=VALUE_FORMAT, delimiter=",")
        return buffer.getvalue()


def _fmt(value: float) -> str:
    return VALUE_FORMAT % value


def jsi_table(jsa: JointAmplitude) -> Table:
    """Joint spectral intensity, peak-normalized, both axes ascending in nm."""
    intensity = jsa.intensity()[::-1, ::-1]
    intensity = intensity / intensity.max()
    signal_nm = jsa.axis_s.wavelengths_nm[::-1]
    idler_nm = jsa.axis_i.wavelengths_nm[::-1]
    columns = ["signal_nm\\idler_nm"] + [AXIS_FORMAT.format(w) for w in idler_nm]
    return Table(
        name="jsi",
        columns=columns,
        rows=np.column_stack([signal_nm, intensity]),
        metadata={
            "quantity": "joint spectral intensity |f|^2 (peak = 1)",
            "rows": "signal wavelength (nm)",
            "columns": "idler wavelength (nm)",
        },
    )


def schmidt_table(schmidt: SchmidtData, top: int = 10) -> Table:
    """λ_0..λ_{top-1} with cumulative weight."""
    if top < 1:
        raise InvalidArgumentError(f"top must be >= 1, got {top}")
    coefficients = schmidt.coefficients[:top]
    return Table(
        name="schmidt",
        columns=["k", "lambda", "cumulative"],
        rows=np.column_stack([np.arange(coefficients.size), coefficients, np.cumsum(coefficients)]),
        metadata={
            "schmidt_number": _fmt(schmidt_number(schmidt)),
            "modes_listed": str(coefficients.size),
        },
    )


def spectra_table(name: str, spectra: Dict[str, WavelengthSpectrum], metadata: Optional[Dict[str, str]] = None) -> Table:
    """Several spectra on one wavelength axis, one density column each."""
    if not spectra:
        raise InvalidArgumentError("no spectra to tabulate")
    labels = list(spectra)
    first = spectra[labels[0]]
    for label in labels[1:]:
        if not first.same_axis(spectra[label]):
            raise AxisMismatchError(f"spectrum {label!r} is on a different axis")
    columns = ["wavelength_nm"] + [f"{label}_per_nm" for label in labels]
    rows = np.column_stack([first.wavelengths_nm] + [spectra[label].density for label in labels])
    return Table(name=name, columns=columns, rows=rows, metadata=dict(metadata or {}))


def projections_table(labels: Sequence[str], probabilities: Sequence[float], spectra: Sequence[WavelengthSpectrum]) -> Table:
    """Success probability, centroid and width of each conditional spectrum."""
    rows = [
        [index, probability, spectrum.mean(), spectrum.std()]
        for index, (probability, spectrum) in enumerate(zip(probabilities, spectra))
    ]
    metadata = {f"projection_{index}": label for index, label in enumerate(labels)}
    return Table(
        name="projections",
        columns=["index", "probability", "centroid_nm", "std_nm"],
        rows=np.array(rows, dtype=float).reshape(-1, 4),
        metadata=metadata,
    )


def sweep_table(thetas: Sequence[float], spectra: Sequence[WavelengthSpectrum], phi: float = 0.0) -> Table:
    """θ-by-wavelength matrix of conditional spectra; first column is θ."""
    if len(thetas) != len(spectra) or not spectra:
        raise InvalidArgumentError("need one spectrum per θ")
    axis = spectra[0]
    for spectrum in spectra[1:]:
        if not axis.same_axis(spectrum):
            raise AxisMismatchError("sweep spectra are on different axes")
    columns = ["theta_rad\\wavelength_nm"] + [AXIS_FORMAT.format(w) for w in axis.wavelengths_nm]
    rows = np.column_stack([np.asarray(thetas, dtype=float), np.array([s.density for s in spectra])])
    return Table(
        name="sweep",
        columns=columns,
        rows=rows,
        metadata={"quantity": "conditional signal density (1/nm)", "phi_rad": _fmt(phi)},
    )


def centroid_table(thetas: Sequence[float], spectra: Sequence[WavelengthSpectrum]) -> Table:
    rows = [[theta, s.mean(), s.std()] for theta, s in zip(thetas, spectra)]
    return Table(
        name="sweep_centroids",
        columns=["theta_rad", "centroid_nm", "std_nm"],
        rows=np.array(rows, dtype=float).reshape(-1, 3),
    )


def cases_table(report: CaseReport, name: str = "cases") -> Table:
    """Long format: one row per (θ, case)."""
    rows = [
        [theta, case, report.matrix[i, j]]
        for i, theta in enumerate(report.thetas)
        for j, case in enumerate(report.cases)
    ]
    return Table(
        name=name,
        columns=["theta_rad", "case", "similarity"],
        rows=np.array(rows, dtype=float).reshape(-1, 3),
        metadata={"quantity": "similarity to reference spectrum (Bhattacharyya)"},
    )


def counts_table(name: str, record: CountRecord, expected: WavelengthSpectrum, spec: SpectrometerSpec) -> Table:
    """Sampled counts next to the expected counts of the blurred spectrum."""
    reference = rebin(expected, record.bin_edges)
    expected_counts = reference.density * reference.weights_nm * record.total_events
    rows = np.column_stack(
        [record.bin_centers, record.arrival_times(spec), record.counts, expected_counts]
    )
    return Table(
        name=name,
        columns=["bin_center_nm", "arrival_ns", "counts", "expected_counts"],
        rows=rows,
        metadata={
            "total_events": str(record.total_events),
            "seed": str(record.seed),
            "dispersion_ns_per_nm": _fmt(spec.dispersion_ns_per_nm),
            "reference_wavelength_nm": _fmt(spec.reference_wavelength_nm),
        },
    )


def density_matrix_table(name: str, rho: ModalDensityMatrix) -> Table:
    """Row-major (m, n, Re ρ_mn, Im ρ_mn) listing plus the eigenvalues as metadata."""
    rows = [
        [m, n, rho.matrix[m, n].real, rho.matrix[m, n].imag]
        for m in range(rho.dim)
        for n in range(rho.dim)
    ]
    eigenvalues = " ".join(_fmt(v) for v in rho.eigenvalues())
    return Table(
        name=name,
        columns=["m", "n", "real", "imag"],
        rows=np.array(rows, dtype=float),
        metadata={
            "basis_center_nm": _fmt(rho.basis.center_nm),
            "basis_sigma_nm": _fmt(rho.basis.sigma_nm),
            "truncation_weight": _fmt(rho.truncation_weight),
            "truncated": str(rho.truncated).lower(),
            "eigenvalues": eigenvalues,
        },
    )
