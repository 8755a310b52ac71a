"""Reports module - CSV tables and the output bundle."""

from .tables import (
    Table,
    cases_table,
    centroid_table,
    counts_table,
    density_matrix_table,
    jsi_table,
    projections_table,
    schmidt_table,
    spectra_table,
    sweep_table,
)
from .writer import BundleWriter

__all__ = [
    "Table",
    "cases_table",
    "centroid_table",
    "counts_table",
    "density_matrix_table",
    "jsi_table",
    "projections_table",
    "schmidt_table",
    "spectra_table",
    "sweep_table",
    "BundleWriter",
]
