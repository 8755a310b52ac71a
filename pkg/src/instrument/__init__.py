"""Instrument module - time-of-flight spectrometer and event sampling."""

from .spectrometer import (
    CountRecord,
    SpectrometerSpec,
    apply_resolution,
    rebin,
    sample_counts,
    tof_inverse,
    tof_map,
)

__all__ = [
    "CountRecord",
    "SpectrometerSpec",
    "apply_resolution",
    "rebin",
    "sample_counts",
    "tof_inverse",
    "tof_map",
]
