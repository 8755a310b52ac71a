"""
Temporal-Mode Remote Shaping Simulator
======================================

Desk-scale simulation of engineered two-photon time-frequency states,
mode-selective projections on one photon and the resulting spectra of its
partner, including the time-of-flight instrument and modal tomography.
"""

__version__ = "1.0.0"
__author__ = "TM Shaping Team"
