"""Threshold plots from sweep CSVs.

This package consumes only the documented CSV schema written by the
simulation sweeps; it never imports the simulator.
"""

from .core import SweepTable, crossing_estimate, plot_threshold

__all__ = ["SweepTable", "crossing_estimate", "plot_threshold"]

__version__ = "0.1.0"
