"""
Experiments: scans that combine sampling, deformation plans and reports
"""

from .decay import DecayScan, decay_targets, fit_decay_slope, run_decay, trend_note

__all__ = ["DecayScan", "decay_targets", "fit_decay_slope", "run_decay", "trend_note"]
