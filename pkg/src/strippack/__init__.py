"""Offline and online strip packing built on one-dimensional bin packing.

Batch-and-Pack (offline) stacks rectangles into fixed-height slips and
hands the slip widths to a bin packing algorithm.  Group-and-Pack (online)
routes narrow rectangles to geometric shelves and wide ones to slips packed
by Super Harmonic.  ``analysis`` computes the weighting-system ratio bound.
"""
from .analysis import consolidate, ratio_upper_bound, total_weight
from .binpack import (SuperHarmonic, SuperHarmonicParams, first_fit, first_fit_decreasing,
                      harmonic_k, harmonic_params, next_fit, super_harmonic, toy_params)
from .core import (Instance, Placement, Rect, StripPacking, StructuralError, lower_bound,
                   validate_packing)
from .strip_offline import bp_pack, ffdh, nfdh
from .strip_online import GpConfig, gp_insert, gp_run, shelf_pack

__all__ = [
    "Instance", "Rect", "Placement", "StripPacking", "StructuralError", "validate_packing",
    "lower_bound", "next_fit", "first_fit", "first_fit_decreasing", "harmonic_k",
    "super_harmonic", "SuperHarmonic", "SuperHarmonicParams", "harmonic_params", "toy_params",
    "bp_pack", "nfdh", "ffdh", "GpConfig", "gp_insert", "gp_run", "shelf_pack",
    "consolidate", "total_weight", "ratio_upper_bound",
]
