"""Exact coercivity criteria for polarized del Pezzo surfaces, plus a functional lab."""

from .alpha import (
    AlphaModel,
    ContinuityBudget,
    check_continuity_modulus,
    check_monotonicity,
    check_scaling,
    continuity_budget,
    eval_alpha,
    load_fixture,
    load_model,
    validate_model,
)
from .cones import ample_range, count_minus_one, enumerate_curves, is_ample, is_nef, test_cone, threshold
from .criteria import AlphaValue, CriterionVerdict, alpha_slope_check, dervan_check, extension_check, extension_gap, lsy_check, slope, tian_check
from .intervals import Interval, IntervalSet, compare_intervals
from .lattice import DivisorClass, Pencil, SurfaceSpec, dp8_pencil, intersect, parse_class
from .pencil import SweepReport, clause_to_polys, sweep
from .scalar import ExactScalar, QuadraticPoly, parse_scalar, quad_roots

__version__ = "0.1.0"

__all__ = [
    "AlphaModel",
    "AlphaValue",
    "ContinuityBudget",
    "CriterionVerdict",
    "DivisorClass",
    "ExactScalar",
    "Interval",
    "IntervalSet",
    "Pencil",
    "QuadraticPoly",
    "SurfaceSpec",
    "SweepReport",
    "ample_range",
    "check_continuity_modulus",
    "check_monotonicity",
    "check_scaling",
    "clause_to_polys",
    "compare_intervals",
    "continuity_budget",
    "count_minus_one",
    "alpha_slope_check",
    "dp8_pencil",
    "enumerate_curves",
    "eval_alpha",
    "extension_check",
    "extension_gap",
    "intersect",
    "is_ample",
    "is_nef",
    "load_fixture",
    "load_model",
    "lsy_check",
    "parse_class",
    "parse_scalar",
    "quad_roots",
    "slope",
    "sweep",
    "test_cone",
    "threshold",
    "tian_check",
    "validate_model",
]
