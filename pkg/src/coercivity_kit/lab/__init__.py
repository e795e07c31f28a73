"""Numerical lab for torus-invariant potentials on P1 and P1 x P1."""

from .functionals import (
    FunctionalReport,
    energy,
    entropy,
    evaluate,
    i_functional,
    mabuchi,
    mabuchi_path,
    raw_values,
)
from .geometry import GeometrySpec
from .potentials import (
    Logistic,
    MobiusShift,
    Potential,
    PotentialSample,
    draw_sample,
    make_sample,
    mobius_sample,
    reference_sample,
)
from .suite import SuiteReport, adversarial_sample, coercivity_witness, lemma_suite, path_agreement, refinement_ratios

__all__ = [
    "FunctionalReport",
    "GeometrySpec",
    "Logistic",
    "MobiusShift",
    "Potential",
    "PotentialSample",
    "SuiteReport",
    "adversarial_sample",
    "coercivity_witness",
    "draw_sample",
    "energy",
    "entropy",
    "evaluate",
    "i_functional",
    "lemma_suite",
    "mabuchi",
    "mabuchi_path",
    "make_sample",
    "mobius_sample",
    "path_agreement",
    "raw_values",
    "reference_sample",
    "refinement_ratios",
]
