"""Slope and the four alpha-invariant coercivity criteria on a polarized surface.

Lattice-backed checks fix the dimension n = 2, so n/(n+1) = 2/3 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ZeroVolume
from .cones import CurveClass, test_cone, threshold
from .intervals import Interval, endpoint_json
from .lattice import DivisorClass
from .scalar import ExactScalar

TWO_THIRDS = Fraction(2, 3)


@dataclass(frozen=True)
class AlphaValue:
    value: object
    invariance: str = "plain"  # or "group-invariant"
    provenance: str = ""

    def __post_init__(self):
        v = ExactScalar.coerce(self.value)
        if v.sign() <= 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "value", v.to_fraction() if v.is_rational else v)
        if self.invariance not in ("plain", "group-invariant"):
            raise ValueError(f"unknown invariance tag {self.invariance!r}")

    def scaled(self, s) -> "AlphaValue":
        """Alpha of the class s*L given alpha of L."""
        return AlphaValue(self.value / s, self.invariance, self.provenance)

    def to_json(self) -> dict:
        return {"value": endpoint_json(self.value), "invariance": self.invariance, "provenance": self.provenance}


@dataclass(frozen=True)
class Clause:
    name: str
    value: object
    bound: object
    margin: object
    strict: bool
    holds: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": _js(self.value),
            "bound": _js(self.bound),
            "margin": _js(self.margin),
            "strict": self.strict,
            "holds": self.holds,
            "detail": self.detail,
        }


def _js(x):
    if x is None:
        return None
    if isinstance(x, float):
        return {"exact": "inf" if x > 0 else "-inf", "approx": x}
    return endpoint_json(x)


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    holds: bool
    conditions: tuple[Clause, ...]
    witness: Optional[CurveClass] = None
    epsilon_witness: Optional[Interval] = None
    polarization: Optional[DivisorClass] = None
    alpha: Optional[AlphaValue] = None

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "holds": self.holds,
            "conditions": [c.to_json() for c in self.conditions],
            "witness": self.witness.to_json() if self.witness else None,
            "epsilon_witness": self.epsilon_witness.to_json() if self.epsilon_witness else None,
            "polarization": self.polarization.to_json() if self.polarization else None,
            "alpha": self.alpha.to_json() if self.alpha else None,
        }


def _alpha(alpha) -> AlphaValue:
    return alpha if isinstance(alpha, AlphaValue) else AlphaValue(alpha)


def slope(L: DivisorClass):
    """(c1 . L) / (L . L)."""
    vol = L.square()
    if vol == 0:
        raise ZeroVolume(f"{L} has zero self-intersection")
    return L.surface.anticanonical().dot(L) / vol


def alpha_slope_check(L: DivisorClass, alpha) -> CriterionVerdict:
    """alpha > (2/3) mu strictly, and -K - (2/3) mu L nef."""
    alpha = _alpha(alpha)
    mu = slope(L)
    bound = TWO_THIRDS * mu
    margin_i = alpha.value - bound
    c_i = Clause("alpha-exceeds-slope", alpha.value, bound, margin_i, True, margin_i > 0)
    diff = L.surface.anticanonical() - L * bound
    cone = test_cone(diff)
    c_ii = Clause(
        "difference-nef",
        cone.margin,
        0,
        cone.margin,
        False,
        cone.is_nef,
        detail=f"-K - (2/3)mu L = {diff.label()} is {cone.verdict}",
    )
    witness = cone.witness if not cone.is_nef else None
    return CriterionVerdict("alpha-slope", c_i.holds and c_ii.holds, (c_i, c_ii), witness, None, L, alpha)


def extension_gap(L: DivisorClass, alpha):
    """epsilon = alpha - (2/3) mu; may be <= 0."""
    return _alpha(alpha).value - TWO_THIRDS * slope(L)


def extension_check(L: DivisorClass, alpha) -> CriterionVerdict:
    """epsilon > 0 and -K + (epsilon/2 - (2/3) mu) L ample."""
    alpha = _alpha(alpha)
    mu = slope(L)
    eps = alpha.value - TWO_THIRDS * mu
    c_gap = Clause("positive-gap", eps, 0, eps, True, eps > 0)
    # the ample clause is reported even when the gap fails, so tables stay rectangular
    shifted = L.surface.anticanonical() + L * (eps / 2 - TWO_THIRDS * mu)
    cone = test_cone(shifted)
    c_amp = Clause(
        "shifted-class-ample",
        cone.margin,
        0,
        cone.margin,
        True,
        cone.is_ample,
        detail=f"-K + (eps/2 - (2/3)mu) L = {shifted.label()} is {cone.verdict}",
    )
    witness = cone.witness if not cone.is_ample else None
    return CriterionVerdict("extension", c_gap.holds and c_amp.holds, (c_gap, c_amp), witness, None, L, alpha)


def lsy_thresholds(L: DivisorClass):
    """(inf{e : eL - c1 ample}, inf{e : (e - 2mu)L + c1 ample})."""
    minus_k = L.surface.anticanonical()
    mu = slope(L)
    s1 = threshold(L, -minus_k, "inf-ample")
    s2 = 2 * mu + threshold(L, minus_k, "inf-ample")
    return s1, s2


def lsy_check(L: DivisorClass, alpha) -> CriterionVerdict:
    """Feasibility over epsilon >= 0 of the three Li-Shi-Yao clauses."""
    alpha = _alpha(alpha)
    s1, s2 = lsy_thresholds(L)
    eps_min, zero_binds = s1, False
    if s2 > eps_min:
        eps_min = s2
    if eps_min < 0:
        eps_min, zero_binds = Fraction(0), True
    upper = Fraction(3, 2) * alpha.value
    margin = alpha.value - TWO_THIRDS * eps_min
    holds = margin > 0
    # each threshold must sit below the top of the epsilon window
    room = [upper - s for s in (s1, s2)]
    clauses = (
        Clause("epsilon-times-class-exceeds-c1", s1, upper, room[0], True, room[0] > 0,
               detail="needs threshold < 3 alpha / 2"),
        Clause("shifted-combination-positive", s2, upper, room[1], True, room[1] > 0,
               detail="needs threshold < 3 alpha / 2"),
        Clause("alpha-exceeds-two-thirds-epsilon", alpha.value, TWO_THIRDS * eps_min, margin, True, holds),
    )
    window = Interval(eps_min, upper, zero_binds, False) if holds else None
    return CriterionVerdict("lsy", holds, clauses, None, window, L, alpha)


def tian_check(alpha, n: int) -> CriterionVerdict:
    """alpha(X, c1) > n/(n+1) for the anticanonical polarization."""
    alpha = _alpha(alpha)
    if n < 1:
        raise ValueError("dimension must be positive")
    bound = Fraction(n, n + 1)
    margin = alpha.value - bound
    c = Clause("alpha-exceeds-n-over-n-plus-1", alpha.value, bound, margin, True, margin > 0)
    return CriterionVerdict("tian", c.holds, (c,), None, None, None, alpha)


CHECKS = {
    "alpha-slope": alpha_slope_check,
    "extension": extension_check,
    "lsy": lsy_check,
}

# older spellings kept so existing scripts and configs still run
CRITERION_ALIASES = {"dervan": "alpha-slope"}
dervan_check = alpha_slope_check


def canonical_criterion(name: str) -> str:
    return CRITERION_ALIASES.get(name, name)


def run_check(criterion: str, L: DivisorClass, alpha) -> CriterionVerdict:
    criterion = canonical_criterion(criterion)
    if criterion == "tian":
        if L is not None and L != L.surface.anticanonical():
            raise ValueError("the Tian criterion applies to the anticanonical class only")
        return tian_check(alpha, 2)
    try:
        fn = CHECKS[criterion]
    except KeyError:
        raise ValueError(f"unknown criterion {criterion!r}") from None
    return fn(L, alpha)
