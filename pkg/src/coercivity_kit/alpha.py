"""Alpha-invariant lower-bound models on one-parameter families of classes.

A model is data: piecewise rational functions num(t)/den(t) of the family
parameter, with provenance text.  This module evaluates them and checks the
structural laws every genuine alpha function obeys: degree -1 homogeneity,
monotonicity under adding an ample class, and the explicit continuity
modulus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import algebraic
from .cones import generators, test_cone
from .errors import (
    EpsilonTooLarge,
    ModelFormatError,
    NotApplicable,
    OutOfDomain,
    PairOutsideCone,
)
from .intervals import Interval, IntervalSet, endpoint_json, solve_poly
from .lattice import DivisorClass, Pencil, SurfaceSpec, parse_class
from .scalar import ExactScalar, parse_scalar

SCHEMA = 1


def _exact(x):
    x = ExactScalar.coerce(x)
    return x.to_fraction() if x.is_rational else x


def _horner(coeffs, t):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class AlphaPiece:
    """num(t)/den(t) on an interval; coefficients (c2, c1, c0) are exact scalars."""

    interval: Interval
    num: tuple
    den: tuple
    provenance: str = ""

    def __post_init__(self):
        for name in ("num", "den"):
            coeffs = tuple(_exact(c) for c in getattr(self, name))
            if len(coeffs) != 3:
                raise ModelFormatError(f"{name} needs three coefficients (c2, c1, c0)")
            object.__setattr__(self, name, coeffs)
        if all(c == 0 for c in self.den):
            raise ModelFormatError("piece denominator is the zero polynomial")

    def value(self, t):
        d = _horner(self.den, t)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t = {t}")
        return _exact(ExactScalar.coerce(_horner(self.num, t)) / d)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.num + self.den)

    def num_coeffs(self) -> tuple:
        if not self.is_rational:
            raise ValueError("piece has surd coefficients")
        return self.num

    def den_coeffs(self) -> tuple:
        if not self.is_rational:
            raise ValueError("piece has surd coefficients")
        return self.den

    def to_json(self) -> dict:
        iv = self.interval
        return {
            "interval": [_endpoint_text(iv.lo), _endpoint_text(iv.hi)],
            "closed": [iv.lo_closed, iv.hi_closed],
            "num": [str(ExactScalar.coerce(c)) for c in self.num],
            "den": [str(ExactScalar.coerce(c)) for c in self.den],
            "provenance": self.provenance,
        }


def _endpoint_text(x):
    return None if x is None else str(ExactScalar.coerce(x))


@dataclass(frozen=True)
class Family:
    """t -> base + t*direction; a ray when base is zero."""

    pencil: Pencil

    @property
    def is_ray(self) -> bool:
        return self.pencil.base.is_zero

    def at(self, t) -> DivisorClass:
        return self.pencil.at(t)

    def locate(self, cls: DivisorClass):
        """The parameter t with at(t) == cls, or None when cls is off the family."""
        diff = cls - self.pencil.base
        t = None
        for a, v in zip(diff.coeffs, self.pencil.direction.coeffs):
            if v == 0:
                if a != 0:
                    return None
                continue
            r = _exact(ExactScalar.coerce(a) / v)
            if t is None:
                t = r
            elif r != t:
                return None
        return t

    def to_json(self) -> dict:
        d = self.pencil
        out = {"surface": d.surface.name}
        if self.is_ray:
            out["ray"] = ",".join(str(c) for c in d.direction.coeffs)
        else:
            out["base"] = ",".join(str(c) for c in d.base.coeffs)
            out["direction"] = ",".join(str(c) for c in d.direction.coeffs)
        return out


@dataclass(frozen=True)
class AlphaModel:
    pieces: tuple[AlphaPiece, ...]
    family: Optional[Family] = None
    invariance: str = "plain"
    provenance: str = ""
    name: str = ""

    def __post_init__(self):
        if not self.pieces:
            raise ModelFormatError("an alpha model needs at least one piece")
        if self.invariance not in ("plain", "group-invariant"):
            raise ModelFormatError(f"unknown invariance tag {self.invariance!r}")

    @property
    def domain(self) -> IntervalSet:
        return IntervalSet(p.interval for p in self.pieces)

    def piece_index(self, t) -> int:
        for i, p in enumerate(self.pieces):
            if p.interval.contains(t):
                return i
        raise OutOfDomain(f"t = {t} is outside the model domain {self.domain}")

    def __call__(self, t):
        return eval_alpha(self, t)

    def scaled(self, s) -> "AlphaModel":
        """Model for the family s*L_t: values divided by s."""
        s = _exact(s)
        pieces = tuple(
            AlphaPiece(p.interval, p.num, tuple(c * s for c in p.den), p.provenance)
            for p in self.pieces
        )
        fam = Family(self.family.pencil.scaled(s)) if self.family else None
        return AlphaModel(pieces, fam, self.invariance, self.provenance, self.name)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "name": self.name}
        if self.family is not None:
            out["family"] = self.family.to_json()
        out["invariance"] = self.invariance
        out["provenance"] = self.provenance
        out["pieces"] = [p.to_json() for p in self.pieces]
        return out


# ---------------------------------------------------------------- loading


def _coeff_triple(raw, what: str) -> tuple:
    if isinstance(raw, (str, int)):
        raw = [raw]
    if not isinstance(raw, list) or not 1 <= len(raw) <= 3:
        raise ModelFormatError(f"{what} must be a list of at most three coefficients [c2, c1, c0]")
    try:
        vals = [parse_scalar(str(c)) for c in raw]
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"bad {what} coefficient: {exc}") from None
    vals = [ExactScalar(0)] * (3 - len(vals)) + vals
    return tuple(_exact(v) for v in vals)


def _endpoint(raw):
    if raw is None:
        return None
    if isinstance(raw, str) and raw.strip().lower() in ("inf", "+inf", "-inf", "infinity", "-infinity"):
        return None
    try:
        return parse_scalar(str(raw))
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"bad interval endpoint {raw!r}: {exc}") from None


def _piece_from_json(obj) -> AlphaPiece:
    if not isinstance(obj, dict):
        raise ModelFormatError("each piece must be an object")
    for key in ("interval", "num"):
        if key not in obj:
            raise ModelFormatError(f"piece is missing {key!r}")
    iv = obj["interval"]
    if not isinstance(iv, list) or len(iv) != 2:
        raise ModelFormatError("interval must be [lo, hi]")
    closed = obj.get("closed", [False, False])
    if not isinstance(closed, list) or len(closed) != 2:
        raise ModelFormatError("closed must be [bool, bool]")
    lo, hi = _endpoint(iv[0]), _endpoint(iv[1])
    interval = Interval(lo, hi, bool(closed[0]), bool(closed[1]))
    if interval.is_empty:
        raise ModelFormatError(f"empty piece interval {interval}")
    return AlphaPiece(
        interval,
        _coeff_triple(obj["num"], "num"),
        _coeff_triple(obj.get("den", ["1"]), "den"),
        str(obj.get("provenance", "")),
    )


def _family_from_json(obj) -> Family:
    try:
        surface = SurfaceSpec.parse(obj["surface"])
        if "ray" in obj:
            direction = parse_class(obj["ray"], surface)
            base = surface.zero()
        else:
            base = parse_class(obj["base"], surface)
            direction = parse_class(obj["direction"], surface)
        return Family(Pencil(base, direction))
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"bad family description: {exc}") from None


def model_from_json(obj, name: str = "") -> AlphaModel:
    """Accepts the full object form or a bare list of pieces."""
    if isinstance(obj, list):
        obj = {"pieces": obj}
    if not isinstance(obj, dict) or "pieces" not in obj:
        raise ModelFormatError("alpha model must be a list of pieces or an object with 'pieces'")
    if obj.get("schema", SCHEMA) != SCHEMA:
        raise ModelFormatError(f"unsupported schema {obj.get('schema')!r}")
    pieces = obj["pieces"]
    if not isinstance(pieces, list):
        raise ModelFormatError("'pieces' must be a list")
    family = _family_from_json(obj["family"]) if obj.get("family") else None
    return AlphaModel(
        tuple(_piece_from_json(p) for p in pieces),
        family,
        obj.get("invariance", "plain"),
        str(obj.get("provenance", "")),
        str(obj.get("name", name)),
    )


def load_model(path) -> AlphaModel:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from None
    return model_from_json(obj, name=path.stem)


def fixture_names(negative: bool = False) -> list[str]:
    root = resources.files("coercivity_kit") / "fixtures"
    if negative:
        root = root / "negative"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str, negative: bool = False) -> AlphaModel:
    root = resources.files("coercivity_kit") / "fixtures"
    if negative:
        root = root / "negative"
    obj = json.loads((root / f"{name}.json").read_text())
    return model_from_json(obj, name=name)


def constant_model(value, lo=None, hi=None, family: Optional[Family] = None, provenance: str = "") -> AlphaModel:
    piece = AlphaPiece(Interval(lo, hi), (0, 0, value), (0, 0, 1), provenance)
    return AlphaModel((piece,), family, provenance=provenance, name="constant")


def ray_model(value_at_one, cls: DivisorClass, provenance: str = "") -> AlphaModel:
    """alpha(t*cls) = value_at_one / t on t > 0."""
    piece = AlphaPiece(Interval(0, None), (0, 0, value_at_one), (0, 1, 0), provenance)
    fam = Family(Pencil(cls.surface.zero(), cls))
    return AlphaModel((piece,), fam, provenance=provenance, name="ray")


# ---------------------------------------------------------------- evaluation


def eval_alpha(model: AlphaModel, t):
    """Exact value of the model at parameter t."""
    t = _exact(t)
    return model.pieces[model.piece_index(t)].value(t)


def validate_model(model: AlphaModel) -> list[str]:
    """Structural issues: overlaps, gaps, jumps at knots, vanishing denominators, non-positive values."""
    issues = []
    from functools import cmp_to_key

    from .intervals import _lo_cmp

    order = sorted(range(len(model.pieces)), key=cmp_to_key(lambda i, j: _lo_cmp(model.pieces[i].interval.lo, model.pieces[j].interval.lo)))
    for a, b in zip(order, order[1:]):
        pa, pb = model.pieces[a], model.pieces[b]
        ia, ib = pa.interval, pb.interval
        if ia.hi is None or ib.lo is None:
            issues.append(f"pieces {a} and {b} overlap")
            continue
        c = algebraic.compare_exact(ia.hi, ib.lo)
        if c > 0:
            issues.append(f"pieces {a} and {b} overlap on ({ib.lo}, {ia.hi})")
            continue
        if c < 0:
            issues.append(f"gap between pieces {a} and {b}: ({ia.hi}, {ib.lo})")
            continue
        knot = ia.hi
        if not (ia.hi_closed or ib.lo_closed):
            issues.append(f"knot {knot} is covered by neither piece {a} nor {b}")
        try:
            left, right = pa.value(knot), pb.value(knot)
        except ZeroDivisionError:
            issues.append(f"denominator vanishes at knot {knot}")
            continue
        if left != right:
            issues.append(f"jump at knot {knot}: {left} on the left, {right} on the right")
    for i, p in enumerate(model.pieces):
        if not p.is_rational:
            continue  # surd coefficients: positivity is checked pointwise by the property tests
        region = IntervalSet([p.interval])
        den = p.den_coeffs()
        zeros = solve_poly(den, "<=") & solve_poly(den, ">=")
        if not (region & zeros).is_empty:
            issues.append(f"piece {i}: denominator vanishes inside {p.interval}")
            continue
        prod = algebraic.mul(p.num_coeffs(), den)
        bad = region & solve_poly(prod, "<=")
        if not bad.is_empty:
            issues.append(f"piece {i}: value is not positive on {bad}")
    return issues


# ---------------------------------------------------------------- structural laws


@dataclass(frozen=True)
class LawCheck:
    sample: tuple
    lhs: object
    rhs: object
    residual: object
    ok: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "sample": [endpoint_json(x) for x in self.sample],
            "lhs": endpoint_json(self.lhs) if self.lhs is not None else None,
            "rhs": endpoint_json(self.rhs) if self.rhs is not None else None,
            "residual": endpoint_json(self.residual) if self.residual is not None else None,
            "ok": self.ok,
            "note": self.note,
        }


@dataclass(frozen=True)
class LawReport:
    law: str
    checks: tuple[LawCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[LawCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {"law": self.law, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def check_scaling(model: AlphaModel, samples: Iterable[tuple]) -> LawReport:
    """value(s*t) == value(t)/s for each (t, s); the model must live on a ray."""
    if model.family is not None and not model.family.is_ray:
        raise NotApplicable("scaling applies to models on a ray family t*L")
    checks = []
    for t, s in samples:
        t, s = _exact(t), _exact(s)
        try:
            lhs = eval_alpha(model, s * t)
            rhs = _exact(eval_alpha(model, t) / s)
        except OutOfDomain as exc:
            checks.append(LawCheck((t, s), None, None, None, False, str(exc)))
            continue
        res = _exact(lhs - rhs)
        checks.append(LawCheck((t, s), lhs, rhs, res, res == 0, f"piece {model.piece_index(t)}"))
    return LawReport("scaling", tuple(checks))


def _default_grid(model: AlphaModel, count: int = 25) -> list:
    """Rational points spread over the finite part of the domain."""
    pts = []
    for p in model.pieces:
        iv = p.interval
        lo_q = algebraic.rational_bounds(iv.lo, Fraction(1, 10**6))[1] if iv.lo is not None else None
        hi_q = algebraic.rational_bounds(iv.hi, Fraction(1, 10**6))[0] if iv.hi is not None else None
        if lo_q is None:
            lo_q = (hi_q - 4) if hi_q is not None else Fraction(1, 4)
        if hi_q is None:
            hi_q = lo_q + 4
        for k in range(1, count + 1):
            t = lo_q + (hi_q - lo_q) * Fraction(k, count + 1)
            if iv.contains(t):
                pts.append(t)
    return pts


def check_monotonicity(
    model_base: AlphaModel,
    model_shifted: AlphaModel,
    xi: DivisorClass,
    samples: Optional[Sequence] = None,
) -> LawReport:
    """alpha(omega + xi) <= alpha(omega) for xi ample."""
    if not test_cone(xi).is_ample:
        raise NotApplicable(f"{xi.label()} is not ample, so the monotonicity law does not apply")
    if model_base.family is None or model_shifted.family is None:
        raise NotApplicable("both models need a declared family")
    checks = []
    for t in samples if samples is not None else _default_grid(model_base):
        t = _exact(t)
        target = model_base.family.at(t) + xi
        t2 = model_shifted.family.locate(target)
        if t2 is None or not model_shifted.domain.contains(t2):
            checks.append(LawCheck((t,), None, None, None, True, "shifted class outside the shifted model; skipped"))
            continue
        base, shifted = eval_alpha(model_base, t), eval_alpha(model_shifted, t2)
        res = _exact(base - shifted)
        checks.append(LawCheck((t, t2), shifted, base, res, res >= 0))
    return LawReport("monotonicity", tuple(checks))


@dataclass(frozen=True)
class ContinuityBudget:
    gamma: object
    c: object
    delta: object
    bound: object
    epsilon: object

    def to_json(self) -> dict:
        return {k: endpoint_json(getattr(self, k)) for k in ("gamma", "c", "delta", "bound", "epsilon")}


def continuity_budget(alpha, c, epsilon) -> ContinuityBudget:
    """delta = c*eps/(2*alpha + eps), gamma = delta/c, bound = gamma/(1 - gamma)*alpha (= eps/2)."""
    alpha, c, epsilon = _exact(alpha), _exact(c), _exact(epsilon)
    if c <= 0 or epsilon <= 0 or alpha < 0:
        raise ValueError("need alpha >= 0, c > 0 and epsilon > 0")
    gamma = _exact(epsilon / (2 * alpha + epsilon))
    if gamma >= 1:
        raise EpsilonTooLarge(f"gamma = {gamma} >= 1 for alpha = {alpha}, epsilon = {epsilon}")
    delta = _exact(c * gamma)
    bound = _exact(gamma / (1 - gamma) * alpha)
    return ContinuityBudget(gamma, c, delta, bound, epsilon)


@dataclass(frozen=True)
class ModulusCheck:
    t: object
    t2: object
    gamma: object
    difference: object
    bound: object
    margin: object
    ok: bool

    def to_json(self) -> dict:
        return {
            "t": endpoint_json(self.t),
            "t_prime": endpoint_json(self.t2),
            "gamma": endpoint_json(self.gamma),
            "difference": endpoint_json(self.difference),
            "bound": endpoint_json(self.bound),
            "margin": endpoint_json(self.margin),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class ModulusReport:
    checks: tuple[ModulusCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[ModulusCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {"ok": self.ok, "pairs": [c.to_json() for c in self.checks]}


@lru_cache(maxsize=64)
def _pairings(pencil: Pencil) -> tuple:
    """Distinct (base.C, direction.C) over the cone generators."""
    return tuple(sorted({(pencil.base.dot(c.cls), pencil.direction.dot(c.cls)) for c in generators(pencil.surface)}))


def minimal_gamma(family: Family, t, t2):
    """inf{gamma : gamma*omega +/- eta both ample}, omega = L_t, eta = L_t2 - L_t.

    Both classes are positive on every generator exactly when
    gamma > |eta.C| / omega.C for all C.
    """
    h = _exact(t2 - t)
    if h == 0:
        return Fraction(0)
    best = Fraction(0)
    for b, d in _pairings(family.pencil):
        w = b + t * d
        if w <= 0:
            raise PairOutsideCone(f"L_{t} is not ample")
        r = _exact(abs(h * d) / w)
        if r > best:
            best = r
    return best


def check_continuity_modulus(model: AlphaModel, pairs: Optional[Iterable[tuple]] = None) -> ModulusReport:
    """|alpha(t) - alpha(t')| <= gamma/(1 - gamma) * alpha(t) with the smallest admissible gamma."""
    if model.family is None:
        raise NotApplicable("the continuity modulus needs the model's family of classes")
    if pairs is None:
        pairs = default_pairs(model)
    checks = []
    for t, t2 in pairs:
        t, t2 = _exact(t), _exact(t2)
        a, a2 = eval_alpha(model, t), eval_alpha(model, t2)
        gamma = minimal_gamma(model.family, t, t2)
        if gamma >= 1:
            raise PairOutsideCone(f"no gamma < 1 makes gamma*L_t +/- (L_t' - L_t) ample for ({t}, {t2})")
        diff = _exact(abs(ExactScalar.coerce(a - a2)))
        bound = _exact(gamma / (1 - gamma) * a)
        margin = _exact(bound - diff)
        checks.append(ModulusCheck(t, t2, gamma, diff, bound, margin, margin >= 0))
    return ModulusReport(tuple(checks))


def default_pairs(model: AlphaModel, steps: Sequence = (Fraction(1, 10), Fraction(1, 50), Fraction(1, 1000))) -> list[tuple]:
    """Nearby pairs across the domain and straddling every knot, kept when gamma < 1."""
    grid = _default_grid(model, 12)
    knots = []
    for p in model.pieces:
        for e in (p.interval.lo, p.interval.hi):
            if e is not None and ExactScalar.coerce(e).is_rational and model.domain.contains(e):
                knots.append(_exact(e))
    out = []
    for t in grid + knots:
        for h in steps:
            for t2 in (t + h, t - h):
                if not model.domain.contains(t2):
                    continue
                if minimal_gamma(model.family, t, t2) < 1:
                    out.append((t, t2))
    for k in knots:
        for h in steps:
            a, b = k - h, k + h
            if model.domain.contains(a) and model.domain.contains(b) and minimal_gamma(model.family, a, b) < 1:
                out.append((a, b))
    return out
