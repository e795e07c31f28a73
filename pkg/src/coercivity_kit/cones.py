"""Mori-cone generators, nef/ample tests and thresholds.

Points are in general position, so for 2 <= k <= 8 the cone of curves of the
blow-up is generated by the (-1)-curves; for k <= 1 and for P1 x P1 the
line/fiber classes are the generators.  On k = 8 the class -K is adjoined as
an extra test class.  Ampleness is strict positivity on every generator
together with D^2 > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import SurfaceMismatch, UnsupportedK
from .intervals import Interval, IntervalSet, solve_poly
from .lattice import DivisorClass, Pencil, SurfaceSpec
from .scalar import ExactScalar

MINUS_ONE = "minus-one-curve"
FIBER = "fiber-class"
LINE = "line-class"
TEST_CLASS = "anticanonical-test-class"

AMPLE = "ample"
NEF_NOT_AMPLE = "nef-not-ample"
NOT_NEF = "not-nef"


@dataclass(frozen=True)
class CurveClass:
    cls: DivisorClass
    role: str

    def __post_init__(self):
        sq = self.cls.square()
        deg = self.cls.surface.anticanonical().dot(self.cls)
        expected = {MINUS_ONE: (-1, 1), FIBER: (0, 2), LINE: (1, 3), TEST_CLASS: (None, None)}[self.role]
        if expected[0] is not None and (sq, deg) != expected:
            raise ValueError(f"{self.cls} is not a {self.role}: C^2={sq}, -K.C={deg}")

    def label(self) -> str:
        return self.cls.label()

    def to_json(self) -> dict:
        return {"role": self.role, "class": self.cls.to_json()}


def _multisets(k: int, total: int, squares: int, upper: int):
    """Non-increasing integer k-tuples with given sum and sum of squares, entries <= upper."""
    if k == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    bound = math.isqrt(squares)
    for b in range(min(upper, bound), -bound - 1, -1):
        rest_sq = squares - b * b
        rest_total = total - b
        # Cauchy-Schwarz on the remaining k-1 entries
        if rest_total * rest_total > (k - 1) * rest_sq:
            continue
        # remaining entries are all <= b
        if rest_total > (k - 1) * b:
            continue
        for tail in _multisets(k - 1, rest_total, rest_sq, b):
            yield (b,) + tail


def _distinct_permutations(seq: tuple):
    from sympy.utilities.iterables import multiset_permutations

    for p in multiset_permutations(list(seq)):
        yield tuple(p)


def minus_one_vectors(k: int) -> list[tuple[int, ...]]:
    """All integer (a, b1..bk) with a^2 - sum b^2 = -1 and 3a - sum b = 1, sorted."""
    if not 0 <= k <= 8:
        raise UnsupportedK(f"k must be in 0..8, got {k}")
    if k == 0:
        return []
    out = set()
    # (3a - 1)^2 <= k (a^2 + 1) bounds a
    lo = math.floor((6 - math.sqrt(36 - 4 * (9 - k) * (1 - k))) / (2 * (9 - k))) - 1
    hi = math.ceil((6 + math.sqrt(36 - 4 * (9 - k) * (1 - k))) / (2 * (9 - k))) + 1
    for a in range(lo, hi + 1):
        for ms in _multisets(k, 3 * a - 1, a * a + 1, math.isqrt(a * a + 1)):
            for perm in _distinct_permutations(ms):
                out.add((a,) + perm)
    return sorted(out)


@lru_cache(maxsize=None)
def enumerate_curves(k: int) -> tuple[CurveClass, ...]:
    """Generators of the cone of curves of the blow-up of P2 at k general points."""
    if not 0 <= k <= 8:
        raise UnsupportedK(f"k must be in 0..8, got {k}")
    s = SurfaceSpec.blowup(k)
    curves = [CurveClass(DivisorClass(s, v), MINUS_ONE) for v in minus_one_vectors(k)]
    if k == 0:
        curves.append(CurveClass(s.line(), LINE))
    elif k == 1:
        curves.append(CurveClass(DivisorClass(s, (1, 1)), FIBER))
        curves.sort(key=lambda c: c.cls.coeffs)
    return tuple(curves)


@lru_cache(maxsize=None)
def generators(surface: SurfaceSpec) -> tuple[CurveClass, ...]:
    """Curve classes against which nefness is tested."""
    if surface.kind == "product":
        return (CurveClass(surface.ruling(1), FIBER), CurveClass(surface.ruling(2), FIBER))
    gens = list(enumerate_curves(surface.k))
    if surface.k == 8:
        gens.append(CurveClass(surface.anticanonical(), TEST_CLASS))
    return tuple(gens)


def count_minus_one(k: int) -> int:
    return sum(1 for c in enumerate_curves(k) if c.role == MINUS_ONE)


def weyl_generators(k: int):
    """Callables acting on coefficient tuples: transpositions of E_i and the Cremona reflection."""
    ops = []
    for i in range(1, k):

        def swap(v, i=i):
            v = list(v)
            v[i], v[i + 1] = v[i + 1], v[i]
            return tuple(v)

        ops.append(swap)
    if k >= 3:
        s = SurfaceSpec.blowup(k)
        root = DivisorClass(s, (1, 1, 1, 1) + (0,) * (k - 3))  # l - E1 - E2 - E3

        def cremona(v):
            c = DivisorClass(s, v)
            r = c + root * c.dot(root)
            return tuple(int(x) for x in r.coeffs)

        ops.append(cremona)
    return ops


@dataclass(frozen=True)
class ConeTestResult:
    verdict: str
    witness: Optional[CurveClass]
    margin: object
    self_intersection: object

    @property
    def is_nef(self) -> bool:
        return self.verdict != NOT_NEF

    @property
    def is_ample(self) -> bool:
        return self.verdict == AMPLE

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "margin": _scalar_json(self.margin),
            "self_intersection": _scalar_json(self.self_intersection),
        }


def _scalar_json(x):
    x = ExactScalar.coerce(x)
    return {**x.to_json(), "exact": str(x), "approx": float(x)}


def test_cone(d: DivisorClass) -> ConeTestResult:
    """Classify ``d`` as ample, nef-not-ample or not-nef, with a witness curve."""
    if not isinstance(d, DivisorClass):
        raise TypeError("test_cone needs a concrete DivisorClass")
    gens = generators(d.surface)
    witness, margin = None, None
    for c in gens:
        v = d.dot(c.cls)
        if margin is None or v < margin:
            margin, witness = v, c
    sq = d.square()
    if margin < 0:
        verdict = NOT_NEF
    elif margin > 0 and sq > 0:
        verdict = AMPLE
    else:
        verdict = NEF_NOT_AMPLE
    return ConeTestResult(verdict, witness, margin, sq)


test_cone.__test__ = False  # keep pytest from collecting it


def is_ample(d: DivisorClass) -> bool:
    return test_cone(d).is_ample


def is_nef(d: DivisorClass) -> bool:
    return test_cone(d).is_nef


def threshold(a: DivisorClass, b: DivisorClass, mode: str):
    """``sup-nef``: sup{t : a - t*b nef};  ``inf-ample``: inf{s : s*a + b ample}.

    Returns an exact scalar, or +/- math.inf when unbounded (or -inf when the
    nef set is empty in sup-nef mode).
    """
    if a.surface != b.surface:
        raise SurfaceMismatch(f"{a.surface.name} vs {b.surface.name}")
    gens = generators(a.surface)
    if mode == "sup-nef":
        upper, lower = None, None
        for c in gens:
            ac, bc = a.dot(c.cls), b.dot(c.cls)
            if bc > 0:
                r = ac / bc
                upper = r if upper is None or r < upper else upper
            elif bc < 0:
                r = ac / bc
                lower = r if lower is None or r > lower else lower
            elif ac < 0:
                return -math.inf
        if upper is None:
            return math.inf
        if lower is not None and lower > upper:
            return -math.inf
        return upper
    if mode == "inf-ample":
        if not is_ample(a):
            raise ValueError("inf-ample threshold needs an ample first argument")
        best = None
        for c in gens:
            r = -b.dot(c.cls) / a.dot(c.cls)
            best = r if best is None or r > best else best
        # at the threshold the class is nef, hence has non-negative square;
        # above it the square grows since a is ample
        return best
    raise ValueError(f"unknown threshold mode {mode!r}")


def _linear_set(c1, c0, strict: bool) -> IntervalSet:
    return solve_poly((c1, c0), ">" if strict else ">=")


def ample_range(pencil: Pencil) -> IntervalSet:
    """Exact set of t with base + t*direction ample."""
    region = IntervalSet.everything()
    for c in generators(pencil.surface):
        q = pencil.dot(c.cls)
        region = region & _linear_set(q.c1, q.c0, True)
        if region.is_empty:
            return region
    return region & solve_poly(pencil.square(), ">")


def nef_range(pencil: Pencil) -> IntervalSet:
    region = IntervalSet.everything()
    for c in generators(pencil.surface):
        q = pencil.dot(c.cls)
        region = region & _linear_set(q.c1, q.c0, False)
    return region
