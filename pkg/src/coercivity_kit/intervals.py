"""Finite unions of intervals with exact endpoints, and polynomial inequality solving."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import algebraic
from .algebraic import RealRoot, compare_exact, rational_between
from .scalar import ExactScalar, QuadraticPoly


def _lo_cmp(a, b) -> int:
    """Compare lower endpoints where None is -inf."""
    if a is None or b is None:
        return (a is not None) - (b is not None)
    return compare_exact(a, b)


def _hi_cmp(a, b) -> int:
    """Compare upper endpoints where None is +inf."""
    if a is None or b is None:
        return (a is None) - (b is None)
    return compare_exact(a, b)


def endpoint_json(x):
    if x is None:
        return None
    if isinstance(x, RealRoot):
        return {"algebraic": x.to_json(), "exact": str(x), "approx": float(x)}
    x = ExactScalar.coerce(x)
    return {**x.to_json(), "exact": str(x), "approx": float(x)}


def endpoint_from_json(obj):
    if obj is None:
        return None
    if isinstance(obj, str):
        return ExactScalar.coerce(obj)
    if "algebraic" in obj:
        a = obj["algebraic"]
        return RealRoot(tuple(Fraction(c) for c in a["poly"]), Fraction(a["lo"]), Fraction(a["hi"]))
    return ExactScalar.from_json(obj)


def _pretty(x, infinite: str) -> str:
    if x is None:
        return infinite
    if isinstance(x, RealRoot):
        return x.pretty()
    return ExactScalar.coerce(x).pretty()


@dataclass(frozen=True)
class Interval:
    lo: object  # ExactScalar, RealRoot or None (= -inf)
    hi: object  # ExactScalar, RealRoot or None (= +inf)
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        for name in ("lo", "hi"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, (ExactScalar, RealRoot)):
                object.__setattr__(self, name, ExactScalar.coerce(v))
        if self.lo is None:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None:
            object.__setattr__(self, "hi_closed", False)

    @property
    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        c = compare_exact(self.lo, self.hi)
        return c > 0 or (c == 0 and not (self.lo_closed and self.hi_closed))

    def contains(self, x) -> bool:
        if self.lo is not None:
            c = compare_exact(x, self.lo)
            if c < 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = compare_exact(x, self.hi)
            if c > 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        c = _lo_cmp(self.lo, other.lo)
        if c > 0:
            lo, lo_closed = self.lo, self.lo_closed
        elif c < 0:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        c = _hi_cmp(self.hi, other.hi)
        if c < 0:
            hi, hi_closed = self.hi, self.hi_closed
        elif c > 0:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def same_as(self, other: "Interval") -> bool:
        return (
            _lo_cmp(self.lo, other.lo) == 0
            and _hi_cmp(self.hi, other.hi) == 0
            and self.lo_closed == other.lo_closed
            and self.hi_closed == other.hi_closed
        )

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_pretty(self.lo, '-inf')}, {_pretty(self.hi, '+inf')}{right}"

    def to_json(self) -> dict:
        return {
            "lo": endpoint_json(self.lo),
            "hi": endpoint_json(self.hi),
            "closed": [self.lo_closed, self.hi_closed],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Interval":
        closed = obj.get("closed", [False, False])
        return cls(endpoint_from_json(obj["lo"]), endpoint_from_json(obj["hi"]), bool(closed[0]), bool(closed[1]))


class IntervalSet:
    """Sorted, merged, disjoint union of intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals: tuple[Interval, ...] = _normalize(list(intervals))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls()

    @classmethod
    def everything(cls) -> "IntervalSet":
        return cls([Interval(None, None)])

    @classmethod
    def open(cls, lo, hi) -> "IntervalSet":
        return cls([Interval(lo, hi, False, False)])

    @classmethod
    def closed(cls, lo, hi) -> "IntervalSet":
        return cls([Interval(lo, hi, True, True)])

    @classmethod
    def point(cls, x) -> "IntervalSet":
        return cls([Interval(x, x, True, True)])

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a in self.intervals:
            for b in other.intervals:
                c = a.intersect(b)
                if not c.is_empty:
                    out.append(c)
        return IntervalSet(out)

    __and__ = intersect

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    __or__ = union

    def issubset(self, other: "IntervalSet") -> bool:
        return self.intersect(other) == self

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return len(self.intervals) == len(other.intervals) and all(
            a.same_as(b) for a, b in zip(self.intervals, other.intervals)
        )

    def __hash__(self):
        return hash(len(self.intervals))

    def interior(self) -> "IntervalSet":
        return IntervalSet(Interval(iv.lo, iv.hi) for iv in self.intervals)

    @property
    def inf(self):
        """Lower endpoint of the first interval (None for -inf or empty)."""
        return self.intervals[0].lo if self.intervals else None

    @property
    def sup(self):
        return self.intervals[-1].hi if self.intervals else None

    def endpoints(self) -> list:
        out = []
        for iv in self.intervals:
            for e in (iv.lo, iv.hi):
                if e is not None:
                    out.append(e)
        return out

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __str__(self):
        if not self.intervals:
            return "∅"
        return " ∪ ".join(str(iv) for iv in self.intervals)

    def __repr__(self):
        return f"IntervalSet({self})"

    def to_json(self) -> dict:
        return {"intervals": [iv.to_json() for iv in self.intervals], "text": str(self)}

    @classmethod
    def from_json(cls, obj) -> "IntervalSet":
        items = obj["intervals"] if isinstance(obj, dict) else obj
        return cls(Interval.from_json(i) for i in items)


def _normalize(items: list[Interval]) -> tuple[Interval, ...]:
    from functools import cmp_to_key

    items = [iv for iv in items if not iv.is_empty]

    def key(a: Interval, b: Interval) -> int:
        c = _lo_cmp(a.lo, b.lo)
        if c:
            return c
        return (b.lo_closed) - (a.lo_closed)

    items.sort(key=cmp_to_key(key))
    merged: list[Interval] = []
    for iv in items:
        if not merged:
            merged.append(iv)
            continue
        last = merged[-1]
        # do they overlap or touch with at least one closed side?
        if last.hi is None:
            touching = True
        elif iv.lo is None:
            touching = True
        else:
            c = compare_exact(iv.lo, last.hi)
            touching = c < 0 or (c == 0 and (iv.lo_closed or last.hi_closed))
        if not touching:
            merged.append(iv)
            continue
        c = _hi_cmp(iv.hi, last.hi)
        if c > 0:
            hi, hi_closed = iv.hi, iv.hi_closed
        elif c < 0:
            hi, hi_closed = last.hi, last.hi_closed
        else:
            hi, hi_closed = last.hi, last.hi_closed or iv.hi_closed
        merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
    return tuple(merged)


def compare_intervals(a: IntervalSet, b: IntervalSet) -> str:
    """Exact set relation: equal, a-strictly-contains-b, b-strictly-contains-a, overlaps, disjoint."""
    if a == b:
        return "equal"
    common = a.intersect(b)
    if common.is_empty:
        return "disjoint"
    if common == b:
        return "a-strictly-contains-b"
    if common == a:
        return "b-strictly-contains-a"
    return "overlaps"


_SENSES = {
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
}


def solve_poly(p, sense: str = ">") -> IntervalSet:
    """Exact solution set of p(t) <sense> 0 for a rational polynomial.

    ``p`` is a QuadraticPoly or a coefficient sequence (highest degree first).
    """
    if isinstance(p, QuadraticPoly):
        coeffs = algebraic.trim(p.coefficients())
    else:
        coeffs = algebraic.trim(p)
    ok = _SENSES[sense]
    if not coeffs:
        return IntervalSet.everything() if ok(0) else IntervalSet.empty()
    roots = algebraic.real_roots(coeffs) if len(coeffs) > 1 else []
    pieces: list[Interval] = []
    bounds: list[Optional[object]] = [None] + roots + [None]
    for lo, hi in zip(bounds, bounds[1:]):
        sample = rational_between(lo, hi)
        if ok(algebraic.sign_at(coeffs, sample)):
            pieces.append(Interval(lo, hi, False, False))
    if ok(0):
        pieces.extend(Interval(r, r, True, True) for r in roots)
    return IntervalSet(pieces)
