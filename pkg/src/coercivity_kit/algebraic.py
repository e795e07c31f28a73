"""Exact real roots of rational polynomials of any degree.

Criterion clauses for affine pencils clear to polynomials in the pencil
parameter.  Linear and quadratic factors give :class:`ExactScalar` roots;
irreducible factors of degree three or more give :class:`RealRoot` values,
isolated by Sturm sequences and compared by exact interval refinement.
Polynomials are tuples of Fractions, highest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

import sympy

from .errors import DegenerateInput
from .scalar import ExactScalar, QuadraticPoly, quad_roots

Poly = tuple  # tuple[Fraction, ...], highest degree first


def trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[0] == 0:
        p.pop(0)
    return tuple(p)


def degree(p: Poly) -> int:
    return len(trim(p)) - 1


def monic(p: Poly) -> Poly:
    p = trim(p)
    return tuple(c / p[0] for c in p)


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    p = (Fraction(0),) * (n - len(p)) + tuple(p)
    q = (Fraction(0),) * (n - len(q)) + tuple(q)
    return trim(a + b for a, b in zip(p, q))


def scale(p: Poly, c) -> Poly:
    return trim(Fraction(c) * a for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    p, q = trim(p), trim(q)
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def derivative(p: Poly) -> Poly:
    p = trim(p)
    n = len(p) - 1
    return trim(c * (n - i) for i, c in enumerate(p[:-1]))


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    p, q = list(trim(p)), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    while len(p) >= len(q) and p:
        c = p[0] / q[0]
        k = len(p) - len(q)
        quot[len(quot) - 1 - k] = c
        for i, b in enumerate(q):
            p[i] -= c * b
        p = list(trim(p))
    return trim(quot), trim(p)


def evaluate(p: Poly, x):
    acc = Fraction(0) if not isinstance(x, ExactScalar) else ExactScalar(0)
    for c in p:
        acc = acc * x + c
    return acc


def sign_at(p: Poly, x) -> int:
    """Sign of p(x) for x rational, ExactScalar or RealRoot."""
    if isinstance(x, RealRoot):
        return x.sign_of(p)
    v = evaluate(p, x if isinstance(x, ExactScalar) else Fraction(x))
    if isinstance(v, ExactScalar):
        return v.sign()
    return (v > 0) - (v < 0)


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [trim(p), derivative(p)]
    while seq[-1] and degree(seq[-1]) > 0:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return [s for s in seq if s]


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _signs_at(seq: list[Poly], x) -> list[int]:
    if x == "-inf":
        return [(1 if s[0] > 0 else -1) * (1 if degree(s) % 2 == 0 else -1) for s in seq]
    if x == "+inf":
        return [1 if s[0] > 0 else -1 for s in seq]
    return [sign_at(s, x) for s in seq]


def count_roots(seq: list[Poly], lo, hi) -> int:
    """Distinct real roots in (lo, hi] from a Sturm sequence."""
    return _variations(_signs_at(seq, lo)) - _variations(_signs_at(seq, hi))


def cauchy_bound(p: Poly) -> Fraction:
    p = trim(p)
    return 1 + max((abs(c / p[0]) for c in p[1:]), default=Fraction(0))


class RealRoot:
    """The unique root of an irreducible rational polynomial (degree >= 3) in (lo, hi)."""

    __slots__ = ("poly", "lo", "hi", "_seq")

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction, seq=None):
        self.poly = monic(poly)
        self.lo, self.hi = Fraction(lo), Fraction(hi)
        self._seq = seq or sturm_sequence(self.poly)

    def refine(self) -> None:
        mid = (self.lo + self.hi) / 2
        s_mid = sign_at(self.poly, mid)
        if s_mid == 0:  # cannot happen for irreducible polys of degree >= 2
            self.lo = self.hi = mid
            return
        if s_mid == sign_at(self.poly, self.lo):
            self.lo = mid
        else:
            self.hi = mid

    def bounds(self, width: Fraction) -> tuple[Fraction, Fraction]:
        while self.hi - self.lo > width:
            self.refine()
        return self.lo, self.hi

    def sign_of(self, p: Poly) -> int:
        """Sign of p at this root, exactly."""
        p = trim(p)
        if not p:
            return 0
        g = _gcd(self.poly, p)
        if degree(g) > 0:
            # irreducible: gcd non-trivial means poly divides p
            return 0
        seq = sturm_sequence(p)
        while count_roots(seq, self.lo, self.hi) > 0 or sign_at(p, self.hi) == 0:
            self.refine()
        return sign_at(p, self.hi)

    def compare(self, other) -> int:
        if isinstance(other, RealRoot):
            if other.poly == self.poly:
                lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
                if lo < hi and count_roots(self._seq, lo, hi) == 1:
                    return 0
            while not (self.hi < other.lo or other.hi < self.lo):
                self.refine()
                other.refine()
            return -1 if self.hi < other.lo else 1
        other = ExactScalar.coerce(other)
        bits = 8
        while True:
            olo, ohi = other.rational_bounds(bits)
            if self.hi < olo:
                return -1
            if ohi < self.lo:
                return 1
            self.refine()
            bits += 4

    def _c(self, other, op):
        try:
            return op(self.compare(other), 0)
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._c(other, int.__lt__)

    def __le__(self, other):
        return self._c(other, int.__le__)

    def __gt__(self, other):
        return self._c(other, int.__gt__)

    def __ge__(self, other):
        return self._c(other, int.__ge__)

    def __eq__(self, other):
        if isinstance(other, (RealRoot, ExactScalar, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __float__(self):
        lo, hi = self.bounds(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"RealRoot({[str(c) for c in self.poly]}, {self.lo}, {self.hi})"

    def __str__(self):
        terms = " ".join(str(c) for c in self.poly)
        return f"root[{terms}]~{float(self):.12g}"

    def pretty(self) -> str:
        return f"root of [{', '.join(str(c) for c in self.poly)}] ≈ {float(self):.10g}"

    def to_json(self) -> dict:
        lo, hi = self.bounds(Fraction(1, 1 << 40))
        return {
            "poly": [str(c) for c in self.poly],
            "lo": str(lo),
            "hi": str(hi),
            "approx": float(self),
        }


Exact = Union[ExactScalar, RealRoot]


def _gcd(p: Poly, q: Poly) -> Poly:
    p, q = trim(p), trim(q)
    while q:
        _, r = divmod_poly(p, q)
        p, q = q, r
    return monic(p) if p else ()


def factor_rational(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors over Q (monic) with multiplicities."""
    p = trim(p)
    if not p:
        raise DegenerateInput("zero polynomial")
    if len(p) == 1:
        return []
    x = sympy.Symbol("x")
    sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in p], x, domain=sympy.QQ)
    _, factors = sp.factor_list()
    out = []
    for f, m in factors:
        coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in f.all_coeffs())
        out.append((monic(coeffs), m))
    return out


def isolate(p: Poly) -> list[RealRoot]:
    """Isolating intervals for the real roots of a square-free poly without rational roots."""
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RealRoot(p, lo, hi, seq))
            continue
        mid = (lo + hi) / 2
        stack.extend([(lo, mid), (mid, hi)])
    out.sort(key=lambda r: r.lo)
    return out


def real_roots(p: Poly) -> list[Exact]:
    """Distinct real roots of a nonzero rational polynomial, increasing."""
    roots: list[Exact] = []
    for f, _ in factor_rational(p):
        if degree(f) <= 2:
            q = (Fraction(0),) * (3 - len(f)) + f
            roots.extend(quad_roots(QuadraticPoly(*q)))
        else:
            roots.extend(isolate(f))
    return sort_exact(roots)


def compare_exact(x, y) -> int:
    if isinstance(x, RealRoot):
        return x.compare(y)
    if isinstance(y, RealRoot):
        return -y.compare(x)
    return ExactScalar.coerce(x).compare(y)


def sort_exact(values: list) -> list:
    from functools import cmp_to_key

    return sorted(values, key=cmp_to_key(compare_exact))


def rational_bounds(x, width: Fraction) -> tuple[Fraction, Fraction]:
    if isinstance(x, RealRoot):
        return x.bounds(width)
    x = ExactScalar.coerce(x)
    bits = 4
    while True:
        lo, hi = x.rational_bounds(bits)
        if hi - lo <= width:
            return lo, hi
        bits += 8


def rational_between(x, y) -> Fraction:
    """A rational strictly between exact reals x < y (either may be None for -inf/+inf)."""
    if x is None and y is None:
        return Fraction(0)
    if x is None:
        return rational_bounds(y, Fraction(1))[0] - 1
    if y is None:
        return rational_bounds(x, Fraction(1))[1] + 1
    width = Fraction(1)
    while True:
        _, xhi = rational_bounds(x, width)
        ylo, _ = rational_bounds(y, width)
        if xhi < ylo:
            return (xhi + ylo) / 2
        width /= 16
