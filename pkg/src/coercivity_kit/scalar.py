"""Exact real numbers of the form (a + b*sqrt(d))/q and quadratic polynomials.

Arithmetic is closed inside one quadratic field Q(sqrt(d)); mixing two
different surds raises :class:`MixedSurdFields`.  Comparisons are exact and
also work across different fields, which is all the interval algebra needs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DegenerateInput, DivideByZero, MixedSurdFields


@lru_cache(maxsize=4096)
def _split_square(n: int) -> tuple[int, int]:
    """Return (m, f) with n == m*m*f and f square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    m, f, p = 1, n, 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            m *= p
        p += 1 if p == 2 else 2
    return m, f


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _surd_sign(r: Fraction, s: Fraction, d: int) -> int:
    """Sign of r + s*sqrt(d) with d square-free (or s == 0)."""
    sr, ss = _sign(r), _sign(s)
    if ss == 0 or d == 0:
        return sr
    if sr == 0 or sr == ss:
        return ss
    # opposite signs: the larger square wins; equality is impossible for irrational sqrt(d)
    return sr if r * r > s * s * d else ss


class ExactScalar:
    """The number (a + b*sqrt(d))/q kept in canonical form.

    Canonical form: q > 0, gcd(a, b, q) == 1, d square-free and d > 1, or
    b == d == 0 for rationals.
    """

    __slots__ = ("a", "b", "d", "q")

    def __init__(self, a: int = 0, b: int = 0, d: int = 0, q: int = 1):
        a, b, d, q = int(a), int(b), int(d), int(q)
        if q == 0:
            raise DivideByZero("zero denominator")
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if q < 0:
            a, b, q = -a, -b, -q
        if b == 0 or d == 0:
            b, d = 0, 0
        else:
            m, f = _split_square(d)
            if f == 1:
                a, b, d = a + b * m, 0, 0
            else:
                b, d = b * m, f
        g = math.gcd(math.gcd(a, b), q)
        if g > 1:
            a, b, q = a // g, b // g, q // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def from_parts(cls, r, s=0, d: int = 0) -> "ExactScalar":
        """Build r + s*sqrt(d) from rational r, s."""
        r, s = Fraction(r), Fraction(s)
        if s == 0 or d == 0:
            return cls(r.numerator, 0, 0, r.denominator)
        q = r.denominator * s.denominator // math.gcd(r.denominator, s.denominator)
        return cls(r.numerator * (q // r.denominator), s.numerator * (q // s.denominator), d, q)

    @classmethod
    def sqrt(cls, n) -> "ExactScalar":
        """Exact square root of a non-negative rational."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("sqrt of a negative number")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, 1, n.numerator * n.denominator, n.denominator)

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            x = Fraction(x)
            return cls(x.numerator, 0, 0, x.denominator)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to ExactScalar")

    # -- parts ----------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def surd_part(self) -> Fraction:
        return Fraction(self.b, self.q)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.q)

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.a, -self.b, self.d, self.q)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _field(x: "ExactScalar", y: "ExactScalar") -> int:
        if x.b == 0:
            return y.d
        if y.b == 0 or x.d == y.d:
            return x.d
        raise MixedSurdFields(f"cannot combine sqrt({x.d}) with sqrt({y.d})")

    def _binary(self, other, fn, reflected=False):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        x, y = (other, self) if reflected else (self, other)
        d = ExactScalar._field(x, y)
        return fn(x.rational_part, x.surd_part, y.rational_part, y.surd_part, d)

    def __add__(self, other):
        return self._binary(other, lambda r1, s1, r2, s2, d: ExactScalar.from_parts(r1 + r2, s1 + s2, d))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self._binary(other, lambda r1, s1, r2, s2, d: ExactScalar.from_parts(r1 - r2, s1 - s2, d))

    def __rsub__(self, other):
        return self._binary(
            other, lambda r1, s1, r2, s2, d: ExactScalar.from_parts(r1 - r2, s1 - s2, d), reflected=True
        )

    def __mul__(self, other):
        return self._binary(
            other, lambda r1, s1, r2, s2, d: ExactScalar.from_parts(r1 * r2 + s1 * s2 * d, r1 * s2 + r2 * s1, d)
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    @staticmethod
    def _div(r1, s1, r2, s2, d):
        norm = r2 * r2 - s2 * s2 * d
        if norm == 0:
            raise DivideByZero("division by zero")
        # multiply by the conjugate of the divisor
        return ExactScalar.from_parts((r1 * r2 - s1 * s2 * d) / norm, (s1 * r2 - r1 * s2) / norm, d)

    def __truediv__(self, other):
        return self._binary(other, ExactScalar._div)

    def __rtruediv__(self, other):
        return self._binary(other, ExactScalar._div, reflected=True)

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.d, self.q)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ExactScalar(1) / (self ** (-k))
        out, base = ExactScalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering ---------------------------------------------------------
    def sign(self) -> int:
        return _surd_sign(Fraction(self.a), Fraction(self.b), self.d)

    def compare(self, other) -> int:
        """Exact three-way comparison, valid across different surd fields."""
        other = ExactScalar.coerce(other)
        r = self.rational_part - other.rational_part
        s1, s2 = self.surd_part, other.surd_part
        if s2 == 0 or s1 == 0 or self.d == other.d:
            d = self.d or other.d
            return _surd_sign(r, s1 - s2 if self.d == other.d else (s1 or -s2), d)
        # sign of P + Q with P = r + s1*sqrt(d1) and Q = -s2*sqrt(d2)
        sp, sq = _surd_sign(r, s1, self.d), -_sign(s2)
        if sp == 0 or sp == sq:
            return sq if sp == 0 else sp
        p2_minus_q2 = _surd_sign(r * r + s1 * s1 * self.d - s2 * s2 * other.d, 2 * r * s1, self.d)
        return sp if p2_minus_q2 > 0 else sq

    def _cmp(self, other):
        if isinstance(other, (ExactScalar, int, Fraction, Rational)):
            return self.compare(other)
        return None

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return (self.a, self.b, self.d, self.q) == (other.a, other.b, other.d, other.q)
        if isinstance(other, (int, Fraction, Rational)):
            return self.b == 0 and Fraction(self.a, self.q) == other
        return NotImplemented

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.q))
        return hash((self.a, self.b, self.d, self.q))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion -------------------------------------------------------
    def __float__(self):
        if self.b == 0:
            return self.a / self.q
        return float(self.to_decimal(30))

    def to_decimal(self, digits: int = 30) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            val = (Decimal(self.a) + Decimal(self.b) * Decimal(self.d).sqrt()) / Decimal(self.q)
            ctx.prec = digits
            return +val

    def rational_bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rationals lo <= self <= hi with hi - lo <= 2**-bits * |b|/q."""
        if self.b == 0:
            v = Fraction(self.a, self.q)
            return v, v
        scale = 1 << bits
        root = math.isqrt(self.d * scale * scale)
        lo_root, hi_root = Fraction(root, scale), Fraction(root + 1, scale)
        s = Fraction(self.b, self.q)
        r = Fraction(self.a, self.q)
        lo, hi = r + s * lo_root, r + s * hi_root
        return (lo, hi) if lo <= hi else (hi, lo)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "d": self.d, "q": self.q}

    @classmethod
    def from_json(cls, obj) -> "ExactScalar":
        if isinstance(obj, (int, str)):
            return cls.coerce(obj)
        return cls(obj["a"], obj.get("b", 0), obj.get("d", 0), obj.get("q", 1))

    def __str__(self):
        if self.b == 0:
            return str(self.a) if self.q == 1 else f"{self.a}/{self.q}"
        return f"({self.a}{self.b:+d}*sqrt({self.d}))/{self.q}"

    def __repr__(self):
        return f"ExactScalar({self.a}, {self.b}, {self.d}, {self.q})"

    def pretty(self) -> str:
        if self.b == 0:
            return str(self)
        coeff = "" if abs(self.b) == 1 else str(abs(self.b))
        sgn = "+" if self.b > 0 else "-"
        if self.a == 0:
            body = f"{'-' if self.b < 0 else ''}{coeff}√{self.d}"
        else:
            body = f"{self.a} {sgn} {coeff}√{self.d}"
        if self.q == 1:
            return body
        return f"({body})/{self.q}"


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?sqrt\((\d+)\))?")


def parse_scalar(text: str) -> ExactScalar:
    """Parse integer, ``p/q``, or surd literals such as ``(a+b*sqrt(d))/q``.

    Accepted: ``7``, ``-3/4``, ``sqrt(10)-2``, ``(10-sqrt(10))/9``,
    ``(1+0*sqrt(0))/1``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    outer = re.fullmatch(r"\((.*)\)/(\d+)", s)
    q = 1
    if outer:
        s, q = outer.group(1), int(outer.group(2))
        if q == 0:
            raise DivideByZero("zero denominator")
    elif s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    rational, surd, d = Fraction(0), Fraction(0), 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"malformed scalar literal {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and not m.group(1):
            raise ValueError(f"malformed scalar literal {text!r}")
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            if m.group(3).startswith("sqrt") and m.group(2):
                raise ValueError(f"malformed scalar literal {text!r} (use b*sqrt(d))")
            dd = int(m.group(4))
            term = ExactScalar.sqrt(dd) * (sign * coeff)
            if term.b:
                if d and term.d != d:
                    raise MixedSurdFields(f"literal {text!r} mixes surds")
                d = term.d
            rational += term.rational_part
            surd += term.surd_part
        else:
            rational += sign * coeff
        pos = m.end()
    return ExactScalar.from_parts(rational, surd, d) / q


def as_exact(x) -> ExactScalar:
    return ExactScalar.coerce(x)


@dataclass(frozen=True)
class QuadraticPoly:
    """c2*t**2 + c1*t + c0 with rational coefficients."""

    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        for name in ("c2", "c1", "c0"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def is_zero(self) -> bool:
        return self.c2 == 0 and self.c1 == 0 and self.c0 == 0

    @property
    def degree(self) -> int:
        if self.c2:
            return 2
        if self.c1:
            return 1
        return 0 if self.c0 else -1

    @property
    def discriminant(self) -> Fraction:
        return self.c1 * self.c1 - 4 * self.c2 * self.c0

    def __call__(self, t):
        if isinstance(t, ExactScalar):
            return (t * self.c2 + self.c1) * t + self.c0
        t = Fraction(t)
        return (self.c2 * t + self.c1) * t + self.c0

    def coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients from highest to lowest degree."""
        return (self.c2, self.c1, self.c0)

    def __str__(self):
        return f"{self.c2}*t^2 + {self.c1}*t + {self.c0}"


def quad_roots(p: QuadraticPoly) -> list[ExactScalar]:
    """Real roots of ``p`` in increasing order, exactly; repeated roots once."""
    if p.is_zero:
        raise DegenerateInput("zero polynomial has no isolated roots")
    if p.degree == 0:
        return []
    if p.degree == 1:
        return [ExactScalar.coerce(-p.c0 / p.c1)]
    disc = p.discriminant
    centre = -p.c1 / (2 * p.c2)
    if disc < 0:
        return []
    if disc == 0:
        return [ExactScalar.coerce(centre)]
    # sqrt(N/D) = sqrt(N*D)/D
    radicand = disc.numerator * disc.denominator
    half_width = Fraction(1, 2 * disc.denominator) / abs(p.c2)
    return [
        ExactScalar.from_parts(centre, -half_width, radicand),
        ExactScalar.from_parts(centre, half_width, radicand),
    ]
