"""Picard lattices of the blown-up plane and of P1 x P1.

A class on the blow-up of P2 at k points is stored as (h, e1, ..., ek) and
stands for h*l - e1*E1 - ... - ek*Ek, so the intersection form is
diag(+1, -1, ..., -1) on these coefficients and -K = (3, 1, ..., 1).
On P1 x P1 a class (a, b) is a*F1 + b*F2 with F1.F2 = 1, Fi^2 = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SurfaceMismatch, UnsupportedK
from .scalar import ExactScalar, QuadraticPoly, parse_scalar


@dataclass(frozen=True)
class SurfaceSpec:
    kind: str  # "blowup" or "product"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("blowup", "product"):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if self.kind == "blowup" and not 0 <= self.k <= 8:
            raise UnsupportedK(f"blow-ups are supported for 0 <= k <= 8, got {self.k}")

    @classmethod
    def blowup(cls, k: int) -> "SurfaceSpec":
        return cls("blowup", k)

    @classmethod
    def product(cls) -> "SurfaceSpec":
        return cls("product", 0)

    @classmethod
    def parse(cls, name: str) -> "SurfaceSpec":
        """``dpK``/``blK`` (blow-up of P2 at K points), ``p2``, ``p1xp1``."""
        name = name.strip().lower()
        if name in ("p1xp1", "p1p1", "product", "quadric"):
            return cls.product()
        if name == "p2":
            return cls.blowup(0)
        m = re.fullmatch(r"(?:dp|bl|blowup)(\d+)", name)
        if not m:
            raise ValueError(f"unknown surface {name!r}")
        return cls.blowup(int(m.group(1)))

    @property
    def rank(self) -> int:
        return 2 if self.kind == "product" else self.k + 1

    @property
    def name(self) -> str:
        return "p1xp1" if self.kind == "product" else f"dp{self.k}"

    def form(self, u: Sequence, v: Sequence):
        if self.kind == "product":
            return u[0] * v[1] + u[1] * v[0]
        acc = u[0] * v[0]
        for a, b in zip(u[1:], v[1:]):
            acc = acc - a * b
        return acc

    def anticanonical(self) -> "DivisorClass":
        if self.kind == "product":
            return DivisorClass(self, (2, 2))
        return DivisorClass(self, (3,) + (1,) * self.k)

    def line(self) -> "DivisorClass":
        if self.kind == "product":
            raise ValueError("P1 x P1 has no line class; use ruling(i)")
        return DivisorClass(self, (1,) + (0,) * self.k)

    def exceptional(self, i: int) -> "DivisorClass":
        """E_i, 1-based."""
        if self.kind == "product" or not 1 <= i <= self.k:
            raise ValueError(f"no exceptional class E{i} on {self.name}")
        coeffs = [0] * (self.k + 1)
        coeffs[i] = -1
        return DivisorClass(self, tuple(coeffs))

    def ruling(self, i: int) -> "DivisorClass":
        if self.kind != "product":
            raise ValueError("rulings exist only on P1 x P1")
        return DivisorClass(self, (1, 0) if i == 1 else (0, 1))

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (0,) * self.rank)

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k, "name": self.name}


def _num(x):
    if isinstance(x, ExactScalar):
        return x.to_fraction() if x.is_rational else x
    if isinstance(x, str):
        return _num(parse_scalar(x))
    return Fraction(x)


@dataclass(frozen=True)
class DivisorClass:
    surface: SurfaceSpec
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_num(c) for c in self.coeffs)
        if len(coeffs) != self.surface.rank:
            raise ValueError(
                f"{self.surface.name} classes need {self.surface.rank} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def _check(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass):
            raise TypeError(f"expected DivisorClass, got {type(other).__name__}")
        if other.surface != self.surface:
            raise SurfaceMismatch(f"{self.surface.name} vs {other.surface.name}")

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.surface, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.surface, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.surface, tuple(-a for a in self.coeffs))

    def __mul__(self, t):
        t = _num(t)
        return DivisorClass(self.surface, tuple(t * a for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, t):
        t = _num(t)
        return DivisorClass(self.surface, tuple(a / t for a in self.coeffs))

    def dot(self, other: "DivisorClass"):
        self._check(other)
        return self.surface.form(self.coeffs, other.coeffs)

    def square(self):
        return self.dot(self)

    @property
    def is_rational(self) -> bool:
        return all(not isinstance(c, ExactScalar) for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def label(self) -> str:
        if self.surface.kind == "product":
            return f"({_fmt(self.coeffs[0])}, {_fmt(self.coeffs[1])})"
        parts = []
        h = self.coeffs[0]
        if h != 0:
            parts.append(f"{_fmt(h)}l" if h != 1 else "l")
        for i, e in enumerate(self.coeffs[1:], start=1):
            if e == 0:
                continue
            mag = -e if e < 0 else e
            sgn = "+" if e < 0 else "-"
            body = f"E{i}" if mag == 1 else f"{_fmt(mag)}E{i}"
            parts.append(f"{sgn} {body}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def __str__(self):
        return self.label()

    def to_json(self) -> dict:
        out = {"surface": self.surface.name, "coeffs": [ExactScalar.coerce(c).to_json() for c in self.coeffs]}
        if self.surface.kind == "blowup":
            out = {"k": self.surface.k, **out}
        out["label"] = self.label()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DivisorClass":
        if "surface" in obj:
            surface = SurfaceSpec.parse(obj["surface"])
        else:
            surface = SurfaceSpec.blowup(int(obj["k"]))
        return cls(surface, tuple(ExactScalar.from_json(c) for c in obj["coeffs"]))


def _fmt(x) -> str:
    if isinstance(x, ExactScalar):
        return x.pretty()
    return str(x)


def parse_class(text: str, surface: SurfaceSpec) -> DivisorClass:
    """Parse ``'3,1,1,...'`` into a class on ``surface`` (arity checked)."""
    fields = [f for f in text.split(",") if f.strip()]
    if len(fields) != surface.rank:
        raise ValueError(
            f"class on {surface.name} needs {surface.rank} coefficients, got {len(fields)}"
        )
    return DivisorClass(surface, tuple(parse_scalar(f) for f in fields))


def intersect(d, e):
    """Intersection number; a QuadraticPoly in t when either side is a Pencil."""
    if isinstance(d, Pencil) or isinstance(e, Pencil):
        if not isinstance(d, Pencil):
            d, e = e, d
        return d.dot(e)
    return d.dot(e)


@dataclass(frozen=True)
class Pencil:
    """The affine family base + t*direction with rational coefficients."""

    base: DivisorClass
    direction: DivisorClass

    def __post_init__(self):
        self.base._check(self.direction)
        if not (self.base.is_rational and self.direction.is_rational):
            raise TypeError("pencil coefficients must be rational")

    @property
    def surface(self) -> SurfaceSpec:
        return self.base.surface

    def at(self, t) -> DivisorClass:
        if isinstance(t, ExactScalar) and not t.is_rational:
            coeffs = tuple(t * v + b for b, v in zip(self.base.coeffs, self.direction.coeffs))
            return DivisorClass(self.surface, coeffs)
        t = _num(t)
        return self.base + self.direction * t

    def dot(self, other) -> QuadraticPoly:
        """Intersection with a fixed class (degree <= 1) or another pencil (degree <= 2)."""
        if isinstance(other, Pencil):
            b0, d0 = self.base, self.direction
            b1, d1 = other.base, other.direction
            return QuadraticPoly(d0.dot(d1), b0.dot(d1) + d0.dot(b1), b0.dot(b1))
        return QuadraticPoly(0, self.direction.dot(other), self.base.dot(other))

    def square(self) -> QuadraticPoly:
        return self.dot(self)

    def scaled(self, s) -> "Pencil":
        return Pencil(self.base * s, self.direction * s)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "direction": self.direction.to_json()}


def make_pencil(base: DivisorClass, direction: DivisorClass) -> Pencil:
    return Pencil(base, direction)


def dp8_pencil() -> Pencil:
    """L_t = 3l - E1 - ... - E7 - t*E8 on the degree one del Pezzo surface; L_1 = -K."""
    s = SurfaceSpec.blowup(8)
    return Pencil(DivisorClass(s, (3,) + (1,) * 7 + (0,)), DivisorClass(s, (0,) * 8 + (1,)))


def class_from_ints(surface: SurfaceSpec, coeffs: Iterable[int]) -> DivisorClass:
    return DivisorClass(surface, tuple(coeffs))
