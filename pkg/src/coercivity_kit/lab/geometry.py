"""Torus-invariant Fubini-Study geometry on P1 and P1 x P1.

A potential is a function of the log coordinates s_i = log|z_i|^2.  The base
metric has potential u(s) = log(1 + e^s) per factor, so u' = x is the moment
coordinate in [0, 1] and u'' = x(1 - x).  Each factor has unit volume and
Ric(omega) = 2 omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit


@dataclass(frozen=True)
class GeometrySpec:
    kind: str  # "sphere" or "product"

    def __post_init__(self):
        if self.kind not in ("sphere", "product"):
            raise ValueError(f"unknown geometry {self.kind!r}")

    @classmethod
    def parse(cls, name: str) -> "GeometrySpec":
        name = name.strip().lower()
        aliases = {"sphere": "sphere", "p1": "sphere", "product": "product", "product-spheres": "product", "p1xp1": "product"}
        if name not in aliases:
            raise ValueError(f"unknown geometry {name!r}")
        return cls(aliases[name])

    @property
    def n(self) -> int:
        return 1 if self.kind == "sphere" else 2

    @property
    def volume(self) -> float:
        """Integral of omega^n: n! times the product of unit factor volumes."""
        return float(math.factorial(self.n))

    @property
    def slope(self) -> float:
        """n * c1 . [omega]^(n-1) / [omega]^n; 2 for both geometries."""
        return 2.0

    @property
    def ricci_factor(self) -> float:
        return 2.0

    @property
    def name(self) -> str:
        return "sphere" if self.kind == "sphere" else "product-spheres"

    def to_json(self) -> dict:
        return {"kind": self.name, "n": self.n, "volume": self.volume, "slope": self.slope}


def moment_to_log(x):
    """s = logit(x), with x = 0, 1 mapped to -inf, +inf."""
    with np.errstate(divide="ignore"):
        return logit(np.asarray(x, dtype=float))


def log_to_moment(s):
    return expit(np.asarray(s, dtype=float))


def base_hessian(s):
    """u''(s) = x(1 - x), computed without cancellation."""
    s = np.asarray(s, dtype=float)
    return expit(s) * expit(-s)


def base_ricci_density(s, h: float = 1e-3) -> np.ndarray:
    """-(log u'')'' by a fourth-order central difference; equals 2 u'' for Fubini-Study."""
    s = np.asarray(s, dtype=float)

    def f(t):
        return np.log(base_hessian(t))

    return -(-f(s + 2 * h) + 16 * f(s + h) - 30 * f(s) + 16 * f(s - h) - f(s - 2 * h)) / (12 * h * h)
