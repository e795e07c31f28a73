"""Closed-form torus-invariant potentials and their random sampling family.

A potential is a finite sum of products of one-variable building blocks in
the log coordinates.  Every block is smooth on P1 (integer slopes only), and
derivatives up to order four are exact, so the metric density and the
scalar curvature of phi come without finite differences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.special import expit

from ..errors import PositivityViolation
from .geometry import GeometrySpec, base_hessian, moment_to_log

MAX_ORDER = 4


def _logistic_jet(z) -> list[np.ndarray]:
    """sigma and its first four derivatives at z (z may be +-inf)."""
    sig = expit(z)
    p = sig * expit(-z)
    w = expit(-z) - sig  # 1 - 2 sigma
    return [sig, p, p * w, p * (1.0 - 6.0 * p), p * w * (1.0 - 12.0 * p)]


@dataclass(frozen=True)
class Logistic:
    """sigma(a (s - s0)) with a positive integer slope."""

    a: int
    s0: float

    def jet(self, s) -> list[np.ndarray]:
        z = self.a * (np.asarray(s, dtype=float) - self.s0)
        return [self.a**k * d for k, d in enumerate(_logistic_jet(z))]

    def to_json(self) -> dict:
        return {"type": "logistic", "a": self.a, "s0": self.s0}


@dataclass(frozen=True)
class MobiusShift:
    """u(s + c) - u(s) with u(s) = log(1 + e^s): the pullback of the base potential by z -> e^(c/2) z."""

    c: float

    def jet(self, s) -> list[np.ndarray]:
        s = np.asarray(s, dtype=float)
        c = self.c
        with np.errstate(over="ignore", invalid="ignore"):
            pos = c + np.log1p(np.exp(-(s + c))) - np.log1p(np.exp(-s))
            neg = np.log1p(np.exp(s + c)) - np.log1p(np.exp(s))
        value = np.where(s >= 0, pos, neg)
        a, b = _logistic_jet(s + c), _logistic_jet(s)
        return [value] + [a[k] - b[k] for k in range(MAX_ORDER)]

    def to_json(self) -> dict:
        return {"type": "mobius", "c": self.c}


@dataclass(frozen=True)
class Constant:
    def jet(self, s) -> list[np.ndarray]:
        s = np.asarray(s, dtype=float)
        one = np.ones_like(s)
        return [one] + [np.zeros_like(s)] * MAX_ORDER

    def to_json(self) -> dict:
        return {"type": "constant"}


ONE = Constant()


@dataclass(frozen=True)
class Potential:
    """phi = shift + sum_j coef_j * prod_i f_ji(s_i)."""

    n: int
    terms: tuple = ()  # tuple of (coef, (factor per axis))
    shift: float = 0.0

    def __post_init__(self):
        for coef, factors in self.terms:
            if len(factors) != self.n:
                raise ValueError("each term needs one factor per axis")

    @classmethod
    def zero(cls, n: int) -> "Potential":
        return cls(n)

    def scaled(self, lam: float) -> "Potential":
        return Potential(self.n, tuple((lam * c, f) for c, f in self.terms), lam * self.shift)

    def shifted(self, c: float) -> "Potential":
        return Potential(self.n, self.terms, self.shift + c)

    def __add__(self, other: "Potential") -> "Potential":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return Potential(self.n, self.terms + other.terms, self.shift + other.shift)

    def jet(self, axes, order: int = MAX_ORDER) -> dict:
        """Derivatives on the tensor grid axes[0] x ... x axes[n-1].

        Returns {(k_1, ..., k_n): array} for all multi-indices of total order <= order.
        """
        if len(axes) != self.n:
            raise ValueError("need one axis array per dimension")
        axes = [np.asarray(a, dtype=float) for a in axes]
        shape = tuple(len(a) for a in axes)
        keys = [k for k in itertools.product(range(order + 1), repeat=self.n) if sum(k) <= order]
        out = {k: np.zeros(shape) for k in keys}
        out[(0,) * self.n] += self.shift
        for coef, factors in self.terms:
            jets = [f.jet(a) for f, a in zip(factors, axes)]
            for k in keys:
                arr = jets[0][k[0]]
                for i in range(1, self.n):
                    arr = np.multiply.outer(arr, jets[i][k[i]])
                out[k] += coef * arr
        return out

    def evaluate(self, points) -> np.ndarray:
        """phi at points of shape (..., n) in log coordinates."""
        pts = np.asarray(points, dtype=float)
        val = np.full(pts.shape[:-1], self.shift)
        for coef, factors in self.terms:
            prod = coef * np.ones(pts.shape[:-1])
            for i, f in enumerate(factors):
                prod = prod * f.jet(pts[..., i])[0]
            val = val + prod
        return val

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "shift": self.shift,
            "terms": [{"coef": c, "factors": [f.to_json() for f in fs]} for c, fs in self.terms],
        }


def normalized_min_eigenvalue(phi: Potential, s_axes) -> float:
    """min over the grid of the smallest eigenvalue of I + P^(-1/2) Hess(phi) P^(-1/2).

    ``s_axes`` are log-coordinate points per axis; P = diag(u''(s_i)).  This
    is the density of omega_phi relative to omega in an orthonormal frame of
    the base metric; positive means omega_phi is a Kahler form.
    """
    jet = phi.jet(s_axes, order=2)
    p = [base_hessian(s) for s in s_axes]
    if phi.n == 1:
        return float(np.min(1.0 + jet[(2,)] / p[0]))
    g1 = 1.0 / np.sqrt(p[0])[:, None]
    g2 = 1.0 / np.sqrt(p[1])[None, :]
    a = 1.0 + jet[(2, 0)] * g1 * g1
    d = 1.0 + jet[(0, 2)] * g2 * g2
    b = jet[(1, 1)] * g1 * g2
    return float(np.min(0.5 * (a + d) - np.sqrt(0.25 * (a - d) ** 2 + b * b)))


def certificate_axes(n: int) -> list[np.ndarray]:
    """Log-coordinate points: uniform in the moment coordinate plus deep tails on both sides."""
    cells, tail = (512, 145) if n == 1 else (128, 73)
    x = (np.arange(cells) + 0.5) / cells
    s = np.union1d(moment_to_log(x), np.linspace(-36.0, 36.0, tail))
    return [s] * n


def sup_value(phi: Potential, grid: int = 2048) -> tuple[float, np.ndarray]:
    """sup of phi over X (grid search including the torus-fixed boundary, then a local refinement)."""
    n = phi.n
    if n == 2:
        grid = min(grid, 256)
    x = np.linspace(0.0, 1.0, grid + 1)
    vals = phi.jet([moment_to_log(x)] * n, order=0)[(0,) * n]
    idx = np.unravel_index(np.argmax(vals), vals.shape)
    best = float(vals[idx])
    start = np.array([x[i] for i in idx])

    def neg(xx):
        xx = np.clip(np.atleast_1d(xx), 0.0, 1.0)
        return -float(phi.evaluate(moment_to_log(xx)[None, :])[0])

    if n == 1:
        lo, hi = max(start[0] - 1.0 / grid, 0.0), min(start[0] + 1.0 / grid, 1.0)
        res = optimize.minimize_scalar(lambda t: neg([t]), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        cand = -float(res.fun)
        xbest = np.array([res.x])
    else:
        res = optimize.minimize(neg, start, method="L-BFGS-B", bounds=[(0.0, 1.0)] * n, options={"ftol": 1e-15, "gtol": 1e-12})
        cand = -float(res.fun)
        xbest = np.asarray(res.x)
    if cand > best:
        return cand, xbest
    return best, start


@dataclass(frozen=True)
class PotentialSample:
    geometry: GeometrySpec
    potential: Potential
    seed: tuple
    certificate: float
    sup_normalized: bool
    sup_before: float = 0.0

    def check(self, margin: float = 0.0) -> None:
        if not self.certificate > margin:
            raise PositivityViolation(
                f"sample {self.seed}: omega_phi density {self.certificate:.3g} is not above {margin}"
            )

    def shifted(self, c: float) -> "PotentialSample":
        return PotentialSample(self.geometry, self.potential.shifted(c), self.seed, self.certificate, False, self.sup_before)

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.name,
            "seed": list(self.seed),
            "certificate": self.certificate,
            "sup_normalized": self.sup_normalized,
            "potential": self.potential.to_json(),
        }


def make_sample(geom: GeometrySpec, phi: Potential, seed=(), normalize: bool = True) -> PotentialSample:
    cert = normalized_min_eigenvalue(phi, certificate_axes(geom.n))
    sup = 0.0
    if normalize:
        sup, _ = sup_value(phi)
        phi = phi.shifted(-sup)
    return PotentialSample(geom, phi, tuple(seed), cert, normalize, sup)


def _shape_sphere(rng: np.random.Generator) -> Potential:
    terms = []
    for _ in range(int(rng.integers(2, 5))):
        terms.append((float(rng.normal()), (Logistic(int(rng.integers(1, 4)), float(rng.uniform(-3, 3))),)))
    if rng.random() < 0.3:
        terms.append((float(rng.normal()), (MobiusShift(float(rng.uniform(-2, 2))),)))
    return Potential(1, tuple(terms))


def _shape_product(rng: np.random.Generator) -> Potential:
    terms = []
    for axis in (0, 1):
        for _ in range(int(rng.integers(1, 3))):
            f = Logistic(int(rng.integers(1, 4)), float(rng.uniform(-3, 3)))
            factors = (f, ONE) if axis == 0 else (ONE, f)
            terms.append((float(rng.normal()), factors))
        if rng.random() < 0.2:
            f = MobiusShift(float(rng.uniform(-2, 2)))
            terms.append((float(rng.normal()), (f, ONE) if axis == 0 else (ONE, f)))
    for _ in range(int(rng.integers(1, 3))):
        f1 = Logistic(int(rng.integers(1, 4)), float(rng.uniform(-2.5, 2.5)))
        f2 = Logistic(int(rng.integers(1, 4)), float(rng.uniform(-2.5, 2.5)))
        terms.append((float(rng.normal()), (f1, f2)))
    return Potential(2, tuple(terms))


def draw_sample(
    geom: GeometrySpec,
    seed: int,
    index: int,
    margin: float = 0.05,
    normalize: bool = True,
    max_tries: int = 50,
) -> PotentialSample:
    """Deterministic sample number ``index`` of the stream ``seed``.

    A random shape is scaled by a random fraction of the largest amplitude
    that keeps the certificate above ``margin``; failures are redrawn.
    """
    rng = np.random.default_rng([seed, index])
    axes = certificate_axes(geom.n)
    for _ in range(max_tries):
        shape = _shape_sphere(rng) if geom.n == 1 else _shape_product(rng)
        q = normalized_min_eigenvalue(shape, axes) - 1.0
        lam_max = 4.0 if q >= 0 else min(4.0, (1.0 - margin) / -q)
        phi = shape.scaled(lam_max * float(rng.uniform(0.05, 0.95)))
        sample = make_sample(geom, phi, (seed, index), normalize)
        if sample.certificate > margin:
            return sample
    raise PositivityViolation(f"no admissible sample after {max_tries} draws for seed {(seed, index)}")


def mobius_sample(geom: GeometrySpec, c: float, normalize: bool = True) -> PotentialSample:
    """Pullback of the base metric by the radial scaling z -> e^(c/2) z (on each factor)."""
    if geom.n == 1:
        phi = Potential(1, ((1.0, (MobiusShift(c),)),))
    else:
        phi = Potential(2, ((1.0, (MobiusShift(c), ONE)), (1.0, (ONE, MobiusShift(c)))))
    return make_sample(geom, phi, ("mobius", c), normalize)


def reference_sample(geom: GeometrySpec, which: int = 0) -> PotentialSample:
    """Fixed, hand-written potentials used for convergence and oracle checks."""
    if geom.n == 1:
        choices = [
            Potential(1, ((0.21, (Logistic(1, 0.5),)), (-0.0875, (Logistic(2, -1.0),)), (0.0525, (Logistic(3, 1.5),)))),
            Potential(1, ((0.32, (Logistic(2, 0.0),)), (0.12, (MobiusShift(1.0),)))),
        ]
    else:
        choices = [
            Potential(
                2,
                (
                    (0.3, (Logistic(1, 0.3), ONE)),
                    (-0.18, (ONE, Logistic(2, -0.5))),
                    (0.15, (Logistic(2, 0.8), Logistic(1, -0.4))),
                ),
            ),
            Potential(2, ((0.16, (Logistic(3, -0.2), ONE)), (0.14, (Logistic(1, 0.0), Logistic(2, 1.0))))),
        ]
    return make_sample(geom, choices[which % len(choices)], ("reference", which))
