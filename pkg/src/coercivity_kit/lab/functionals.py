"""Mabuchi, entropy, energy and Aubin functionals of invariant potentials.

Closed form.  Work in moment coordinates x in [0, 1]^n on a uniform grid.
omega^n has density n! dx.  The gradient map y = x + grad_s(phi) carries a
grid cell onto a quadrilateral, and omega_phi^n gives the cell n! times the
image area.  Mixed products omega^i ^ omega_phi^(n-i) use mixed areas.  The
cell masses sum to the volume exactly, so translation invariance holds to
round-off.  phi is sampled at cell centres, which makes every quantity
second order in the grid spacing; two grids give a Richardson estimate.

Path integral.  M(phi) = -int_0^1 int phi (S_t - n mu) omega_t^n dt along
t*phi, with the scalar curvature from exact derivatives of phi and
Gauss-Legendre rules in x and t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import PositivityViolation, QuadratureDivergence
from .geometry import GeometrySpec, moment_to_log
from .potentials import PotentialSample

DEFAULT_GRID = {1: 4096, 2: 512}


@dataclass(frozen=True)
class Masses:
    """Per-cell data on one grid: phi at centres and the n+1 mixed masses.

    mixed[i] is the mass of omega^i ^ omega_phi^(n-i), so mixed[n] is the base.
    """

    n: int
    phi: np.ndarray
    mixed: tuple

    def J(self, i: int) -> float:
        """int phi omega^i ^ omega_phi^(n-i)."""
        return float(np.sum(self.phi * self.mixed[i]))

    def integral(self, f: np.ndarray, i: int) -> float:
        return float(np.sum(f * self.mixed[i]))


def _cross(a0, a1, b0, b1):
    return a0 * b1 - a1 * b0


def cell_masses(sample: PotentialSample, N: int) -> Masses:
    phi = sample.potential
    n = phi.n
    xv = np.linspace(0.0, 1.0, N + 1)
    xm = (np.arange(N) + 0.5) / N
    sv, sm = moment_to_log(xv), moment_to_log(xm)
    if n == 1:
        dphi = phi.jet([sv], order=1)[(1,)]
        y = xv + dphi
        m_phi = np.diff(y)
        m_base = np.full(N, 1.0 / N)
        centre = phi.jet([sm], order=0)[(0,)]
        return Masses(1, centre, (m_phi, m_base))
    jet = phi.jet([sv, sv], order=1)
    X1, X2 = np.meshgrid(xv, xv, indexing="ij")
    Y1, Y2 = X1 + jet[(1, 0)], X2 + jet[(0, 1)]

    def diagonals(A, B):
        # corners 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
        d1 = (A[1:, 1:] - A[:-1, :-1], B[1:, 1:] - B[:-1, :-1])
        d2 = (A[:-1, 1:] - A[1:, :-1], B[:-1, 1:] - B[1:, :-1])
        return d1, d2

    (xa, xb), (xc, xd) = diagonals(X1, X2)
    (ya, yb), (yc, yd) = diagonals(Y1, Y2)
    # twice the (mixed) shoelace area, i.e. the mass of omega^2-type forms
    m_phi = _cross(ya, yb, yc, yd)
    m_mix = 0.5 * (_cross(xa, xb, yc, yd) + _cross(ya, yb, xc, xd))
    m_base = _cross(xa, xb, xc, xd)
    centre = phi.jet([sm, sm], order=0)[(0, 0)]
    return Masses(2, centre, (m_phi, m_mix, m_base))


@dataclass(frozen=True)
class RawValues:
    """Functionals from a single grid."""

    grid: int
    I: float
    H: float
    E: float
    J: tuple
    log_exp: float  # log of (1/V) int e^(-beta phi) omega^n for the requested beta
    beta: float

    @property
    def M(self) -> float:
        return self.H + self.E


def raw_values(sample: PotentialSample, N: int, beta: float = 0.9) -> RawValues:
    geom = sample.geometry
    n, mu, rho = geom.n, geom.slope, geom.ricci_factor
    m = cell_masses(sample, N)
    m_phi, m_base = m.mixed[0], m.mixed[n]
    if np.any(m_phi <= 0):
        raise PositivityViolation(f"sample {sample.seed}: omega_phi^n has a non-positive cell mass at grid {N}")
    J = tuple(m.J(i) for i in range(n + 1))
    I = J[n] - J[0]
    H = float(np.sum(m_phi * np.log(m_phi / m_base)))
    E = mu * n / (n + 1) * sum(J) - rho * sum(J[1:])
    # log-sum-exp keeps large negative potentials finite
    a = -beta * m.phi
    amax = float(np.max(a))
    log_exp = amax + math.log(float(np.sum(np.exp(a - amax) * m_base)) / geom.volume)
    return RawValues(N, I, H, E, J, log_exp, beta)


@dataclass(frozen=True)
class FunctionalReport:
    I: float
    H: float
    E: float
    M: float
    r23: float
    r25: float
    r26: float
    r27: float
    summands: tuple  # int phi omega_phi^(n-i) ^ (omega^i - omega_phi^i), i = 1..n
    beta: float
    grid: int
    error: dict = field(default_factory=dict)
    scale: float = 0.0

    def to_json(self) -> dict:
        return {
            "I": self.I,
            "H": self.H,
            "E": self.E,
            "M": self.M,
            "r23": self.r23,
            "r25": self.r25,
            "r26": self.r26,
            "r27": self.r27,
            "summands": list(self.summands),
            "beta": self.beta,
            "grid": self.grid,
            "error": self.error,
            "scale": self.scale,
        }


def _extrapolate(fine: float, coarse: float) -> tuple[float, float]:
    return (4.0 * fine - coarse) / 3.0, abs(fine - coarse) / 3.0


def _residuals(geom: GeometrySpec, raw: RawValues) -> dict:
    n, V = geom.n, geom.volume
    J = raw.J
    summands = tuple(J[i] - J[0] for i in range(1, n + 1))
    return {
        "I": raw.I,
        "H": raw.H,
        "E": raw.E,
        "M": raw.M,
        "r23": raw.I,
        "r25": (raw.H + raw.beta * J[0]) / V + raw.log_exp,
        "r26": -J[0] - raw.I,
        "r27": -n * J[0] + sum(J[1:]),
        "summands": summands,
    }


def evaluate(
    sample: PotentialSample,
    grid: Optional[int] = None,
    beta: float = 0.9,
    extrapolate: bool = True,
    budget: float = 1e-3,
) -> FunctionalReport:
    """All functionals and identity residuals of one sample."""
    sample.check()
    geom = sample.geometry
    N = grid or DEFAULT_GRID[geom.n]
    fine = _residuals(geom, raw_values(sample, N, beta))
    scale = float(np.max(np.abs(sample.potential.jet([moment_to_log((np.arange(64) + 0.5) / 64)] * geom.n, 0)[(0,) * geom.n])))
    if not extrapolate:
        return FunctionalReport(
            fine["I"], fine["H"], fine["E"], fine["M"], fine["r23"], fine["r25"], fine["r26"], fine["r27"],
            fine["summands"], beta, N, {}, scale,
        )
    coarse = _residuals(geom, raw_values(sample, N // 2, beta))
    out, err = {}, {}
    for key in ("I", "H", "E", "M", "r23", "r25", "r26", "r27"):
        out[key], err[key] = _extrapolate(fine[key], coarse[key])
    summ = tuple(_extrapolate(f, c)[0] for f, c in zip(fine["summands"], coarse["summands"]))
    for key in ("I", "H", "E", "M"):
        if err[key] > budget * (1.0 + abs(out[key])):
            raise QuadratureDivergence(f"{key}: error estimate {err[key]:.3g} exceeds budget at grid {N}")
    return FunctionalReport(
        out["I"], out["H"], out["E"], out["M"], out["r23"], out["r25"], out["r26"], out["r27"],
        summ, beta, N, err, scale,
    )


def i_functional(sample: PotentialSample, grid: Optional[int] = None) -> tuple[float, float]:
    """(I, error estimate) with I = int phi (omega^n - omega_phi^n)."""
    r = evaluate(sample, grid)
    return r.I, r.error["I"]


def entropy(sample: PotentialSample, grid: Optional[int] = None) -> tuple[float, float]:
    """(H, error estimate) with H = int log(omega_phi^n / omega^n) omega_phi^n."""
    r = evaluate(sample, grid)
    return r.H, r.error["H"]


def energy(sample: PotentialSample, grid: Optional[int] = None) -> tuple[float, float]:
    r = evaluate(sample, grid)
    return r.E, r.error["E"]


# ---------------------------------------------------------------- path integral


def _gauss(nodes: int, lo: float = 0.0, hi: float = 1.0):
    z, w = np.polynomial.legendre.leggauss(nodes)
    return lo + (hi - lo) * (z + 1) / 2, w * (hi - lo) / 2


class _PathIntegrand:
    """Precomputed jets on a Gauss grid; call with t to get int phi (S_t - n mu) omega_t^n (sign flipped)."""

    def __init__(self, sample: PotentialSample, nodes: int):
        geom = sample.geometry
        self.n, self.mu, self.rho = geom.n, geom.slope, geom.ricci_factor
        x, wx = _gauss(nodes)
        s = moment_to_log(x)
        n = self.n
        self.jet = sample.potential.jet([s] * n, order=4)
        shape = (nodes,) * n
        # per-axis quantities broadcast to the grid
        self.x = [self._axis(x, i, shape) for i in range(n)]
        self.p = [xi * (1 - xi) for xi in self.x]
        self.w = [1 - 2 * xi for xi in self.x]
        self.g = [1 / np.sqrt(pi) for pi in self.p]
        weight = np.ones(shape)
        for i in range(n):
            weight = weight * self._axis(wx, i, shape)
        self.weight = weight * math.factorial(n)
        self._build_q()

    def _axis(self, v, i, shape):
        idx = [None] * self.n
        idx[i] = slice(None)
        return np.broadcast_to(v[tuple(idx)], shape)

    def _d(self, *axes) -> np.ndarray:
        k = [0] * self.n
        for a in axes:
            k[a] += 1
        return self.jet[tuple(k)]

    def _build_q(self):
        """Q = P^(-1/2) Hess(phi) P^(-1/2) and its first and second s-derivatives."""
        n = self.n
        shape = self.x[0].shape
        Q = np.zeros(shape + (n, n))
        dQ = np.zeros((n,) + shape + (n, n))
        ddQ = np.zeros((n, n) + shape + (n, n))
        for a in range(n):
            for b in range(n):
                m = [(a == c) + (b == c) for c in range(n)]
                G = self.g[a] * self.g[b]
                dG = [G * m[i] * (-self.w[i] / 2) for i in range(n)]
                Q[..., a, b] = self._d(a, b) * G
                for i in range(n):
                    dQ[i][..., a, b] = self._d(a, b, i) * G + self._d(a, b) * dG[i]
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            ddG = G * (m[i] ** 2 * self.w[i] ** 2 / 4 + m[i] * self.p[i])
                        else:
                            ddG = G * m[i] * m[j] * self.w[i] * self.w[j] / 4
                        ddQ[i, j][..., a, b] = (
                            self._d(a, b, i, j) * G
                            + self._d(a, b, i) * dG[j]
                            + self._d(a, b, j) * dG[i]
                            + self._d(a, b) * ddG
                        )
        self.Q, self.dQ, self.ddQ = Q, dQ, ddQ

    def __call__(self, t: float) -> float:
        n = self.n
        eye = np.eye(n)
        M = eye + t * self.Q
        det = np.linalg.det(M)
        if np.any(det <= 0):
            raise PositivityViolation(f"omega_t degenerates at t = {t}")
        Minv = np.linalg.inv(M)
        # normalized Hessian of log det M: g_i g_j d_i d_j log det M
        Hl = np.zeros(M.shape)
        for i in range(n):
            Ai = Minv @ (t * self.dQ[i])
            for j in range(n):
                Aj = Minv @ (t * self.dQ[j])
                val = np.trace(Minv @ (t * self.ddQ[i, j]), axis1=-2, axis2=-1) - np.trace(Ai @ Aj, axis1=-2, axis2=-1)
                Hl[..., i, j] = val * self.g[i] * self.g[j]
        R = self.rho * eye - Hl
        trace = np.trace(Minv @ R, axis1=-2, axis2=-1)
        phi = self._d()
        integrand = -phi * det * (trace - n * self.mu)
        return float(np.sum(integrand * self.weight))


def mabuchi_path(sample: PotentialSample, nodes: Optional[int] = None, time_steps: int = 16) -> float:
    """M along the linear path t*phi by Gauss-Legendre quadrature in space and time."""
    sample.check()
    nodes = nodes or (400 if sample.geometry.n == 1 else 128)
    f = _PathIntegrand(sample, nodes)
    ts, wt = _gauss(time_steps)
    return float(sum(w * f(t) for t, w in zip(ts, wt)))


def mabuchi(
    sample: PotentialSample,
    method: str = "closed-form",
    grid: Optional[int] = None,
    time_steps: int = 16,
    budget: float = 1e-3,
) -> tuple[float, float]:
    """(M, error estimate) by either route."""
    if method == "closed-form":
        r = evaluate(sample, grid, budget=budget)
        return r.M, r.error["M"]
    if method == "path-integral":
        nodes = grid or (400 if sample.geometry.n == 1 else 128)
        fine = mabuchi_path(sample, nodes, time_steps)
        coarse = mabuchi_path(sample, max(nodes * 3 // 4, 8), max(time_steps * 3 // 4, 4))
        err = abs(fine - coarse)
        if err > budget * (1.0 + abs(fine)):
            raise QuadratureDivergence(f"path integral error estimate {err:.3g} exceeds budget")
        return fine, err
    raise ValueError(f"unknown method {method!r}")
