"""Independent quadrature oracles for the closed-form functionals."""

import mpmath as mp
import numpy as np
import pytest

from coercivity_kit.lab import GeometrySpec, draw_sample, evaluate, reference_sample
from coercivity_kit.lab.geometry import moment_to_log
from coercivity_kit.lab.potentials import Logistic, MobiusShift

mp.mp.dps = 30
SPHERE = GeometrySpec("sphere")
PRODUCT = GeometrySpec("product")


def _sig(z):
    return 1 / (1 + mp.e ** (-z))


def _block(f, s):
    """(value, second derivative) of one building block, in mpmath."""
    if isinstance(f, Logistic):
        z = f.a * (s - f.s0)
        g = _sig(z)
        return g, f.a**2 * g * _sig(-z) * (1 - 2 * g)
    if isinstance(f, MobiusShift):
        val = mp.log(1 + mp.e ** (s + f.c)) - mp.log(1 + mp.e**s)
        return val, _sig(s + f.c) * _sig(-s - f.c) - _sig(s) * _sig(-s)
    raise TypeError(f)


def sphere_oracle(sample):
    phi = sample.potential

    def parts(s):
        v, d2 = mp.mpf(phi.shift), mp.mpf(0)
        for coef, (f,) in phi.terms:
            a, b = _block(f, s)
            v += coef * a
            d2 += coef * b
        p = _sig(s) * _sig(-s)
        return v, d2, p

    def integral(fn):
        # the densities decay like e^(-|s|); beyond |s| = 90 they are below 1e-39
        return mp.quad(fn, [-90, -30, -10, -3, 0, 3, 10, 30, 90])

    J0 = integral(lambda s: (lambda v, d2, p: v * (p + d2))(*parts(s)))
    J1 = integral(lambda s: (lambda v, d2, p: v * p)(*parts(s)))
    H = integral(lambda s: (lambda v, d2, p: (p + d2) * mp.log((p + d2) / p))(*parts(s)))
    return {"I": float(J1 - J0), "E": float(J0 - J1), "H": float(H)}


def product_oracle(sample, nodes=160):
    """Gauss-Legendre in the moment coordinates, where every density is bounded."""
    z, w = np.polynomial.legendre.leggauss(nodes)
    x, w = (z + 1) / 2, w / 2
    s = moment_to_log(x)
    jet = sample.potential.jet([s, s], order=2)
    p = x * (1 - x)
    p1, p2 = p[:, None], p[None, :]
    phi = jet[(0, 0)]
    a, d, b = p1 + jet[(2, 0)], p2 + jet[(0, 2)], jet[(1, 1)]
    # densities with respect to dx1 dx2
    m_phi = 2 * (a * d - b * b) / (p1 * p2)
    m_mix = (p1 * d + a * p2) / (p1 * p2)
    m_base = 2.0 * np.ones_like(m_phi)
    W = w[:, None] * w[None, :]
    J = [float(np.sum(W * phi * m)) for m in (m_phi, m_mix, m_base)]
    H = float(np.sum(W * m_phi * np.log(m_phi / m_base)))
    I = J[2] - J[0]
    E = 2 * 2 / 3 * sum(J) - 2 * (J[1] + J[2])
    return {"I": I, "E": E, "H": H}


def _close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), 1e-3)


def _within_estimate(rep, want, key):
    """The reported error estimate must bound the true error."""
    return abs(getattr(rep, key) - want[key]) <= max(rep.error[key], 1e-9)


@pytest.mark.parametrize("which", [0, 1])
def test_sphere_reference_against_mpmath(which):
    s = reference_sample(SPHERE, which)
    rep, want = evaluate(s), sphere_oracle(s)
    for key in ("I", "E", "H"):
        assert _close(getattr(rep, key), want[key], 1e-6), (key, getattr(rep, key), want[key])
        assert _within_estimate(rep, want, key)


@pytest.mark.parametrize("index", range(6))
def test_sphere_random_against_mpmath(index):
    s = draw_sample(SPHERE, 42, index)
    rep, want = evaluate(s), sphere_oracle(s)
    for key in ("I", "E", "H"):
        assert _close(getattr(rep, key), want[key], 1e-6), (key, getattr(rep, key), want[key])
        assert _within_estimate(rep, want, key)


@pytest.mark.parametrize("which", [0, 1])
def test_product_reference_against_gauss(which):
    s = reference_sample(PRODUCT, which)
    rep, want = evaluate(s), product_oracle(s)
    for key in ("I", "E", "H"):
        assert _close(getattr(rep, key), want[key], 1e-4), (key, getattr(rep, key), want[key])
        assert _within_estimate(rep, want, key)


@pytest.mark.parametrize("index", range(3))
def test_product_random_against_gauss(index):
    s = draw_sample(PRODUCT, 7, index)
    rep, want = evaluate(s), product_oracle(s)
    for key in ("I", "E", "H"):
        assert _close(getattr(rep, key), want[key], 1e-4), (key, getattr(rep, key), want[key])
        assert _within_estimate(rep, want, key)


def test_jets_against_mpmath_derivatives():
    s = draw_sample(SPHERE, 3, 0)
    phi = s.potential
    pts = np.array([-4.0, -0.7, 0.0, 1.3, 5.0])
    jet = phi.jet([pts], order=4)

    def f(t):
        v = mp.mpf(phi.shift)
        for coef, (g,) in phi.terms:
            v += coef * _block(g, t)[0]
        return v

    for i, t in enumerate(pts):
        for k in range(5):
            want = float(mp.diff(f, mp.mpf(t), k))
            assert abs(jet[(k,)][i] - want) <= 1e-9 * (1 + abs(want))
