import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coercivity_kit.errors import PositivityViolation
from coercivity_kit.lab import (
    GeometrySpec,
    Logistic,
    Potential,
    adversarial_sample,
    coercivity_witness,
    draw_sample,
    evaluate,
    lemma_suite,
    mabuchi,
    make_sample,
    mobius_sample,
    path_agreement,
    raw_values,
    reference_sample,
    refinement_ratios,
)
from coercivity_kit.lab.geometry import base_hessian, base_ricci_density, log_to_moment, moment_to_log
from coercivity_kit.lab.potentials import sup_value
from coercivity_kit.lab.suite import check_sample

SPHERE = GeometrySpec("sphere")
PRODUCT = GeometrySpec("product")
GEOMS = [SPHERE, PRODUCT]


def test_geometry_spec():
    assert GeometrySpec.parse("P1xP1") == PRODUCT
    assert SPHERE.volume == 1 and PRODUCT.volume == 2
    assert SPHERE.slope == PRODUCT.slope == 2
    with pytest.raises(ValueError):
        GeometrySpec.parse("torus")


def test_base_metric_is_einstein():
    s = np.linspace(-8, 8, 41)
    assert np.allclose(base_ricci_density(s), 2 * base_hessian(s), atol=1e-8)
    assert np.allclose(log_to_moment(moment_to_log([0.1, 0.5, 0.9])), [0.1, 0.5, 0.9])


@pytest.mark.parametrize("geom", GEOMS)
def test_samples_are_deterministic_and_normalized(geom):
    a, b = draw_sample(geom, 11, 3), draw_sample(geom, 11, 3)
    assert a.potential == b.potential
    assert a.certificate > 0.05
    sup, _ = sup_value(a.potential)
    assert abs(sup) < 1e-9


def test_bad_potential_is_rejected():
    phi = Potential(1, ((-40.0, (Logistic(3, 0.0),)),))
    sample = make_sample(SPHERE, phi)
    assert sample.certificate < 0
    with pytest.raises(PositivityViolation):
        evaluate(sample)


@pytest.mark.parametrize("geom", GEOMS)
def test_zero_potential(geom):
    sample = make_sample(geom, Potential.zero(geom.n))
    r = evaluate(sample)
    assert abs(r.I) < 1e-14 and abs(r.H) < 1e-14 and abs(r.E) < 1e-14


@pytest.mark.parametrize("geom", GEOMS)
@pytest.mark.parametrize("c", [-1.0, 0.7])
def test_mobius_pullbacks_are_critical(geom, c):
    r = evaluate(mobius_sample(geom, c))
    assert abs(r.M) < 1e-6
    assert r.I > 0


@pytest.mark.parametrize("index", range(5))
def test_sphere_energy_is_minus_aubin(index):
    r = evaluate(draw_sample(SPHERE, 42, index))
    assert abs(r.E + r.I) < 1e-9 * (1 + r.I)


@pytest.mark.parametrize("geom", GEOMS)
@given(shift=st.floats(-3, 3))
def test_translation_invariance(geom, shift):
    s = reference_sample(geom, 0)
    a, b = evaluate(s), evaluate(s.shifted(shift))
    assert abs(a.M - b.M) < 1e-9 and abs(a.I - b.I) < 1e-9


@pytest.mark.parametrize("geom", GEOMS)
def test_residuals_and_summands(geom):
    for i in range(4):
        res, bad, breach = check_sample(draw_sample(geom, 5, i), 0.9, 0.5)
        assert bad == [] and breach == []
        assert len(res.report.summands) == geom.n


@pytest.mark.parametrize("geom", GEOMS)
def test_refinement_is_second_order(geom):
    grids = (64, 128, 256) if geom.n == 1 else (32, 64, 128)
    ratios = refinement_ratios(reference_sample(geom, 1), grids)
    for key, r in ratios.items():
        assert 3 <= r <= 5, (key, r)


@pytest.mark.parametrize("geom", GEOMS)
def test_path_integral_agrees(geom):
    for which in (0, 1):
        agr = path_agreement(reference_sample(geom, which))
        assert agr["relative"] < 1e-4


def test_mabuchi_methods():
    s = reference_sample(SPHERE, 0)
    m1, e1 = mabuchi(s, "closed-form")
    m2, e2 = mabuchi(s, "path-integral")
    assert abs(m1 - m2) < 1e-6
    with pytest.raises(ValueError):
        mabuchi(s, "monte-carlo")


def test_adversarial_sample_is_flagged():
    s = adversarial_sample(SPHERE)
    assert not s.sup_normalized
    res, bad, breach = check_sample(s, 0.9, 0.0)
    assert bad == []
    assert {v.check for v in breach} & {"r26", "r27"}
    assert all(v.precondition_breach for v in breach)


def test_raw_values_reject_folded_map():
    phi = Potential(1, ((-40.0, (Logistic(3, 0.0),)),))
    sample = make_sample(SPHERE, phi)
    with pytest.raises(PositivityViolation):
        raw_values(sample, 256)


def test_small_suite_and_witness():
    rep = lemma_suite(SPHERE, 12, seed=42)
    assert rep.ok
    js = rep.to_json()
    assert js["samples"] == 12 and js["schema"] == 1
    header, rows = rep.rows()
    assert header == ["sample_id", "I", "H", "E", "M", "r23", "r25", "r26", "r27"]
    assert len(rows) == 12
    w = rep.witness
    assert w["ok"] and w["a"] > 0
    assert all(r.report.M >= w["a"] * r.report.I + w["b"] - 1e-12 for r in rep.results)


def test_witness_flags_nonpositive_slope():
    class R:
        def __init__(self, I, M):
            self.report = type("F", (), {"I": I, "M": M})

    w = coercivity_witness([R(1.0, -0.5), R(2.0, 1.0)], b=-0.01)
    assert w["a"] < 0 and not w["ok"]
    assert not coercivity_witness([])["ok"]


def test_beta_limit_on_sphere():
    with pytest.raises(ValueError):
        lemma_suite(SPHERE, 1, beta=1.0)


def test_report_json_finite():
    r = evaluate(reference_sample(PRODUCT, 0)).to_json()
    assert all(math.isfinite(r[k]) for k in ("I", "H", "E", "M"))
