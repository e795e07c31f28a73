import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coercivity_kit.alpha import (
    AlphaModel,
    Family,
    check_continuity_modulus,
    check_monotonicity,
    check_scaling,
    constant_model,
    continuity_budget,
    default_pairs,
    eval_alpha,
    fixture_names,
    load_fixture,
    load_model,
    minimal_gamma,
    model_from_json,
    ray_model,
    validate_model,
)
from coercivity_kit.cones import threshold
from coercivity_kit.errors import EpsilonTooLarge, ModelFormatError, NotApplicable, OutOfDomain, PairOutsideCone
from coercivity_kit.lattice import DivisorClass, SurfaceSpec, dp8_pencil
from coercivity_kit.scalar import ExactScalar

DP8 = SurfaceSpec.blowup(8)
MINUS_K = DP8.anticanonical()
positive = st.builds(Fraction, st.integers(1, 50), st.integers(1, 20))


def test_fixtures_ship():
    assert fixture_names() == ["dp8_anticanonical_ray", "dp8_constant", "dp8_monotone_bound"]
    assert fixture_names(negative=True) == ["dp8_jump"]


@pytest.mark.parametrize("name", ["dp8_anticanonical_ray", "dp8_constant", "dp8_monotone_bound"])
def test_shipped_fixtures_validate(name):
    m = load_fixture(name)
    assert validate_model(m) == []
    assert m.provenance
    assert check_continuity_modulus(m).ok


def test_negative_fixture_fails():
    m = load_fixture("dp8_jump", negative=True)
    assert any("jump" in issue for issue in validate_model(m))
    rep = check_continuity_modulus(m)
    assert not rep.ok
    assert all(f.t < 1 < f.t2 or f.t2 < 1 < f.t or 1 in (f.t, f.t2) for f in rep.failures)


def test_eval_and_domain():
    m = load_fixture("dp8_monotone_bound")
    assert eval_alpha(m, 1) == Fraction(5, 6)
    assert eval_alpha(m, Fraction(1, 2)) == Fraction(5, 9)
    with pytest.raises(OutOfDomain):
        eval_alpha(m, Fraction(3, 2))


def test_surd_coefficients_evaluate():
    obj = {"pieces": [{"interval": ["0", "2"], "num": ["0", "0", "sqrt(2)"], "den": ["0", "1", "1"]}]}
    m = model_from_json(obj)
    assert eval_alpha(m, 1) == ExactScalar.sqrt(2) / 2


@pytest.mark.parametrize(
    "obj",
    [
        {"pieces": [{"interval": [0, 1]}]},
        {"pieces": "x"},
        [{"interval": ["1", "0"], "num": ["1"]}],
        {"schema": 2, "pieces": []},
        {"pieces": [{"interval": ["0", "1"], "num": ["1"]}], "family": {"surface": "dp8", "base": "3,1"}},
    ],
)
def test_malformed_models(obj):
    with pytest.raises(ModelFormatError):
        model_from_json(obj)


def test_load_model_bad_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("{not json")
    with pytest.raises(ModelFormatError):
        load_model(p)
    p.write_text(json.dumps([{"interval": ["0", "1"], "num": ["0", "0", "1"], "den": ["0", "0", "1"]}]))
    assert load_model(p).name == "m"


def test_validate_reports_structure():
    obj = [
        {"interval": ["0", "2"], "num": ["0", "0", "1"], "den": ["0", "0", "1"]},
        {"interval": ["1", "3"], "num": ["0", "0", "1"], "den": ["0", "1", "-2"]},
    ]
    issues = validate_model(model_from_json(obj))
    text = " ".join(issues)
    assert "overlap" in text
    assert "denominator" in text or "non-positive" in text


def test_scaling_law_on_ray():
    m = load_fixture("dp8_anticanonical_ray")
    rep = check_scaling(m, [(1, 2), (Fraction(1, 3), 5), (2, Fraction(1, 7))])
    assert rep.ok
    assert eval_alpha(m, 2) == Fraction(5, 12)


def test_scaling_not_applicable_off_ray():
    with pytest.raises(NotApplicable):
        check_scaling(load_fixture("dp8_constant"), [(1, 2)])


def test_monotonicity_law():
    ray = ray_model(Fraction(5, 6), MINUS_K)
    rep = check_monotonicity(ray, ray, MINUS_K, [Fraction(1, 2), 1, 3])
    assert rep.ok
    with pytest.raises(NotApplicable):
        check_monotonicity(ray, ray, DP8.exceptional(8))


def test_monotonicity_detects_increase():
    growing = model_from_json(
        {
            "family": {"surface": "dp8", "ray": "3,1,1,1,1,1,1,1,1"},
            "pieces": [{"interval": ["0", None], "num": ["0", "1", "0"], "den": ["0", "0", "1"]}],
        }
    )
    rep = check_monotonicity(growing, growing, MINUS_K, [1, 2])
    assert not rep.ok


@given(positive, positive, positive)
def test_continuity_budget_bound_is_half_epsilon(alpha, c, eps):
    b = continuity_budget(alpha, c, eps)
    assert b.bound == eps / 2
    assert b.delta == c * b.gamma
    assert b.gamma == eps / (2 * alpha + eps)


def test_epsilon_too_large():
    with pytest.raises(EpsilonTooLarge):
        continuity_budget(0, 1, 1)
    with pytest.raises(ValueError):
        continuity_budget(1, 0, 1)


def _gamma_oracle(family, t, t2):
    omega = family.at(t)
    eta = family.at(t2) - omega
    return max(threshold(omega, eta, "inf-ample"), threshold(omega, -eta, "inf-ample"), 0)


@given(st.integers(1, 132), st.integers(1, 132))
def test_minimal_gamma_matches_threshold_oracle(i, j):
    fam = load_fixture("dp8_constant").family
    t, t2 = Fraction(i, 100), Fraction(j, 100)
    assert minimal_gamma(fam, t, t2) == _gamma_oracle(fam, t, t2)


def test_pair_outside_cone():
    m = load_fixture("dp8_constant")
    with pytest.raises(PairOutsideCone):
        check_continuity_modulus(m, [(Fraction(1, 100), Fraction(13, 10))])


def test_default_pairs_straddle_knots():
    m = load_fixture("dp8_monotone_bound")
    pairs = default_pairs(m)
    assert any(a < 1 < b for a, b in pairs)
