from fractions import Fraction

import pytest

from coercivity_kit import algebraic as alg
from coercivity_kit.alpha import eval_alpha, load_fixture, model_from_json
from coercivity_kit.criteria import alpha_slope_check, extension_check, lsy_check
from coercivity_kit.errors import DenominatorSignChange, NotApplicable
from coercivity_kit.intervals import IntervalSet, compare_intervals
from coercivity_kit.lattice import DivisorClass, Pencil, SurfaceSpec, dp8_pencil
from coercivity_kit.pencil import clause_to_polys, margin_table, sample_points, sweep
from coercivity_kit.scalar import ExactScalar

DP8 = SurfaceSpec.blowup(8)
LO = ExactScalar(10, -1, 10, 9)
HI = ExactScalar(-2, 1, 10)
FIXTURES = ["dp8_constant", "dp8_monotone_bound"]
CHECKS = {"alpha-slope": alpha_slope_check, "extension": extension_check, "lsy": lsy_check}


@pytest.fixture(scope="module")
def assumed():
    return sweep(dp8_pencil(), "alpha-slope", assume_alpha=True)


def test_assumed_alpha_interval(assumed):
    assert assumed.region == IntervalSet.open(LO, HI)
    lo, hi = assumed.binding("lower"), assumed.binding("upper")
    assert lo.witness.cls == DivisorClass(DP8, (6,) + (2,) * 7 + (3,))
    assert hi.witness.cls == DP8.exceptional(8)
    assert lo.source == hi.source == "slope-nef"


def test_endpoints_are_roots(assumed):
    for b in assumed.bindings:
        assert alg.sign_at(b.poly, b.endpoint) == 0
    assert alg.monic(assumed.binding("lower").poly) == alg.monic((-9, 20, -10))
    assert alg.monic(assumed.binding("upper").poly) == alg.monic((-1, -4, 6))


def test_dedup_counts(assumed):
    assert assumed.distinct_polys < assumed.clause_polys


def _pointwise(report, count=200):
    pts = sample_points(report, count)
    assert len(pts) >= count - 2
    bad = []
    for t in pts:
        L = report.pencil.at(t)
        if report.assume_alpha:
            v = alpha_slope_check(L, 10**6)
            holds = [c for c in v.conditions if c.name == "difference-nef"][0].holds
            # the sweep is strict, so points where the nef margin is exactly 0 are excluded
            holds = holds and v.conditions[1].margin != 0
        else:
            holds = CHECKS[report.criterion](L, eval_alpha(report.alpha_model, t)).holds
        if holds != report.region.contains(t):
            bad.append(t)
    return bad


def test_pointwise_assumed(assumed):
    assert _pointwise(assumed) == []


@pytest.mark.parametrize("fixture", FIXTURES)
@pytest.mark.parametrize("criterion", ["alpha-slope", "extension", "lsy"])
def test_pointwise_against_criteria(fixture, criterion):
    rep = sweep(dp8_pencil(), criterion, load_fixture(fixture))
    assert _pointwise(rep) == []
    for b in rep.bindings:
        if b.poly:
            assert alg.sign_at(b.poly, b.endpoint) == 0


@pytest.mark.parametrize("fixture", FIXTURES)
def test_extension_contains_alpha_slope(fixture):
    m = load_fixture(fixture)
    d = sweep(dp8_pencil(), "alpha-slope", m).region
    e = sweep(dp8_pencil(), "extension", m).region
    assert d.issubset(e)
    assert compare_intervals(e, d) in ("equal", "a-strictly-contains-b")


def test_constant_fixture_values():
    m = load_fixture("dp8_constant")
    assert sweep(dp8_pencil(), "alpha-slope", m).region == IntervalSet.open(LO, ExactScalar(2, 1, 14, 5))
    assert sweep(dp8_pencil(), "lsy", m).region == IntervalSet.open(Fraction(4, 5), Fraction(16, 15))


@pytest.mark.parametrize("s", [Fraction(2), Fraction(3), Fraction(1, 5)])
@pytest.mark.parametrize("criterion", ["alpha-slope", "extension", "lsy"])
def test_sweep_scaling_invariance(s, criterion):
    m = load_fixture("dp8_monotone_bound")
    base = sweep(dp8_pencil(), criterion, m).region
    scaled = sweep(dp8_pencil().scaled(s), criterion, m.scaled(s)).region
    assert scaled == base


def test_range_restriction(assumed):
    r = sweep(dp8_pencil(), "alpha-slope", assume_alpha=True, range=(Fraction(1), Fraction(1)))
    assert r.region == IntervalSet.closed(1, 1)
    with pytest.raises(ValueError):
        sweep(dp8_pencil(), "alpha-slope", assume_alpha=True, range=(Fraction(1), Fraction(2)))


def test_argument_errors():
    with pytest.raises(NotApplicable):
        sweep(dp8_pencil(), "lsy", assume_alpha=True)
    with pytest.raises(ValueError):
        sweep(dp8_pencil(), "lsy")
    other = Pencil(DP8.anticanonical(), DivisorClass(DP8, (0,) * 8 + (1,)))
    with pytest.raises(ValueError, match="family"):
        sweep(other, "alpha-slope", load_fixture("dp8_constant"))


def test_denominator_sign_change():
    m = model_from_json(
        {
            "family": {"surface": "dp8", "base": "3,1,1,1,1,1,1,1,0", "direction": "0,0,0,0,0,0,0,0,1"},
            "pieces": [{"interval": ["0", "4/3"], "num": ["0", "0", "1"], "den": ["0", "1", "-1"]}],
        }
    )
    with pytest.raises(DenominatorSignChange):
        sweep(dp8_pencil(), "alpha-slope", m)


def test_clause_structure():
    """A constant L.C still leaves a quadratic nef clause, because L^2 and -K.L vary."""
    polys = clause_to_polys(dp8_pencil(), "slope-nef")
    const_lc = [p for p in polys if p.witness.cls.coeffs[-1] == 0]
    assert const_lc and all(p.degree <= 2 for p in polys)
    assert any(p.degree == 2 for p in const_lc)
    piece = load_fixture("dp8_constant").pieces[0]
    assert max(p.degree for p in clause_to_polys(dp8_pencil(), "extension-ample", piece)) == 3


def test_margin_table_shape(assumed):
    header, rows = margin_table(assumed, 50)
    assert header[:2] == ["t", "in_region"]
    assert all(len(r) == len(header) for r in rows)
    m = load_fixture("dp8_constant")
    header, rows = margin_table(sweep(dp8_pencil(), "extension", m), 50)
    assert all(len(r) == len(header) for r in rows)
    for r in rows:
        assert bool(r[1]) == all(v > 0 for v in r[2:])


def test_report_json(assumed):
    js = assumed.to_json()
    assert js["schema"] == 1
    assert js["region"]["intervals"][0]["lo"]["exact"] == "(10-1*sqrt(10))/9"
    assert "L_t" in js["parameter"]
