import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coercivity_kit.errors import DegenerateInput, DivideByZero, MixedSurdFields
from coercivity_kit.scalar import ExactScalar, QuadraticPoly, parse_scalar, quad_roots

from conftest import fractions, surds

getcontext().prec = 60


def high(x: ExactScalar) -> Decimal:
    """Independent 60-digit evaluation."""
    return (Decimal(x.a) + Decimal(x.b) * Decimal(x.d).sqrt()) / Decimal(x.q)


field = st.sampled_from([2, 3, 5, 10]).flatmap(lambda d: st.tuples(surds(d), surds(d), surds(d)))


@given(field)
def test_field_axioms(xyz):
    x, y, z = xyz
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x != 0:
        assert x * (1 / x) == 1


@given(surds(), surds())
def test_order_matches_high_precision(x, y):
    if x.d != y.d and not (x.is_rational or y.is_rational):
        return
    hx, hy = high(x), high(y)
    if hx != hy:
        assert (x < y) == (hx < hy)
    assert x.sign() == (hx > 0) - (hx < 0)


@given(surds())
def test_parse_roundtrip(x):
    assert parse_scalar(str(x)) == x
    assert ExactScalar.from_json(x.to_json()) == x


@pytest.mark.parametrize(
    "text, value",
    [
        ("7", ExactScalar(7)),
        ("-3/4", ExactScalar(-3, 0, 0, 4)),
        ("(1+0*sqrt(0))/1", ExactScalar(1)),
        ("(10-sqrt(10))/9", ExactScalar(10, -1, 10, 9)),
        ("sqrt(10)-2", ExactScalar(-2, 1, 10)),
        ("sqrt(8)", ExactScalar(0, 2, 2)),
    ],
)
def test_parse_literals(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "1.5", "sqrt(", "2sqrt(3)", "1//2", "(1+2)/0"])
def test_parse_rejects(text):
    with pytest.raises((ValueError, ArithmeticError)):
        parse_scalar(text)


def test_canonical_form():
    x = ExactScalar(2, 4, 8, 6)  # (2 + 8 sqrt 2)/6 = (1 + 4 sqrt 2)/3
    assert (x.a, x.b, x.d, x.q) == (1, 4, 2, 3)
    assert ExactScalar(3, 2, 9, 1) == 9
    assert ExactScalar.sqrt(Fraction(1, 4)) == Fraction(1, 2)


def test_mixed_fields_raise():
    with pytest.raises(MixedSurdFields):
        ExactScalar.sqrt(2) + ExactScalar.sqrt(3)
    with pytest.raises(MixedSurdFields):
        parse_scalar("sqrt(2)+sqrt(3)")


def test_division_by_zero():
    with pytest.raises(DivideByZero):
        ExactScalar(1) / ExactScalar(0)
    with pytest.raises(DivideByZero):
        ExactScalar(1, 0, 0, 0)


def test_sqrt10_ordering():
    lo, hi = ExactScalar(10, -1, 10, 9), ExactScalar(-2, 1, 10)
    assert Fraction(19, 25) > lo > Fraction(3, 4)
    assert Fraction(29, 25) < hi < Fraction(117, 100)
    assert abs(float(lo) - (10 - math.sqrt(10)) / 9) < 1e-15


@given(fractions, fractions, fractions)
def test_quad_roots_are_roots(c2, c1, c0):
    p = QuadraticPoly(c2, c1, c0)
    if p.is_zero:
        with pytest.raises(DegenerateInput):
            quad_roots(p)
        return
    roots = quad_roots(p)
    assert roots == sorted(roots)
    for r in roots:
        assert p(r) == 0
    if p.degree == 2:
        assert len(roots) == (0 if p.discriminant < 0 else 1 if p.discriminant == 0 else 2)
