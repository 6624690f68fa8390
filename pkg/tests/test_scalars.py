"""Tests for exact radical arithmetic and spectral-parameter forms."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3rep.scalars import ONE, ZERO, LambdaForm, RadicalScalar


def test_square_extraction_canonicalizes():
    assert RadicalScalar({8: 1}) == RadicalScalar({2: 2})
    assert RadicalScalar({12: Fraction(1, 2)}) == RadicalScalar({3: 1})
    assert RadicalScalar({9: 1}) == RadicalScalar.from_rational(3)


def test_sqrt_rational():
    r = RadicalScalar.sqrt_rational(Fraction(1, 10))
    assert r == RadicalScalar({10: Fraction(1, 10)})
    assert abs(float(r) - math.sqrt(0.1)) < 1e-15
    assert RadicalScalar.sqrt_rational(0).is_zero()
    with pytest.raises(ValueError):
        RadicalScalar.sqrt_rational(-1)


def test_mul_combines_radicands():
    s2 = RadicalScalar.sqrt_rational(2)
    s3 = RadicalScalar.sqrt_rational(3)
    s6 = RadicalScalar.sqrt_rational(6)
    assert s2 * s3 == s6
    assert s2 * s2 == RadicalScalar.from_rational(2)
    assert s6 * s2 == RadicalScalar({3: 2})  # sqrt(12) = 2 sqrt(3)


def test_inverse_and_division():
    r = RadicalScalar({10: Fraction(1, 10)})
    assert r * r.inverse() == ONE
    assert (r / r) == ONE
    with pytest.raises(ValueError):
        (ONE + RadicalScalar.sqrt_rational(2)).inverse()


def test_zero_semantics():
    assert (ONE - ONE).is_zero()
    assert not ONE.is_zero()
    assert bool(ZERO) is False
    assert ZERO + ONE == ONE


def test_as_rational():
    assert RadicalScalar.from_rational(Fraction(3, 7)).as_rational() == Fraction(3, 7)
    with pytest.raises(ValueError):
        RadicalScalar.sqrt_rational(2).as_rational()


def test_json_round_trip():
    r = RadicalScalar({1: Fraction(-2, 3), 10: Fraction(1, 10)})
    assert RadicalScalar.from_json(r.to_json()) == r


rationals = st.fractions(max_denominator=40)
radicands = st.integers(min_value=1, max_value=50)


@st.composite
def radical_scalars(draw):
    n = draw(st.integers(min_value=0, max_value=3))
    return RadicalScalar({draw(radicands): draw(rationals) for _ in range(n)})


@given(radical_scalars(), radical_scalars(), radical_scalars())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert (a - a).is_zero()


@given(radical_scalars(), radical_scalars())
@settings(max_examples=60, deadline=None)
def test_float_consistency(a, b):
    assert float(a * b) == pytest.approx(float(a) * float(b), rel=1e-9, abs=1e-9)
    assert float(a + b) == pytest.approx(float(a) + float(b), rel=1e-9, abs=1e-9)


def test_lambda_form_canonical_equality():
    # forms differing by a multiple of l1 + l2 + l3 are equal
    f = LambdaForm(const=1, c1=ONE, c2=ONE, c3=ONE)
    g = LambdaForm(const=1)
    assert f == g
    assert (f - g).is_zero()


def test_lambda_form_eval():
    f = LambdaForm(const=1, c1=ONE, c2=-ONE)  # l1 - l2 + 1
    assert f.eval((0.5, -0.25, -0.25)) == pytest.approx(1.75)
    assert f.eval_exact((Fraction(1, 2), Fraction(-1, 4), Fraction(-1, 4))) \
        == RadicalScalar.from_rational(Fraction(7, 4))
    with pytest.raises(ValueError):
        f.eval((1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        f.eval_exact((1, 1, 1))


def test_lambda_form_scalar_mul():
    f = LambdaForm(const=2, c1=ONE)
    s = RadicalScalar.sqrt_rational(2)
    g = f * s
    assert g.eval_exact((1, 0, -1)) == s * 3
