import cmath
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from dyntwist.scalars import (
    CycScalar,
    RootOfUnity,
    as_root_of_unity,
    cyclotomic_coeffs,
)


def z(n, k=1):
    return CycScalar.zeta(n, k)


def test_cyclotomic_polynomials_small():
    assert cyclotomic_coeffs(1) == (-1, 1)
    assert cyclotomic_coeffs(2) == (1, 1)
    assert cyclotomic_coeffs(3) == (1, 1, 1)
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)
    assert cyclotomic_coeffs(12) == (1, 0, -1, 0, 1)


def test_rational_arithmetic():
    a = CycScalar(Fraction(2, 3))
    b = CycScalar(Fraction(-1, 6))
    assert (a + b).rational() == Fraction(1, 2)
    assert (a * b).rational() == Fraction(-1, 9)
    assert (a / b).rational() == Fraction(-4)
    assert a - a == CycScalar(0)
    assert not (a - a)


def test_zeta_relations():
    # zeta_n^n = 1 and the full sum over all powers vanishes (n > 1)
    for n in (2, 3, 4, 5, 6, 7, 12):
        zn = z(n)
        assert zn ** n == CycScalar(1)
        total = CycScalar(0)
        for k in range(n):
            total = total + zn ** k
        assert total.is_zero()


def test_lift_of_zeta3_sum_is_minus_one():
    # zeta_3 + zeta_3^2 = -1, and the equality survives lifting into order 6
    s = z(3, 1) + z(3, 2)
    assert s == CycScalar(-1)
    assert s.lift(6) == CycScalar(-1)
    assert s.lift(6).order == 6


def test_inverse_of_one_plus_i():
    # (1 + zeta_4)^(-1) = (1 - zeta_4)/2
    s = CycScalar(1, 4) + z(4)
    inv = s.inverse()
    assert inv * s == CycScalar(1)
    assert inv.coeffs() == (Fraction(1, 2), Fraction(-1, 2))


def test_conjugate_is_inverse_on_roots():
    assert z(5, 2).conjugate() == z(5, 3)
    assert z(7, 1).conjugate() == z(7, 6)
    s = z(5) + CycScalar(Fraction(1, 2))
    assert (s * s.conjugate()).conjugate() == s * s.conjugate()


def test_mixed_order_operations_lift_automatically():
    s = z(3) * z(4)  # = zeta_12^7
    assert s.order == 12
    assert s == z(12, 7)
    assert z(2) == CycScalar(-1)


def test_literal_round_trip():
    s = CycScalar.from_coeffs(5, [Fraction(1, 3), 0, Fraction(-7, 2), 1])
    assert CycScalar.parse(s.literal()) == s
    assert s.literal() == "cyc 5: 1/3,0,-7/2,1"
    t = CycScalar.parse("cyc 4: 1,1")
    assert t == CycScalar(1, 4) + z(4)


def test_complex_embedding_agrees():
    s = z(7, 3) + CycScalar(Fraction(1, 2)) * z(7, 5)
    approx = complex(s)
    direct = cmath.exp(2j * cmath.pi * 3 / 7) + 0.5 * cmath.exp(2j * cmath.pi * 5 / 7)
    assert abs(approx - direct) < 1e-12


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CycScalar(0).inverse()
    with pytest.raises(ZeroDivisionError):
        z(3) / CycScalar(0)


def test_root_of_unity_canonical_form():
    assert RootOfUnity(6, 2) == RootOfUnity(3, 1)
    assert RootOfUnity(6, 3) == RootOfUnity(2, 1)
    assert RootOfUnity(5, 0) == RootOfUnity(1, 0)
    r = RootOfUnity(4, 1) * RootOfUnity(4, 3)
    assert r == RootOfUnity(1, 0)
    assert RootOfUnity(5, 2).inverse() == RootOfUnity(5, 3)
    assert RootOfUnity(5, 2).to_cyc() == z(5, 2)
    assert RootOfUnity(3, 1).to_cyc(6) == z(3).lift(6)


def test_as_root_of_unity_recognizes_signs():
    assert as_root_of_unity(z(5, 3)) == RootOfUnity(5, 3)
    assert as_root_of_unity(-z(5, 1)) == RootOfUnity(10, 7)
    assert as_root_of_unity(CycScalar(1, 5)) == RootOfUnity(1, 0)
    assert as_root_of_unity(z(5) + CycScalar(1, 5)) is None
    # cross-check: the recognized root re-embeds to the original value
    r = as_root_of_unity(-z(5, 1))
    assert r is not None and r.to_cyc(10) == (-z(5, 1)).lift(10)


small_orders = st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 12])


@st.composite
def scalars(draw, order=None):
    n = draw(small_orders) if order is None else order
    phi = len(cyclotomic_coeffs(n)) - 1
    coeffs = draw(
        st.lists(
            st.fractions(min_value=-5, max_value=5, max_denominator=6),
            min_size=phi,
            max_size=phi,
        )
    )
    return CycScalar.from_coeffs(n, coeffs)


@given(scalars(), scalars(), scalars())
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a + CycScalar(0) == a
    assert a * CycScalar(1) == a


@given(scalars())
@settings(max_examples=60, deadline=None)
def test_inverse_and_conjugate(a):
    if not a.is_zero():
        assert a * a.inverse() == CycScalar(1)
        assert a.inverse().inverse() == a
    assert a.conjugate().conjugate() == a


@given(scalars(), scalars())
@settings(max_examples=40, deadline=None)
def test_conjugation_is_a_ring_map(a, b):
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(scalars(), scalars(), st.sampled_from([2, 3, 4]))
@settings(max_examples=40, deadline=None)
def test_lift_is_an_embedding(a, b, mult):
    m = lcm(a.order, b.order) * mult
    assert (a + b).lift(m) == a.lift(m) + b.lift(m)
    assert (a * b).lift(m) == a.lift(m) * b.lift(m)


@given(scalars())
@settings(max_examples=60, deadline=None)
def test_literal_round_trip_random(a):
    assert CycScalar.parse(a.literal()) == a
