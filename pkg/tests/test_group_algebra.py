"""Tests for sparse tensor elements of k[G]^(x)k and the weight machinery."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntwist.group_algebra import (
    TensorElement,
    apply_counit_leg,
    counit,
    delta,
    has_zero_weight,
    invert,
    invert_blockwise,
    shifted_pair,
    weight_component,
    weight_decomposition,
    weight_projector,
)
from dyntwist.groups import (
    Subgroup,
    affine_group,
    character_group,
    cyclic_group,
    klein_four_group,
    symmetric_group,
)
from dyntwist.scalars import CycScalar

HALF = CycScalar(Fraction(1, 2))
ONE = CycScalar(1)


def full_subgroup(G):
    return Subgroup(G, range(G.size))


# -- product / unit ----------------------------------------------------------------


def test_componentwise_product():
    G = cyclic_group(4)
    x = TensorElement.basis(G, (1, 2))
    y = TensorElement.basis(G, (3, 3))
    assert x * y == TensorElement.basis(G, (0, 1))
    u = TensorElement.unit(G, 2)
    assert u * x == x and x * u == x


def test_scalar_dispatch_and_linearity():
    G = cyclic_group(3)
    x = TensorElement.basis(G, (1,)) + TensorElement.basis(G, (2,)).scaled(HALF)
    y = x * CycScalar(2)
    assert y.coefficient((1,)) == CycScalar(2)
    assert y.coefficient((2,)) == ONE
    assert (x - x).is_zero()


# -- projectors ---------------------------------------------------------------------


def test_projector_coefficients_z2():
    # P_0 = (e + a)/2 and P_1 = (e - a)/2: the only weights of Z/2
    G = cyclic_group(2)
    A = full_subgroup(G)
    p0, p1 = [weight_projector(A, mu) for mu in character_group(A)]
    assert p0.coefficient((0,)) == HALF and p0.coefficient((1,)) == HALF
    assert p1.coefficient((0,)) == HALF and p1.coefficient((1,)) == -HALF


def test_projector_orthogonality_and_resolution():
    G = cyclic_group(6)
    A = full_subgroup(G)
    chars = character_group(A)
    projs = [weight_projector(A, mu) for mu in chars]
    total = TensorElement(G, 1)
    for i, p in enumerate(projs):
        total = total + p
        for j, q in enumerate(projs):
            expect = p if i == j else TensorElement(G, 1)
            assert p * q == expect
    assert total == TensorElement.unit(G, 1)


def test_group_element_acts_by_weight():
    # a . P_mu = mu(a) P_mu, frozen for the order-4 cyclic group
    G = cyclic_group(4)
    A = full_subgroup(G)
    chars = character_group(A)
    g = TensorElement.basis(G, (1,))
    for mu in chars:
        lhs = g * weight_projector(A, mu)
        rhs = weight_projector(A, mu).scaled(mu.scalar_at(1))
        assert lhs == rhs


# -- coproduct / counit --------------------------------------------------------------


def test_delta_of_projector_z2():
    # Delta(P_0) over Z/2 = (e(x)e + a(x)a)/2, derived by expanding
    # Delta((e+a)/2) = (e(x)e + a(x)a)/2
    G = cyclic_group(2)
    A = full_subgroup(G)
    p0 = weight_projector(A, character_group(A)[0])
    d = delta(p0)
    assert d.coefficient((0, 0)) == HALF
    assert d.coefficient((1, 1)) == HALF
    assert len(d.terms) == 2


def test_delta_splits_projector_into_weight_pairs():
    # Delta(P_nu) = sum_sigma P_sigma (x) P_{nu-sigma}
    G = cyclic_group(3)
    A = full_subgroup(G)
    chars = character_group(A)
    for nu in chars:
        lhs = delta(weight_projector(A, nu))
        rhs = TensorElement(G, 2)
        for sigma in chars:
            rhs = rhs + (
                weight_projector(A, sigma).embed(2, (0,))
                * weight_projector(A, nu - sigma).embed(2, (1,))
            )
        assert lhs == rhs


def test_counit_of_projector_is_weight_zero_indicator():
    G = cyclic_group(5)
    A = full_subgroup(G)
    for i, mu in enumerate(character_group(A)):
        eps = counit(weight_projector(A, mu))
        assert eps == (ONE if i == 0 else CycScalar(0))


def test_apply_counit_leg_contracts_one_leg():
    G = cyclic_group(3)
    x = TensorElement.basis(G, (1, 2)).scaled(CycScalar(3)) + TensorElement.basis(G, (0, 1))
    y = apply_counit_leg(x, 1)  # legs are 1-based in the public helper
    assert y.legs == 1
    assert y.coefficient((2,)) == CycScalar(3)
    assert y.coefficient((1,)) == ONE
    with pytest.raises(ValueError):
        apply_counit_leg(x, 3)
    with pytest.raises(ValueError):
        apply_counit_leg(x, 0)


def test_delta_is_an_algebra_map():
    G = symmetric_group(3)
    x = TensorElement.basis(G, (1,)) + TensorElement.basis(G, (4,)).scaled(HALF)
    y = TensorElement.basis(G, (2,)) - TensorElement.basis(G, (0,)).scaled(CycScalar(2))
    assert delta(x * y) == delta(x) * delta(y)
    assert counit(x * y) == counit(x) * counit(y)


# -- weights -------------------------------------------------------------------------


def test_weight_components_sum_back():
    G, A = affine_group(3)
    x = (
        TensorElement.basis(G, (1, 5))
        + TensorElement.basis(G, (4, 2)).scaled(HALF)
        + TensorElement.basis(G, (0, 0)).scaled(CycScalar(Fraction(-2, 3)))
    )
    for mode in ("adjoint", "left"):
        parts = weight_decomposition(x, A, mode)
        total = TensorElement(G, 2)
        for p in parts.values():
            total = total + p
        assert total == x


def test_adjoint_weight_component_transforms_correctly():
    # the mu-component y satisfies Delta(a) y Delta(a)^-1 = mu(a) y
    G, A = affine_group(3)
    chars = character_group(A)
    x = TensorElement.basis(G, (3, 5)) + TensorElement.basis(G, (4, 1)).scaled(HALF)
    for mu in chars:
        y = weight_component(x, A, mu, mode="adjoint")
        for a in A.members:
            assert y.conj_by_diagonal(a) == y.scaled(mu.scalar_at(a))


def test_left_weight_component_is_left_projection():
    G, A = affine_group(3)
    chars = character_group(A)
    x = TensorElement.basis(G, (3,)) + TensorElement.basis(G, (1,)).scaled(CycScalar(5))
    for mu in chars:
        y = weight_component(x, A, mu, mode="left")
        assert weight_projector(A, mu) * x == y
    with pytest.raises(ValueError):
        weight_component(x, A, chars[0], mode="sideways")


def test_has_zero_weight():
    G, A = affine_group(3)
    assert has_zero_weight(TensorElement.unit(G, 2), A)
    # a noncentral group-like g (x) g with g outside the centralizer of A
    g = G.size - 1  # some element with nonzero multiplier part
    assert not has_zero_weight(TensorElement.basis(G, (4, 4)), A)
    # any element of k[A] (x) k[A] has zero weight since A is abelian
    a = A.members[1]
    assert has_zero_weight(TensorElement.basis(G, (a, a)), A)


# -- shifted pair --------------------------------------------------------------------


def test_shifted_pair_matches_direct_sum():
    G = cyclic_group(4)
    A = full_subgroup(G)
    chars = character_group(A)
    F = {}
    for i, lam in enumerate(chars):
        F[lam] = TensorElement.basis(G, (i, (2 * i) % 4)).scaled(CycScalar(i + 1))
    lam = chars[1]
    got = shifted_pair(F, lam, placement=(1, 2), shift_leg=3, sign=-1)
    expect = TensorElement(G, 3)
    for mu in chars:
        expect = expect + (
            F[lam - mu].embed(3, (0, 1)) * weight_projector(A, mu).embed(3, (2,))
        )
    assert got == expect
    # sign +1 shifts the other way
    got_plus = shifted_pair(F, lam, placement=(1, 2), shift_leg=3, sign=+1)
    expect_plus = TensorElement(G, 3)
    for mu in chars:
        expect_plus = expect_plus + (
            F[lam + mu].embed(3, (0, 1)) * weight_projector(A, mu).embed(3, (2,))
        )
    assert got_plus == expect_plus


def test_shifted_pair_placement_reorders_legs():
    G = cyclic_group(2)
    A = full_subgroup(G)
    chars = character_group(A)
    F = {chars[0]: TensorElement.basis(G, (1, 0)), chars[1]: TensorElement.basis(G, (0, 1))}
    lam = chars[0]
    # projector in the middle leg
    got = shifted_pair(F, lam, placement=(1, 3), shift_leg=2, sign=-1)
    expect = TensorElement(G, 3)
    for mu in chars:
        expect = expect + (
            F[lam - mu].embed(3, (0, 2)) * weight_projector(A, mu).embed(3, (1,))
        )
    assert got == expect


# -- inversion -----------------------------------------------------------------------


def test_invert_group_like():
    G = symmetric_group(3)
    for g in range(G.size):
        x = TensorElement.basis(G, (g,))
        yi = invert(x)
        assert yi == TensorElement.basis(G, (G.inverse(g),))


def test_invert_singular_idempotent_multiple():
    # e - g with g of order 2: (e-g)(e+g) = 0, so e - g is a zero divisor
    G = cyclic_group(2)
    x = TensorElement.unit(G, 1) - TensorElement.basis(G, (1,))
    with pytest.raises(ZeroDivisionError):
        invert(x)
    with pytest.raises(ZeroDivisionError):
        invert_blockwise(x, full_subgroup(G))


def test_invert_two_leg_unit_combination():
    G = cyclic_group(3)
    x = TensorElement.unit(G, 2) + TensorElement.basis(G, (1, 2)).scaled(HALF)
    xi = invert(x)
    assert x * xi == TensorElement.unit(G, 2)
    assert xi * x == TensorElement.unit(G, 2)


def test_invert_blockwise_agrees_with_minpoly_route():
    G, A = affine_group(3)
    x = (
        TensorElement.unit(G, 1).scaled(CycScalar(2))
        + TensorElement.basis(G, (A.members[1],))
        + TensorElement.basis(G, (5,)).scaled(HALF)
    )
    xi1 = invert(x)
    xi2 = invert_blockwise(x, A)
    assert xi1 == xi2
    assert x * xi1 == TensorElement.unit(G, 1)


def test_invert_projector_combination():
    # sum_mu c_mu P_mu with all c_mu nonzero inverts to sum c_mu^-1 P_mu
    G = klein_four_group()
    A = full_subgroup(G)
    chars = character_group(A)
    coeffs = [CycScalar(1), CycScalar(2), CycScalar(Fraction(-1, 3)), CycScalar(5)]
    x = TensorElement(G, 1)
    y = TensorElement(G, 1)
    for c, mu in zip(coeffs, chars):
        x = x + weight_projector(A, mu).scaled(c)
        y = y + weight_projector(A, mu).scaled(c.inverse())
    assert invert(x) == y
    assert invert_blockwise(x, A) == y


# -- property tests ------------------------------------------------------------------


small_groups = st.sampled_from(["c2", "c3", "c4", "k4", "c6"])


def _mk(name):
    return {
        "c2": cyclic_group(2),
        "c3": cyclic_group(3),
        "c4": cyclic_group(4),
        "k4": klein_four_group(),
        "c6": cyclic_group(6),
    }[name]


@st.composite
def group_and_element(draw, legs=1):
    G = _mk(draw(small_groups))
    nterms = draw(st.integers(1, 4))
    x = TensorElement(G, legs)
    for _ in range(nterms):
        key = tuple(draw(st.integers(0, G.size - 1)) for _ in range(legs))
        num = draw(st.integers(-4, 4))
        den = draw(st.integers(1, 3))
        x = x + TensorElement.basis(G, key).scaled(CycScalar(Fraction(num, den)))
    return G, x


@given(group_and_element())
@settings(max_examples=60, deadline=None)
def test_weight_decomposition_sums_to_identity_map(gx):
    G, x = gx
    A = full_subgroup(G)
    total = TensorElement(G, 1)
    for part in weight_decomposition(x, A, "adjoint").values():
        total = total + part
    assert total == x


@given(group_and_element(), group_and_element())
@settings(max_examples=40, deadline=None)
def test_counit_is_multiplicative_when_compatible(gx, gy):
    G, x = gx
    H, y = gy
    if G.size != H.size or G.table != H.table:
        return
    assert counit(x * y) == counit(x) * counit(y)


@given(group_and_element())
@settings(max_examples=40, deadline=None)
def test_invert_is_involutive_on_units(gx):
    G, x = gx
    x = x + TensorElement.unit(G, 1).scaled(CycScalar(7))  # push away from 0
    try:
        xi = invert(x)
    except ZeroDivisionError:
        return
    assert invert(xi) == x
