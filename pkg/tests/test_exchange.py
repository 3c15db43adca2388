"""Tests for the datum -> twist construction, closed forms, and round trips."""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import pytest

from dyntwist.balgebra import FSpace, extract_datum
from dyntwist.exchange import (
    EpsIntertwiner,
    affine_datum,
    affine_twist,
    closed_form_twist,
    eps_intertwiner,
    exchange_twist,
    psi,
    roundtrip_report,
    s6_datum,
)
from dyntwist.group_algebra import TensorElement
from dyntwist.groups import (
    Subgroup,
    affine_group,
    character_group,
    cyclic_group,
    from_permutations_with_elements,
)
from dyntwist.linalg import inverse
from dyntwist.reps import (
    Cocycle2,
    DynamicalDatum,
    GuardExceeded,
    ProjectiveRep,
    data_isomorphic,
    datum_invariants,
    trivial_datum,
    verify_datum,
)
from dyntwist.scalars import CycScalar
from dyntwist.twists import check_dynamical_twist

ZERO = CycScalar(0)
ONE = CycScalar(1)

F5 = (0, 1, 2, 4, 3)  # a bijection of F_5 that is not of the form x -> mx + b


def is_affine_map(p: int, f) -> bool:
    """Decide by exhaustion whether f equals x -> mx + b on F_p."""
    return any(
        all(f[x] == (m * x + b) % p for x in range(p))
        for m in range(1, p)
        for b in range(p)
    )


@lru_cache(maxsize=None)
def pauli_datum():
    """A datum with a two-dimensional projective representation.

    The group is the Klein four-group, A is trivial, K is everything, and
    the single representation sends the two generators to the symmetric and
    diagonal sign-flip matrices.
    """
    G, elems = from_permutations_with_elements([(1, 0, 3, 2), (2, 3, 0, 1)])
    A = Subgroup(G, (0,))
    K = Subgroup(G, tuple(range(G.size)))
    by_elem = {e: gi for gi, e in enumerate(elems)}
    ga = by_elem[(1, 0, 3, 2)]
    gb = by_elem[(2, 3, 0, 1)]
    gab = G.table[ga][gb]
    m1 = CycScalar(-1)
    I2 = [[ONE, ZERO], [ZERO, ONE]]
    SX = [[ZERO, ONE], [ONE, ZERO]]
    SZ = [[ONE, ZERO], [ZERO, m1]]
    SXZ = [[ZERO, m1], [ONE, ZERO]]
    mats = {0: I2, ga: SX, gb: SZ, gab: SXZ}
    vals = {}
    for g in range(G.size):
        for h in range(G.size):
            P = [
                [
                    sum((mats[g][r][k] * mats[h][k][c] for k in range(2)), ZERO)
                    for c in range(2)
                ]
                for r in range(2)
            ]
            Q = mats[G.table[g][h]]
            ratio = None
            for r in range(2):
                for c in range(2):
                    if Q[r][c]:
                        ratio = P[r][c] * Q[r][c].inverse()
                        break
                if ratio is not None:
                    break
            vals[(g, h)] = ratio
    lam0 = character_group(A)[0]
    pi = ProjectiveRep(K, 2, mats, Cocycle2(G, vals))
    return DynamicalDatum(G, A, K, {lam0: pi})


# -- intertwiner choices ---------------------------------------------------------


def test_eps_identity_for_trivial_datum():
    G, A = affine_group(3)
    D = trivial_datum(G, A)
    lam0 = D.characters[0]
    eps = eps_intertwiner(D, lam0, lam0)
    n = len(eps.matrix)
    assert n == G.size // A.order
    assert all(
        eps.matrix[i][j] == (ONE if i == j else ZERO)
        for i in range(n)
        for j in range(n)
    )


def test_eps_invertible_for_all_weight_pairs():
    D = affine_datum(5, F5)
    for lam in D.characters:
        for mu in D.characters:
            eps = eps_intertwiner(D, lam, mu)
            assert inverse(eps.matrix) is not None
            assert len(eps.matrix) == D.G.size // D.A.order


def test_eps_is_typed():
    D = affine_datum(3, (0, 2, 1))
    eps = eps_intertwiner(D, D.characters[1], D.characters[2])
    assert isinstance(eps, EpsIntertwiner)
    assert eps.lam == D.characters[1]
    assert eps.mu == D.characters[2]


# -- the maps determined by weight vectors ---------------------------------------


def test_psi_on_invariant_vector_is_identity_embedding():
    # the translation-invariant weight-zero vector corresponds to the
    # identity map: Psi sends v to v (x) (sum of all group elements)
    for D in (affine_datum(5, F5), pauli_datum()):
        G = D.G
        mu0 = D.characters[0]
        fsp = FSpace(G, D.A, mu0)
        vec = [ONE] * fsp.n
        for lam in D.characters:
            pm = psi(D, lam, vec, eps_intertwiner(D, lam, mu0))
            for j in range(pm.d2):
                for c in range(G.size):
                    for i in range(pm.d1):
                        expected = ONE if i == j else ZERO
                        assert pm.matrix[j * G.size + c][i] == expected


def test_psi_is_linear_in_the_weight_vector():
    D = affine_datum(3, (0, 2, 1))
    lam = D.characters[1]
    mu = D.characters[2]
    fsp = FSpace(D.G, D.A, mu)
    eps = eps_intertwiner(D, lam, mu)
    x1 = [CycScalar(i + 1) for i in range(fsp.n)]
    x2 = [CycScalar(2 * i + 1) for i in range(fsp.n)]
    xs = [a + b for a, b in zip(x1, x2)]
    m1 = psi(D, lam, x1, eps).matrix
    m2 = psi(D, lam, x2, eps).matrix
    ms = psi(D, lam, xs, eps).matrix
    assert all(
        ms[r][c] == m1[r][c] + m2[r][c]
        for r in range(len(ms))
        for c in range(len(ms[0]))
    )


def test_psi_accepts_weight_functions_with_d_two():
    # exercises the intertwining check for a two-dimensional fiber
    D = pauli_datum()
    lam = D.characters[0]
    fsp = FSpace(D.G, D.A, lam)
    vec = [CycScalar(i + 1) for i in range(fsp.n)]
    pm = psi(D, lam, vec, eps_intertwiner(D, lam, lam))
    assert pm.d1 == pm.d2 == 2
    assert len(pm.matrix) == 2 * D.G.size


# -- the twist of a datum ---------------------------------------------------------


def test_exchange_of_trivial_datum_is_unit():
    G, A = affine_group(3)
    J = exchange_twist(trivial_datum(G, A))
    unit = TensorElement.unit(G, 2)
    assert all(J.values[lam] == unit for lam in J.weights)


def test_exchange_matches_closed_form_class():
    f = (0, 2, 1)
    D = affine_datum(3, f)
    Je = exchange_twist(D)
    Jc = affine_twist(3, f)
    De = extract_datum(Je)
    Dc = extract_datum(Jc)
    assert datum_invariants(De) == datum_invariants(Dc)
    assert data_isomorphic(De, Dc) is not None


def test_exchange_certifies_and_roundtrips_nontrivially():
    D = affine_datum(5, F5)
    J = exchange_twist(D)  # certified on construction
    De = extract_datum(J)
    assert data_isomorphic(De, D) is not None
    assert data_isomorphic(De, trivial_datum(D.G, D.A)) is None


def test_exchange_seed_choices_agree_up_to_isomorphism():
    D = affine_datum(5, F5)
    D0 = extract_datum(exchange_twist(D, seed=0))
    D1 = extract_datum(exchange_twist(D, seed=1))
    assert datum_invariants(D0) == datum_invariants(D1)
    assert data_isomorphic(D0, D1) is not None


def test_exchange_two_dimensional_datum_roundtrip():
    D = pauli_datum()
    assert verify_datum(D).ok
    J = exchange_twist(D)
    D2 = extract_datum(J)
    assert D2.K.order == 4
    assert D2.dims() == (2,)
    assert data_isomorphic(D, D2) is not None


def test_exchange_size_guard():
    G = cyclic_group(65)
    A = Subgroup(G, range(65))
    with pytest.raises(GuardExceeded):
        exchange_twist(trivial_datum(G, A))


# -- closed forms ------------------------------------------------------------------


def test_closed_form_identity_bijection_is_unit():
    G, A = affine_group(5)
    chars = character_group(A)
    J = closed_form_twist(G, A, {lam: lam for lam in chars}, lambda lam, mu: 0)
    unit = TensorElement.unit(G, 2)
    assert all(J.values[lam] == unit for lam in J.weights)


def test_closed_form_rejects_bad_conjugators():
    G, A = affine_group(5)
    chars = character_group(A)
    by_exp = {ch.exponent_at(1) % 5: ch for ch in chars}
    f = {by_exp[x]: by_exp[F5[x]] for x in range(5)}
    with pytest.raises(ValueError, match="conjugator precondition"):
        closed_form_twist(G, A, f, lambda lam, mu: 0)


def test_closed_form_conjugator_freedom_moves_within_class():
    # conjugators are only constrained through their action on A: composing
    # each with a translation yields another valid table and the same class
    p = 5
    J1 = affine_twist(p, F5)
    G, A = affine_group(p)
    chars = character_group(A)
    by_exp = {ch.exponent_at(1) % p: ch for ch in chars}
    exp_of = {ch: e for e, ch in by_exp.items()}
    f = {by_exp[x]: by_exp[F5[x]] for x in range(p)}

    def conj(lam, mu):
        j, k = exp_of[lam], exp_of[mu]
        if j == k:
            return 1  # a pure translation still centralizes A
        m = ((F5[j] - F5[k]) * pow((j - k) % p, -1, p)) % p
        return G.table[(m - 1) * p][1]  # homothety followed by a translation

    J2 = closed_form_twist(G, A, f, conj)
    assert data_isomorphic(extract_datum(J1), extract_datum(J2)) is not None


def test_affine_twist_literal_expansion():
    # the same family written as an explicit double character sum: for each
    # weight pair the two legs carry difference-quotient homotheties composed
    # with translations, weighted by inverse character values; quotients with
    # vanishing denominator are replaced by one
    p, f = 5, F5
    G, A = affine_group(p)
    J = affine_twist(p, f)
    by_exp = {ch.exponent_at(1) % p: ch for ch in J.weights}
    inv_p2 = CycScalar(Fraction(1, p * p))

    def quot(num, den):
        if den % p == 0:
            return 1
        return (num * pow(den % p, -1, p)) % p

    def elem(m, c):
        return G.table[((m - 1) % p) * p][c % p]

    for lam_exp in range(p):
        terms = {}
        for mu in range(p):
            for nu in range(p):
                m1 = (
                    quot(nu, f[(lam_exp - mu) % p] - f[(lam_exp - mu - nu) % p])
                    * quot(f[lam_exp] - f[(lam_exp - mu - nu) % p], mu + nu)
                ) % p
                m2 = (
                    quot(mu, f[lam_exp] - f[(lam_exp - mu) % p])
                    * quot(f[lam_exp] - f[(lam_exp - mu - nu) % p], mu + nu)
                ) % p
                for a in range(p):
                    for b in range(p):
                        zc = CycScalar.zeta(p, (-(nu * a + mu * b)) % p)
                        key = (elem(m1, a), elem(m2, b))
                        cur = terms.get(key)
                        val = inv_p2 * zc
                        cur = val if cur is None else cur + val
                        if cur:
                            terms[key] = cur
                        elif key in terms:
                            del terms[key]
        assert TensorElement(G, 2, terms) == J.values[by_exp[lam_exp]]


def test_affine_twist_rejects_non_bijections():
    with pytest.raises(ValueError, match="bijection"):
        affine_twist(5, (0, 0, 1, 2, 3))


def test_affine_p3_all_bijections_certify_and_are_gauge_trivial():
    # every bijection of F_3 is of the form x -> mx + b, so every p=3 family
    # must extract to a datum isomorphic to the trivial one
    G, A = affine_group(3)
    Dt = trivial_datum(G, A)
    for f in permutations(range(3)):
        assert is_affine_map(3, f)
        J = affine_twist(3, f)
        assert data_isomorphic(extract_datum(J), Dt) is not None


def test_affine_p5_nonaffine_bijection_gives_new_class():
    assert not is_affine_map(5, F5)
    D5 = affine_datum(5, F5)
    assert data_isomorphic(D5, trivial_datum(D5.G, D5.A)) is None


def test_affine_datum_certifies():
    D = affine_datum(7, (0, 1, 3, 2, 5, 6, 4))
    assert D.K.members == D.A.members
    assert D.dims() == (1,) * 7


# -- the degree-six example --------------------------------------------------------


def test_s6_datum_profiles():
    D = s6_datum()
    G = D.G
    assert G.size == 720
    assert D.A.order == 4 and D.K.order == 4
    # both subgroups consist of the identity and three elements of the same
    # conjugacy class (double transpositions), yet they are not conjugate
    cls = {}
    for S in (D.A, D.K):
        prof = []
        for k in sorted(S.members):
            if k == 0:
                continue
            orbit = frozenset(G.conj(g, k) for g in range(G.size))
            prof.append(orbit)
        cls[tuple(S.members)] = prof
    profs = list(cls.values())
    assert all(o == profs[0][0] for prof in profs for o in prof)
    a_set = set(D.A.members)
    assert all(
        {G.conj(g, k) for k in D.K.members} != a_set for g in range(G.size)
    )


def test_s6_exchange_is_guarded():
    with pytest.raises(GuardExceeded):
        exchange_twist(s6_datum())


# -- round trips -------------------------------------------------------------------


def test_roundtrip_report_is_green():
    rep = roundtrip_report(affine_twist(3, (1, 2, 0)))
    assert rep.ok
    assert "invariants" in rep.extras
