"""Representation layer: linear/projective reps, extensions, dynamical data."""

import pytest

from dyntwist.groups import (
    Character,
    Subgroup,
    affine_group,
    character_group,
    cyclic_group,
    klein_four_group,
    symmetric_group,
)
from dyntwist.linalg import det, identity, mat_mul, rank
from dyntwist.reps import (
    CentralExtension,
    Cocycle2,
    DataIsomorphism,
    DynamicalDatum,
    GuardExceeded,
    LinearRep,
    ProjectiveRep,
    central_extension,
    character_inner,
    data_isomorphic,
    datum_invariants,
    hom_space,
    induce,
    induced_character,
    regular_rep,
    tensor_pair_rep,
    trivial_datum,
    verify_datum,
    weight_space,
)
from dyntwist.scalars import CycScalar

ONE = CycScalar(1)
ZERO = CycScalar(0)


# -- linear representations ---------------------------------------------------


def test_regular_rep_character():
    # character of the regular representation: |G| at e, 0 elsewhere
    G = symmetric_group(3)
    rho = regular_rep(G)
    assert rho.character(0) == CycScalar(G.size)
    for g in range(1, G.size):
        assert rho.character(g) == ZERO


def test_linear_rep_validation_rejects_broken_table():
    G = cyclic_group(4)
    rho = regular_rep(G)
    perm = {g: rho.perm[g] for g in range(4)}
    scal = {g: list(rho.scal[g]) for g in range(4)}
    scal[1] = tuple([CycScalar(-1)] + list(scal[1][1:]))  # corrupt one scalar
    with pytest.raises(ValueError):
        LinearRep(G, 4, perm=perm, scal=scal)


def test_induced_rep_agrees_with_induced_character():
    # two independent routes to the induced character must agree everywhere
    G, A = affine_group(5)
    lam = character_group(A)[1]
    line = LinearRep.from_character(lam)
    ind = induce(line, G)
    assert ind.dim == A.index == 4
    assert ind.form == "monomial"
    # full monomial validation of the induced data
    LinearRep(G, ind.dim, perm=ind.perm, scal=ind.scal)
    for g in range(G.size):
        assert ind.character(g) == induced_character(line, G, g)


def test_induction_in_stages_matches_direct_character():
    # induce through K in two ways inside the symmetric group on 4 points
    G = symmetric_group(4)
    # K = stabilizer-style subgroup {e, (01)} by brute membership
    K = Subgroup(G, [g for g in range(G.size) if G.mul(g, g) == 0 and g != 0][:1] + [0])
    line = LinearRep.trivial(K)
    ind = induce(line, G)
    assert ind.dim == G.size // K.order
    assert ind.character(0) == CycScalar(ind.dim)
    for g in range(G.size):
        assert ind.character(g) == induced_character(line, G, g)


def test_hom_space_regular_rep_endomorphisms():
    # End of the regular representation has dimension |G| (sum of squares)
    G = symmetric_group(3)
    rho = regular_rep(G)
    assert len(hom_space(rho, rho)) == G.size


def test_hom_space_between_distinct_characters_is_zero():
    G, A = affine_group(5)
    chars = character_group(A)
    r1 = LinearRep.from_character(chars[1])
    r2 = LinearRep.from_character(chars[2])
    assert hom_space(r1, r2) == []
    assert len(hom_space(r1, r1)) == 1


def test_hom_space_monomial_matches_dense():
    # the orbit method and the dense nullspace must give equal-dimension,
    # mutually contained solution spaces
    G, A = affine_group(3)
    lam = character_group(A)[1]
    ind = induce(LinearRep.from_character(lam), G)
    dense = LinearRep.dense(G, {g: ind.matrix(g) for g in range(G.size)})
    h1 = hom_space(ind, ind)
    h2 = hom_space(dense, dense)
    assert len(h1) == len(h2)
    flat = [[m[i][j] for i in range(ind.dim) for j in range(ind.dim)] for m in h1 + h2]
    assert rank(flat) == len(h1)


def test_hom_space_detects_intertwiner_of_conjugate_reps():
    # rho and its basis-permuted copy are isomorphic; hom space finds the map
    G = cyclic_group(6)
    rho = regular_rep(G)
    sigma = tuple((j + 1) % 6 for j in range(6))  # relabel basis by a cycle
    perm = {g: tuple(sigma[rho.perm[g][_inv6(sigma, j)]] for j in range(6)) for g in range(6)}
    scal = {g: tuple(rho.scal[g][_inv6(sigma, j)] for j in range(6)) for g in range(6)}
    other = LinearRep(G, 6, perm=perm, scal=scal)
    hom = hom_space(rho, other)
    assert len(hom) == 6


def _inv6(sigma, j):
    return sigma.index(j)


def test_weight_space_of_regular_rep_has_coset_dimension():
    # the mu-weight space of k[G] under left translation by A is |G|/|A|-dim
    G, A = affine_group(5)
    rho = regular_rep(G)
    for mu in character_group(A):
        basis = weight_space(rho, A, mu)
        assert len(basis) == G.size // A.order
        for vec in basis:
            for a in A.members:
                moved = rho.apply(a, vec)
                want = [mu.scalar_at(a) * v for v in vec]
                assert moved == want


def test_weight_space_dense_matches_monomial():
    G, A = affine_group(3)
    rho = regular_rep(G)
    dense = LinearRep.dense(G, {g: rho.matrix(g) for g in range(G.size)})
    for mu in character_group(A):
        b1 = weight_space(rho, A, mu)
        b2 = weight_space(dense, A, mu)
        assert len(b1) == len(b2)
        assert rank(b1 + b2) == len(b1)


# -- cocycles and projective representations ----------------------------------


def _pauli_system():
    """The 2-dimensional projective system on the group of order 4."""
    V = klein_four_group()
    i2 = CycScalar.zeta(4)  # primitive 4th root
    X = [[ZERO, ONE], [ONE, ZERO]]
    Z = [[ONE, ZERO], [ZERO, -ONE]]
    XZ = mat_mul(X, Z)
    mats = {0: identity(2), 1: X, 2: Z, 3: XZ}
    # extract the cocycle from the actual matrix products
    vals = {}
    for g in range(4):
        for h in range(4):
            prod = mat_mul(mats[g], mats[h])
            target = mats[V.mul(g, h)]
            ratio = None
            for i in range(2):
                for j in range(2):
                    if target[i][j]:
                        ratio = prod[i][j] / target[i][j]
            vals[(g, h)] = ratio
    c = Cocycle2(V, vals)
    return V, ProjectiveRep(V, 2, mats, c), c, i2


def test_trivial_cocycle_and_perturbation():
    V = klein_four_group()
    c = Cocycle2.trivial(V)
    assert c.is_trivial()
    assert c.kernel_order() == 1
    bad = dict(c.values)
    bad[(1, 2)] = -ONE  # breaks the cocycle identity, not normalization
    with pytest.raises(ValueError):
        Cocycle2(V, bad)


def test_pauli_projective_rep_is_valid_and_irreducible():
    V, pi, c, i2 = _pauli_system()
    assert not c.is_trivial()
    assert c.kernel_order() == 2
    assert pi.is_irreducible()
    # the projective law with the extracted cocycle, all pairs
    for g in range(4):
        for h in range(4):
            lhs = mat_mul(pi.matrix(g), pi.matrix(h))
            rhs = [[x * c(g, h) for x in row] for row in pi.matrix(V.mul(g, h))]
            assert lhs == rhs


def test_inverse_matrix_and_trace_inverse():
    V, pi, c, _ = _pauli_system()
    for g in range(4):
        assert mat_mul(pi.matrix(g), pi.inverse_matrix(g)) == identity(2)
        want = pi.inverse_matrix(g)
        assert pi.trace_inverse(g) == want[0][0] + want[1][1]


def test_rescaled_rep_shifts_cocycle_by_coboundary():
    V, pi, c, i2 = _pauli_system()
    t = {0: ONE, 1: i2, 2: -ONE, 3: i2 * i2 * i2}
    pi2 = pi.rescaled(t)
    for g in range(4):
        for h in range(4):
            expect = c(g, h) * t[g] * t[h] / t[V.mul(g, h)]
            assert pi2.cocycle(g, h) == expect
    # rescaling must still be a valid projective representation
    ProjectiveRep(V, 2, pi2.mats, pi2.cocycle)


def test_tensor_pair_rep_of_pauli_is_regular_character():
    # V (x) V^* of the unique 2-dim projective irrep carries every character
    V, pi, _, _ = _pauli_system()
    pair = tensor_pair_rep(pi, pi)
    assert pair.character(0) == CycScalar(4)
    for g in range(1, 4):
        assert pair.character(g) == ZERO


def test_central_extension_of_pauli_cocycle():
    V, pi, c, _ = _pauli_system()
    ext = central_extension(c)
    assert ext.kernel_order == 2
    assert ext.group.size == 8
    assert not ext.group.is_abelian()
    for k in range(4):
        idx = ext.section(k)
        assert ext.project(idx) == k
        assert ext.kernel_exponent(idx) == 0
    lifted = ext.lift(pi)  # constructor validates the homomorphism law
    assert lifted.dim == 2
    assert lifted.character(ext.section(0)) == CycScalar(2)


def test_central_extension_trivial_cocycle_is_the_group_itself():
    V = klein_four_group()
    ext = central_extension(Cocycle2.trivial(V))
    assert ext.kernel_order == 1
    assert ext.group.size == 4
    assert ext.group.table == V.table


# -- dynamical data ------------------------------------------------------------


def test_trivial_datum_verifies():
    G, A = affine_group(5)
    D = trivial_datum(G, A)
    rep = verify_datum(D)
    assert rep.ok, rep.to_text()
    assert D.dims() == (1, 1, 1, 1, 1)


def test_verify_datum_accepts_injective_reassignment():
    # in this group all nontrivial characters of A fuse, so any injective
    # reassignment of the lines still satisfies the induced-character law
    G, A = affine_group(5)
    D = trivial_datum(G, A)
    chars = D.characters
    reps = dict(D.reps)
    reps[chars[1]], reps[chars[2]] = reps[chars[2]], reps[chars[1]]
    swapped = DynamicalDatum(G, A, D.K, reps)
    assert verify_datum(swapped).ok


def test_verify_datum_rejects_duplicate_assignment():
    # a non-injective assignment breaks both the induced-character law and
    # pairwise distinctness
    G, A = affine_group(5)
    D = trivial_datum(G, A)
    chars = D.characters
    reps = dict(D.reps)
    reps[chars[1]] = reps[chars[2]]
    bad = DynamicalDatum(G, A, D.K, reps)
    rep = verify_datum(bad)
    assert not rep.ok
    names = [c["name"] for c in rep.failures()]
    assert any(n.startswith("ind-character") for n in names)
    assert any(n.startswith("distinct") for n in names)


def test_data_isomorphic_rejects_non_affine_reassignment():
    # the swap datum is valid but lies in a different isomorphism class: the
    # reachable reassignments are exactly scale-by-conjugation plus a shift,
    # and a transposition of two characters is not of that form
    G, A = affine_group(5)
    D1 = trivial_datum(G, A)
    chars = D1.characters
    reps = dict(D1.reps)
    reps[chars[1]], reps[chars[2]] = reps[chars[2]], reps[chars[1]]
    D2 = DynamicalDatum(G, A, D1.K, reps)
    assert data_isomorphic(D1, D2) is None


def test_verify_datum_rejects_reducible_member():
    # replace one line with a reducible 1-dim-squared block: break irreducibility
    G, A = affine_group(3)
    D = trivial_datum(G, A)
    chars = D.characters
    c = D.cocycle
    lam = chars[1]
    mats = {a: [[lam.scalar_at(a), ZERO], [ZERO, lam.scalar_at(a)]] for a in A.members}
    reps = dict(D.reps)
    reps[lam] = ProjectiveRep(D.K, 2, mats, c)
    bad = DynamicalDatum(G, A, D.K, reps)
    rep = verify_datum(bad)
    assert not rep.ok
    names = [f["name"] for f in rep.failures()]
    assert any(n.startswith("irreducible") for n in names)


def _shifted_datum(G, A, shift: Character) -> DynamicalDatum:
    """The datum with assignment lambda -> lambda + shift (still valid)."""
    c = Cocycle2.trivial(A)
    reps = {}
    for lam in character_group(A):
        nu = lam + shift
        mats = {a: [[nu.scalar_at(a)]] for a in A.members}
        reps[lam] = ProjectiveRep(A, 1, mats, c, check=False)
    return DynamicalDatum(G, A, Subgroup(G, A.members), reps)


def test_shifted_assignment_is_still_a_datum_and_isomorphic_to_trivial():
    G, A = affine_group(5)
    shift = character_group(A)[3]
    D1 = trivial_datum(G, A)
    D2 = _shifted_datum(G, A, shift)
    assert verify_datum(D2).ok
    wit = data_isomorphic(D1, D2)
    assert wit is not None
    assert wit.verify(D1, D2)
    # the multiplier realizing the shift is exactly the shift character
    for a in A.members:
        assert wit.alpha[a] == shift.scalar_at(a)


def test_data_isomorphic_rejects_incompatible_assignment():
    # lambda -> -lambda is not reachable by any (g, alpha): the multiplier
    # would have to depend on lambda
    G = cyclic_group(5)
    A = Subgroup(G, range(5))
    D1 = trivial_datum(G, A)
    c = Cocycle2.trivial(A)
    reps = {}
    for lam in character_group(A):
        nu = -lam
        mats = {a: [[nu.scalar_at(a)]] for a in A.members}
        reps[lam] = ProjectiveRep(A, 1, mats, c, check=False)
    D2 = DynamicalDatum(G, A, Subgroup(G, A.members), reps)
    assert data_isomorphic(D1, D2) is None


def _transported_datum(G, A, g: int) -> DynamicalDatum:
    """Move the trivial datum to K = g A g^-1 with V_lambda = lambda o Ad_g^-1."""
    K = Subgroup(G, [G.conj(g, a) for a in A.members])
    c = Cocycle2.trivial(K)
    gi = G.inv[g]
    reps = {}
    for lam in character_group(A):
        mats = {k: [[lam.scalar_at(G.conj(gi, k))]] for k in K.members}
        reps[lam] = ProjectiveRep(K, 1, mats, c, check=False)
    return DynamicalDatum(G, A, K, reps)


def test_conjugate_subgroup_datum_is_isomorphic_and_same_invariants():
    # S_3: A = {e, s} and K = {e, s'} are conjugate order-2 subgroups
    G = symmetric_group(3)
    invols = [g for g in range(G.size) if g and G.mul(g, g) == 0]
    A = Subgroup(G, [0, invols[0]])
    g = next(
        x for x in range(1, G.size) if G.conj(x, invols[0]) != invols[0] and G.conj(x, invols[0]) in invols
    )
    D1 = trivial_datum(G, A)
    D2 = _transported_datum(G, A, g)
    assert D2.K.members != A.members
    assert verify_datum(D2).ok, verify_datum(D2).to_text()
    wit = data_isomorphic(D1, D2)
    assert wit is not None and wit.verify(D1, D2)
    assert datum_invariants(D1) == datum_invariants(D2)


def test_data_isomorphic_dimension_mismatch_is_none():
    V, pi, c, _ = _pauli_system()
    G = V
    A = Subgroup(G, [0])
    triv = character_group(A)[0]
    D1 = DynamicalDatum(G, A, Subgroup(G, range(4)), {triv: pi})
    D2 = trivial_datum(G, A)
    assert data_isomorphic(D1, D2) is None


def test_data_isomorphic_matrix_case_finds_self_witness():
    V, pi, c, _ = _pauli_system()
    A = Subgroup(V, [0])
    triv = character_group(A)[0]
    D = DynamicalDatum(V, A, Subgroup(V, range(4)), {triv: pi})
    wit = data_isomorphic(D, D)
    assert wit is not None
    assert wit.verify(D, D)
    assert not det(wit.phis[triv]).is_zero()


def test_data_isomorphic_guard():
    V, pi, c, _ = _pauli_system()
    A = Subgroup(V, [0])
    triv = character_group(A)[0]
    big = [[ONE if i == j else ZERO for j in range(5)] for i in range(5)]
    mats = {g: big for g in range(4)}
    fake = ProjectiveRep(V, 5, {g: identity(5) for g in range(4)}, Cocycle2.trivial(V), check=False)
    D = DynamicalDatum(V, A, Subgroup(V, range(4)), {triv: fake})
    with pytest.raises(GuardExceeded):
        data_isomorphic(D, D)


def test_datum_invariants_structure():
    G, A = affine_group(3)
    D = trivial_datum(G, A)
    inv = datum_invariants(D)
    assert inv.group_order == G.size
    assert inv.k_class == A.members
    assert inv.dims == (1, 1, 1)
    assert len(inv.pair_table) == 9
    assert len(inv.pair_table[0]) == A.order
    assert "pair table" in inv.to_text()


def test_character_inner_orthogonality():
    # distinct 1-dim characters of A are orthonormal
    G, A = affine_group(5)
    chars = character_group(A)
    r = [LinearRep.from_character(c) for c in chars]
    for i in range(len(chars)):
        for j in range(len(chars)):
            want = ONE if i == j else ZERO
            assert character_inner(r[i], r[j]) == want
