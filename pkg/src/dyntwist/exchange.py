"""Building twist families out of dynamical data.

This is the inverse direction of the classification: a dynamical datum
(G, A, K, {V_lam}) determines weight-indexed intertwiners

    Psi(lam, x): V_lam -> V_{lam-mu} (x) k[G],        x in X[mu],

assembled from a chosen family of induced-module isomorphisms eps.  The
composites (Psi (x) id) o Psi are again of the form Psi(lam, z), and solving
for z recovers the coefficients of a dynamical twist J(lam) whose gauge
class depends only on the isomorphism class of the datum.  The module also
provides the closed-form twist attached to a weight bijection with
compatible conjugators, its specialization to the affine group of a prime
field, and the order-720 symmetric-group datum whose subgroup pair realizes
equal induced characters without conjugacy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from random import Random

from .balgebra import FSpace, WeightFunction, extract_datum
from .group_algebra import TensorElement, weight_projector
from .groups import (
    Character,
    FiniteGroup,
    Subgroup,
    affine_group,
    character_group,
    from_permutations_with_elements,
)
from .linalg import ONE, ZERO, inverse, mat_mul, solve_matrix, zeros
from .report import Report
from .reps import (
    Cocycle2,
    DynamicalDatum,
    GuardExceeded,
    LinearRep,
    ProjectiveRep,
    carrier_generators,
    data_isomorphic,
    datum_invariants,
    hom_space,
    tensor_pair_rep,
    verify_datum,
)
from .scalars import CycScalar
from .twists import TwistFamily, check_dynamical_twist

_EXCHANGE_CAP = 64
_EPS_ATTEMPTS = 24


# ---------------------------------------------------------------------------
# induced-module models
#
# Both induced modules are realized on functions F: G -> W with
# F(kg) = rho(k) F(g), acted on by (h.F)(g) = F(gh).  The basis is indexed
# by the right cosets K s_t (canonical minimal representatives), tensored
# with a basis of W; the identity's coset always comes first.


def _right_coset_data(G: FiniteGroup, H: Subgroup):
    cosets = H.right_cosets()
    reps = tuple(c[0] for c in cosets)
    rco = [0] * G.size
    for t, coset in enumerate(cosets):
        for g in coset:
            rco[g] = t
    if rco[0] != 0:
        raise AssertionError("identity coset is expected to come first")
    return reps, tuple(rco)


def _transporter(G: FiniteGroup, reps, rco, t: int, h: int):
    """For basis coset t and group element h: the target coset t' and the
    subgroup element k = s_{t'} h s_t^{-1} realizing the move."""
    tp = rco[G.table[reps[t]][G.inv[h]]]
    k = G.table[G.table[reps[tp]][h]][G.inv[reps[t]]]
    return tp, k


def _induced_char_rep(G: FiniteGroup, A: Subgroup, sigma: Character):
    """Monomial model of the induced module of the character sigma of A."""
    reps, rco = _right_coset_data(G, A)
    T = len(reps)
    perm = {}
    scal = {}
    for h in range(G.size):
        p = [0] * T
        s = [ONE] * T
        for t in range(T):
            tp, k = _transporter(G, reps, rco, t, h)
            p[t] = tp
            s[t] = sigma.scalar_at(k)
        perm[h] = tuple(p)
        scal[h] = tuple(s)
    return LinearRep.monomial(G, perm, scal, check=True), reps, rco


def _induced_pair_rep(D: DynamicalDatum, lam: Character, lam2: Character):
    """Induced module of V_lam (x) V_lam2^* from K, monomial when 1-dim."""
    G, K = D.G, D.K
    W = tensor_pair_rep(D.reps[lam], D.reps[lam2], check=True)
    dW = W.dim
    reps, rco = _right_coset_data(G, K)
    T = len(reps)
    kset = set(K.members)
    if dW == 1:
        perm = {}
        scal = {}
        for h in range(G.size):
            p = [0] * T
            s = [ONE] * T
            for t in range(T):
                tp, k = _transporter(G, reps, rco, t, h)
                if k not in kset:
                    raise AssertionError("coset transporter left the subgroup")
                p[t] = tp
                s[t] = W.matrix(k)[0][0]
            perm[h] = tuple(p)
            scal[h] = tuple(s)
        rep = LinearRep.monomial(G, perm, scal, check=True)
    else:
        mats = {}
        for h in range(G.size):
            m = zeros(T * dW, T * dW)
            for t in range(T):
                tp, k = _transporter(G, reps, rco, t, h)
                if k not in kset:
                    raise AssertionError("coset transporter left the subgroup")
                wk = W.matrix(k)
                for r in range(dW):
                    row = m[tp * dW + r]
                    for w in range(dW):
                        if wk[r][w]:
                            row[t * dW + w] = wk[r][w]
            mats[h] = m
        rep = LinearRep.dense(G, mats, check=True)
    return rep, reps, rco, dW, W


# ---------------------------------------------------------------------------
# the intertwiners eps and Psi


@dataclass
class EpsIntertwiner:
    """An invertible G-map Ind_K(V_lam (x) V_{lam-mu}^*) -> Ind_A(mu).

    At trivial mu the map is normalized so the constant function with value
    the identity of End(V_lam) goes to the constant function 1.
    """

    lam: Character
    mu: Character
    matrix: list
    dim_w: int


def eps_intertwiner(D: DynamicalDatum, lam: Character, mu: Character, seed: int = 0) -> EpsIntertwiner:
    """A seeded choice of invertible intertwiner between the two models.

    When the two induced modules literally coincide (K = A, one-dimensional
    fibers matching mu pointwise) the identity map is chosen, so data made
    of characters of A reproduce canonical twists on the nose.  Otherwise an
    exact basis of the homomorphism space is computed and the first
    invertible element -- or a seeded exact random combination -- is taken.
    """
    G, A, K = D.G, D.A, D.K
    lam2 = lam - mu
    ind_w, _, _, dW, W = _induced_pair_rep(D, lam, lam2)
    ind_c, _, _ = _induced_char_rep(G, A, mu)
    n = ind_c.dim
    if ind_w.dim != n:
        raise ArithmeticError(
            f"induced modules have different dimensions {ind_w.dim} != {n}; "
            "the datum does not satisfy the induction identity"
        )
    d1 = D.reps[lam].dim

    T = None
    if (
        dW == 1
        and tuple(K.members) == tuple(A.members)
        and all(W.matrix(k)[0][0] == mu.scalar_at(k) for k in K.members)
    ):
        T = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    else:
        basis = hom_space(ind_w, ind_c)
        if not basis:
            raise ArithmeticError(
                "no intertwiners exist between the induced modules; "
                "the datum does not satisfy the induction identity"
            )
        for cand in basis:
            if inverse(cand) is not None:
                T = [list(row) for row in cand]
                break
        if T is None:
            E = G.exponent()
            rng = Random(f"{seed}:eps:{lam.values}:{mu.values}")
            for _ in range(_EPS_ATTEMPTS):
                cand = zeros(n, n)
                for b in basis:
                    c = CycScalar(rng.randint(1, 9)) * CycScalar.zeta(E, rng.randrange(E))
                    for i in range(n):
                        for j in range(n):
                            if b[i][j]:
                                cand[i][j] = cand[i][j] + c * b[i][j]
                if inverse(cand) is not None:
                    T = cand
                    break
            if T is None:
                raise ArithmeticError(
                    "no invertible intertwiner found after seeded retries"
                )

    if mu.is_trivial():
        # normalize: the constant End(V_lam)-identity section maps to
        # dim(V_lam) * |A| / |K| times the constant function 1.  This is the
        # scale at which the map intertwines the canonical invariant
        # functionals of the two induced modules (trace-sum over blocks on
        # one side, coefficient sum over cosets on the other).  The counit
        # contractions of the assembled twist see only the trivial-weight
        # slices, whose scale is set entirely by this constant; at any other
        # scale the contractions fail to be one.
        fid = [ZERO] * n
        for t in range(n // dW):
            for i in range(d1):
                fid[t * dW + i * d1 + i] = ONE
        v = [sum((T[i][j] * fid[j] for j in range(n)), ZERO) for i in range(n)]
        kappa = v[0]
        if not kappa or any(x != kappa for x in v):
            raise ArithmeticError(
                "intertwiner does not send the identity section to a "
                "constant function; normalization failed"
            )
        ki = kappa.inverse() * CycScalar(Fraction(d1 * A.order, K.order))
        T = [[x * ki for x in row] for row in T]
    return EpsIntertwiner(lam, mu, T, dW)


@dataclass
class PsiMap:
    """The intertwiner V_lam -> V_{lam-mu} (x) k[G] attached to x in X[mu].

    ``matrix`` has rows indexed by (j, c) -> j * |G| + c for j a coordinate
    of V_{lam-mu} and c a group element (value coordinates of k[G]), and
    columns indexed by coordinates of V_lam.
    """

    lam: Character
    mu: Character
    matrix: list
    d1: int
    d2: int


def psi(D: DynamicalDatum, lam: Character, x, eps: EpsIntertwiner) -> PsiMap:
    """The map Psi(lam, x) determined by the weight vector x in X[mu].

    ``x`` is a WeightFunction or a coordinate vector over the left-coset
    basis of the weight-mu functions.  The construction composes: the
    canonical embedding of V_lam (x) V_{lam-mu}^* into its induced module,
    the chosen eps into the induced module of mu, and the Frobenius map of
    x into the regular module.  The projective intertwining law is verified
    exactly before returning.
    """
    if eps.lam != lam:
        raise ValueError("eps was built for a different weight")
    G, A, K = D.G, D.A, D.K
    mu = eps.mu
    lam2 = lam - mu
    d1 = D.reps[lam].dim
    d2 = D.reps[lam2].dim
    if d1 * d2 != eps.dim_w:
        raise ValueError("eps fiber dimension does not match the weight pair")
    fsp = FSpace(G, A, mu)
    if isinstance(x, WeightFunction):
        if x.space.mu != mu:
            raise ValueError("weight vector lives in the wrong weight space")
        xvec = list(x.vec)
    else:
        xvec = list(x)
        if len(xvec) != fsp.n:
            raise ValueError("weight vector has the wrong length")
    xvals = fsp.values(xvec)

    areps, _ = _right_coset_data(G, A)
    n = len(areps)
    size = G.size
    # Frobenius: basis function t of Ind_A(mu) -> the shifted vector with
    # values c -> x(c s_t^{-1}); combined with the eps-column of the
    # canonical embedding (identity-coset block).
    phi = zeros(size, d1 * d2)
    for t in range(n):
        sti = G.inv[areps[t]]
        for w in range(d1 * d2):
            coeff = eps.matrix[t][w]
            if coeff:
                for c in range(size):
                    phi[c][w] = phi[c][w] + coeff * xvals[G.table[c][sti]]
    m = zeros(d2 * size, d1)
    for i in range(d1):
        for j in range(d2):
            w = i * d2 + j
            for c in range(size):
                if phi[c][w]:
                    m[j * size + c][i] = phi[c][w]

    # verify: Psi o pi_lam(k) == (pi_{lam-mu}(k) (x) right-translation) o Psi
    pi1 = D.reps[lam]
    pi2 = D.reps[lam2]
    tbl = G.table
    for k in carrier_generators(K):
        lhs = mat_mul(m, pi1.matrix(k))
        p2k = pi2.matrix(k)
        for j in range(d2):
            for c in range(size):
                ck = tbl[c][k]
                for i in range(d1):
                    acc = ZERO
                    for j2 in range(d2):
                        if p2k[j][j2] and m[j2 * size + ck][i]:
                            acc = acc + p2k[j][j2] * m[j2 * size + ck][i]
                    if acc != lhs[j * size + c][i]:
                        raise ArithmeticError(
                            "the constructed map fails the intertwining law"
                        )
    return PsiMap(lam, mu, m, d1, d2)


# ---------------------------------------------------------------------------
# the exchange construction


def exchange_twist(D: DynamicalDatum, seed: int = 0, cap: int = _EXCHANGE_CAP) -> TwistFamily:
    """The dynamical twist of a verified datum, certified before returning.

    For every weight pair the composite (Psi(lam-mu, y) (x) id) o Psi(lam, x)
    is re-expressed through the maps Psi(lam, -) on the weight components of
    the two-fold regular module; the solved coefficients, evaluated on the
    identity-supported weight vectors, are exactly the coefficients of
    J(lam).  Raises GuardExceeded when |G| exceeds ``cap`` (default 64),
    and ArithmeticError if the assembled family fails certification.
    """
    G, A = D.G, D.A
    if G.size > cap:
        raise GuardExceeded(
            f"exchange construction solves dense systems of size |G|^2; "
            f"|G| = {G.size} exceeds the cap {cap}"
        )
    pre = verify_datum(D)
    if not pre.ok:
        raise ValueError("exchange_twist needs a verified datum:\n" + pre.to_text())
    chars = D.characters
    size = G.size
    inv_a = CycScalar(Fraction(1, A.order))

    eps_cache: dict = {}

    def eps_of(al: Character, be: Character) -> EpsIntertwiner:
        key = (al, be)
        if key not in eps_cache:
            eps_cache[key] = eps_intertwiner(D, al, be, seed=seed)
        return eps_cache[key]

    probe_cache: dict = {}

    def probe_psi(al: Character, be: Character) -> PsiMap:
        # Psi(al, x_be) for the weight component x_be of delta_e: the
        # weight-be vector supported on the identity coset, scaled by 1/|A|.
        key = (al, be)
        if key not in probe_cache:
            fsp = FSpace(G, A, be)
            vec = [ZERO] * fsp.n
            vec[fsp.coset_of[0]] = inv_a
            probe_cache[key] = psi(D, al, vec, eps_of(al, be))
        return probe_cache[key]

    solver_cache: dict = {}

    def solver_of(al: Character, sg: Character):
        # columns: vec Psi(al, e_t) over the weight-sg coset basis
        key = (al, sg)
        if key not in solver_cache:
            fsp = FSpace(G, A, sg)
            eps_s = eps_of(al, sg)
            cols = []
            for t in range(fsp.n):
                vec = [ZERO] * fsp.n
                vec[t] = ONE
                pm = psi(D, al, vec, eps_s)
                cols.append([entry for row in pm.matrix for entry in row])
            mat = [[cols[t][r] for t in range(fsp.n)] for r in range(len(cols[0]))]
            solver_cache[key] = (mat, fsp)
        return solver_cache[key]

    fam = {}
    for lam in chars:
        terms: dict = {}
        for mu in chars:
            psi1 = probe_psi(lam, mu)
            d_mid = psi1.d2  # dim V_{lam-mu}
            for nu in chars:
                sigma = mu + nu
                psi2 = probe_psi(lam - mu, nu)
                d_out = psi2.d2
                mat, fsp_s = solver_of(lam, sigma)
                # right-hand sides: one column per copy index c, rows in the
                # vec order of Psi matrices ((j, g) -> j*|G|+g, then column i)
                # the copy slices of the two-fold module use the left offset
                # (pairs (c g, g)): these are the embeddings commuting with
                # the diagonal right-translation action
                rows = d_out * size * psi1.d1
                rhs = zeros(rows, size)
                for c in range(size):
                    col = c
                    for j in range(d_out):
                        for g in range(size):
                            cg = G.table[c][g]
                            for i in range(psi1.d1):
                                acc = ZERO
                                for j1 in range(d_mid):
                                    a_ = psi2.matrix[j * size + cg][j1]
                                    if a_:
                                        b_ = psi1.matrix[j1 * size + g][i]
                                        if b_:
                                            acc = acc + a_ * b_
                                if acc:
                                    rhs[(j * size + g) * psi1.d1 + i][col] = acc
                sol = solve_matrix(mat, rhs)
                if sol is None:
                    raise ArithmeticError(
                        "composite map is not in the image of the weight "
                        "maps; the datum violates the exchange identities"
                    )
                for c in range(size):
                    zvec = [sol[t][c] for t in range(fsp_s.n)]
                    if not any(zvec):
                        continue
                    zvals = fsp_s.values(zvec)
                    for g in range(size):
                        if zvals[g]:
                            # the solved z is the module vector J(lam).(x_nu
                            # (x) x_mu); with the action h.delta_g =
                            # delta_{g h^-1}, the element coefficient on
                            # a (x) b is the vector component on
                            # delta_{a^-1} (x) delta_{b^-1}
                            key = (G.inverse(G.table[c][g]), G.inverse(g))
                            cur = terms.get(key)
                            cur = zvals[g] if cur is None else cur + zvals[g]
                            if cur:
                                terms[key] = cur
                            elif key in terms:
                                del terms[key]
        fam[lam] = TensorElement(G, 2, terms)
    J = TwistFamily(G, A, fam)
    rep = check_dynamical_twist(J)
    if not rep.ok:
        raise ArithmeticError(
            "exchange construction produced an uncertified family:\n" + rep.to_text()
        )
    return J


# ---------------------------------------------------------------------------
# closed-form twists


def _as_char_fn(f, chars):
    if callable(f):
        return f
    return lambda lam: f[lam]


def _as_conj_fn(conj):
    if callable(conj):
        return conj
    return lambda lam, mu: conj[(lam, mu)]


def closed_form_twist(G: FiniteGroup, A: Subgroup, f, conj) -> TwistFamily:
    """The twist of a weight bijection f with compatible conjugators.

    Precondition, verified exactly: (f(lam) - f(mu))(a) equals
    (lam - mu)(g a g^-1) with g = conj(lam, mu), for every a in A.  The
    value at lam is the double sum over weights mu, nu of

        g(lam, lam-mu-nu) g(lam-mu, lam-mu-nu)^-1 . P_nu
            (x)  g(lam, lam-mu-nu) g(lam, lam-mu)^-1 . P_mu

    with P the weight projectors of A.  The returned family is certified.
    """
    chars = character_group(A)
    fn = _as_char_fn(f, chars)
    gn = _as_conj_fn(conj)
    for lam in chars:
        for mu in chars:
            g = gn(lam, mu)
            for a in A.members:
                if (fn(lam) - fn(mu)).scalar_at(a) != (lam - mu).scalar_at(G.conj(g, a)):
                    raise ValueError(
                        f"conjugator precondition fails at weight pair "
                        f"({lam.values}, {mu.values})"
                    )
    proj = {nu: weight_projector(A, nu) for nu in chars}
    fam = {}
    for lam in chars:
        acc = TensorElement(G, 2)
        for mu in chars:
            for nu in chars:
                low = lam - mu - nu
                g1 = gn(lam, low)
                g2 = gn(lam - mu, low)
                g3 = gn(lam, lam - mu)
                e1 = G.table[g1][G.inv[g2]]
                e2 = G.table[g1][G.inv[g3]]
                leg1 = TensorElement.basis(G, (e1,)) * proj[nu]
                leg2 = TensorElement.basis(G, (e2,)) * proj[mu]
                acc = acc + leg1.embed(2, (0,)) * leg2.embed(2, (1,))
        fam[lam] = acc
    J = TwistFamily(G, A, fam)
    rep = check_dynamical_twist(J)
    if not rep.ok:
        raise ArithmeticError(
            "closed-form family failed certification:\n" + rep.to_text()
        )
    return J


def _affine_weights(p: int):
    G, A = affine_group(p)
    chars = character_group(A)
    by_exp = {}
    for ch in chars:
        by_exp[ch.exponent_at(1) % p] = ch  # element 1 is the translation by 1
    if len(by_exp) != p:
        raise AssertionError("translation characters did not separate")
    return G, A, chars, by_exp


def _check_bijection(p: int, f) -> tuple:
    f = tuple(int(v) % p for v in f)
    if len(f) != p or sorted(f) != list(range(p)):
        raise ValueError("f must be a bijection of the prime field, "
                         f"given as {p} images")
    return f


def affine_twist(p: int, f) -> TwistFamily:
    """The closed-form twist of the affine group of F_p for a bijection f.

    Weights are identified with F_p; the conjugator for a pair of distinct
    weights is the homothety by the difference quotient of f, and the
    identity for equal weights.
    """
    f = _check_bijection(p, f)
    G, A, chars, by_exp = _affine_weights(p)
    exp_of = {lam: lam.exponent_at(1) % p for lam in chars}

    def fn(lam):
        return by_exp[f[exp_of[lam]]]

    def gn(lam, mu):
        j, k = exp_of[lam], exp_of[mu]
        if j == k:
            return 0
        m = (f[j] - f[k]) * pow(j - k, -1, p) % p
        return (m - 1) * p  # the homothety (m, 0)

    return closed_form_twist(G, A, fn, gn)


def affine_datum(p: int, f) -> DynamicalDatum:
    """The dynamical datum of the affine bijection f: K = A, V_lam = f(lam)."""
    f = _check_bijection(p, f)
    G, A, chars, by_exp = _affine_weights(p)
    K = Subgroup(G, A.members)
    c0 = Cocycle2.trivial(K)
    reps = {}
    for lam in chars:
        chi = by_exp[f[lam.exponent_at(1) % p]]
        mats = {a: [[chi.scalar_at(a)]] for a in K.members}
        reps[lam] = ProjectiveRep(K, 1, mats, c0, check=True)
    D = DynamicalDatum(G, A, K, reps)
    rep = verify_datum(D)
    if not rep.ok:
        raise ArithmeticError("affine datum failed certification:\n" + rep.to_text())
    return D


# ---------------------------------------------------------------------------
# the symmetric-group datum


@lru_cache(maxsize=1)
def _symmetric_6():
    swap = (1, 0, 2, 3, 4, 5)
    cycle = (1, 2, 3, 4, 5, 0)
    return from_permutations_with_elements([swap, cycle])


def s6_datum() -> DynamicalDatum:
    """A datum on the symmetric group of degree 6 with K not conjugate to A.

    A and K are two Klein four-groups of double transpositions lying in
    different conjugacy classes yet with equal induced characters for all
    weights; the representations are the characters of A pulled back through
    an explicit isomorphism K -> A.  The returned datum is certified.
    """
    G, elems = _symmetric_6()
    idx = {e: i for i, e in enumerate(elems)}
    ident = tuple(range(6))
    a_12_34 = (1, 0, 3, 2, 4, 5)
    a_13_24 = (2, 3, 0, 1, 4, 5)
    a_14_23 = (3, 2, 1, 0, 4, 5)
    b_34_56 = (0, 1, 3, 2, 5, 4)
    b_12_56 = (1, 0, 2, 3, 5, 4)
    A = Subgroup(G, [idx[ident], idx[a_12_34], idx[a_13_24], idx[a_14_23]])
    K = Subgroup(G, [idx[ident], idx[a_12_34], idx[b_34_56], idx[b_12_56]])
    f = {
        idx[ident]: idx[ident],
        idx[a_12_34]: idx[a_12_34],
        idx[b_34_56]: idx[a_13_24],
        idx[b_12_56]: idx[a_14_23],
    }
    chars = character_group(A)
    c0 = Cocycle2.trivial(K)
    reps = {
        lam: ProjectiveRep(
            K, 1, {k: [[lam.scalar_at(f[k])]] for k in K.members}, c0, check=True
        )
        for lam in chars
    }
    D = DynamicalDatum(G, A, K, reps)
    rep = verify_datum(D)
    if not rep.ok:
        raise ArithmeticError("datum failed certification:\n" + rep.to_text())
    return D


# ---------------------------------------------------------------------------
# round trips


def roundtrip_report(J: TwistFamily, seed: int = 0, cap: int = _EXCHANGE_CAP) -> Report:
    """Extract a datum, rebuild a twist from it, extract again, and compare.

    The two extracted data must have equal canonical invariants and be
    isomorphic; the rebuilt twist is certified by construction.
    """
    rep = Report("round trip twist -> datum -> twist -> datum")
    D1 = extract_datum(J, seed=seed)
    rep.add("first extraction", True, f"|K| = {D1.K.order}, dims = {D1.dims()}")
    J2 = exchange_twist(D1, seed=seed, cap=cap)
    rep.add("rebuilt family certified", True)
    D2 = extract_datum(J2, seed=seed)
    rep.add("second extraction", True, f"|K| = {D2.K.order}, dims = {D2.dims()}")
    inv1 = datum_invariants(D1)
    inv2 = datum_invariants(D2)
    rep.add("canonical invariants equal", inv1 == inv2)
    iso = data_isomorphic(D1, D2)
    rep.add("extracted data isomorphic", iso is not None)
    rep.extras["invariants"] = inv1
    return rep
