"""Weight-function algebras of a twist family and the twist-to-datum map.

For a certified twist family J over (G, A) this module builds the family of
finite-dimensional algebras carried by the A-invariant functions on G,

    B_lam = F_0[G],    (f1 * f2)(g) = (f1 (x) f2)((g (x) g) J(lam)),

together with the weight-mu bimodules F_mu[G], the product maps beta between
them, an exact semisimple block decomposition of each B_lam, and finally the
extraction of a dynamical datum (subgroup K with a family of projective
irreducibles) from J alone.  Everything is computed in exact cyclotomic
arithmetic; every structural claim (associativity, idempotency, balancing,
equivariance, ...) is re-verified on the nose before a result is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from random import Random

from .groups import Character, FiniteGroup, Subgroup, character_group
from .linalg import (
    ONE,
    ZERO,
    _eliminate,
    is_zero_matrix,
    mat_mul,
    mat_vec,
    nullspace,
    rank,
    solve,
    solve_matrix,
    zeros,
)
from .report import Report
from .reps import (
    Cocycle2,
    DynamicalDatum,
    ProjectiveRep,
    carrier_generators,
    verify_datum,
)
from .scalars import CycScalar, as_root_of_unity
from .twists import TwistFamily

# Verification gates: sizes up to which the full (not sampled) law checks run.
_FULL_ASSOC_CAP = 12
_FULL_BIMODULE_CAP = 12
_LAW_SAMPLES = 200
_SPLIT_RETRIES = 8


# ---------------------------------------------------------------------------
# weight-function spaces


class FSpace:
    """The space F_mu[G] of functions with f(ga) = f(g) mu(a), coordinatized.

    Coordinates are indexed by the left cosets gA in their canonical order
    (sorted by smallest member); the basis vector e_t is supported on the
    t-th coset with e_t(r_t a) = mu(a) for the canonical representative r_t.
    """

    def __init__(self, G: FiniteGroup, A: Subgroup, mu: Character):
        self.G = G
        self.A = A
        self.mu = mu
        cosets = A.left_cosets()
        self.cosets = cosets
        self.reps = tuple(c[0] for c in cosets)
        self.n = len(cosets)
        coset_of = [0] * G.size
        for t, coset in enumerate(cosets):
            for g in coset:
                coset_of[g] = t
        self.coset_of = tuple(coset_of)
        # ws[g] = mu(r_t^-1 g) where t is the coset of g
        ws = [ONE] * G.size
        inv = G.inv
        for g in range(G.size):
            r = self.reps[coset_of[g]]
            ws[g] = mu.scalar_at(G.table[inv[r]][g])
        self.ws = tuple(ws)

    def value(self, vec, g: int) -> CycScalar:
        """The function with coordinates ``vec`` evaluated at g."""
        return vec[self.coset_of[g]] * self.ws[g]

    def values(self, vec) -> list:
        """All |G| values of the function with coordinates ``vec``."""
        return [vec[self.coset_of[g]] * self.ws[g] for g in range(self.G.size)]

    def coordinates(self, values) -> list:
        """Coordinates of a weight-mu function given by its |G| values.

        Raises ValueError when the value table does not have weight mu.
        """
        vec = [values[r] for r in self.reps]
        for g in range(self.G.size):
            if self.value(vec, g) != values[g]:
                raise ValueError("value table does not have the requested weight")
        return vec

    def sh_matrix(self, h: int):
        """Matrix of the shift action (h o f)(g) = f(h^-1 g) on coordinates."""
        G = self.G
        hi = G.inv[h]
        m = zeros(self.n, self.n)
        for s in range(self.n):
            g = G.table[h][self.reps[s]]  # support of h o e_s is h r_s A
            t = self.coset_of[g]
            # value at r_t: e_s(h^-1 r_t) = mu(r_s^-1 h^-1 r_t)
            m[t][s] = self.ws[G.table[hi][self.reps[t]]]
        return m


@dataclass(frozen=True)
class WeightFunction:
    """A weight-mu function on G, stored as coefficients on coset reps."""

    space: FSpace
    vec: tuple

    def __post_init__(self):
        if len(self.vec) != self.space.n:
            raise ValueError("coordinate vector has the wrong length")

    @property
    def coeffs(self) -> dict:
        return {r: c for r, c in zip(self.space.reps, self.vec)}

    def __call__(self, g: int) -> CycScalar:
        return self.space.value(self.vec, g)

    def shifted(self, h: int) -> "WeightFunction":
        return WeightFunction(self.space, tuple(mat_vec(self.space.sh_matrix(h), list(self.vec))))


# ---------------------------------------------------------------------------
# the algebras B_lam


class BLambda:
    """B_lam = F_0[G] with the J(lam)-twisted product, in coset coordinates."""

    def __init__(self, J: TwistFamily, lam: Character, fsp: FSpace, sc: dict):
        self.J = J
        self.lam = lam
        self.fsp = fsp
        self.n = fsp.n
        self.sc = sc  # (i, j) -> tuple of n coefficients of e_i * e_j
        self.unit = tuple([ONE] * self.n)

    def mul(self, x, y):
        """Product of two coordinate vectors."""
        out = [ZERO] * self.n
        for (i, j), col in self.sc.items():
            c = x[i] * y[j]
            if c:
                for t, v in enumerate(col):
                    if v:
                        out[t] = out[t] + c * v
        return out

    def lmul_matrix(self, x):
        """Matrix of left multiplication by the vector x."""
        m = zeros(self.n, self.n)
        for (i, j), col in self.sc.items():
            if x[i]:
                c = x[i]
                for t, v in enumerate(col):
                    if v:
                        m[t][j] = m[t][j] + c * v
        return m

    def rmul_matrix(self, y):
        """Matrix of right multiplication by the vector y."""
        m = zeros(self.n, self.n)
        for (i, j), col in self.sc.items():
            if y[j]:
                c = y[j]
                for t, v in enumerate(col):
                    if v:
                        m[t][i] = m[t][i] + c * v
        return m

    def shift_perm(self, h: int):
        """The G-action on coordinates: (h o f) permutes coset indicators."""
        co, reps, tbl = self.fsp.coset_of, self.fsp.reps, self.J.group.table
        return [co[tbl[h][r]] for r in reps]  # e_s -> e_{perm[s]}

    def __repr__(self):
        return f"<BLambda dim={self.n} weight={self.lam.values}>"


def _structure_cache(J: TwistFamily) -> dict:
    cache = getattr(J, "_structure_cache", None)
    if cache is None:
        cache = {"B": {}, "dec": {}}
        J._structure_cache = cache
    return cache


def build_B(J: TwistFamily, lam: Character) -> BLambda:
    """The algebra B_lam of the twist family, with its laws verified.

    Structure constants: (e_i * e_j)(r_t) = sum over terms (a, b) of J(lam)
    of coeff * [r_t a in coset i] * [r_t b in coset j].  Unitality (the
    constant function 1 is the unit), associativity, and the G-action by
    algebra automorphisms are all checked; a failure signals a corrupted
    twist and raises ArithmeticError.
    """
    cache = _structure_cache(J)
    if lam in cache["B"]:
        return cache["B"][lam]
    G, A = J.group, J.A
    fsp = FSpace(G, A, Character.trivial(A))
    n = fsp.n
    co, reps, tbl = fsp.coset_of, fsp.reps, G.table
    sc: dict = {}
    for t in range(n):
        r = reps[t]
        for (a, b), c in J.value(lam).terms.items():
            key = (co[tbl[r][a]], co[tbl[r][b]])
            col = sc.get(key)
            if col is None:
                col = sc[key] = [ZERO] * n
            col[t] = col[t] + c
    sc = {k: tuple(v) for k, v in sc.items() if any(v)}
    B = BLambda(J, lam, fsp, sc)

    # unit law: sum_i sc[(i, j)][t] == [t == j] and symmetrically.
    lsum = zeros(n, n)
    rsum = zeros(n, n)
    for (i, j), col in sc.items():
        for t, v in enumerate(col):
            lsum[j][t] = lsum[j][t] + v
            rsum[i][t] = rsum[i][t] + v
    for j in range(n):
        for t in range(n):
            want = ONE if t == j else ZERO
            if lsum[j][t] != want or rsum[j][t] != want:
                raise ArithmeticError(
                    f"unit law fails in B at weight {lam.values}: "
                    "the twist family is corrupted"
                )

    def _basis(i):
        v = [ZERO] * n
        v[i] = ONE
        return v

    if n <= _FULL_ASSOC_CAP:
        triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    else:
        rng = Random(f"assoc:{lam.values}")
        triples = [
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(_LAW_SAMPLES)
        ]
    for i, j, k in triples:
        ij = list(sc.get((i, j), (ZERO,) * n))
        jk = list(sc.get((j, k), (ZERO,) * n))
        if B.mul(ij, _basis(k)) != B.mul(_basis(i), jk):
            raise ArithmeticError(
                f"associativity fails in B at weight {lam.values} on basis "
                f"triple {(i, j, k)}: the twist family is corrupted"
            )

    for h in carrier_generators(G):
        p = B.shift_perm(h)
        for (i, j), col in sc.items():
            moved = sc.get((p[i], p[j]), (ZERO,) * n)
            for t in range(n):
                if moved[p[t]] != col[t]:
                    raise ArithmeticError(
                        f"the shift by element {h} is not an algebra "
                        f"automorphism of B at weight {lam.values}"
                    )

    cache["B"][lam] = B
    return B


# ---------------------------------------------------------------------------
# exact block decomposition


def _qflatten(vec, M: int) -> list:
    """Flatten a CycScalar vector into rational coordinates at order M."""
    out = []
    for s in vec:
        s = s.lift(M)
        out.extend(Fraction(c, s.den) for c in s.num)
    return out


def _cyc_from_fraction(q: Fraction) -> CycScalar:
    return CycScalar(q.numerator) * CycScalar(q.denominator).inverse()


def _minpoly_q(mul, unit, z, M: int, maxdeg: int) -> list:
    """Monic minimal polynomial of z over Q, as Fractions c_0..c_d (c_d = 1).

    ``mul`` multiplies coordinate vectors, ``unit`` is the identity of the
    subalgebra under consideration; coordinates are flattened to rational
    vectors at scalar order M and eliminated incrementally.
    """
    rows: list = []  # (reduced rational vector, pivot index, combo)
    power = list(unit)
    k = 0
    while k <= maxdeg + 1:
        v = _qflatten(power, M)
        combo = [Fraction(0)] * (maxdeg + 2)
        combo[k] = Fraction(1)
        for rvec, rpos, rcombo in rows:
            f = v[rpos]
            if f:
                v = [x - f * y for x, y in zip(v, rvec)]
                combo = [x - f * y for x, y in zip(combo, rcombo)]
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return combo[: k + 1]
        inv = 1 / v[pivot]
        rows.append(
            (
                [x * inv for x in v],
                pivot,
                [x * inv for x in combo],
            )
        )
        power = mul(power, z)
        k += 1
    raise ArithmeticError("minimal-polynomial computation exceeded its degree bound")


def _crt_idempotents(coeffs: list, z, unit, mul, M: int):
    """Split the idempotent ``unit`` along the rational factors of ``coeffs``.

    coeffs is the monic minimal polynomial of z (Fractions, low to high).
    Returns a list of exact orthogonal idempotents summing to ``unit``, one
    per irreducible rational factor, or None when the polynomial is
    irreducible (no split available from this element) or not squarefree
    (a degenerate sample; the caller retries).
    """
    import sympy

    x = sympy.symbols("x")
    P = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x
    )
    _, factors = P.factor_list()
    if any(e != 1 for _, e in factors):
        return None
    if len(factors) < 2:
        return None

    def _eval(poly):
        cs = [Fraction(c.p, c.q) for c in poly.all_coeffs()]  # high to low
        acc = [ZERO] * len(z)
        for c in cs:
            acc = mul(acc, z)
            if c:
                s = _cyc_from_fraction(c)
                acc = [av + s * uv for av, uv in zip(acc, unit)]
        return acc

    idems = []
    for f, _ in factors:
        cof = P.quo(f)
        s, _, h = cof.gcdex(f)
        if not h.is_one:
            return None
        idems.append(_eval((s * cof).rem(P)))
    # exact verification: orthogonal idempotents summing to the node unit
    total = [ZERO] * len(z)
    for i, e in enumerate(idems):
        if mul(e, e) != e:
            return None
        total = [tv + ev for tv, ev in zip(total, e)]
        for e2 in idems[i + 1 :]:
            if any(v for v in mul(e, e2)) or any(v for v in mul(e2, e)):
                return None
    if total != list(unit):
        return None
    return idems


def _span(vectors, ncols: int):
    """Echelonized basis (unit pivots) of the span of the given vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    pivots = _eliminate(rows, ncols)
    return [rows[r] for r in range(len(pivots))]


class BlockDecomposition:
    """Central primitive idempotents of a B_lam with the G-action on them."""

    def __init__(self, B: BLambda, idempotents: list, dims: tuple):
        self.B = B
        self.idempotents = [tuple(e) for e in idempotents]
        self.dims = dims
        self._perms: dict = {}

    @property
    def blocks(self) -> int:
        return len(self.idempotents)

    def action(self, h: int) -> tuple:
        """The permutation of blocks induced by the shift by h."""
        if h in self._perms:
            return self._perms[h]
        p = self.B.shift_perm(h)
        out = []
        for e in self.idempotents:
            moved = [ZERO] * self.B.n
            for t in range(self.B.n):
                moved[p[t]] = e[t]
            moved = tuple(moved)
            for i, e2 in enumerate(self.idempotents):
                if moved == e2:
                    out.append(i)
                    break
            else:
                raise ArithmeticError("shift does not permute the block idempotents")
        perm = tuple(out)
        self._perms[h] = perm
        return perm

    def is_transitive(self) -> bool:
        gens = carrier_generators(self.B.J.group)
        seen = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for h in gens:
                j = self.action(h)[i]
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        return len(seen) == self.blocks

    def stabilizer(self, i: int) -> Subgroup:
        G = self.B.J.group
        members = [g for g in range(G.size) if self.action(g)[i] == i]
        return Subgroup(G, members)

    def __repr__(self):
        return f"<BlockDecomposition blocks={self.blocks} dims={self.dims}>"


def decompose(B: BLambda, seed: int = 0, eig_tol: float | None = None) -> BlockDecomposition:
    """Exact central primitive idempotents of B, with verified properties.

    The center is computed as an exact nullspace; it is then split by
    adjoining random central elements, taking their minimal polynomials
    over Q, and converting the rational factorization into exact
    idempotents by CRT.  Every idempotent is verified exactly (idempotent,
    orthogonal, summing to 1).  ``eig_tol`` is accepted for interface
    compatibility but unused: no floating-point step remains.

    Raises ArithmeticError when a subcenter refuses to split after retries;
    the message recommends enlarging the scalar order (the block structure
    is then not realizable over the coefficient field of J).
    """
    cache = _structure_cache(B.J)
    if B.lam in cache["dec"]:
        return cache["dec"][B.lam]
    del eig_tol  # retained in the signature; the method is fully exact
    n = B.n
    # center: z with z * e_i == e_i * z for all i
    rows = []
    for i in range(n):
        for t in range(n):
            row = []
            for j in range(n):
                a = B.sc.get((j, i), (ZERO,) * n)[t]
                b = B.sc.get((i, j), (ZERO,) * n)[t]
                row.append(a - b)
            rows.append(row)
    center = nullspace(rows)
    M = B.J.order
    for v in center:
        for s in v:
            M = lcm(M, s.order)
    rng = Random(f"{seed}:decompose:{B.lam.values}")

    final = []
    stack = [list(B.unit)]
    while stack:
        E = stack.pop()
        sub = _span([B.mul(E, z) for z in center], n)
        if len(sub) == 1:
            final.append(E)
            continue
        for attempt in range(_SPLIT_RETRIES):
            z = [ZERO] * n
            for w in sub:
                c = CycScalar(rng.randint(1, 9)) * CycScalar.zeta(M, rng.randrange(M))
                z = [zv + c * wv for zv, wv in zip(z, w)]
            coeffs = _minpoly_q(B.mul, E, z, M, len(sub) * max(1, M))
            idems = _crt_idempotents(coeffs, z, E, B.mul, M)
            if idems is not None:
                stack.extend(idems)
                break
        else:
            raise ArithmeticError(
                "the center of B refuses to split over the coefficient field; "
                f"enlarge the scalar order (currently {M})"
            )

    # canonical deterministic order: by rendered literals at the common order
    def _key(e):
        return tuple(s.lift(M).literal() for s in e)

    final.sort(key=_key)
    dims = []
    for e in final:
        r = rank(B.lmul_matrix(list(e)))
        d = isqrt(r)
        if d * d != r:
            raise ArithmeticError(
                f"block of dimension {r} is not a square: the block does not "
                f"split over the coefficient field; enlarge the scalar order "
                f"(currently {M})"
            )
        dims.append(d)
    dec = BlockDecomposition(B, final, tuple(dims))
    if sum(d * d for d in dims) != n:
        raise ArithmeticError("block dimensions do not add up; decomposition failed")
    if not dec.is_transitive():
        raise ArithmeticError(
            "the group does not act transitively on the blocks: "
            "the twist family is corrupted"
        )
    cache["dec"][B.lam] = dec
    return dec


# ---------------------------------------------------------------------------
# bimodules and products


@dataclass
class BimoduleActions:
    """Left B_{lam-mu} and right B_lam action matrices on F_mu[G]."""

    J: TwistFamily
    lam: Character
    mu: Character
    space: FSpace
    left_B: BLambda
    right_B: BLambda
    left_mats: list
    right_mats: list

    def left(self, x):
        """Action matrix of the left-algebra element with coordinates x."""
        m = zeros(self.space.n, self.space.n)
        for i, c in enumerate(x):
            if c:
                li = self.left_mats[i]
                for t in range(self.space.n):
                    for s in range(self.space.n):
                        if li[t][s]:
                            m[t][s] = m[t][s] + c * li[t][s]
        return m

    def right(self, y):
        m = zeros(self.space.n, self.space.n)
        for j, c in enumerate(y):
            if c:
                rj = self.right_mats[j]
                for t in range(self.space.n):
                    for s in range(self.space.n):
                        if rj[t][s]:
                            m[t][s] = m[t][s] + c * rj[t][s]
        return m


def bimodule_actions(J: TwistFamily, lam: Character, mu: Character) -> BimoduleActions:
    """The B_{lam-mu} (left) and B_lam (right) actions on F_mu[G] via J(lam).

    (f o f_mu)(g)  = (f (x) f_mu)((g (x) g) J(lam))   for f in B_{lam-mu},
    (f_mu o f')(g) = (f_mu (x) f')((g (x) g) J(lam))  for f' in B_lam.

    The module laws, commutation of the two actions, and faithfulness are
    verified exactly (pair laws sampled beyond the full-check cap).
    """
    G, A = J.group, J.A
    fsp = FSpace(G, A, mu)
    n = fsp.n
    co, reps, tbl = fsp.coset_of, fsp.reps, G.table
    left_mats = [zeros(n, n) for _ in range(n)]
    right_mats = [zeros(n, n) for _ in range(n)]
    for t in range(n):
        r = reps[t]
        for (a, b), c in J.value(lam).terms.items():
            ga, gb = tbl[r][a], tbl[r][b]
            # left: e_i picks the coset of g a; f_mu is evaluated at g b
            i, s = co[ga], co[gb]
            left_mats[i][t][s] = left_mats[i][t][s] + c * fsp.ws[gb]
            # right: f_mu at g a; e_j picks the coset of g b
            j, s2 = co[gb], co[ga]
            right_mats[j][t][s2] = right_mats[j][t][s2] + c * fsp.ws[ga]

    left_B = build_B(J, lam - mu)
    right_B = build_B(J, lam)
    acts = BimoduleActions(J, lam, mu, fsp, left_B, right_B, left_mats, right_mats)

    if n <= _FULL_BIMODULE_CAP:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        rng = Random(f"bimodule:{lam.values}:{mu.values}")
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(60)]
    for i, j in pairs:
        lprod = acts.left(left_B.sc.get((i, j), (ZERO,) * n))
        if lprod != mat_mul(left_mats[i], left_mats[j]):
            raise ArithmeticError("left module law fails: the twist family is corrupted")
        rprod = acts.right(right_B.sc.get((i, j), (ZERO,) * n))
        if rprod != mat_mul(right_mats[j], right_mats[i]):
            raise ArithmeticError("right module law fails: the twist family is corrupted")
        if mat_mul(left_mats[i], right_mats[j]) != mat_mul(right_mats[j], left_mats[i]):
            raise ArithmeticError("left and right actions do not commute")
    for mats, tag in ((left_mats, "left"), (right_mats, "right")):
        stacked = []
        for t in range(n):
            for s in range(n):
                stacked.append([mats[i][t][s] for i in range(n)])
        if nullspace(stacked):
            raise ArithmeticError(f"the {tag} action is not faithful")
    return acts


@dataclass
class BetaMap:
    """The product F_mu (x)_{B_lam} F_nu -> F_{mu+nu}, with its verification."""

    J: TwistFamily
    lam: Character
    mu: Character
    nu: Character
    source_mu: FSpace
    source_nu: FSpace
    target: FSpace
    matrix: list  # n x n^2, columns indexed by (s, u) -> s * n + u
    relations: list  # balancing relation vectors in the n^2 tensor coordinates

    def apply(self, fmu, fnu) -> list:
        n = self.source_mu.n
        vec = [ZERO] * (n * n)
        for s in range(n):
            if fmu[s]:
                for u in range(n):
                    if fnu[u]:
                        vec[s * n + u] = fmu[s] * fnu[u]
        return mat_vec(self.matrix, vec)


def beta_map(J: TwistFamily, lam: Character, mu: Character, nu: Character) -> BetaMap:
    """beta(f_mu (x) f_nu)(g) = (f_mu (x) f_nu)((g (x) g) J(lam+nu)).

    Computed on F_mu[G] (x) F_nu[G] and verified to descend to the balanced
    tensor product over B_lam (right action on F_mu via J(lam), left action
    on F_nu via J(lam+nu)), to have balanced dimension |G|/|A|, to be
    bijective on the quotient, and to be G-equivariant -- all exactly.
    """
    G, A = J.group, J.A
    fmu = FSpace(G, A, mu)
    fnu = FSpace(G, A, nu)
    ftg = FSpace(G, A, mu + nu)
    n = fmu.n
    co, tbl = fmu.coset_of, G.table
    matrix = zeros(n, n * n)
    for t in range(n):
        r = ftg.reps[t]
        for (a, b), c in J.value(lam + nu).terms.items():
            ga, gb = tbl[r][a], tbl[r][b]
            col = co[ga] * n + co[gb]
            matrix[t][col] = matrix[t][col] + c * fmu.ws[ga] * fnu.ws[gb]

    right_on_mu = bimodule_actions(J, lam, mu)
    left_on_nu = bimodule_actions(J, lam + nu, nu)
    relations = []
    for i in range(n):
        R = right_on_mu.right_mats[i]
        L = left_on_nu.left_mats[i]
        for s in range(n):
            for u in range(n):
                vec = [ZERO] * (n * n)
                for t in range(n):
                    if R[t][s]:
                        vec[t * n + u] = vec[t * n + u] + R[t][s]
                    if L[t][u]:
                        vec[s * n + t] = vec[s * n + t] - L[t][u]
                if any(vec):
                    relations.append(vec)
    rel_basis = _span(relations, n * n)
    if len(rel_basis) != n * n - n:
        raise ArithmeticError(
            f"balanced tensor product has dimension {n * n - len(rel_basis)}, "
            f"expected {n}"
        )
    for vec in rel_basis:
        if any(mat_vec(matrix, vec)):
            raise ArithmeticError("the product map does not kill the balancing relations")
    if len(_span([list(row) for row in zip(*matrix)], n)) != n:
        raise ArithmeticError("the product map is not surjective")
    for h in carrier_generators(G):
        shm, shn, sht = fmu.sh_matrix(h), fnu.sh_matrix(h), ftg.sh_matrix(h)
        lhs = mat_mul(sht, matrix)
        # matrix . (shm (x) shn)
        rhs = zeros(n, n * n)
        for t in range(n):
            for s in range(n):
                for u in range(n):
                    acc = ZERO
                    for s2 in range(n):
                        if shm[s2][s]:
                            for u2 in range(n):
                                if shn[u2][u] and matrix[t][s2 * n + u2]:
                                    acc = acc + matrix[t][s2 * n + u2] * shm[s2][s] * shn[u2][u]
                    rhs[t][s * n + u] = acc
        if lhs != rhs:
            raise ArithmeticError("the product map is not G-equivariant")
    return BetaMap(J, lam, mu, nu, fmu, fnu, ftg, matrix, rel_basis)


# ---------------------------------------------------------------------------
# the twist -> datum map


def _first_ratio(target, reference):
    """The scalar q with target == q * reference, or None if inconsistent."""
    q = None
    for tv, rv in zip(target, reference):
        if rv:
            q = tv * rv.inverse()
            break
    if q is None:
        return None if any(target) else ZERO
    for tv, rv in zip(target, reference):
        if tv != q * rv:
            return None
    return q


def _rational_root(q: Fraction, m: int) -> Fraction | None:
    """The exact m-th root of a positive rational, if it is rational."""

    def _iroot(v: int) -> int | None:
        if v == 1 or m == 1:
            return v if m == 1 else 1
        lo, hi = 1, v
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid**m
            if p == v:
                return mid
            if p < v:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    a, b = _iroot(q.numerator), _iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _sqrt_prime(p: int) -> CycScalar:
    """Exact square root of a prime as a cyclotomic scalar (Gauss sums)."""
    if p == 2:
        z = CycScalar.zeta(8, 1)
        return z + z**7
    # quadratic Gauss sum: sum of legendre(k) zeta_p^k is sqrt(p) or i sqrt(p)
    gs = CycScalar(0)
    for k in range(1, p):
        leg = pow(k, (p - 1) // 2, p)
        term = CycScalar.zeta(p, k)
        gs = gs + (term if leg == 1 else -term)
    if p % 4 == 1:
        return gs
    # p = 3 mod 4: gs = i sqrt(p), so sqrt(p) = -i * gs
    return CycScalar.zeta(4, 3).lift(4 * p) * gs.lift(4 * p)


def _sqrt_rational(q: Fraction) -> CycScalar:
    """Exact square root of a positive rational as a cyclotomic scalar."""
    if q <= 0:
        raise ValueError("square root of a non-positive rational")
    v = q.numerator * q.denominator  # sqrt(a/b) = sqrt(ab)/b
    square, rest = 1, 1
    d = 2
    while d * d <= v:
        while v % (d * d) == 0:
            square *= d
            v //= d * d
        if v % d == 0:
            rest *= d
            v //= d
        d += 1
    rest *= v
    out = _cyc_from_fraction(Fraction(square, q.denominator))
    r = rest
    d = 2
    while r > 1:
        if r % d == 0:
            out = out * _sqrt_prime(d)
            r //= d
        else:
            d += 1
    return out


def _root_scale(P: CycScalar, m: int) -> CycScalar:
    """An exact t with t**m * P a root of unity, for cyclotomic P.

    Splits P = q * rho with q a positive rational and rho a root of unity,
    then takes the exact m-th root of 1/q (rational root for the odd part
    of m, exact square roots for the 2-part).  Raises ArithmeticError when
    no such scalar exists in a cyclotomic field.
    """
    M = P.order
    q = None
    for j in range(M):
        for sign in (1, -1):
            cand = P * CycScalar.zeta(M, (-j) % M) * CycScalar(sign)
            r = cand.rational()
            if r is not None and r > 0:
                q = r
                break
        if q is not None:
            break
    if q is None:
        raise ArithmeticError(
            "normalization scalar is not a rational multiple of a root of unity"
        )
    modd = m
    s = 0
    while modd % 2 == 0:
        modd //= 2
        s += 1
    root = _rational_root(q, modd)
    if root is None:
        raise ArithmeticError(
            f"cannot take an exact {modd}-th root of {q} in a cyclotomic field; "
            "the representation normalization is out of reach at this scalar order"
        )
    t = 1 / root  # q^(-1/modd), still rational
    for _ in range(s - 1):
        troot = _rational_root(t, 2)
        if troot is None:
            raise ArithmeticError(
                f"cannot take an exact {m}-th root of {q} in a cyclotomic "
                "field; the representation normalization is out of reach "
                "at this scalar order"
            )
        t = troot
    return _sqrt_rational(t) if s else _cyc_from_fraction(t)


class _Corner:
    """A block B^i of some B_lam: basis, products, and coordinates."""

    def __init__(self, B: BLambda, e):
        self.B = B
        self.e = tuple(e)
        cols = [list(col) for col in zip(*B.lmul_matrix(list(e)))]
        self.basis = _span(cols, B.n)  # echelonized basis of e * B = B^i
        self.dim = len(self.basis)
        self._bm = [list(v) for v in zip(*self.basis)]  # n x dim coordinate matrix

    def coords(self, vec) -> list:
        sol = solve(self._bm, list(vec))
        if sol is None:
            raise ArithmeticError("element does not lie in the block")
        return sol

    def from_coords(self, cs) -> list:
        return [sum((c * bv for c, bv in zip(cs, col)), ZERO) for col in self._bm]

    def mul(self, x, y):
        return self.B.mul(x, y)

    def inverse(self, u):
        """Inverse of u inside the block (unit = the block idempotent)."""
        mats = [self.coords(self.mul(u, b)) for b in self.basis]
        sol = solve_matrix([list(r) for r in zip(*mats)], [[c] for c in self.coords(self.e)])
        if sol is None:
            raise ArithmeticError("block element is not invertible")
        out = [ZERO] * self.B.n
        for c, b in zip((row[0] for row in sol), self.basis):
            out = [ov + c * bv for ov, bv in zip(out, b)]
        return out

    def corner_of(self, p) -> list:
        """Echelonized basis of p * B^i * p."""
        return _span([self.mul(p, self.mul(b, p)) for b in self.basis], self.B.n)


def _primitive_idempotent(corner: _Corner, d: int, M: int, rng: Random):
    """A primitive idempotent below the block unit, by repeated splitting."""
    p = list(corner.e)
    while True:
        sub = corner.corner_of(p)
        if len(sub) == 1:
            return p
        for attempt in range(_SPLIT_RETRIES):
            z = [ZERO] * corner.B.n
            for w in sub:
                c = CycScalar(rng.randint(1, 9)) * CycScalar.zeta(M, rng.randrange(M))
                z = [zv + c * wv for zv, wv in zip(z, w)]
            # work inside the commutative algebra Q[z] with unit p
            coeffs = _minpoly_q(corner.mul, p, z, M, len(sub) * max(1, M))
            idems = _crt_idempotents(coeffs, z, p, corner.mul, M)
            if idems is not None:
                # descend into the child with the smallest corner
                best = min(idems, key=lambda e: len(corner.corner_of(e)))
                p = best
                break
        else:
            raise ArithmeticError(
                "cannot split a primitive idempotent over the coefficient "
                f"field; enlarge the scalar order (currently {M})"
            )


def _skolem_noether(corner: _Corner, perm, d: int):
    """u in the block with Sh(x) u = u x for all block elements x.

    ``perm`` is the shift permutation of B-coordinates (a coset relabeling);
    the solution is unique up to scalar (asserted) and returned echelonized.
    """
    rows = []
    for x in corner.basis:
        shx = [ZERO] * corner.B.n
        for t, v in enumerate(x):
            shx[perm[t]] = v
        lm = corner.B.lmul_matrix(shx)
        rm = corner.B.rmul_matrix(x)
        fm = [
            [lm[t][s] - rm[t][s] for s in range(corner.B.n)]
            for t in range(corner.B.n)
        ]
        # restrict the unknown u to block coordinates
        for t in range(corner.B.n):
            rows.append(
                [
                    sum((fm[t][s] * bv[s] for s in range(corner.B.n)), ZERO)
                    for bv in corner.basis
                ]
            )
    ns = nullspace(rows)
    if len(ns) != 1:
        raise ArithmeticError(
            f"inner-automorphism solve has solution dimension {len(ns)}, expected 1"
        )
    return corner.from_coords(ns[0])


def extract_datum(J: TwistFamily, seed: int = 0) -> DynamicalDatum:
    """The dynamical datum of a certified twist family.

    Pipeline: decompose every B_lam; fix the block of B_0 that is visible at
    the identity coset; identify the matching block at every other weight
    through the bimodule pairing; K is the stabilizer of the block.  Inside
    each block, shift automorphisms by elements of K are realized as inner,
    the projective representation acts on a split simple column space, and
    the weight-to-weight comparison scalars recalibrate the family so all
    products V_lam (x) V_mu^* are linear with a common root-of-unity-valued
    cocycle.  The result always passes verify_datum (asserted).
    """
    G, A = J.group, J.A
    chars = character_group(A)
    lam0 = chars[0]
    if not lam0.is_trivial():
        raise AssertionError("character group is expected to list the trivial character first")
    decs = {lam: decompose(build_B(J, lam), seed=seed) for lam in chars}
    dec0 = decs[lam0]
    B0 = dec0.B
    t0 = B0.fsp.coset_of[0]
    candidates = [i for i, e in enumerate(dec0.idempotents) if e[t0]]
    if not candidates:
        raise ArithmeticError("no block is visible at the identity coset")
    i0 = candidates[0]
    d = dec0.dims[i0]
    K = dec0.stabilizer(i0)
    kgens = carrier_generators(K)

    # match the fixed block into every other weight via the bimodule pairing
    matched = {lam0: dec0.idempotents[i0]}
    for lam in chars[1:]:
        acts = bimodule_actions(J, lam0, -lam)  # left B_lam, right B_0 on F_{-lam}
        r0 = acts.right(dec0.idempotents[i0])
        dec = decs[lam]
        hits = [
            j
            for j, e in enumerate(dec.idempotents)
            if not is_zero_matrix(mat_mul(acts.left(e), r0))
        ]
        if len(hits) != 1:
            raise ArithmeticError(
                f"bimodule pairing matches {len(hits)} blocks at weight "
                f"{lam.values}, expected exactly 1"
            )
        j = hits[0]
        if dec.dims[j] != d:
            raise ArithmeticError("matched blocks have different dimensions")
        for h in kgens:
            if dec.action(h)[j] != j:
                raise ArithmeticError("the stabilizer does not fix the matched block")
        matched[lam] = dec.idempotents[j]

    M = J.order
    rng = Random(f"{seed}:extract")
    corners = {lam: _Corner(build_B(J, lam), matched[lam]) for lam in chars}
    for lam, corner in corners.items():
        if corner.dim != d * d:
            raise ArithmeticError(
                f"block at weight {lam.values} has dimension {corner.dim}, "
                f"expected {d * d}"
            )

    # inner realizations u_g of the shift automorphisms, per weight
    u_fam: dict = {}
    for lam in chars:
        corner = corners[lam]
        B = corner.B
        us = {0: list(corner.e)}
        for g in K.members:
            if g == 0:
                continue
            if d == 1:
                us[g] = list(corner.e)
            else:
                us[g] = _skolem_noether(corner, B.shift_perm(g), d)
        u_fam[lam] = us

    # normalize the base-weight family so its powers are roots of unity
    if d > 1:
        corner0 = corners[lam0]
        for g in K.members:
            if g == 0:
                continue
            m = G.order_of(g)
            power = list(u_fam[lam0][g])
            for _ in range(m - 1):
                power = corner0.mul(power, u_fam[lam0][g])
            P = _first_ratio(power, list(corner0.e))
            if P is None or not P:
                raise ArithmeticError("shift realization has a non-scalar power")
            t = _root_scale(P.lift(lcm(P.order, M)), m)
            u_fam[lam0][g] = [t * v for v in u_fam[lam0][g]]

    # weight-to-weight comparison scalars against the base weight
    gammas: dict = {}
    for lam in chars:
        if lam == lam0:
            gammas[lam] = {g: ONE for g in K.members}
            continue
        acts = bimodule_actions(J, lam, lam)  # left B_0, right B_lam on F_lam
        fsp = acts.space
        le = acts.left(matched[lam0])
        re = acts.right(matched[lam])
        wbasis = _span([list(col) for col in zip(*mat_mul(le, re))], fsp.n)
        if len(wbasis) != d * d:
            raise ArithmeticError(
                f"bimodule corner at weight {lam.values} has dimension "
                f"{len(wbasis)}, expected {d * d}"
            )
        corner = corners[lam]
        g2gamma = {}
        for g in K.members:
            if g == 0:
                g2gamma[g] = ONE
                continue
            uinv = corner.inverse(u_fam[lam][g])
            map2 = mat_mul(acts.left(u_fam[lam0][g]), acts.right(uinv))
            sh = fsp.sh_matrix(g)
            gamma = None
            for w in wbasis:
                ratio = _first_ratio(mat_vec(map2, w), mat_vec(sh, w))
                if ratio is None:
                    raise ArithmeticError("comparison operator is not proportional to the shift")
                if ratio:
                    if gamma is None:
                        gamma = ratio
                    elif gamma != ratio:
                        raise ArithmeticError("comparison scalar is inconsistent")
            if gamma is None or not gamma:
                raise ArithmeticError("comparison scalar could not be determined")
            g2gamma[g] = gamma
        gammas[lam] = g2gamma

    # column spaces and representation matrices
    reps: dict = {}
    cocycle_values: dict | None = None
    for lam in chars:
        corner = corners[lam]
        p = (
            list(corner.e)
            if d == 1
            else _primitive_idempotent(corner, d, M, rng)
        )
        vcols = _span([corner.mul(b, p) for b in corner.basis], corner.B.n)
        if len(vcols) != d:
            raise ArithmeticError(
                f"column space at weight {lam.values} has dimension "
                f"{len(vcols)}, expected {d}"
            )
        vmat = [list(r) for r in zip(*vcols)]
        mats = {}
        for g in K.members:
            images = [corner.mul(u_fam[lam][g], v) for v in vcols]
            sol = solve_matrix(vmat, [list(r) for r in zip(*images)])
            if sol is None:
                raise ArithmeticError("shift realization does not preserve the column space")
            gam = gammas[lam][g]
            mats[g] = [[gam * sol[i][j] for j in range(d)] for i in range(d)]
        # cocycle of the recalibrated family, asserted weight-independent
        values = {}
        for g in K.members:
            for h in K.members:
                gh = G.table[g][h]
                prod = mat_mul(mats[g], mats[h])
                flat_prod = [x for row in prod for x in row]
                flat_gh = [x for row in mats[gh] for x in row]
                c = _first_ratio(flat_prod, flat_gh)
                if c is None or not c:
                    raise ArithmeticError("representation matrices do not close projectively")
                values[(g, h)] = c
        if cocycle_values is None:
            cocycle_values = values
        elif any(cocycle_values[k] != values[k] for k in values):
            raise ArithmeticError("cocycle depends on the weight after recalibration")
        reps[lam] = mats

    assert cocycle_values is not None
    root_values = {}
    for k, v in cocycle_values.items():
        r = as_root_of_unity(v)
        if r is None:
            raise ArithmeticError(
                f"cocycle value {v!r} is not a root of unity; "
                "enlarge the scalar order"
            )
        root_values[k] = r.to_cyc()
    cocycle = Cocycle2(K, root_values)
    datum = DynamicalDatum(
        G,
        A,
        K,
        {lam: ProjectiveRep(K, d, reps[lam], cocycle) for lam in chars},
    )
    report = verify_datum(datum)
    if not report.ok:
        raise ArithmeticError(
            "extracted datum failed verification:\n" + report.to_text()
        )
    return datum


def is_minimal(J: TwistFamily) -> bool:
    """True when B_lam is simple (a single block) -- checked at the base weight."""
    lam0 = character_group(J.A)[0]
    return decompose(build_B(J, lam0)).blocks == 1


def is_minimizable_witness(J, seed: int = 0) -> Report:
    """Evidence about minimizability: the necessary condition A <= conj(K).

    Accepts a twist family (the datum is extracted first) or a dynamical
    datum directly.  The report records whether A is contained in some
    conjugate of K -- failing that, no gauge transformation can compress the
    twist into a minimal one on a subgroup, so the verdict is decisively
    "non-minimizable"; otherwise the evidence is consistent with
    minimizability but not a certificate (no general decision procedure is
    implemented).
    """
    rep = Report("minimizability evidence")
    if isinstance(J, DynamicalDatum):
        datum = J
        rep.add("datum supplied directly", True)
    else:
        datum = extract_datum(J, seed=seed)
        rep.add("datum extracted from the twist family", True)
    G, A, K = datum.G, datum.A, datum.K
    contained = None
    for g in range(G.size):
        conj = set(K.conjugate_by(g).members)
        if set(A.members) <= conj:
            contained = g
            break
    rep.add(
        "necessary condition evaluated: A contained in a conjugate of K",
        True,
        f"witness g={contained}" if contained is not None else "no conjugate works",
    )
    rep.extras["K order"] = K.order
    rep.extras["dims"] = datum.dims()
    rep.extras["A in conjugate of K"] = contained is not None
    rep.extras["verdict"] = (
        "consistent with minimizability (necessary condition holds; "
        "full certification is out of scope)"
        if contained is not None
        else "non-minimizable: A is not contained in any conjugate of K"
    )
    rep.extras["evidence checked"] = (
        "containment of A in conjugates of K (necessary); "
        "block simplicity and gauge search are not part of this witness"
    )
    return rep
