"""Representations with exact scalars, and dynamical data.

Linear representations come in two internal forms: *monomial* (a permutation
of basis points plus one scalar per point, composed without ever building
matrices — induced representations of 1-dimensional characters stay in this
form at any size) and *dense* (explicit matrices).  On top of them sit
2-cocycles, projective representations, central extensions, and the
``DynamicalDatum``: a subgroup K of G with a family of irreducible projective
representations V_lambda indexed by the characters of an abelian subgroup A,
constrained by Ind_K^G(V_lambda (x) V_{lambda-mu}^*) = Ind_A^G mu.

Every representation is validated on construction: the identity must map to
the identity matrix, and the (co)homomorphism law is checked for all products
s*g with s in a generating set and g arbitrary, which together with the
validated cocycle identity implies the law for all pairs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import lcm

from .groups import (
    Character,
    FiniteGroup,
    Subgroup,
    character_group,
    class_intersection_profile,
    generating_set,
)
from .linalg import (
    det,
    identity,
    kron,
    mat_mul,
    nullspace,
    rank,
    transpose,
    zeros,
)
from .report import Report
from .scalars import CycScalar, RootOfUnity, as_root_of_unity, express_in_order

ZERO = CycScalar(0)
ONE = CycScalar(1)

_DENSE_HOM_CAP = 4096
_ISO_GROUP_CAP = 1000
_ISO_DIM_CAP = 4


class GuardExceeded(ValueError):
    """An operation was asked to run beyond its configured size guard."""


# -- carriers --------------------------------------------------------------------


def carrier_parts(grp) -> tuple[FiniteGroup, tuple[int, ...]]:
    """(parent group, element index tuple) for a FiniteGroup or Subgroup."""
    if isinstance(grp, Subgroup):
        return grp.group, grp.members
    if isinstance(grp, FiniteGroup):
        return grp, tuple(range(grp.size))
    raise TypeError(f"not a group carrier: {grp!r}")


def carrier_generators(grp) -> list[int]:
    parent, elems = carrier_parts(grp)
    return generating_set(elems, parent.mul)


def same_carrier(g1, g2) -> bool:
    p1, e1 = carrier_parts(g1)
    p2, e2 = carrier_parts(g2)
    return p1 == p2 and e1 == e2


# -- linear representations ------------------------------------------------------


class LinearRep:
    """An exact linear representation of a group or subgroup carrier.

    Monomial form: ``perm[g][j]`` is the basis point hit by point j under g,
    with scalar ``scal[g][j]``, i.e. matrix(g)[perm[g][j], j] = scal[g][j].
    Dense form: ``mats[g]`` is the full matrix.  Both are validated
    completely on construction (identity plus generator-products, which is
    equivalent to the full homomorphism law).
    """

    def __init__(self, group, dim: int, *, perm=None, scal=None, mats=None, check: bool = True):
        self.group = group
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("representation dimension must be positive")
        parent, elems = carrier_parts(group)
        self.parent = parent
        self.elems = elems
        self._chars: dict[int, CycScalar] = {}
        if mats is None:
            if perm is None or scal is None:
                raise ValueError("need perm+scal (monomial) or mats (dense)")
            self.form = "monomial"
            self.perm = {g: tuple(int(x) for x in perm[g]) for g in elems}
            self.scal = {g: tuple(scal[g]) for g in elems}
            self.mats = None
        else:
            self.form = "dense"
            self.perm = None
            self.scal = None
            self.mats = {g: [list(row) for row in mats[g]] for g in elems}
        if check:
            self._validate()

    # construction helpers

    @classmethod
    def monomial(cls, group, perm, scal, check: bool = True) -> "LinearRep":
        _, elems = carrier_parts(group)
        dim = len(perm[elems[0]])
        return cls(group, dim, perm=perm, scal=scal, check=check)

    @classmethod
    def dense(cls, group, mats, check: bool = True) -> "LinearRep":
        _, elems = carrier_parts(group)
        dim = len(mats[elems[0]])
        return cls(group, dim, mats=mats, check=check)

    @classmethod
    def from_character(cls, chi: Character) -> "LinearRep":
        """The 1-dimensional representation of chi's domain."""
        A = chi.domain
        perm = {a: (0,) for a in A.members}
        scal = {a: (chi.scalar_at(a),) for a in A.members}
        return cls(A, 1, perm=perm, scal=scal, check=False)

    @classmethod
    def trivial(cls, group) -> "LinearRep":
        _, elems = carrier_parts(group)
        return cls(group, 1, perm={g: (0,) for g in elems}, scal={g: (ONE,) for g in elems}, check=False)

    # validation

    def _validate(self) -> None:
        d = self.dim
        if self.form == "monomial":
            pe, se = self.perm[0], self.scal[0]
            if pe != tuple(range(d)) or any(not s.is_one() for s in se):
                raise ValueError("identity element does not act as the identity")
            for g in self.elems:
                if sorted(self.perm[g]) != list(range(d)):
                    raise ValueError(f"monomial data of element {g} is not a permutation")
                if any(s.is_zero() for s in self.scal[g]):
                    raise ValueError(f"monomial scalar of element {g} vanishes")
        else:
            if self.mats[0] != identity(d):
                raise ValueError("identity element does not act as the identity")
        for s in carrier_generators(self.group):
            for g in self.elems:
                sg = self.parent.mul(s, g)
                if self.form == "monomial":
                    ps, pg, ss, sg_ = self.perm[s], self.perm[g], self.scal[s], self.scal[g]
                    comp_p = tuple(ps[pg[j]] for j in range(d))
                    comp_s = tuple(ss[pg[j]] * sg_[j] for j in range(d))
                    if comp_p != self.perm[sg] or any(
                        x != y for x, y in zip(comp_s, self.scal[sg])
                    ):
                        raise ValueError(f"homomorphism law fails at product ({s},{g})")
                else:
                    if mat_mul(self.mats[s], self.mats[g]) != self.mats[sg]:
                        raise ValueError(f"homomorphism law fails at product ({s},{g})")

    # access

    def matrix(self, g: int):
        if self.form == "dense":
            return self.mats[g]
        m = zeros(self.dim, self.dim)
        p, s = self.perm[g], self.scal[g]
        for j in range(self.dim):
            m[p[j]][j] = s[j]
        return m

    def character(self, g: int) -> CycScalar:
        if g not in self._chars:
            if self.form == "monomial":
                p, s = self.perm[g], self.scal[g]
                tot = ZERO
                for j in range(self.dim):
                    if p[j] == j:
                        tot = tot + s[j]
                self._chars[g] = tot
            else:
                tot = ZERO
                for j in range(self.dim):
                    tot = tot + self.mats[g][j][j]
                self._chars[g] = tot
        return self._chars[g]

    def apply(self, g: int, vec):
        """matrix(g) @ vec without materializing monomial matrices."""
        if self.form == "monomial":
            p, s = self.perm[g], self.scal[g]
            out = [ZERO] * self.dim
            for j, v in enumerate(vec):
                if v:
                    out[p[j]] = out[p[j]] + s[j] * v
            return out
        out = [ZERO] * self.dim
        for i, row in enumerate(self.mats[g]):
            tot = ZERO
            for x, v in zip(row, vec):
                if x and v:
                    tot = tot + x * v
            out[i] = tot
        return out

    def __repr__(self):
        return f"<LinearRep dim {self.dim} ({self.form}) of {len(self.elems)} elements>"


def regular_rep(G: FiniteGroup) -> LinearRep:
    """The left regular representation g . e_h = e_{gh}, monomial form."""
    ones = tuple([ONE] * G.size)
    perm = {g: tuple(G.table[g][h] for h in range(G.size)) for g in range(G.size)}
    scal = {g: ones for g in range(G.size)}
    return LinearRep(G, G.size, perm=perm, scal=scal, check=False)


def induce(rho: LinearRep, G: FiniteGroup) -> LinearRep:
    """The induced representation of a subgroup representation.

    Basis: (coset block t, inner index b) -> t*dim(rho) + b over the left
    cosets of the subgroup, each represented by its smallest member.
    Monomial input stays monomial at any size; dense input is materialized
    only for small induced dimensions.
    """
    if isinstance(rho.group, FiniteGroup):
        if rho.group != G:
            raise ValueError("a full-group representation can only be induced to itself")
        return rho
    K: Subgroup = rho.group
    if K.group != G:
        raise ValueError("subgroup does not live in the target group")
    cosets = K.left_cosets()
    reps = [c[0] for c in cosets]
    cos_of = [0] * G.size
    for t, c in enumerate(cosets):
        for x in c:
            cos_of[x] = t
    d, T = rho.dim, len(cosets)
    D = T * d
    if rho.form == "monomial":
        perm, scal = {}, {}
        for g in range(G.size):
            p = [0] * D
            s = [ONE] * D
            for t in range(T):
                gt = G.table[g][reps[t]]
                t2 = cos_of[gt]
                k = G.table[G.inv[reps[t2]]][gt]
                pk, sk = rho.perm[k], rho.scal[k]
                for b in range(d):
                    p[t * d + b] = t2 * d + pk[b]
                    s[t * d + b] = sk[b]
            perm[g] = tuple(p)
            scal[g] = tuple(s)
        out = LinearRep(G, D, perm=perm, scal=scal, check=False)
    else:
        if D > 64:
            raise GuardExceeded(f"dense induction to dimension {D} exceeds the cap 64")
        mats = {}
        for g in range(G.size):
            m = zeros(D, D)
            for t in range(T):
                gt = G.table[g][reps[t]]
                t2 = cos_of[gt]
                k = G.table[G.inv[reps[t2]]][gt]
                mk = rho.matrix(k)
                for a in range(d):
                    for b in range(d):
                        if mk[a][b]:
                            m[t2 * d + a][t * d + b] = mk[a][b]
            mats[g] = m
        out = LinearRep(G, D, mats=mats, check=False)
    out.induced_from = (rho, cosets, tuple(reps))
    return out


def induced_character(rho: LinearRep, G: FiniteGroup, g: int) -> CycScalar:
    """chi^(G)(g) = (1/|K|) sum over x in G with x^-1 g x in K of chi(x^-1 g x)."""
    if isinstance(rho.group, FiniteGroup):
        if rho.group != G:
            raise ValueError("carrier mismatch")
        return rho.character(g)
    K: Subgroup = rho.group
    mem = set(K.members)
    tot = ZERO
    for x in range(G.size):
        y = G.table[G.table[G.inv[x]][g]][x]
        if y in mem:
            tot = tot + rho.character(y)
    return tot * CycScalar(1) / CycScalar(K.order)


def character_inner(rho1: LinearRep, rho2: LinearRep) -> CycScalar:
    """<chi_1, chi_2> = (1/|carrier|) sum chi_1(g) chi_2(g^-1), exact."""
    if not same_carrier(rho1.group, rho2.group):
        raise ValueError("inner product needs a common carrier")
    parent, elems = carrier_parts(rho1.group)
    tot = ZERO
    for g in elems:
        a = rho1.character(g)
        if a:
            b = rho2.character(parent.inv[g])
            if b:
                tot = tot + a * b
    return tot / CycScalar(len(elems))


def hom_space(rho1: LinearRep, rho2: LinearRep, check_dim: bool = True) -> list:
    """Basis of {T : T rho1(g) = rho2(g) T for all g}, exact.

    Two monomial representations use a pair-orbit propagation that never
    builds matrices; any dense input falls back to a generator-constraint
    nullspace, capped at 4096 unknowns.  The result dimension is checked
    against the character inner product.
    """
    if not same_carrier(rho1.group, rho2.group):
        raise ValueError("hom_space needs representations of the same carrier")
    parent, _ = carrier_parts(rho1.group)
    gens = carrier_generators(rho1.group)
    edges = sorted({g for s in gens for g in (s, parent.inv[s])})
    d1, d2 = rho1.dim, rho2.dim
    basis = []
    if rho1.form == "monomial" and rho2.form == "monomial":
        state = {}  # (a, b) -> orbit id
        orbits = []  # orbit id -> (values dict or None if inconsistent)
        for a0 in range(d2):
            for b0 in range(d1):
                if (a0, b0) in state:
                    continue
                oid = len(orbits)
                vals = {(a0, b0): ONE}
                alive = True
                queue = [(a0, b0)]
                state[(a0, b0)] = oid
                while queue:
                    a, b = queue.pop()
                    v = vals[(a, b)]
                    for g in edges:
                        na = rho2.perm[g][a]
                        nb = rho1.perm[g][b]
                        nv = v * rho2.scal[g][a] / rho1.scal[g][b]
                        if (na, nb) in vals:
                            if alive and vals[(na, nb)] != nv:
                                alive = False
                        else:
                            vals[(na, nb)] = nv
                            state[(na, nb)] = oid
                            queue.append((na, nb))
                orbits.append(vals if alive else None)
        for vals in orbits:
            if vals is None:
                continue
            m = zeros(d2, d1)
            for (a, b), v in vals.items():
                m[a][b] = v
            basis.append(m)
    else:
        if d1 * d2 > _DENSE_HOM_CAP:
            raise GuardExceeded(
                f"dense hom solve with {d1 * d2} unknowns exceeds the cap {_DENSE_HOM_CAP}"
            )
        rows = []
        for g in gens:
            m1 = rho1.matrix(g)
            m2 = rho2.matrix(g)
            # (T m1 - m2 T)[a][b] = 0 ; unknowns T[a][b] flattened a*d1+b
            for a in range(d2):
                for b in range(d1):
                    row = [ZERO] * (d1 * d2)
                    for c in range(d1):
                        if m1[c][b]:
                            row[a * d1 + c] = row[a * d1 + c] + m1[c][b]
                    for c in range(d2):
                        if m2[a][c]:
                            row[c * d1 + b] = row[c * d1 + b] - m2[a][c]
                    rows.append(row)
        if not rows:  # trivial carrier: every matrix intertwines
            for a in range(d2):
                for b in range(d1):
                    m = zeros(d2, d1)
                    m[a][b] = ONE
                    basis.append(m)
        else:
            for vec in nullspace(rows):
                basis.append([[vec[a * d1 + b] for b in range(d1)] for a in range(d2)])
    if check_dim:
        expect = character_inner(rho2, rho1)
        if CycScalar(len(basis)) != expect:
            raise ArithmeticError(
                f"hom_space dimension {len(basis)} disagrees with character pairing {expect}"
            )
    return basis


def weight_space(rho: LinearRep, A: Subgroup, mu: Character) -> list:
    """Basis of {x : rho(a) x = mu(a) x for all a in A}, exact."""
    parent, elems = carrier_parts(rho.group)
    if A.group != parent or any(a not in set(elems) for a in A.members):
        raise ValueError("A must sit inside the representation's carrier")
    agens = generating_set(A.members, parent.mul)
    if not agens:
        agens = []
    edges = sorted({g for s in agens for g in (s, parent.inv[s])})
    basis = []
    if rho.form == "monomial":
        seen = set()
        for b0 in range(rho.dim):
            if b0 in seen:
                continue
            vals = {b0: ONE}
            alive = True
            queue = [b0]
            seen.add(b0)
            while queue:
                b = queue.pop()
                v = vals[b]
                for a in edges:
                    nb = rho.perm[a][b]
                    # rho(a) x = mu(a) x forces x_{nb} = scal(a)[b] x_b / mu(a)
                    nv = v * rho.scal[a][b] / mu.scalar_at(a)
                    if nb in vals:
                        if alive and vals[nb] != nv:
                            alive = False
                    else:
                        vals[nb] = nv
                        seen.add(nb)
                        queue.append(nb)
            if alive:
                vec = [ZERO] * rho.dim
                for b, v in vals.items():
                    vec[b] = v
                basis.append(vec)
    else:
        rows = []
        for a in agens or A.members[:1]:
            m = rho.matrix(a)
            ma = mu.scalar_at(a)
            for i in range(rho.dim):
                row = list(m[i])
                row[i] = row[i] - ma
                rows.append(row)
        if not rows:  # trivial A
            return [[ONE if i == j else ZERO for i in range(rho.dim)] for j in range(rho.dim)]
        basis = nullspace(rows)
    return basis


# -- cocycles and projective representations -------------------------------------


class Cocycle2:
    """A normalized 2-cocycle on a group carrier with nonzero exact values."""

    def __init__(self, group, values: dict, check: bool = True):
        self.group = group
        parent, elems = carrier_parts(group)
        self.parent = parent
        self.elems = elems
        self.values = {(g, h): values[(g, h)] for g in elems for h in elems}
        if check:
            self._validate()

    @classmethod
    def trivial(cls, group) -> "Cocycle2":
        _, elems = carrier_parts(group)
        return cls(group, {(g, h): ONE for g in elems for h in elems}, check=False)

    def _validate(self) -> None:
        for v in self.values.values():
            if v.is_zero():
                raise ValueError("cocycle values must be nonzero")
        for g in self.elems:
            if not self.values[(0, g)].is_one() or not self.values[(g, 0)].is_one():
                raise ValueError("cocycle is not normalized at the identity")
        roots = self.root_table()
        t = self.parent.table
        if roots is not None:
            M = self.kernel_order()
            dlog = {k: r.exp * (M // r.order) for k, r in roots.items()}
            for g in self.elems:
                for h in self.elems:
                    gh = t[g][h]
                    a = dlog[(g, h)]
                    for l in self.elems:
                        if (a + dlog[(gh, l)] - dlog[(h, l)] - dlog[(g, t[h][l])]) % M:
                            raise ValueError(f"cocycle identity fails at ({g},{h},{l})")
        else:
            for g in self.elems:
                for h in self.elems:
                    gh = t[g][h]
                    v = self.values[(g, h)]
                    for l in self.elems:
                        if v * self.values[(gh, l)] != self.values[(h, l)] * self.values[(g, t[h][l])]:
                            raise ValueError(f"cocycle identity fails at ({g},{h},{l})")

    def __call__(self, g: int, h: int) -> CycScalar:
        return self.values[(g, h)]

    def root_table(self) -> dict | None:
        """values as RootOfUnity when every value is one, else None."""
        if not hasattr(self, "_roots"):
            out = {}
            for k, v in self.values.items():
                r = as_root_of_unity(v)
                if r is None:
                    out = None
                    break
                out[k] = r
            self._roots = out
        return self._roots

    def kernel_order(self) -> int:
        roots = self.root_table()
        if roots is None:
            raise ValueError("cocycle has values that are not roots of unity")
        M = 1
        for r in roots.values():
            M = lcm(M, r.order)
        return M

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values.values())

    def __eq__(self, other):
        return (
            isinstance(other, Cocycle2)
            and self.elems == other.elems
            and all(self.values[k] == other.values[k] for k in self.values)
        )

    def __hash__(self):
        return hash((self.elems, len(self.values)))

    def __repr__(self):
        kind = "trivial" if self.is_trivial() else "nontrivial"
        return f"<Cocycle2 ({kind}) on {len(self.elems)} elements>"


class ProjectiveRep:
    """pi(g) pi(h) = c(g, h) pi(gh), exact, with an explicit Cocycle2."""

    def __init__(self, group, dim: int, matrices: dict, cocycle: Cocycle2, check: bool = True):
        self.group = group
        self.dim = int(dim)
        parent, elems = carrier_parts(group)
        self.parent = parent
        self.elems = elems
        self.cocycle = cocycle
        self.mats = {g: [list(row) for row in matrices[g]] for g in elems}
        self._chars: dict[int, CycScalar] = {}
        self._trinv: dict[int, CycScalar] = {}
        self._irr: bool | None = None
        if check:
            if not same_carrier(group, cocycle.group):
                raise ValueError("cocycle lives on a different carrier")
            if self.mats[0] != identity(self.dim):
                raise ValueError("identity element does not act as the identity")
            for s in carrier_generators(group):
                ms = self.mats[s]
                for g in elems:
                    sg = parent.mul(s, g)
                    lhs = mat_mul(ms, self.mats[g])
                    rhs = [[x * cocycle(s, g) for x in row] for row in self.mats[sg]]
                    if lhs != rhs:
                        raise ValueError(f"projective law fails at product ({s},{g})")

    def matrix(self, g: int):
        return self.mats[g]

    def inverse_matrix(self, g: int):
        """pi(g)^-1 = c(g, g^-1)^-1 pi(g^-1)."""
        gi = self.parent.inv[g]
        f = self.cocycle(g, gi).inverse()
        return [[x * f for x in row] for row in self.mats[gi]]

    def character(self, g: int) -> CycScalar:
        if g not in self._chars:
            tot = ZERO
            for j in range(self.dim):
                tot = tot + self.mats[g][j][j]
            self._chars[g] = tot
        return self._chars[g]

    def trace_inverse(self, g: int) -> CycScalar:
        """tr(pi(g)^-1), computed through the cocycle without inverting."""
        if g not in self._trinv:
            gi = self.parent.inv[g]
            self._trinv[g] = self.character(gi) * self.cocycle(g, gi).inverse()
        return self._trinv[g]

    def is_irreducible(self) -> bool:
        """True when the matrices pi(K) span the full dim^2 matrix space."""
        if self._irr is None:
            vecs = [[self.mats[g][i][j] for i in range(self.dim) for j in range(self.dim)] for g in self.elems]
            self._irr = rank(vecs) == self.dim * self.dim
        return self._irr

    def rescaled(self, t: dict) -> "ProjectiveRep":
        """The representation g -> t(g) pi(g); cocycle picks up the coboundary."""
        parent, elems = carrier_parts(self.group)
        if not t[0].is_one():
            raise ValueError("rescaling must fix the identity")
        vals = {
            (g, h): self.cocycle(g, h) * t[g] * t[h] / t[parent.table[g][h]]
            for g in elems
            for h in elems
        }
        c2 = Cocycle2(self.group, vals, check=False)
        mats = {g: [[x * t[g] for x in row] for row in self.mats[g]] for g in elems}
        return ProjectiveRep(self.group, self.dim, mats, c2, check=False)

    def __repr__(self):
        return f"<ProjectiveRep dim {self.dim} on {len(self.elems)} elements>"


def tensor_pair_rep(pi1: ProjectiveRep, pi2: ProjectiveRep, check: bool = True) -> LinearRep:
    """The linear representation V1 (x) V2^* when the two cocycles agree.

    Matrix: pi1(k) (x) (pi2(k)^-1)^T; the cocycles cancel exactly, which is
    verified by the LinearRep constructor.
    """
    if not same_carrier(pi1.group, pi2.group):
        raise ValueError("tensor pair needs a common carrier")
    _, elems = carrier_parts(pi1.group)
    mats = {k: kron(pi1.matrix(k), transpose(pi2.inverse_matrix(k))) for k in elems}
    return LinearRep.dense(pi1.group, mats, check=check)


# -- central extensions -----------------------------------------------------------


class CentralExtension:
    """The group on K x Z/M with (g,x)(h,y) = (gh, x + y + dlog c(g,h)).

    Index layout: (position of k in the carrier, x) -> pos*M + x, so the
    identity stays at index 0.  ``section`` embeds K at x=0; ``project``
    forgets the kernel coordinate.
    """

    def __init__(self, base, cocycle: Cocycle2):
        self.base = base
        self.cocycle = cocycle
        parent, elems = carrier_parts(base)
        roots = cocycle.root_table()
        if roots is None:
            raise ValueError("central extension needs root-of-unity cocycle values")
        M = cocycle.kernel_order()
        self.kernel_order = M
        n = len(elems)
        pos = {g: i for i, g in enumerate(elems)}
        dlog = {k: r.exp * (M // r.order) for k, r in roots.items()}
        table = [[0] * (n * M) for _ in range(n * M)]
        for i, g in enumerate(elems):
            for j, h in enumerate(elems):
                ij = pos[parent.table[g][h]] * M
                e = dlog[(g, h)]
                for x in range(M):
                    row = table[i * M + x]
                    for y in range(M):
                        row[j * M + y] = ij + (x + y + e) % M
        labels = [f"({parent.labels[g]},{x})" for g in elems for x in range(M)]
        self.group = FiniteGroup(table, labels=labels)
        self._elems = elems
        self._pos = pos

    def section(self, k: int) -> int:
        """The extension index of (k, 0)."""
        return self._pos[k] * self.kernel_order

    def project(self, idx: int) -> int:
        """The base element under an extension index."""
        return self._elems[idx // self.kernel_order]

    def kernel_exponent(self, idx: int) -> int:
        return idx % self.kernel_order

    def lift(self, pi: ProjectiveRep) -> LinearRep:
        """The linear representation (k, x) -> zeta^x pi(k) of the extension."""
        if pi.cocycle != self.cocycle:
            raise ValueError("representation has a different cocycle")
        M = self.kernel_order
        mats = {}
        for i, k in enumerate(self._elems):
            base = pi.matrix(k)
            for x in range(M):
                z = CycScalar.zeta(M, x)
                mats[i * M + x] = [[v * z for v in row] for row in base]
        return LinearRep.dense(self.group, mats, check=True)

    def __repr__(self):
        return f"<CentralExtension of {len(self._elems)} by Z/{self.kernel_order}>"


def central_extension(c: Cocycle2) -> CentralExtension:
    return CentralExtension(c.group, c)


# -- dynamical data ---------------------------------------------------------------


class DynamicalDatum:
    """A subgroup K of G with projective irreducibles V_lambda over A^*."""

    def __init__(self, G: FiniteGroup, A: Subgroup, K: Subgroup, reps: dict):
        self.G = G
        self.A = A
        self.K = K
        self.characters = character_group(A)
        if set(reps.keys()) != set(self.characters):
            raise ValueError("need exactly one representation per character of A")
        for lam, pi in reps.items():
            _, elems = carrier_parts(pi.group)
            if elems != K.members:
                raise ValueError(f"representation at {lam!r} does not live on K")
        self.reps = dict(reps)
        self._ext: CentralExtension | None = None
        self._lifted: dict = {}

    @property
    def cocycle(self) -> Cocycle2:
        return self.reps[self.characters[0]].cocycle

    def rep(self, lam: Character) -> ProjectiveRep:
        return self.reps[lam]

    def extension(self) -> CentralExtension:
        if self._ext is None:
            self._ext = CentralExtension(self.K, self.cocycle)
        return self._ext

    def lifted(self, lam: Character) -> LinearRep:
        if lam not in self._lifted:
            self._lifted[lam] = self.extension().lift(self.reps[lam])
        return self._lifted[lam]

    def dims(self) -> tuple[int, ...]:
        return tuple(self.reps[lam].dim for lam in self.characters)

    def __repr__(self):
        return (
            f"<DynamicalDatum |G|={self.G.size} |A|={self.A.order} |K|={self.K.order} "
            f"dims={self.dims()}>"
        )


def trivial_datum(G: FiniteGroup, A: Subgroup) -> DynamicalDatum:
    """The datum of the constant twist 1 (x) 1: K = A and V_lambda = lambda.

    Each character of A is its own one-dimensional representation; this is
    the identity-assignment datum, and it is what the unit twist extracts to.
    """
    c = Cocycle2.trivial(A)
    reps = {}
    for lam in character_group(A):
        mats = {a: [[lam.scalar_at(a)]] for a in A.members}
        reps[lam] = ProjectiveRep(A, 1, mats, c, check=False)
    return DynamicalDatum(G, A, Subgroup(G, A.members), reps)


def _pair_character(pi1: ProjectiveRep, pi2: ProjectiveRep, k: int) -> CycScalar:
    """Character of V1 (x) V2^* at k: chi_1(k) tr(pi_2(k)^-1)."""
    return pi1.character(k) * pi2.trace_inverse(k)


def verify_datum(D: DynamicalDatum) -> Report:
    """Certify a dynamical datum, itemizing every check.

    (a) all cocycles are equal on the nose; (b) every representation is
    irreducible (its matrices span the full matrix space); (c) for all
    lambda, mu the induced character of V_lambda (x) V_{lambda-mu}^* from K
    equals the induced character of mu from A, on every conjugacy class of
    G, in both tensor orders; (d) the lifted representations are pairwise
    non-equivalent over the central extension (pairwise distinct character
    tables).
    """
    rep = Report(f"dynamical datum |G|={D.G.size} |A|={D.A.order} |K|={D.K.order}")
    chars = D.characters
    c0 = D.cocycle
    ok_c = all(D.reps[lam].cocycle == c0 for lam in chars)
    rep.add("cocycles-equal", ok_c, "" if ok_c else "representations carry different cocycles")
    for i, lam in enumerate(chars):
        ok = D.reps[lam].is_irreducible()
        rep.add(f"irreducible[{i}]", ok, "" if ok else "matrix span is a proper subspace")
    G, A, K = D.G, D.A, D.K
    kmem = set(K.members)
    amem = set(A.members)
    class_reps = [cls[0] for cls in G.conjugacy_classes()]
    # fuse each class into K and into A once; all character pairs reuse it
    fus_k: list[Counter] = []
    fus_a: list[Counter] = []
    for g in class_reps:
        ck: Counter = Counter()
        ca: Counter = Counter()
        for x in range(G.size):
            y = G.table[G.table[G.inv[x]][g]][x]
            if y in kmem:
                ck[y] += 1
            if y in amem:
                ca[y] += 1
        fus_k.append(ck)
        fus_a.append(ca)
    na, nk = CycScalar(A.order), CycScalar(K.order)
    for i, lam in enumerate(chars):
        for j, mu in enumerate(chars):
            pi_hi = D.reps[lam]
            pi_lo = D.reps[lam - mu]
            for order_tag, p1, p2, target in (
                ("lo*", pi_hi, pi_lo, mu),
                ("hi*", pi_lo, pi_hi, -mu),
            ):
                ok = True
                detail = ""
                for g, ck, ca in zip(class_reps, fus_k, fus_a):
                    lhs = ZERO
                    for y, n in ck.items():
                        lhs = lhs + _pair_character(p1, p2, y) * n
                    rhs = ZERO
                    for y, n in ca.items():
                        rhs = rhs + target.scalar_at(y) * n
                    if lhs * na != rhs * nk:
                        ok = False
                        detail = f"induced characters differ at class of element {g}"
                        break
                rep.add(f"ind-character[{i},{j}][{order_tag}]", ok, detail)
    for i in range(len(chars)):
        chi_i = D.reps[chars[i]]
        for j in range(i + 1, len(chars)):
            chi_j = D.reps[chars[j]]
            ok = any(chi_i.character(k) != chi_j.character(k) for k in K.members)
            rep.add(
                f"distinct[{i},{j}]",
                ok,
                "" if ok else "equal characters give equivalent extension modules",
            )
    return rep


@dataclass(frozen=True)
class InvariantRecord:
    """Canonical isomorphism invariants of a dynamical datum.

    ``k_class`` is the lexicographically least member tuple among all
    conjugates of K (a complete conjugacy encoding); ``k_profile`` counts K's
    members in each conjugacy class of G; ``dims`` lists dim V_lambda in
    canonical character order; ``pair_table`` renders the characters of the
    linear representations V_lambda (x) V_mu^* transported to the canonical
    conjugate, minimized over all transporting elements.
    """

    group_order: int
    k_class: tuple
    k_profile: tuple
    dims: tuple
    pair_table: tuple

    def to_text(self) -> str:
        lines = [
            f"group order   {self.group_order}",
            f"K class       {self.k_class}",
            f"K profile     {self.k_profile}",
            f"dims          {self.dims}",
            f"pair table    {len(self.pair_table)} rows",
        ]
        for row in self.pair_table:
            lines.append("  " + " | ".join(row))
        return "\n".join(lines)


def datum_invariants(D: DynamicalDatum) -> InvariantRecord:
    G, K = D.G, D.K
    chars = D.characters
    conj_of = {}
    for g in range(G.size):
        conj_of[g] = tuple(sorted(G.conj(g, k) for k in K.members))
    k_class = min(conj_of.values())
    # transporters matter only through their conjugation action on the class
    actions = {}
    for g in range(G.size):
        if conj_of[g] == k_class:
            gi = G.inv[g]
            actions.setdefault(tuple(G.conj(gi, k0) for k0 in k_class), g)
    E = D.extension().group.exponent()
    pair_vals = {}
    for i, lam in enumerate(chars):
        for j, mu in enumerate(chars):
            pair_vals[(i, j)] = {
                k: _pair_character(D.reps[lam], D.reps[mu], k) for k in K.members
            }
    best = None
    for pulled in actions:
        rows = []
        for i in range(len(chars)):
            for j in range(len(chars)):
                vals = pair_vals[(i, j)]
                row = []
                for k in pulled:
                    w = express_in_order(vals[k], E)
                    if w is None:
                        raise ArithmeticError(
                            "pair character outside the extension's cyclotomic field"
                        )
                    row.append(w.literal())
                rows.append(tuple(row))
        rendering = tuple(rows)
        if best is None or rendering < best:
            best = rendering
    return InvariantRecord(
        group_order=G.size,
        k_class=k_class,
        k_profile=class_intersection_profile(K),
        dims=D.dims(),
        pair_table=best,
    )


# -- isomorphism of data ----------------------------------------------------------


@dataclass
class DataIsomorphism:
    """A verified isomorphism witness between two dynamical data."""

    g: int
    alpha: dict
    phis: dict

    def verify(self, D1: DynamicalDatum, D2: DynamicalDatum) -> bool:
        G = D1.G
        g = self.g
        if {G.conj(g, k) for k in D1.K.members} != set(D2.K.members):
            return False
        for lam in D1.characters:
            pi1 = D1.reps[lam]
            pi2 = D2.reps[lam]
            phi = self.phis[lam]
            for k in D1.K.members:
                lhs = mat_mul(pi2.matrix(G.conj(g, k)), phi)
                a = self.alpha[k]
                rhs = [[x * a for x in row] for row in mat_mul(phi, pi1.matrix(k))]
                if lhs != rhs:
                    return False
        return True


def _power_cocycle(c: Cocycle2, parent: FiniteGroup, k: int, m: int) -> CycScalar:
    """prod_{i=1}^{m-1} c(k^i, k), the scalar with pi(k)^m = (that) pi(k^m)."""
    out = ONE
    x = k
    for _ in range(m - 1):
        out = out * c(x, k)
        x = parent.table[x][k]
    return out


def _conjugated_cocycle_ratio(D1, D2, g: int):
    """q(k,l) = c2(gkg^-1, glg^-1) / c1(k,l) on K1, or None if not root-valued."""
    G = D1.G
    c1, c2 = D1.cocycle, D2.cocycle
    q = {}
    for k in D1.K.members:
        gk = G.conj(g, k)
        for l in D1.K.members:
            q[(k, l)] = c2(gk, G.conj(g, l)) / c1(k, l)
    return q


def _alpha_candidates(D1, D2, g: int):
    """All functions alpha on K1 with d(alpha) = q, via generator assignments."""
    G = D1.G
    K1 = D1.K
    q = _conjugated_cocycle_ratio(D1, D2, g)
    gens = generating_set(K1.members, G.mul)
    if not gens:
        yield {0: ONE}
        return
    c1, c2 = D1.cocycle, D2.cocycle
    choices = []
    for s in gens:
        m = G.order_of(s)
        target = _power_cocycle(c2, G, G.conj(g, s), m) / _power_cocycle(c1, G, s, m)
        r = as_root_of_unity(target)
        if r is None:
            raise GuardExceeded("isomorphism search needs root-of-unity cocycles")
        base = RootOfUnity(r.order * m, r.exp)  # one exact m-th root
        choices.append([(base * RootOfUnity(m, j)).to_cyc() for j in range(m)])

    def build(assign):
        alpha = {0: ONE}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for s, val in zip(gens, assign):
                y = G.table[x][s]
                if y not in alpha:
                    alpha[y] = alpha[x] * val / q[(x, s)]
                    frontier.append(y)
        if len(alpha) != K1.order:
            return None
        for k in K1.members:
            ak = alpha[k]
            for l in K1.members:
                if ak * alpha[l] != q[(k, l)] * alpha[G.table[k][l]]:
                    return None
        return alpha

    def rec(i, assign):
        if i == len(gens):
            a = build(assign)
            if a is not None:
                yield a
            return
        for val in choices[i]:
            yield from rec(i + 1, assign + [val])

    yield from rec(0, [])


def data_isomorphic(D1: DynamicalDatum, D2: DynamicalDatum) -> DataIsomorphism | None:
    """Search for an isomorphism witness; None when provably none exists.

    Enumerates conjugating elements g with Ad_g K1 = K2; for each, finds all
    multiplier functions alpha compatible with the two cocycles and solves
    for projective isomorphisms phi_lambda with that common alpha.  Exact
    and complete within the size guard (|G| <= 1000, dims <= 4).
    """
    if D1.G != D2.G or D1.A.members != D2.A.members:
        raise ValueError("data live over different (G, A)")
    G = D1.G
    if G.size > _ISO_GROUP_CAP or max(max(D1.dims()), max(D2.dims())) > _ISO_DIM_CAP:
        raise GuardExceeded(
            f"isomorphism search guard: |G| <= {_ISO_GROUP_CAP} and dim <= {_ISO_DIM_CAP}"
        )
    if D1.dims() != D2.dims():
        return None
    k2 = set(D2.K.members)
    chars = D1.characters
    for g in range(G.size):
        if {G.conj(g, k) for k in D1.K.members} != k2:
            continue
        if all(d == 1 for d in D1.dims()):
            alpha = {}
            ok = True
            for k in D1.K.members:
                gk = G.conj(g, k)
                ratios = [
                    D2.reps[lam].matrix(gk)[0][0] / D1.reps[lam].matrix(k)[0][0]
                    for lam in chars
                ]
                if any(r != ratios[0] for r in ratios[1:]):
                    ok = False
                    break
                alpha[k] = ratios[0]
            if ok:
                wit = DataIsomorphism(g=g, alpha=alpha, phis={lam: [[ONE]] for lam in chars})
                if wit.verify(D1, D2):
                    return wit
                raise ArithmeticError("internal: scalar witness failed verification")
            continue
        for alpha in _alpha_candidates(D1, D2, g):
            phis = {}
            good = True
            for lam in chars:
                pi1 = D1.reps[lam]
                pi2 = D2.reps[lam]
                d = pi1.dim
                rows = []
                for s in generating_set(D1.K.members, G.mul) or D1.K.members[:1]:
                    m1 = [[x * alpha[s] for x in row] for row in pi1.matrix(s)]
                    m2 = pi2.matrix(G.conj(g, s))
                    for a in range(d):
                        for b in range(d):
                            row = [ZERO] * (d * d)
                            for cc in range(d):
                                if m1[cc][b]:
                                    row[a * d + cc] = row[a * d + cc] + m1[cc][b]
                                if m2[a][cc]:
                                    row[cc * d + b] = row[cc * d + b] - m2[a][cc]
                            rows.append(row)
                sols = nullspace(rows)
                phi = None
                for vec in sols:
                    cand = [[vec[a * d + b] for b in range(d)] for a in range(d)]
                    if not det(cand).is_zero():
                        phi = cand
                        break
                if phi is None:
                    good = False
                    break
                phis[lam] = phi
            if good:
                wit = DataIsomorphism(g=g, alpha=dict(alpha), phis=phis)
                if wit.verify(D1, D2):
                    return wit
                raise ArithmeticError("internal: matrix witness failed verification")
    return None
