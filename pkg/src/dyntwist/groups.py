"""Finite groups as validated Cayley tables, subgroups, and characters.

Elements are integer indices 0..n-1 with 0 the identity.  Builders produce
deterministic element orderings so that serialized objects are reproducible.
Characters of abelian subgroups take values in roots of unity of the
subgroup's exponent and are enumerated canonically (trivial character first,
then lexicographically by exponent tuple).
"""

from __future__ import annotations

import random
from itertools import product as iproduct
from math import lcm

import numpy as np

from .scalars import CycScalar, RootOfUnity

_GENERATION_CAP = 10000


class FiniteGroup:
    """A finite group given by its Cayley table.

    table[i][j] is the index of the product (element i) * (element j).
    Index 0 must be the identity.  Construction validates the table:
    identity, unique inverses, bijective rows/columns, and associativity
    (complete check for size <= 256, randomized triples above that).
    """

    def __init__(self, table, labels=None, check_triples: int = 20000):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.size = len(self.table)
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(self.size)]
        if len(self.labels) != self.size:
            raise ValueError("labels length must match group size")
        self._validate(check_triples)
        inv = [-1] * self.size
        for g in range(self.size):
            for h in range(self.size):
                if self.table[g][h] == 0:
                    inv[g] = h
                    break
            if inv[g] < 0 or self.table[inv[g]][g] != 0:
                raise ValueError(f"element {g} has no two-sided inverse")
        self.inv = tuple(inv)
        self._classes = None
        self._orders = None

    def _validate(self, check_triples: int) -> None:
        n = self.size
        if n == 0:
            raise ValueError("empty group")
        full = set(range(n))
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise ValueError("Cayley table is not square")
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ValueError("index 0 is not the identity")
            if set(row) != full:
                raise ValueError(f"row {i} is not a permutation")
        for j in range(n):
            if {self.table[i][j] for i in range(n)} != full:
                raise ValueError(f"column {j} is not a permutation")
        t = np.array(self.table, dtype=np.int64)
        if n <= 256:
            left = t[t.reshape(-1), :].reshape(n, n, n)   # (ab)c
            right = t[:, t.reshape(-1)].reshape(n, n, n)  # a(bc)
            if not np.array_equal(left, right):
                raise ValueError("Cayley table is not associative")
        else:
            rng = random.Random(0xA550C)
            for _ in range(check_triples):
                a = rng.randrange(n)
                b = rng.randrange(n)
                c = rng.randrange(n)
                if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                    raise ValueError("Cayley table is not associative")

    # -- basic operations ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.table[self.table[g][h]][self.inv[g]]

    def order_of(self, g: int) -> int:
        if self._orders is None:
            orders = []
            for x in range(self.size):
                k, y = 1, x
                while y != 0:
                    y = self.table[y][x]
                    k += 1
                orders.append(k)
            self._orders = tuple(orders)
        return self._orders[g]

    def exponent(self) -> int:
        e = 1
        for g in range(self.size):
            e = lcm(e, self.order_of(g))
        return e

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.size) for b in range(a))

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes as sorted tuples, ordered by (min element)."""
        if self._classes is None:
            seen = [False] * self.size
            classes = []
            for g in range(self.size):
                if seen[g]:
                    continue
                orbit = {g}
                stack = [g]
                while stack:
                    x = stack.pop()
                    for h in range(self.size):
                        y = self.conj(h, x)
                        if y not in orbit:
                            orbit.add(y)
                            stack.append(y)
                cls = tuple(sorted(orbit))
                for x in cls:
                    seen[x] = True
                classes.append(cls)
            self._classes = tuple(sorted(classes, key=lambda c: c[0]))
        return self._classes

    def subgroup(self, members) -> "Subgroup":
        return Subgroup(self, members)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash((self.size, self.table[1] if self.size > 1 else ()))

    def __repr__(self):
        return f"<FiniteGroup of order {self.size}>"


class Subgroup:
    """A subgroup, stored as the sorted tuple of its member indices."""

    def __init__(self, group: FiniteGroup, members):
        self.group = group
        self.members = tuple(sorted(set(int(m) for m in members)))
        mset = set(self.members)
        if 0 not in mset:
            raise ValueError("subgroup must contain the identity")
        for a in self.members:
            if group.inv[a] not in mset:
                raise ValueError("subgroup not closed under inverses")
            for b in self.members:
                if group.table[a][b] not in mset:
                    raise ValueError("subgroup not closed under products")
        self._pos = {g: i for i, g in enumerate(self.members)}

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.group.size // self.order

    def __contains__(self, g: int) -> bool:
        return g in self._pos

    def pos(self, g: int) -> int:
        return self._pos[g]

    def is_abelian(self) -> bool:
        t = self.group.table
        return all(t[a][b] == t[b][a] for a in self.members for b in self.members)

    def exponent(self) -> int:
        e = 1
        for g in self.members:
            e = lcm(e, self.group.order_of(g))
        return e

    def left_cosets(self) -> tuple[tuple[int, ...], ...]:
        """Cosets gK, each listed sorted, ordered by smallest member.

        The smallest member of each coset is its canonical representative.
        """
        G = self.group
        seen = [False] * G.size
        cosets = []
        for g in range(G.size):
            if seen[g]:
                continue
            coset = tuple(sorted(G.table[g][k] for k in self.members))
            for x in coset:
                seen[x] = True
            cosets.append(coset)
        return tuple(cosets)

    def right_cosets(self) -> tuple[tuple[int, ...], ...]:
        """Cosets Kg, ordered by smallest member."""
        G = self.group
        seen = [False] * G.size
        cosets = []
        for g in range(G.size):
            if seen[g]:
                continue
            coset = tuple(sorted(G.table[k][g] for k in self.members))
            for x in coset:
                seen[x] = True
            cosets.append(coset)
        return tuple(cosets)

    def conjugate_by(self, g: int) -> "Subgroup":
        """The subgroup g^-1 (this) g."""
        G = self.group
        gi = G.inv[g]
        return Subgroup(G, [G.conj(gi, k) for k in self.members])

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.members == other.members
            and self.group == other.group
        )

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"<Subgroup of order {self.order} in group of order {self.group.size}>"


def are_conjugate_subgroups(K1: Subgroup, K2: Subgroup):
    """Return a witness g with g K1 g^-1 = K2, or None."""
    G = K1.group
    if G is not K2.group and G != K2.group:
        raise ValueError("subgroups live in different groups")
    if K1.order != K2.order:
        return None
    target = set(K2.members)
    for g in range(G.size):
        if all(G.conj(g, k) in target for k in K1.members):
            return g
    return None


def class_intersection_profile(K: Subgroup) -> tuple[int, ...]:
    """How many members K has in each conjugacy class of its parent group.

    Classes are taken in the parent's canonical class order, so profiles of
    two subgroups of the same group are directly comparable.
    """
    G = K.group
    mem = set(K.members)
    return tuple(sum(1 for x in cls if x in mem) for cls in G.conjugacy_classes())


class Character:
    """A character of an abelian subgroup, valued in order-N roots of unity.

    values[i] is the exponent e_i with chi(members[i]) = zeta_N^(e_i), where
    N is the subgroup's exponent.  Characters of the same subgroup form a
    group under pointwise multiplication, written additively here.
    """

    def __init__(self, domain: Subgroup, values, order: int | None = None):
        self.domain = domain
        self.order = order if order is not None else domain.exponent()
        self.values = tuple(int(v) % self.order for v in values)
        if len(self.values) != domain.order:
            raise ValueError("need one exponent per subgroup member")

    @classmethod
    def trivial(cls, domain: Subgroup) -> "Character":
        return cls(domain, [0] * domain.order)

    def exponent_at(self, g: int) -> int:
        return self.values[self.domain.pos(g)]

    def root_at(self, g: int) -> RootOfUnity:
        return RootOfUnity(self.order, self.values[self.domain.pos(g)])

    def scalar_at(self, g: int, lift_order: int | None = None) -> CycScalar:
        z = CycScalar.zeta(self.order, self.values[self.domain.pos(g)])
        return z.lift(lift_order) if lift_order and lift_order != self.order else z

    def is_trivial(self) -> bool:
        return not any(self.values)

    def __add__(self, other: "Character") -> "Character":
        if self.domain.members != other.domain.members or self.order != other.order:
            raise ValueError("characters of different domains")
        return Character(self.domain, [a + b for a, b in zip(self.values, other.values)], self.order)

    def __neg__(self) -> "Character":
        return Character(self.domain, [-v for v in self.values], self.order)

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.domain.members == other.domain.members
            and self.order == other.order
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.domain.members, self.order, self.values))

    def __repr__(self):
        return f"Character(order={self.order}, values={self.values})"


def character_group(A: Subgroup) -> tuple[Character, ...]:
    """All |A| characters of the abelian subgroup A, canonically ordered.

    The trivial character comes first; the rest follow in lexicographic order
    of their exponent tuples.  The enumeration is verified to be closed and
    complete (exactly |A| distinct homomorphisms).
    """
    if not A.is_abelian():
        raise ValueError("character_group needs an abelian subgroup")
    G = A.group
    n = A.order
    N = A.exponent()
    # greedy generating sequence
    gens: list[int] = []
    span = {0}
    for g in A.members:
        if g not in span:
            gens.append(g)
            grown = set(span)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                y = G.table[x][g]
                if y not in grown:
                    grown.add(y)
                    frontier.append(y)
            span = grown
    # express each member additively over the generators (any one expression)
    expr = {0: tuple([0] * len(gens))}
    frontier = [0]
    while frontier:
        x = frontier.pop(0)
        for i, g in enumerate(gens):
            y = G.table[x][g]
            if y not in expr:
                e = list(expr[x])
                e[i] += 1
                expr[y] = tuple(e)
                frontier.append(y)
    chars = set()
    for assign in iproduct(range(N), repeat=len(gens)):
        vals = tuple(sum(e * a for e, a in zip(expr[m], assign)) % N for m in A.members)
        # homomorphism check over all pairs
        ok = True
        for a in A.members:
            va = vals[A.pos(a)]
            for b in A.members:
                if (va + vals[A.pos(b)]) % N != vals[A.pos(G.table[a][b])]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chars.add(vals)
    if len(chars) != n:
        raise ArithmeticError(f"character enumeration found {len(chars)} of {n}")
    ordered = sorted(chars)
    return tuple(Character(A, v, N) for v in ordered)


def conjugate_character(chi: Character, g: int) -> Character:
    """The character a -> chi(g a g^-1), defined on g^-1 (domain) g."""
    A = chi.domain
    G = A.group
    dom = A.conjugate_by(g)
    vals = [chi.exponent_at(G.conj(g, a)) for a in dom.members]
    return Character(dom, vals, chi.order)


# -- builders -------------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, labels=[f"r{i}" if i else "e" for i in range(n)])


def klein_four_group() -> FiniteGroup:
    table = [[i ^ j for j in range(4)] for i in range(4)]
    return FiniteGroup(table, labels=["e", "a", "b", "ab"])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Direct product with index (i, j) -> i * |H| + j (identity stays 0)."""
    n, m = G.size, H.size
    table = [
        [G.table[i1][i2] * m + H.table[j1][j2] for i2 in range(n) for j2 in range(m)]
        for i1 in range(n)
        for j1 in range(m)
    ]
    labels = [f"({G.labels[i]},{H.labels[j]})" for i in range(n) for j in range(m)]
    return FiniteGroup(table, labels=labels)


def affine_group(p: int) -> tuple[FiniteGroup, Subgroup]:
    """The affine maps x -> m x + b of the field F_p, with its translations.

    Element (m, b) has index (m-1)*p + b, so the translations (1, b) occupy
    indices 0..p-1 and form the returned abelian subgroup.
    """
    for d in range(2, p):
        if p % d == 0:
            raise ValueError("p must be prime")
    elems = [(m, b) for m in range(1, p) for b in range(p)]
    idx = {e: i for i, e in enumerate(elems)}
    table = [
        [idx[((m1 * m2) % p, (m1 * b2 + b1) % p)] for (m2, b2) in elems]
        for (m1, b1) in elems
    ]
    labels = [f"({m},{b})" for (m, b) in elems]
    G = FiniteGroup(table, labels=labels)
    A = Subgroup(G, range(p))
    return G, A


def perm_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Composition p after q: (p*q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def cycles_label(perm: tuple[int, ...]) -> str:
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) if out else "e"


def from_permutations_with_elements(
    gens: list[tuple[int, ...]], cap: int = _GENERATION_CAP
) -> tuple[FiniteGroup, tuple[tuple[int, ...], ...]]:
    """Close permutations into a group, returning the element list too.

    Breadth-first closure from the identity gives a deterministic element
    order; raises if the closure exceeds ``cap`` elements.  The returned
    tuple maps each group index to its permutation.
    """
    if not gens:
        raise ValueError("need at least one generator")
    deg = len(gens[0])
    if any(len(g) != deg for g in gens):
        raise ValueError("generators act on different point counts")
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    queue = [ident]
    while queue:
        x = queue.pop(0)
        for g in gens:
            y = perm_mul(x, g)
            if y not in index:
                if len(elems) >= cap:
                    raise ValueError(f"group generation exceeded cap {cap}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = [[index[perm_mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, labels=[cycles_label(e) for e in elems]), tuple(elems)


def from_permutations(gens: list[tuple[int, ...]], cap: int = _GENERATION_CAP) -> FiniteGroup:
    """Close a set of permutations (0-indexed image tuples) into a group."""
    return from_permutations_with_elements(gens, cap)[0]


def generating_set(members: tuple[int, ...], mul) -> list[int]:
    """A small generating list for the given closed element set.

    Greedy: repeatedly adjoin the smallest element outside the running
    closure.  ``mul`` multiplies two element indices.
    """
    mset = set(members)
    if 0 not in mset:
        raise ValueError("element set must contain the identity index 0")
    closure = {0}
    gens: list[int] = []
    for m in sorted(mset):
        if m in closure:
            continue
        gens.append(m)
        frontier = list(closure)
        closure.add(m)
        frontier.append(m)
        while frontier:
            x = frontier.pop()
            for g in (m, *gens):
                for y in (mul(x, g), mul(g, x)):
                    if y not in closure:
                        closure.add(y)
                        frontier.append(y)
        if len(closure) == len(mset):
            break
    if len(closure) != len(mset):
        raise ArithmeticError("generating_set failed to close the element set")
    return gens


def symmetric_group(n: int) -> FiniteGroup:
    """The symmetric group on n points (transposition + n-cycle generators)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return FiniteGroup([[0]], labels=["e"])
    swap = tuple([1, 0] + list(range(2, n)))
    cyc = tuple(list(range(1, n)) + [0])
    return from_permutations([swap, cyc])
