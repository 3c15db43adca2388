"""Sparse elements of k[G] and its tensor powers, with weight machinery.

A ``TensorElement`` is a finitely supported assignment of exact cyclotomic
coefficients to basis tensors g_1 (x) ... (x) g_k.  Multiplication is
componentwise group multiplication (the algebra structure of k[G]^(x)k).
Weight projectors for an abelian subgroup A, the weight decomposition, the
coproduct/counit on chosen legs, and exact inversion live here too.
"""

from __future__ import annotations

from fractions import Fraction

from .groups import Character, FiniteGroup, Subgroup, character_group
from .scalars import CycScalar

ZERO = CycScalar(0)
ONE = CycScalar(1)


def _as_scalar(c) -> CycScalar:
    return c if isinstance(c, CycScalar) else CycScalar(Fraction(c))


class TensorElement:
    """An element of k[G]^(x)legs with sparse exact coefficients."""

    __slots__ = ("group", "legs", "terms")

    def __init__(self, group: FiniteGroup, legs: int, terms=None):
        self.group = group
        self.legs = legs
        clean = {}
        if terms:
            for key, c in terms.items():
                c = _as_scalar(c)
                if len(key) != legs:
                    raise ValueError("key arity does not match leg count")
                if c:
                    clean[tuple(int(g) for g in key)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def unit(cls, group: FiniteGroup, legs: int) -> "TensorElement":
        return cls(group, legs, {tuple([0] * legs): ONE})

    @classmethod
    def basis(cls, group: FiniteGroup, key) -> "TensorElement":
        key = tuple(key)
        return cls(group, len(key), {key: ONE})

    # -- ring structure ---------------------------------------------------------

    def _check_compat(self, other: "TensorElement"):
        if self.group is not other.group and self.group != other.group:
            raise ValueError("elements over different groups")
        if self.legs != other.legs:
            raise ValueError("elements with different leg counts")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_compat(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key)
            s = c if s is None else s + c
            if s:
                terms[key] = s
            elif key in terms:
                del terms[key]
        out = TensorElement(self.group, self.legs)
        out.terms = terms
        return out

    def __neg__(self) -> "TensorElement":
        out = TensorElement(self.group, self.legs)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scaled(self, c) -> "TensorElement":
        c = _as_scalar(c)
        out = TensorElement(self.group, self.legs)
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scaled(other)
        self._check_compat(other)
        table = self.group.table
        acc: dict[tuple, CycScalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(table[a][b] for a, b in zip(k1, k2))
                c = c1 * c2
                s = acc.get(key)
                acc[key] = c if s is None else s + c
        out = TensorElement(self.group, self.legs)
        out.terms = {k: v for k, v in acc.items() if v}
        return out

    def __rmul__(self, other):
        # scalars commute; TensorElement * TensorElement handled by __mul__
        return self.scaled(other)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.group == other.group
            and self.legs == other.legs
            and self.keys_equal(other)
        )

    def keys_equal(self, other: "TensorElement") -> bool:
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        raise TypeError("TensorElement is mutable-ish; do not hash")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, key) -> CycScalar:
        return self.terms.get(tuple(key), ZERO)

    def support(self):
        return self.terms.keys()

    # -- Hopf structure on legs -------------------------------------------------

    def coproduct_on_leg(self, leg: int) -> "TensorElement":
        """Replace leg by two copies of itself (group-like coproduct)."""
        out = TensorElement(self.group, self.legs + 1)
        terms = {}
        for key, c in self.terms.items():
            nk = key[: leg + 1] + (key[leg],) + key[leg + 1 :]
            terms[nk] = terms.get(nk, ZERO) + c
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def counit_on_leg(self, leg: int) -> "TensorElement":
        """Drop a leg, summing its coefficients (every g counts 1)."""
        out = TensorElement(self.group, self.legs - 1)
        terms: dict[tuple, CycScalar] = {}
        for key, c in self.terms.items():
            nk = key[:leg] + key[leg + 1 :]
            s = terms.get(nk)
            terms[nk] = c if s is None else s + c
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def embed(self, legs: int, positions) -> "TensorElement":
        """Place this element's legs at ``positions`` inside ``legs`` legs.

        All other legs carry the group identity (the algebra unit of k[G]).
        """
        positions = tuple(positions)
        if len(positions) != self.legs:
            raise ValueError("need one position per leg")
        out = TensorElement(self.group, legs)
        terms = {}
        for key, c in self.terms.items():
            nk = [0] * legs
            for p, g in zip(positions, key):
                nk[p] = g
            terms[tuple(nk)] = c
        out.terms = terms
        return out

    def apply_functional_on_leg(self, leg: int, func) -> "TensorElement":
        """Contract one leg with a functional g -> scalar."""
        out = TensorElement(self.group, self.legs - 1)
        terms: dict[tuple, CycScalar] = {}
        for key, c in self.terms.items():
            v = func(key[leg])
            if not v:
                continue
            nk = key[:leg] + key[leg + 1 :]
            c2 = c * v
            s = terms.get(nk)
            terms[nk] = c2 if s is None else s + c2
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def conj_by_diagonal(self, a: int) -> "TensorElement":
        """(a (x) ... (x) a) x (a^-1 (x) ... (x) a^-1), computed by relabeling."""
        G = self.group
        ai = G.inv[a]
        out = TensorElement(G, self.legs)
        out.terms = {
            tuple(G.table[G.table[a][g]][ai] for g in key): c for key, c in self.terms.items()
        }
        return out

    def translate_diagonal(self, a: int) -> "TensorElement":
        """Left multiplication by a (x) ... (x) a, computed by relabeling."""
        G = self.group
        out = TensorElement(G, self.legs)
        out.terms = {tuple(G.table[a][g] for g in key): c for key, c in self.terms.items()}
        return out

    def leg_support(self, leg: int) -> set[int]:
        return {key[leg] for key in self.terms}

    def __repr__(self):
        n = len(self.terms)
        return f"<TensorElement legs={self.legs} terms={n} over group of order {self.group.size}>"

    def pretty(self, max_terms: int = 8) -> str:
        items = sorted(self.terms.items())[:max_terms]
        G = self.group
        bits = []
        for key, c in items:
            mono = "(x)".join(G.labels[g] for g in key)
            bits.append(f"[{c.literal()}] {mono}")
        more = "" if len(self.terms) <= max_terms else f" ... (+{len(self.terms) - max_terms} terms)"
        return " + ".join(bits) + more if bits else "0"


# -- Hopf-style helpers (leg indices in these public helpers are 1-based) --------


def delta(x: TensorElement) -> TensorElement:
    """Linear extension of g -> g (x) g on a 1-leg element."""
    if x.legs != 1:
        raise ValueError("delta expects a 1-leg element")
    return x.coproduct_on_leg(0)


def counit(x: TensorElement) -> CycScalar:
    """Sum of coefficients: the algebra map sending every g to 1."""
    if x.legs != 1:
        raise ValueError("counit expects a 1-leg element")
    s = ZERO
    for c in x.terms.values():
        s = s + c
    return s


def apply_counit_leg(x: TensorElement, i: int) -> TensorElement:
    """Contract leg i (1-based) with the counit."""
    if not 1 <= i <= x.legs:
        raise ValueError(f"leg index {i} out of range 1..{x.legs}")
    return x.counit_on_leg(i - 1)


def shifted_pair(F: dict, lam: Character, placement, shift_leg: int, sign: int) -> TensorElement:
    """sum_mu F(lam + sign*mu) on the placement legs, P_mu on shift_leg.

    F maps every character of A to an m-leg element; the result has m+1 legs,
    with the F-legs at ``placement`` (1-based) and the projector at
    ``shift_leg`` (1-based).  sign=-1 realizes shifts like
    sum_mu J(lambda-mu) (x) P_mu.
    """
    A = lam.domain
    chars = character_group(A)
    some = F[chars[0]]
    legs = some.legs + 1
    pos0 = tuple(p - 1 for p in placement)
    sleg0 = shift_leg - 1
    acc = TensorElement(some.group, legs)
    for mu in chars:
        shifted_lam = lam + mu if sign > 0 else lam - mu
        piece = F[shifted_lam].embed(legs, pos0) * weight_projector(A, mu).embed(legs, (sleg0,))
        acc = acc + piece
    return acc


# -- weights ---------------------------------------------------------------------


def weight_projector(A: Subgroup, mu: Character) -> TensorElement:
    """P_mu = (1/|A|) sum_a mu(a^-1) a; satisfies a P_mu = mu(a) P_mu."""
    G = A.group
    inv_order = Fraction(1, A.order)
    terms = {}
    for a in A.members:
        val = mu.scalar_at(G.inv[a]) * CycScalar(inv_order)
        terms[(a,)] = val
    return TensorElement(G, 1, terms)


def weight_component(x: TensorElement, A: Subgroup, mu: Character, mode: str = "adjoint") -> TensorElement:
    """Weight-mu component of x for the A-action named by ``mode``.

    mode="adjoint": average of mu(a^-1) * Delta(a) x Delta(a)^-1 — the piece on
    which diagonal conjugation acts by mu.  mode="left": the piece on which
    diagonal left translation acts by mu, i.e. Delta(P_mu) * x.  Components of
    either kind sum back to x over all characters of A.
    """
    G = x.group
    n = len(A.members)
    inv_n = CycScalar(Fraction(1, n))
    acc = TensorElement(G, x.legs)
    for a in A.members:
        w = mu.scalar_at(G.inverse(a))  # mu(a^-1)
        if mode == "adjoint":
            moved = x.conj_by_diagonal(a)
        elif mode == "left":
            moved = x.translate_diagonal(a)
        else:
            raise ValueError(f"unknown weight mode {mode!r}")
        acc = acc + moved.scaled(w)
    return acc.scaled(inv_n)


def weight_decomposition(x: TensorElement, A: Subgroup, mode: str = "adjoint") -> dict[Character, TensorElement]:
    """Split x by A-weight; the components sum back to x."""
    return {mu: weight_component(x, A, mu, mode) for mu in character_group(A)}


def has_zero_weight(x: TensorElement, A: Subgroup) -> bool:
    """Does x commute with a (x) a (x) ... (x) a for every a in A?"""
    for a in A.members:
        if a == 0:
            continue
        moved = x.conj_by_diagonal(a)
        if not moved.keys_equal(x):
            return False
    return True


# -- inversion --------------------------------------------------------------------


def invert(x: TensorElement, max_degree: int = 128) -> TensorElement:
    """Exact two-sided inverse in k[G]^(x)k via the minimal polynomial.

    Powers of x are accumulated until a linear dependence appears; the
    dependence yields either the inverse or a proof of non-invertibility
    (constant term zero).  Raises ZeroDivisionError for non-units and
    ArithmeticError if the dependence does not appear within ``max_degree``
    powers (callers with weight structure should use
    :func:`invert_blockwise`, which has no such cap).
    """
    if x.is_zero():
        raise ZeroDivisionError("zero is not invertible")
    one = TensorElement.unit(x.group, x.legs)
    # rows: echelon basis over the monomial support; combos: poly coefficients
    powers = [one]
    echelon: list[dict] = []
    combos: list[list[CycScalar]] = []
    cur = one
    for _ in range(max_degree + 1):
        vec = dict(cur.terms)
        combo = [ZERO] * len(powers)
        combo[len(powers) - 1] = ONE
        for row, rc in zip(echelon, combos):
            pivot_key, pivot_val = next(iter(row.items()))
            v = vec.get(pivot_key)
            if v:
                f = v * pivot_val.inverse()
                for k, c in row.items():
                    nv = vec.get(k, ZERO) - f * c
                    if nv:
                        vec[k] = nv
                    elif k in vec:
                        del vec[k]
                combo = [a - f * b for a, b in zip(combo, rc + [ZERO] * (len(combo) - len(rc)))]
        if not vec:
            # dependence: sum_j combo[j] x^j = 0
            c0 = combo[0]
            if not c0:
                raise ZeroDivisionError("element is not invertible (zero divisor)")
            inv_c0 = c0.inverse()
            acc = TensorElement(x.group, x.legs)
            for j in range(1, len(combo)):
                if combo[j]:
                    acc = acc + powers[j - 1].scaled(combo[j])
            result = acc.scaled(-inv_c0)
            return result
        echelon.append(vec)
        combos.append(combo)
        cur = cur * x
        powers.append(cur)
    raise ArithmeticError(f"no inverse found within degree {max_degree}")


def invert_blockwise(x: TensorElement, A: Subgroup) -> TensorElement:
    """Exact inverse for elements whose legs decompose along A-weights.

    Works blockwise on the left ideals k[G]^(x)k (P_mu1 (x) ... (x) P_muk),
    each of dimension (|G|/|A|)^k, which keeps the elimination small.  The
    result is verified two-sided before returning.
    """
    from . import linalg

    G = x.group
    chars = character_group(A)
    cosets = A.left_cosets()  # g A; reps = smallest member
    reps = [c[0] for c in cosets]
    rep_pos = {r: i for i, r in enumerate(reps)}
    coset_of = {}
    for i, c in enumerate(cosets):
        for g in c:
            coset_of[g] = i
    k = x.legs
    nrep = len(reps)

    def expand_in_block(elt: TensorElement, scale: CycScalar) -> list[CycScalar]:
        # coordinates of elt in basis {(g_C1 P_mu1) (x) ...}: coefficient at
        # the rep key, times |A|^k
        coords = [ZERO] * (nrep**k)
        for key, c in elt.terms.items():
            if all(g in rep_pos for g in key):
                pos = 0
                for g in key:
                    pos = pos * nrep + rep_pos[g]
                coords[pos] = c * scale
        return coords

    from itertools import product as iproduct

    result = TensorElement(G, k)
    scale = CycScalar(Fraction(A.order)) ** k
    for mus in iproduct(chars, repeat=k):
        projs = [weight_projector(A, mu) for mu in mus]
        pblock = projs[0].embed(k, (0,))
        for i in range(1, k):
            pblock = pblock * projs[i].embed(k, (i,))
        # basis elements (g_{C_1} P_mu1) (x) ... indexed by rep tuples
        basis_elts = []
        keys = []
        for rep_tuple in iproduct(reps, repeat=k):
            b = TensorElement.basis(G, rep_tuple) * pblock
            basis_elts.append(b)
            keys.append(rep_tuple)
        mat = []
        for b in basis_elts:
            col = expand_in_block(x * b, scale)
            mat.append(col)
        # columns of the multiplication matrix are mat[i]; transpose for solve
        m = [[mat[j][i] for j in range(len(basis_elts))] for i in range(len(basis_elts))]
        target = expand_in_block(pblock, scale)
        sol = linalg.solve(m, target)
        if sol is None:
            raise ZeroDivisionError("element is not invertible (weight block is singular)")
        for c, b in zip(sol, basis_elts):
            if c:
                result = result + b.scaled(c)
    one = TensorElement.unit(G, k)
    if not ((x * result).keys_equal(one) and (result * x).keys_equal(one)):
        raise ZeroDivisionError("element is not invertible")
    return result
