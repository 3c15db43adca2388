"""Dynamical twists on finite group algebras: checking, gauges, reconstruction.

A dynamical twist is a family lambda -> J(lambda) in k[G] (x) k[G] indexed by
the characters of an abelian subgroup A, satisfying, for every lambda:

  * zero weight:    J(lambda) commutes with a (x) a for all a in A,
  * invertibility:  J(lambda) is a unit (a two-sided inverse is exhibited),
  * counit law:     applying the counit to either leg gives 1,
  * shifted cocycle: (Delta (x) id)(J(lambda)) . (sum_mu J(lambda-mu) (x) P_mu)
                     = (id (x) Delta)(J(lambda)) . (1 (x) J(lambda)),
    as an identity in the full triple tensor product.

When A is normal in G, elements are handled internally in the collapsed basis
g_C P_nu (coset representative times weight projector), where products of
basis vectors are again (scalar multiples of) basis vectors.  That keeps every
check polynomial in |G/A| and |A^*| instead of |G|.  For non-normal A the same
checks run on the raw basis.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .group_algebra import (
    TensorElement,
    invert_blockwise,
    has_zero_weight,
    weight_projector,
)
from .groups import Character, FiniteGroup, Subgroup, character_group, conjugate_character
from .report import Report
from .scalars import CycScalar

ONE = CycScalar(1)


class _WeightOps:
    """Collapsed-basis arithmetic for k[G]^(x)k relative to a normal abelian A.

    Basis vectors are tuples (C_1, nu_1, ..., C_k, nu_k) standing for
    g_{C_1} P_{nu_1} (x) ... ; the product of two basis vectors is zero or a
    root of unity times a third, which is what makes twist verification fast.
    """

    def __init__(self, G: FiniteGroup, A: Subgroup):
        self.G, self.A = G, A
        self.normal = all(G.conj(g, a) in A for g in range(G.size) for a in A.members)
        if not self.normal:
            return
        self.chars = character_group(A)
        self.cidx = {c: i for i, c in enumerate(self.chars)}
        self.nchar = len(self.chars)
        self.N = A.exponent()
        self.zpows = [CycScalar.zeta(self.N, k) for k in range(self.N)]
        cosets = A.left_cosets()
        self.reps = [c[0] for c in cosets]
        self.nrep = len(self.reps)
        coset_of = [0] * G.size
        a_of = [0] * G.size
        for ci, cs in enumerate(cosets):
            r = cs[0]
            ri = G.inv[r]
            for g in cs:
                coset_of[g] = ci
                a_of[g] = G.table[ri][g]  # g = rep * a
        self.coset_of, self.a_of = coset_of, a_of
        # identity sits in cosets[0] because cosets are ordered by min member
        assert coset_of[0] == 0
        self.prod = [
            [
                (coset_of[G.table[r1][r2]], a_of[G.table[r1][r2]])
                for r2 in self.reps
            ]
            for r1 in self.reps
        ]
        self.conjp = [
            [self.cidx[conjugate_character(ch, r)] for ch in self.chars]
            for r in self.reps
        ]
        self.chexp = [{a: ch.exponent_at(a) for a in A.members} for ch in self.chars]
        self.addtab = [
            [self.cidx[a + b] for b in self.chars] for a in self.chars
        ]
        self.negtab = [self.cidx[-a] for a in self.chars]

    # -- conversions -----------------------------------------------------------

    def to_weight(self, x: TensorElement) -> dict:
        from itertools import product as iproduct

        k = x.legs
        out: dict[tuple, CycScalar] = {}
        rng = range(self.nchar)
        for key, c in x.terms.items():
            decomp = [(self.coset_of[g], self.a_of[g]) for g in key]
            for nus in iproduct(rng, repeat=k):
                e = 0
                wkey = []
                for (C, a), nu in zip(decomp, nus):
                    e += self.chexp[nu][a]
                    wkey.append(C)
                    wkey.append(nu)
                v = c.times_root(self.N, e) if e % self.N else c
                wkey = tuple(wkey)
                s = out.get(wkey)
                out[wkey] = v if s is None else s + v
        return {k2: v for k2, v in out.items() if v}

    def from_weight(self, w: dict, legs: int) -> TensorElement:
        from itertools import product as iproduct

        G = self.G
        scale = CycScalar(Fraction(1, self.A.order**legs))
        out: dict[tuple, CycScalar] = {}
        members = self.A.members
        for wkey, c in w.items():
            base = c * scale
            Cs = [wkey[2 * l] for l in range(legs)]
            nus = [wkey[2 * l + 1] for l in range(legs)]
            for avec in iproduct(members, repeat=legs):
                e = 0
                for nu, a in zip(nus, avec):
                    e -= self.chexp[nu][a]
                key = tuple(G.table[self.reps[C]][a] for C, a in zip(Cs, avec))
                v = base.times_root(self.N, e) if e % self.N else base
                s = out.get(key)
                out[key] = v if s is None else s + v
        t = TensorElement(G, legs)
        t.terms = {k2: v for k2, v in out.items() if v}
        return t

    # -- algebra in the collapsed basis ---------------------------------------

    def mul(self, x: dict, y: dict, legs: int) -> dict:
        prod, conjp, chexp = self.prod, self.conjp, self.chexp
        N = self.N
        out: dict[tuple, CycScalar] = {}
        yitems = list(y.items())
        for k1, c1 in x.items():
            for k2, c2 in yitems:
                e = 0
                wkey = []
                ok = True
                for off in range(0, 2 * legs, 2):
                    C1, nu1 = k1[off], k1[off + 1]
                    C2, nu2 = k2[off], k2[off + 1]
                    if conjp[C2][nu1] != nu2:
                        ok = False
                        break
                    CC, a0 = prod[C1][C2]
                    if a0:
                        e += chexp[nu2][a0]
                    wkey.append(CC)
                    wkey.append(nu2)
                if not ok:
                    continue
                v = c1 * c2
                if e % N:
                    v = v.times_root(N, e)
                wkey = tuple(wkey)
                s = out.get(wkey)
                out[wkey] = v if s is None else s + v
        return {k2: v for k2, v in out.items() if v}

    def unit(self, legs: int) -> dict:
        from itertools import product as iproduct

        out = {}
        for nus in iproduct(range(self.nchar), repeat=legs):
            wkey = []
            for nu in nus:
                wkey.append(0)
                wkey.append(nu)
            out[tuple(wkey)] = ONE
        return out

    def coproduct(self, w: dict, leg: int, legs: int) -> dict:
        out: dict[tuple, CycScalar] = {}
        for key, c in w.items():
            C, nu = key[2 * leg], key[2 * leg + 1]
            head = key[: 2 * leg]
            tail = key[2 * leg + 2 :]
            for sigma in range(self.nchar):
                rest = self.addtab[nu][self.negtab[sigma]]  # nu - sigma
                nk = head + (C, sigma, C, rest) + tail
                s = out.get(nk)
                out[nk] = c if s is None else s + c
        return {k2: v for k2, v in out.items() if v}

    def counit(self, w: dict, leg: int) -> dict:
        out: dict[tuple, CycScalar] = {}
        for key, c in w.items():
            if key[2 * leg + 1] != 0:
                continue
            nk = key[: 2 * leg] + key[2 * leg + 2 :]
            s = out.get(nk)
            out[nk] = c if s is None else s + c
        return {k2: v for k2, v in out.items() if v}

    def tensor_with_projector(self, w: dict, nu: int) -> dict:
        """Append one leg equal to P_nu (coset 0, weight nu)."""
        return {key + (0, nu): c for key, c in w.items()}

    def embed(self, w: dict, legs_in: int, legs_out: int, positions) -> dict:
        from itertools import product as iproduct

        positions = tuple(positions)
        others = [l for l in range(legs_out) if l not in positions]
        out: dict[tuple, CycScalar] = {}
        for key, c in w.items():
            for nus in iproduct(range(self.nchar), repeat=len(others)):
                nk = [None] * (2 * legs_out)
                for p, l in enumerate(positions):
                    nk[2 * l] = key[2 * p]
                    nk[2 * l + 1] = key[2 * p + 1]
                for nu, l in zip(nus, others):
                    nk[2 * l] = 0
                    nk[2 * l + 1] = nu
                nk = tuple(nk)
                s = out.get(nk)
                out[nk] = c if s is None else s + c
        return out

    def invert(self, w: dict, legs: int) -> dict:
        """Two-sided inverse via per-weight-block solves; raises if singular."""
        from itertools import product as iproduct

        nrep, nchar = self.nrep, self.nchar
        dim = nrep**legs
        result: dict[tuple, CycScalar] = {}
        zero = CycScalar(0)
        for nus in iproduct(range(nchar), repeat=legs):
            # matrix of left multiplication by w on the ideal with weights nus
            m = [[zero] * dim for _ in range(dim)]
            for col, Cs in enumerate(iproduct(range(nrep), repeat=legs)):
                for k1, c1 in w.items():
                    e = 0
                    row_idx = 0
                    ok = True
                    for l in range(legs):
                        C1, nu1 = k1[2 * l], k1[2 * l + 1]
                        C2, nu2 = Cs[l], nus[l]
                        if self.conjp[C2][nu1] != nu2:
                            ok = False
                            break
                        CC, a0 = self.prod[C1][C2]
                        if a0:
                            e += self.chexp[nu2][a0]
                        row_idx = row_idx * nrep + CC
                    if not ok:
                        continue
                    v = c1.times_root(self.N, e) if e % self.N else c1
                    m[row_idx][col] = m[row_idx][col] + v
            target = [zero] * dim
            target[0] = ONE  # the unit's coordinate: identity coset vector
            sol = linalg.solve(m, target)
            if sol is None:
                raise ZeroDivisionError("singular weight block; element is not invertible")
            for col, Cs in enumerate(iproduct(range(nrep), repeat=legs)):
                if sol[col]:
                    wkey = []
                    for l in range(legs):
                        wkey.append(Cs[l])
                        wkey.append(nus[l])
                    result[tuple(wkey)] = sol[col]
        if self.mul(w, result, legs) != self.unit(legs):
            raise ZeroDivisionError("element is not invertible (right check failed)")
        if self.mul(result, w, legs) != self.unit(legs):
            raise ZeroDivisionError("element is not invertible (left check failed)")
        return result

    def describe_key(self, wkey: tuple) -> str:
        legs = len(wkey) // 2
        bits = []
        for l in range(legs):
            C, nu = wkey[2 * l], wkey[2 * l + 1]
            rep = self.G.labels[self.reps[C]]
            bits.append(f"{rep}.P[{nu}]")
        return " (x) ".join(bits)


class TwistFamily:
    """A twist family over (G, A): one 2-leg tensor per character of A."""

    def __init__(self, group: FiniteGroup, A: Subgroup, family):
        self.group = group
        self.A = A
        self.weights = character_group(A)
        fam = dict(family)
        if set(fam) != set(self.weights):
            raise ValueError("family must assign a value to every character of A")
        for lam, val in fam.items():
            if not isinstance(val, TensorElement) or val.legs != 2:
                raise ValueError("twist values must be 2-leg tensor elements")
        self.values = fam
        self._wops: _WeightOps | None = None
        self._wfam: dict[Character, dict] = {}

    @property
    def order(self) -> int:
        """A scalar order containing all coefficients and character values."""
        from math import lcm

        n = self.A.exponent()
        for val in self.values.values():
            for c in val.terms.values():
                n = lcm(n, c.order)
        return n

    def value(self, lam: Character) -> TensorElement:
        return self.values[lam]

    def weight_index(self, lam: Character) -> int:
        return self.weights.index(lam)

    def wops(self) -> _WeightOps:
        if self._wops is None:
            self._wops = _WeightOps(self.group, self.A)
        return self._wops

    def wvalue(self, lam: Character) -> dict:
        if lam not in self._wfam:
            self._wfam[lam] = self.wops().to_weight(self.values[lam])
        return self._wfam[lam]

    def __eq__(self, other):
        if not isinstance(other, TwistFamily):
            return NotImplemented
        if self.group != other.group or self.A.members != other.A.members:
            return False
        return all(self.values[lam] == other.values[lam] for lam in self.weights)

    def __repr__(self):
        return (
            f"<TwistFamily over group of order {self.group.size}, "
            f"|A| = {self.A.order}>"
        )

    @classmethod
    def from_weight_family(cls, group, A, wops: _WeightOps, wfam: dict) -> "TwistFamily":
        fam = {lam: wops.from_weight(w, 2) for lam, w in wfam.items()}
        tw = cls(group, A, fam)
        tw._wops = wops
        tw._wfam = dict(wfam)
        return tw


def trivial_twist(G: FiniteGroup, A: Subgroup) -> TwistFamily:
    return TwistFamily(G, A, {lam: TensorElement.unit(G, 2) for lam in character_group(A)})


def shifted_factor(tw: TwistFamily, lam: Character) -> TensorElement:
    """The raw 3-leg tensor sum_mu J(lambda - mu) (x) P_mu."""
    G, A = tw.group, tw.A
    acc = TensorElement(G, 3)
    for mu in tw.weights:
        piece = tw.values[lam - mu].embed(3, (0, 1)) * weight_projector(A, mu).embed(3, (2,))
        acc = acc + piece
    return acc


def _diff_sample(wops, a: dict, b: dict, limit: int = 5) -> str:
    keys = set(a) | set(b)
    diffs = []
    for k in sorted(keys):
        va = a.get(k)
        vb = b.get(k)
        if va is None or vb is None or va != vb:
            lhs = va.literal() if va is not None else "0"
            rhs = vb.literal() if vb is not None else "0"
            diffs.append(f"{wops.describe_key(k)}: {lhs} vs {rhs}")
            if len(diffs) >= limit:
                break
    return "; ".join(diffs)


def _diff_sample_raw(a: TensorElement, b: TensorElement, limit: int = 5) -> str:
    keys = set(a.terms) | set(b.terms)
    diffs = []
    for k in sorted(keys):
        va = a.terms.get(k)
        vb = b.terms.get(k)
        if va is None or vb is None or va != vb:
            lhs = va.literal() if va is not None else "0"
            rhs = vb.literal() if vb is not None else "0"
            diffs.append(f"{k}: {lhs} vs {rhs}")
            if len(diffs) >= limit:
                break
    return "; ".join(diffs)


def check_dynamical_twist(tw: TwistFamily) -> Report:
    """Certify all four twist axioms at every weight, exactly.

    The failure detail for a broken axiom names the weight and a bounded
    sample of the nonzero residual, so a corrupted coefficient can be traced.
    """
    G, A = tw.group, tw.A
    rep = Report("dynamical twist check")
    rep.extras["group_order"] = G.size
    rep.extras["A_order"] = A.order
    wops = tw.wops()
    unit1 = TensorElement.unit(G, 1)
    for i, lam in enumerate(tw.weights):
        J = tw.values[lam]
        tag = f"lambda[{i}]"
        ok = has_zero_weight(J, A)
        rep.add(f"{tag} zero-weight", ok, "" if ok else "J(lambda) does not commute with the A-diagonal")
        left = J.counit_on_leg(0)
        right = J.counit_on_leg(1)
        okl = left == unit1
        okr = right == unit1
        rep.add(
            f"{tag} counit",
            okl and okr,
            "" if (okl and okr) else f"left: {_diff_sample_raw(left, unit1)}; right: {_diff_sample_raw(right, unit1)}",
        )
        if not wops.normal:
            _check_cocycle_raw(tw, lam, tag, rep)
            continue
        w = tw.wvalue(lam)
        try:
            wops.invert(w, 2)
            rep.add(f"{tag} invertible", True, "two-sided inverse certified")
        except ZeroDivisionError as exc:
            rep.add(f"{tag} invertible", False, str(exc))
            continue
        lhs = wops.mul(
            wops.coproduct(w, 0, 2),
            _w_shifted(tw, lam),
            3,
        )
        rhs = wops.mul(
            wops.coproduct(w, 1, 2),
            wops.embed(tw.wvalue(lam), 2, 3, (1, 2)),
            3,
        )
        ok = lhs == rhs
        rep.add(
            f"{tag} shifted-cocycle",
            ok,
            "" if ok else f"residual at {_diff_sample(wops, lhs, rhs)}",
        )
    return rep


def _w_shifted(tw: TwistFamily, lam: Character) -> dict:
    """sum_mu J(lambda - mu) (x) P_mu in the collapsed basis."""
    wops = tw.wops()
    out: dict[tuple, CycScalar] = {}
    for mi, mu in enumerate(wops.chars):
        piece = wops.tensor_with_projector(tw.wvalue(lam - mu), mi)
        for k, v in piece.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
    return out


def _check_cocycle_raw(tw: TwistFamily, lam: Character, tag: str, rep: Report) -> None:
    G, A = tw.group, tw.A
    J = tw.values[lam]
    try:
        invert_blockwise(J, A)
        rep.add(f"{tag} invertible", True, "two-sided inverse certified")
    except ZeroDivisionError as exc:
        rep.add(f"{tag} invertible", False, str(exc))
        return
    lhs = J.coproduct_on_leg(0) * shifted_factor(tw, lam)
    rhs = J.coproduct_on_leg(1) * tw.values[lam].embed(3, (1, 2))
    ok = lhs == rhs
    rep.add(
        f"{tag} shifted-cocycle",
        ok,
        "" if ok else f"residual at {_diff_sample_raw(lhs, rhs)}",
    )


# -- gauges ---------------------------------------------------------------------


class GaugeFamily:
    """A family lambda -> t(lambda) in k[G]: zero-weight, invertible, counit 1."""

    def __init__(self, group: FiniteGroup, A: Subgroup, family):
        self.group = group
        self.A = A
        self.weights = character_group(A)
        fam = dict(family)
        if set(fam) != set(self.weights):
            raise ValueError("gauge family must cover every character of A")
        for val in fam.values():
            if not isinstance(val, TensorElement) or val.legs != 1:
                raise ValueError("gauge values must be 1-leg tensor elements")
        self.values = fam

    def value(self, lam: Character) -> TensorElement:
        return self.values[lam]


def check_gauge(t: GaugeFamily) -> Report:
    G, A = t.group, t.A
    rep = Report("gauge family check")
    unit1 = TensorElement.unit(G, 1)
    for i, lam in enumerate(t.weights):
        v = t.values[lam]
        tag = f"lambda[{i}]"
        rep.add(f"{tag} zero-weight", has_zero_weight(v, A))
        eps = CycScalar(0)
        for _, c in v.terms.items():
            eps = eps + c
        rep.add(f"{tag} counit-one", eps == CycScalar(1), f"counit = {eps.literal()}")
        try:
            invert_blockwise(v, A)
            rep.add(f"{tag} invertible", True)
        except ZeroDivisionError as exc:
            rep.add(f"{tag} invertible", False, str(exc))
    return rep


def apply_gauge(tw: TwistFamily, t: GaugeFamily) -> TwistFamily:
    """The gauge-transformed twist

    J^t(lambda) = Delta(t(lambda)^-1) . J(lambda)
                  . (sum_mu t(lambda-mu) (x) P_mu) . (1 (x) t(lambda)).
    """
    G, A = tw.group, tw.A
    if t.group != G or t.A.members != A.members:
        raise ValueError("gauge and twist live over different data")
    wops = tw.wops()
    if wops.normal:
        wt = {lam: wops.to_weight(t.values[lam]) for lam in tw.weights}
        wfam = {}
        for lam in tw.weights:
            tinv = wops.invert(wt[lam], 1)
            left = wops.coproduct(tinv, 0, 1)
            shifted: dict[tuple, CycScalar] = {}
            for mi, mu in enumerate(wops.chars):
                piece = wops.tensor_with_projector(wt[lam - mu], mi)
                for k, v in piece.items():
                    s = shifted.get(k)
                    shifted[k] = v if s is None else s + v
            rightmost = wops.embed(wt[lam], 1, 2, (1,))
            out = wops.mul(left, tw.wvalue(lam), 2)
            out = wops.mul(out, shifted, 2)
            out = wops.mul(out, rightmost, 2)
            wfam[lam] = out
        return TwistFamily.from_weight_family(G, A, wops, wfam)
    fam = {}
    for lam in tw.weights:
        tinv = invert_blockwise(t.values[lam], A)
        left = tinv.coproduct_on_leg(0)
        shifted = TensorElement(G, 2)
        for mu in tw.weights:
            shifted = shifted + t.values[lam - mu].embed(2, (0,)) * weight_projector(A, mu).embed(2, (1,))
        fam[lam] = left * tw.values[lam] * shifted * t.values[lam].embed(2, (1,))
    return TwistFamily(G, A, fam)


def random_gauge(G: FiniteGroup, A: Subgroup, seed: int) -> GaugeFamily:
    """A seeded random gauge family: diagonal in the weight projectors, plus
    (for normal A) an occasional coset-mixing zero-weight term."""
    rng = random.Random(seed)
    chars = character_group(A)
    N = A.exponent()
    rationals = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(2, 3), Fraction(-1)]
    wops = _WeightOps(G, A)
    fam = {}
    for lam in chars:
        for _ in range(20):
            t = TensorElement(G, 1)
            for nu in chars:
                if nu.is_trivial():
                    c = CycScalar(1)
                else:
                    c = CycScalar.zeta(N, rng.randrange(N)) * CycScalar(rng.choice(rationals))
                t = t + weight_projector(A, nu).scaled(c)
            if wops.normal and wops.nrep > 1 and rng.random() < 0.5:
                # add d * (g_C - 1) P_0 for a random non-identity coset:
                # zero-weight, counit-free
                C = rng.randrange(1, wops.nrep)
                d = CycScalar(rng.choice(rationals)) * CycScalar(Fraction(1, 2))
                p0 = weight_projector(A, chars[0])
                mix = (TensorElement.basis(G, (wops.reps[C],)) - TensorElement.unit(G, 1)) * p0
                t = t + mix.scaled(d)
            try:
                invert_blockwise(t, A)
            except ZeroDivisionError:
                continue
            if not has_zero_weight(t, A):
                continue
            fam[lam] = t
            break
        else:
            raise ArithmeticError("could not sample an invertible gauge value")
    return GaugeFamily(G, A, fam)


# -- reconstruction ---------------------------------------------------------------


def _universal_tensor(J0: TensorElement, A: Subgroup, wops: _WeightOps):
    """W = (Delta (x) id)(J0^-1) . (id (x) Delta)(J0) . (1 (x) J0).

    Returned in collapsed coordinates when A is normal, else raw.
    """
    if wops.normal:
        w = wops.to_weight(J0)
        winv = wops.invert(w, 2)
        lhs = wops.coproduct(winv, 0, 2)
        mid = wops.coproduct(w, 1, 2)
        rightmost = wops.embed(w, 2, 3, (1, 2))
        return wops.mul(wops.mul(lhs, mid, 3), rightmost, 3)
    Jinv = invert_blockwise(J0, A)
    return Jinv.coproduct_on_leg(0) * J0.coproduct_on_leg(1) * J0.embed(3, (1, 2))


def reconstruct_from_value(J0: TensorElement, lam0: Character, A: Subgroup) -> TwistFamily:
    """Rebuild the whole twist family from its value at one weight.

    If J0 = J(lam0) for a genuine dynamical twist J, then contracting the
    third leg of W = (Delta (x) id)(J0^-1) . (id (x) Delta)(J0) . (1 (x) J0)
    with the character mu recovers J(lam0 - mu); doing this for every mu
    rebuilds the family.  The third leg of W must be supported in k[A].
    """
    G = J0.group
    wops = _WeightOps(G, A)
    chars = character_group(A)
    if wops.normal:
        W = _universal_tensor(J0, A, wops)
        pieces: dict[int, dict] = {}
        for key, c in W.items():
            C3, nu3 = key[4], key[5]
            if C3 != 0:
                raise ValueError(
                    "third leg of the reconstruction tensor is not supported in k[A]; "
                    "the input is not the value of a dynamical twist"
                )
            pieces.setdefault(nu3, {})[key[:4]] = c
        wfam = {}
        for mi, mu in enumerate(chars):
            wfam[lam0 - mu] = pieces.get(mi, {})
        return TwistFamily.from_weight_family(G, A, wops, wfam)
    W = _universal_tensor(J0, A, wops)
    amem = set(A.members)
    for key in W.terms:
        if key[2] not in amem:
            raise ValueError(
                "third leg of the reconstruction tensor is not supported in k[A]; "
                "the input is not the value of a dynamical twist"
            )
    fam = {}
    for mu in chars:
        fam[lam0 - mu] = W.apply_functional_on_leg(2, lambda g: mu.scalar_at(g))
    return TwistFamily(G, A, fam)


def from_constant_element(J0: TensorElement, A: Subgroup) -> TwistFamily:
    """Build a dynamical twist from a constant solution.

    Preconditions: both counits of J0 equal 1; J0 invertible; the third leg of
    W = (Delta (x) id)(J0^-1) . (id (x) Delta)(J0) . (1 (x) J0) supported in
    k[A].  The resulting family is lambda -> (-lambda applied to leg 3)(W).
    A ValueError naming the failed precondition is raised otherwise.
    """
    G = J0.group
    unit1 = TensorElement.unit(G, 1)
    if J0.counit_on_leg(0) != unit1 or J0.counit_on_leg(1) != unit1:
        raise ValueError("precondition failed: a counit contraction of J0 differs from 1")
    try:
        invert_blockwise(J0, A)
    except ZeroDivisionError as exc:
        raise ValueError(f"precondition failed: J0 is not invertible ({exc})") from exc
    try:
        return reconstruct_from_value(J0, character_group(A)[0], A)
    except ValueError as exc:
        raise ValueError(
            "precondition failed: third leg of the reconstruction tensor "
            "is not supported in k[A]"
        ) from exc


# -- the abelian worked example ----------------------------------------------------


class TwoCochain:
    """A normalized 2-cochain on the character group of A.

    Stores one nonzero scalar c(mu, nu) for every ordered pair of characters,
    with c(lam, 0) = c(0, lam) = 1.  No cocycle condition is imposed: every
    such table produces a dynamical twist, trivialized by an explicit gauge.
    """

    def __init__(self, A: Subgroup, values):
        self.A = A
        self.characters = character_group(A)
        table = {}
        for (mu, nu), c in dict(values).items():
            if not isinstance(c, CycScalar):
                c = CycScalar(Fraction(c))
            table[(mu, nu)] = c
        triv = self.characters[0]
        for mu in self.characters:
            for nu in self.characters:
                c = table.get((mu, nu))
                if c is None:
                    raise ValueError("cochain table must cover every pair of characters")
                if not c:
                    raise ValueError("cochain values must be nonzero")
                if (mu == triv or nu == triv) and c != ONE:
                    raise ValueError("cochain is not normalized: c(lam,0) = c(0,lam) = 1 required")
        self.table = table

    def __call__(self, mu: Character, nu: Character) -> CycScalar:
        return self.table[(mu, nu)]

    @classmethod
    def trivial(cls, A: Subgroup) -> "TwoCochain":
        chars = character_group(A)
        return cls(A, {(m, n): ONE for m in chars for n in chars})


def random_cochain(A: Subgroup, seed: int) -> TwoCochain:
    """A seeded random normalized cochain with root-of-unity times rational values."""
    from math import lcm

    rng = random.Random(seed)
    chars = character_group(A)
    M = lcm(A.exponent(), 4)
    rationals = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-1), Fraction(2, 3)]
    triv = chars[0]
    vals = {}
    for mu in chars:
        for nu in chars:
            if mu == triv or nu == triv:
                vals[(mu, nu)] = ONE
            else:
                vals[(mu, nu)] = CycScalar.zeta(M, rng.randrange(M)) * CycScalar(rng.choice(rationals))
    return TwoCochain(A, vals)


def abelian_twist(c: TwoCochain) -> TwistFamily:
    """J(lambda) = sum_{mu,nu} c(mu+nu,-lambda)^-1 c(mu,nu-lambda) c(nu,-lambda) P_mu (x) P_nu."""
    A = c.A
    G = A.group
    chars = c.characters
    proj = {mu: weight_projector(A, mu) for mu in chars}
    pair = {
        (mu, nu): proj[mu].embed(2, (0,)) * proj[nu].embed(2, (1,))
        for mu in chars
        for nu in chars
    }
    fam = {}
    for lam in chars:
        acc = TensorElement(G, 2)
        for mu in chars:
            for nu in chars:
                coeff = c(mu + nu, -lam).inverse() * c(mu, nu - lam) * c(nu, -lam)
                acc = acc + pair[(mu, nu)].scaled(coeff)
        fam[lam] = acc
    return TwistFamily(G, A, fam)


def abelian_trivializer(c: TwoCochain) -> GaugeFamily:
    """t(lambda) = sum_mu c(mu,-lambda) P_mu; gauging 1 (x) 1 by it gives abelian_twist(c)."""
    A = c.A
    G = A.group
    chars = c.characters
    proj = {mu: weight_projector(A, mu) for mu in chars}
    fam = {}
    for lam in chars:
        t = TensorElement(G, 1)
        for mu in chars:
            t = t + proj[mu].scaled(c(mu, -lam))
        fam[lam] = t
    return GaugeFamily(G, A, fam)


def perturb_one_coefficient(tw: TwistFamily, seed: int):
    """Add 1 to a single raw coefficient of one family member (seeded).

    Returns (mutated twist, weight index, basis key).  Used to demonstrate
    that verification localizes corruption.
    """
    rng = random.Random(seed)
    i = rng.randrange(len(tw.weights))
    lam = tw.weights[i]
    val = tw.values[lam]
    keys = sorted(val.terms)
    key = keys[rng.randrange(len(keys))]
    fam = {l: TensorElement(tw.group, 2, dict(v.terms)) for l, v in tw.values.items()}
    bump = TensorElement.basis(tw.group, key)
    fam[lam] = fam[lam] + bump
    return TwistFamily(tw.group, tw.A, fam), i, key
