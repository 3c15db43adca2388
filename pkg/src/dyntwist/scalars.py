"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Scalars are represented in the power basis 1, x, ..., x^(phi(N)-1) of
Q[x]/(Phi_N), with integer numerator coordinates over a single positive
denominator.  All operations are exact; nothing here ever rounds.  Field
elements of different orders interoperate by lifting into Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    """Divide integer polynomials (coefficients low-degree first, den monic).

    The division must be exact; raises if a nonzero remainder appears.
    """
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial (low first)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_coeffs(d)))
    return tuple(poly)


class _Ctx:
    """Cached reduction data for one cyclotomic order."""

    __slots__ = ("n", "phi", "minpoly", "red", "powmod")

    def __init__(self, n: int):
        self.n = n
        self.minpoly = cyclotomic_coeffs(n)
        self.phi = len(self.minpoly) - 1
        phi = self.phi
        # x^phi == -(minpoly without leading term); then shift-and-reduce.
        rows = [tuple(-c for c in self.minpoly[:phi])]
        for _ in range(phi - 2):
            # multiply previous row by x: shift, then fold the overflow term
            prev = rows[-1]
            shifted = [0] + list(prev[:-1])
            ov = prev[-1]
            if ov:
                shifted = [s + ov * b for s, b in zip(shifted, rows[0])]
            rows.append(tuple(shifted))
        self.red = tuple(rows)  # rows for x^(phi), ..., x^(2*phi-2)
        # x^j mod Phi_n for j in range(n), as integer coordinate rows
        pows: list[tuple[int, ...]] = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(n):
            pows.append(tuple(cur))
            nxt = [0] + cur[:-1]
            ov = cur[-1]
            if ov:
                nxt = [s + ov * b for s, b in zip(nxt, rows[0])]
            cur = nxt
        self.powmod = tuple(pows)


@lru_cache(maxsize=None)
def _ctx(n: int) -> _Ctx:
    return _Ctx(n)


def _reduce(conv: list[int], ctx: _Ctx) -> list[int]:
    phi = ctx.phi
    out = list(conv[:phi]) + [0] * max(0, phi - len(conv))
    for k in range(phi, len(conv)):
        c = conv[k]
        if c:
            row = ctx.red[k - phi]
            for j in range(phi):
                out[j] += c * row[j]
    return out


class CycScalar:
    """An element of Q(zeta_order), exact.

    Stored as integer coordinates ``num`` in the power basis over a common
    positive denominator ``den``, normalized so gcd(content(num), den) = 1.
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, value: int | Fraction | str = 0, order: int = 1):
        if isinstance(value, str):
            other = CycScalar.parse(value)
            self.order, self.num, self.den = other.order, other.num, other.den
            return
        q = Fraction(value)
        ctx = _ctx(order)
        num = [q.numerator] + [0] * (ctx.phi - 1)
        self.order = order
        self.num = tuple(num)
        self.den = q.denominator
        self._normalize()

    # -- construction helpers -------------------------------------------------

    def _normalize(self) -> None:
        g = self.den
        for c in self.num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            self.num = tuple(c // g for c in self.num)
            self.den = self.den // g

    @classmethod
    def _make(cls, order: int, num: list[int], den: int) -> "CycScalar":
        s = cls.__new__(cls)
        if den < 0:
            num = [-c for c in num]
            den = -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        s.order = order
        s.num = tuple(num)
        s.den = den
        s._normalize()
        return s

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "CycScalar":
        """The root of unity zeta_order^k as an exact scalar."""
        ctx = _ctx(order)
        return cls._make(order, list(ctx.powmod[k % order]), 1)

    @classmethod
    def from_coeffs(cls, order: int, coeffs) -> "CycScalar":
        """Build from power-basis coordinates (ints or Fractions)."""
        ctx = _ctx(order)
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > ctx.phi:
            raise ValueError(f"expected at most {ctx.phi} coordinates for order {order}")
        fr += [Fraction(0)] * (ctx.phi - len(fr))
        den = 1
        for f in fr:
            den = den * f.denominator // gcd(den, f.denominator)
        num = [int(f * den) for f in fr]
        return cls._make(order, num, den)

    # -- coercion --------------------------------------------------------------

    def lift(self, order: int) -> "CycScalar":
        """Image of this scalar in Q(zeta_order); order must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        ctx = _ctx(order)
        out = [0] * ctx.phi
        for j, c in enumerate(self.num):
            if c:
                row = ctx.powmod[(j * step) % order]
                for i in range(ctx.phi):
                    out[i] += c * row[i]
        return CycScalar._make(order, out, self.den)

    def _pair(self, other) -> tuple["CycScalar", "CycScalar"]:
        if not isinstance(other, CycScalar):
            other = CycScalar(other)
        if self.order == other.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction | None:
        """The value as a Fraction when it lies in Q, else None."""
        if self.is_rational():
            return Fraction(self.num[0], self.den)
        return None

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "CycScalar":
        a, b = self._pair(other)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycScalar._make(a.order, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self) -> "CycScalar":
        return CycScalar._make(self.order, [-c for c in self.num], self.den)

    def __sub__(self, other) -> "CycScalar":
        return self + (-other if isinstance(other, CycScalar) else -CycScalar(other))

    def __rsub__(self, other) -> "CycScalar":
        return CycScalar(other) - self

    def __mul__(self, other) -> "CycScalar":
        a, b = self._pair(other)
        an, bn = a.num, b.num
        conv = [0] * (2 * len(an) - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        conv[i + j] += x * y
        out = _reduce(conv, _ctx(a.order))
        return CycScalar._make(a.order, out, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            q = 1 / Fraction(self.num[0], self.den)
            return CycScalar._make(self.order, [q.numerator] + [0] * (len(self.num) - 1), q.denominator)
        ctx = _ctx(self.order)
        # extended gcd of the numerator polynomial with Phi_N over Q
        a = [Fraction(c) for c in self.num]
        b = [Fraction(c) for c in ctx.minpoly]
        ua: list[Fraction] = [Fraction(1)]
        ub: list[Fraction] = [Fraction(0)]

        def _trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        a, b = _trim(a), _trim(b)
        while b:
            # divide a by b
            q = [Fraction(0)] * (len(a) - len(b) + 1) if len(a) >= len(b) else []
            r = list(a)
            for i in range(len(r) - 1, len(b) - 2, -1):
                c = r[i] / b[-1]
                q[i - (len(b) - 1)] = c
                if c:
                    for j, bj in enumerate(b):
                        r[i - (len(b) - 1) + j] -= c * bj
            r = _trim(r)
            # u_new = ua - q * ub
            prod = [Fraction(0)] * (len(q) + len(ub) - 1) if q and ub else []
            for i, qi in enumerate(q):
                if qi:
                    for j, uj in enumerate(ub):
                        prod[i + j] += qi * uj
            un = [Fraction(0)] * max(len(ua), len(prod))
            for i, c in enumerate(ua):
                un[i] += c
            for i, c in enumerate(prod):
                un[i] -= c
            a, b = b, r
            ua, ub = ub, _trim(un)
        # a is now the (constant, since Phi_N is irreducible) gcd
        if len(a) != 1:
            raise ArithmeticError("cyclotomic polynomial unexpectedly reducible")
        g = a[0]
        inv = [c / g * self.den for c in ua]
        inv += [Fraction(0)] * (ctx.phi - len(inv))
        return CycScalar.from_coeffs(self.order, inv)

    def __truediv__(self, other) -> "CycScalar":
        if not isinstance(other, CycScalar):
            other = CycScalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycScalar":
        return CycScalar(other) / self

    def __pow__(self, k: int) -> "CycScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycScalar(1, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def times_root(self, order: int, exp: int) -> "CycScalar":
        """Fast multiplication by zeta_order^exp (no full convolution)."""
        m = lcm(self.order, order)
        s = self if m == self.order else self.lift(m)
        e = (exp * (m // order)) % m
        if e == 0:
            return s
        ctx = _ctx(m)
        out = [0] * ctx.phi
        for j, c in enumerate(s.num):
            if c:
                row = ctx.powmod[(j + e) % m]
                for i in range(ctx.phi):
                    out[i] += c * row[i]
        return CycScalar._make(m, out, s.den)

    def conjugate(self) -> "CycScalar":
        """Complex conjugation, zeta -> zeta^(-1)."""
        ctx = _ctx(self.order)
        out = [0] * ctx.phi
        for j, c in enumerate(self.num):
            if c:
                row = ctx.powmod[(self.order - j) % self.order]
                for i in range(ctx.phi):
                    out[i] += c * row[i]
        return CycScalar._make(self.order, out, self.den)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycScalar(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.order, self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- conversions ---------------------------------------------------------

    def __complex__(self) -> complex:
        z = 0j
        for j, c in enumerate(self.num):
            if c:
                z += c * cmath.exp(2j * cmath.pi * j / self.order)
        return z / self.den

    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def literal(self) -> str:
        """Textual form ``cyc N: c0,c1,...`` with exact rational coordinates."""
        parts = []
        for c in self.coeffs():
            parts.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        return f"cyc {self.order}: " + ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "CycScalar":
        """Inverse of :meth:`literal`."""
        text = text.strip()
        if not text.startswith("cyc"):
            raise ValueError(f"not a scalar literal: {text!r}")
        head, _, tail = text.partition(":")
        order = int(head[3:].strip())
        coeffs = [Fraction(t.strip()) for t in tail.strip().split(",")] if tail.strip() else []
        return cls.from_coeffs(order, coeffs)

    def __str__(self) -> str:
        return self.literal()

    def __repr__(self) -> str:
        return f"CycScalar.parse({self.literal()!r})"


ZERO = CycScalar(0)
ONE = CycScalar(1)


class RootOfUnity:
    """A root of unity zeta_order^exp, kept in lowest terms.

    Multiplicative-only arithmetic; embeds into CycScalar via :meth:`to_cyc`.
    """

    __slots__ = ("order", "exp")

    def __init__(self, order: int, exp: int = 1):
        if order < 1:
            raise ValueError("order must be >= 1")
        exp %= order
        if exp == 0:
            order = 1
        else:
            g = gcd(exp, order)
            order //= g
            exp //= g
        self.order = order
        self.exp = exp

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        m = lcm(self.order, other.order)
        return RootOfUnity(m, self.exp * (m // self.order) + other.exp * (m // other.order))

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exp)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exp * k)

    def to_cyc(self, order: int | None = None) -> CycScalar:
        """Embed into Q(zeta_order); order defaults to this root's order."""
        z = CycScalar.zeta(self.order, self.exp)
        return z.lift(order) if order is not None else z

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.order == other.order and self.exp == other.exp

    def __hash__(self):
        return hash((self.order, self.exp))

    def __repr__(self) -> str:
        return f"RootOfUnity({self.order}, {self.exp})"


def express_in_order(s: CycScalar, target: int) -> CycScalar | None:
    """Rewrite s as an element of Q(zeta_target), or None if it lies outside.

    Used to put scalars produced by different computation routes into one
    canonical field presentation so that equal values get equal literals.
    """
    if s.order == target:
        return s
    if target % s.order == 0:
        return s.lift(target)
    m = lcm(s.order, target)
    big = s.lift(m)
    ctx_t = _ctx(target)
    step = m // target
    # columns: images of the target power basis zeta_target^j inside Q(zeta_m)
    cols = [_ctx(m).powmod[(j * step) % m] for j in range(ctx_t.phi)]
    # solve integer least-denominator system cols * x = big (exact, small)
    from fractions import Fraction as _F

    rows = len(_ctx(m).powmod[0])
    aug = [[_F(cols[j][i]) for j in range(ctx_t.phi)] + [_F(big.num[i], big.den)] for i in range(rows)]
    ncol = ctx_t.phi
    piv_cols: list[int] = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][ncol]:
            return None
    coeffs = [_F(0)] * ncol
    for i, c in enumerate(piv_cols):
        coeffs[c] = aug[i][ncol]
    return CycScalar.from_coeffs(target, coeffs)


def as_root_of_unity(s: CycScalar) -> RootOfUnity | None:
    """Recognize s as a root of unity in Q(zeta_N), or return None.

    The roots of unity in Q(zeta_N) are +-zeta_N^k; both signs are handled.
    """
    n = s.order
    if s.den != 1:
        return None
    z = CycScalar.zeta(n)
    p = CycScalar(1, n)
    for k in range(n):
        if s == p:
            return RootOfUnity(n, k)
        if s == -p:
            # -zeta_n^k = zeta_{2n}^{n + 2k}
            return RootOfUnity(2 * n, n + 2 * k)
        p = p * z
    return None
