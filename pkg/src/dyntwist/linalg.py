"""Dense exact linear algebra over cyclotomic scalars.

Matrices are lists of lists of CycScalar.  Everything is plain Gaussian
elimination with exact arithmetic — sizes in this package stay small (a few
hundred at most), so no fancy pivoting is needed beyond "first nonzero".
"""

from __future__ import annotations

from .scalars import CycScalar

ZERO = CycScalar(0)
ONE = CycScalar(1)


def zeros(r: int, c: int):
    return [[ZERO for _ in range(c)] for _ in range(r)]


def identity(n: int):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a, b):
    rb = len(b)
    cb = len(b[0]) if rb else 0
    out = zeros(len(a), cb)
    for i, row in enumerate(a):
        for k, aik in enumerate(row):
            if aik:
                brow = b[k]
                orow = out[i]
                for j in range(cb):
                    if brow[j]:
                        orow[j] = orow[j] + aik * brow[j]
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def scale(a, s):
    return [[x * s for x in row] for row in a]


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def trace(a):
    s = ZERO
    for i in range(len(a)):
        s = s + a[i][i]
    return s


def kron(a, b):
    ra, ca = len(a), len(a[0]) if a else 0
    rb, cb = len(b), len(b[0]) if b else 0
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            if a[i][j]:
                for k in range(rb):
                    for l in range(cb):
                        if b[k][l]:
                            out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def _eliminate(rows, ncols):
    """In-place forward elimination; returns list of pivot column indices."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(a) -> int:
    if not a:
        return 0
    rows = [list(r) for r in a]
    return len(_eliminate(rows, len(a[0])))


def solve_matrix(a, b):
    """Solve a X = b for X (b a matrix); None if inconsistent."""
    n, m = len(a), len(a[0]) if a else 0
    k = len(b[0]) if b else 0
    rows = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    pivots = _eliminate(rows, m)
    # consistency: no pivot may fall into the augmented part
    for i in range(len(pivots), n):
        if any(rows[i][m:]):
            return None
    x = zeros(m, k)
    for r, c in enumerate(pivots):
        for j in range(k):
            x[c][j] = rows[r][m + j]
    return x


def solve(a, b):
    """Solve a x = b for a vector b; None if inconsistent."""
    res = solve_matrix(a, [[v] for v in b])
    return [row[0] for row in res] if res is not None else None


def inverse(a):
    """Matrix inverse; None if singular."""
    n = len(a)
    x = solve_matrix(a, identity(n))
    if x is None:
        return None
    # solve_matrix guarantees a X = I only when rank is full; double-check
    if len(_eliminate([list(r) for r in a], n)) != n:
        return None
    return x


def nullspace(a):
    """Basis of the right kernel, as a list of vectors."""
    if not a:
        return []
    m = len(a[0])
    rows = [list(r) for r in a]
    pivots = _eliminate(rows, m)
    pivset = set(pivots)
    basis = []
    for free in range(m):
        if free in pivset:
            continue
        v = [ZERO] * m
        v[free] = ONE
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        basis.append(v)
    return basis


def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


def det(a) -> CycScalar:
    """Determinant by fraction-free-ish Gaussian elimination, exact."""
    n = len(a)
    rows = [list(r) for r in a]
    sign = 1
    prod = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        p = rows[c][c]
        prod = prod * p
        inv = p.inverse()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return prod if sign > 0 else -prod


_MODP_PRIMES = (2147483629, 2147483587, 2147483563)


def certify_invertible_modp(a) -> bool:
    """True only if the rational matrix is certainly invertible over Q.

    Reduces mod a large prime and checks the determinant there; a nonzero

    modular determinant is an exact certificate of invertibility.  Entries
    must be rational (CycScalar with trivial cyclotomic part); returns False
    when a certificate could not be produced (caller should fall back to an
    exact rank computation).
    """
    n = len(a)
    fracs = []
    for row in a:
        frow = []
        for x in row:
            q = x.rational()
            if q is None:
                return False
            frow.append(q)
        fracs.append(frow)
    for p in _MODP_PRIMES:
        ok = True
        m = []
        for frow in fracs:
            mrow = []
            for q in frow:
                if q.denominator % p == 0:
                    ok = False
                    break
                mrow.append(q.numerator * pow(q.denominator, -1, p) % p)
            if not ok:
                break
            m.append(mrow)
        if not ok:
            continue
        detp = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] % p), None)
            if piv is None:
                detp = 0
                break
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                detp = -detp
            inv = pow(m[c][c], -1, p)
            detp = detp * m[c][c] % p
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] * inv % p
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
        if detp % p:
            return True
    return False
