"""Dense exact linear algebra over QQ or QQ(v).

Matrices are lists of rows; entries are any field elements supporting
``+ - * /`` (``gmpy2.mpq`` or :class:`~zscheme.exactalg.RatFunc`).
"""

from __future__ import annotations

from .errors import ZSchemeError
from .exactalg import QQ, UPoly


def identity(n, one=QQ(1), zero=QQ(0)):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = None
            for t in range(k):
                x = ai[t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else ai[0] * 0)
        out.append(row)
    return out


def trace(a):
    acc = a[0][0] * 0
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def _eliminate(a, ncols):
    """Row-reduce ``a`` in place to echelon form; returns (rank, pivot columns)."""
    n = len(a)
    r = 0
    pivots = []
    for col in range(ncols):
        piv = next((i for i in range(r, n) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        ar = a[r]
        for i in range(r + 1, n):
            f = a[i][col]
            if f:
                f = f * inv
                ai = a[i]
                for j in range(col, len(ai)):
                    if ar[j]:
                        ai[j] = ai[j] - f * ar[j]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return r, pivots


def determinant(m):
    n = len(m)
    if n == 0:
        return QQ(1)
    if any(len(row) != n for row in m):
        raise ZSchemeError("DIMENSION_MISMATCH", "matrix is not square")
    a = [list(row) for row in m]
    sign = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return m[0][0] * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            f = a[i][col]
            if f:
                f = f * inv
                for j in range(col + 1, n):
                    if a[col][j]:
                        a[i][j] = a[i][j] - f * a[col][j]
    d = a[0][0]
    for i in range(1, n):
        d = d * a[i][i]
    return d if sign > 0 else -d


def rank(m):
    if not m:
        return 0
    a = [list(row) for row in m]
    r, _ = _eliminate(a, len(a[0]))
    return r


def solve(m, b):
    """Solve ``m x = b`` for square nonsingular ``m``; raises ``SINGULAR``."""
    n = len(m)
    a = [list(m[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ZSchemeError("SINGULAR", "matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        row = a[col]
        for j in range(col, n + 1):
            row[j] = row[j] * inv
        for i in range(n):
            if i != col:
                f = a[i][col]
                if f:
                    ai = a[i]
                    for j in range(col, n + 1):
                        if row[j]:
                            ai[j] = ai[j] - f * row[j]
    return [a[i][n] for i in range(n)]


def inverse(m):
    n = len(m)
    zero = m[0][0] * 0
    one = zero + 1
    cols = [solve(m, [one if i == j else zero for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def charpoly(m) -> UPoly:
    """Characteristic polynomial ``det(t I - m)`` over QQ (Faddeev-LeVerrier)."""
    n = len(m)
    if n == 0:
        return UPoly.const(1)
    coeffs = [QQ(0)] * (n + 1)
    coeffs[n] = QQ(1)
    mk = [[QQ(0)] * n for _ in range(n)]
    c = QQ(1)
    am = None
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        for i in range(n):
            mk[i][i] += c
        am = matmul(m, mk)
        c = -trace(am) / k
        coeffs[n - k] = c
        mk = am
    return UPoly(coeffs)
