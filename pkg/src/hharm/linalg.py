"""Exact dense linear algebra over rationals, plus a modular rank bound.

Elimination is fraction-free: rows are cleared to integers and combined by
cross-multiplication, dividing each updated row by its content so entries
stay small.  Pivots are always the first nonzero entry in canonical column
order, which keeps every result deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np


class SingularMatrixError(ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


def _as_int_rows(rows):
    """Copy rows, clearing denominators per row."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _divide_content(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, abs(v))
            if g == 1:
                return
    if g > 1:
        for i, v in enumerate(row):
            if v:
                row[i] = v // g


def echelon_int(rows):
    """Row echelon form of an integer matrix.  Returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        sel = next((i for i in range(r, m) if rows[i][col]), None)
        if sel is None:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        prow = rows[r]
        pval = prow[col]
        for i in range(r + 1, m):
            v = rows[i][col]
            if v:
                ri = rows[i]
                for j in range(col, ncols):
                    ri[j] = ri[j] * pval - prow[j] * v
                _divide_content(ri)
        pivots.append(col)
        r += 1
    return rows, pivots


def rref_int(rows):
    """Echelon plus back-elimination above the pivots (entries stay integral)."""
    rows, pivots = echelon_int(rows)
    ncols = len(rows[0]) if rows else 0
    for k in range(len(pivots) - 1, -1, -1):
        pcol = pivots[k]
        prow = rows[k]
        pval = prow[pcol]
        for i in range(k):
            v = rows[i][pcol]
            if v:
                ri = rows[i]
                for j in range(ncols):
                    ri[j] = ri[j] * pval - prow[j] * v
                _divide_content(ri)
    return rows, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(echelon_int(_as_int_rows(rows))[1])


def nullspace(rows, ncols):
    """Canonical kernel basis of a matrix given as a list of rows.

    One vector per free column, each scaled to integral entries of content 1
    with the first nonzero coordinate positive.
    """
    if not rows:
        basis = []
        for f in range(ncols):
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            basis.append(v)
        return basis
    red, pivots = rref_int(_as_int_rows(rows))
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        # after full reduction each pivot variable depends only on free columns
        for k, pcol in enumerate(pivots):
            entry = red[k][f]
            if entry:
                v[pcol] = Fraction(-entry, red[k][pcol])
        basis.append(normalize_vector(v))
    return basis


def normalize_vector(vec):
    """Scale to integral entries, content 1, first nonzero positive."""
    nz = [c for c in vec if c]
    if not nz:
        return list(vec)
    den = 1
    for c in nz:
        den = den * c.denominator // gcd(den, c.denominator)
    nums = [int(c * den) for c in vec]
    g = 0
    for v in nums:
        g = gcd(g, abs(v))
    scale = Fraction(den, g)
    first = next(c for c in vec if c)
    if first < 0:
        scale = -scale
    return [c * scale for c in vec]


def solve(matrix, rhs):
    """Unique solution of a square exact system; raises when singular."""
    n = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    return _gauss_jordan(aug, n, width=1)[0]


def inverse(matrix):
    """Exact inverse of a square rational matrix; raises when singular."""
    n = len(matrix)
    aug = [
        [Fraction(matrix[i][j]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    cols = _gauss_jordan(aug, n, width=n)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _gauss_jordan(aug, n, width):
    for col in range(n):
        sel = next((i for i in range(col, n) if aug[i][col]), None)
        if sel is None:
            raise SingularMatrixError(f"matrix is singular at column {col}", column=col)
        if sel != col:
            aug[col], aug[sel] = aug[sel], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        for j in range(col, n + width):
            prow[j] *= inv
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                ri = aug[i]
                for j in range(col, n + width):
                    ri[j] -= f * prow[j]
    return [[aug[i][n + w] for i in range(n)] for w in range(width)]


def det(matrix) -> Fraction:
    """Exact determinant by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        sel = next((i for i in range(col, n) if rows[i][col]), None)
        if sel is None:
            return Fraction(0)
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            sign = -sign
        pivot = rows[col][col]
        result *= pivot
        for i in range(col + 1, n):
            if rows[i][col]:
                f = rows[i][col] / pivot
                for j in range(col, n):
                    rows[i][j] -= f * rows[col][j]
    return result * sign


# 2^31 - 1; large enough that an unlucky prime is implausible at desk scale,
# and (p-1)^2 still fits comfortably in int64 products.
_DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)


def rank_mod_p(rows, p: int) -> int:
    """Rank over GF(p); a certified lower bound for the rational rank."""
    if not rows:
        return 0
    a = np.array([[x % p for x in row] for row in rows], dtype=np.int64)
    m, n = a.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r, col:] = (a[r, col:] * inv) % p
        below = a[r + 1 :, col]
        mask = below != 0
        if mask.any():
            factors = below[mask]
            a[r + 1 :, col:][mask] = (a[r + 1 :, col:][mask] - factors[:, None] * a[r, col:]) % p
        r += 1
    return r


def certified_full_row_rank(rows, primes=_DEFAULT_PRIMES) -> bool:
    """True when the matrix provably has full row rank over the rationals.

    A nonzero maximal minor mod p stays nonzero over Q, so full rank mod any
    prime certifies full rank exactly; failure for every tried prime proves
    nothing and callers must fall back to exact elimination.
    """
    nrows = len(rows)
    if nrows == 0:
        return True
    return any(rank_mod_p(rows, p) == nrows for p in primes)
