"""Small exact linear algebra over int / Fraction / FieldElement entries.

Matrices are tuples (or lists) of rows.  Nothing here is clever; sizes are
at most rank+1 of the Coxeter system.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import FieldElement, is_zero


def _lift(x):
    # ints become Fractions so that division stays exact
    if isinstance(x, int):
        return Fraction(x)
    return x


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(A, B):
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def transpose(A):
    return tuple(tuple(r) for r in zip(*A))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def form(G, u, v):
    """Bilinear form u^T G v."""
    return dot(u, mat_vec(G, v))


def mat_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def rref(M):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [[_lift(x) for x in r] for r in M]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _rank_int(M):
    # fraction-free elimination
    rows = [list(r) for r in M if any(r)]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        pc = p[c]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [pc * a - f * b for a, b in zip(rows[i], p)]
        rank += 1
    return rank


def rank(M):
    if M and all(isinstance(x, int) for r in M for x in r):
        return _rank_int(M)
    return len(rref(M)[1])


def nullspace(M, ncols=None):
    """Basis of {x : M x = 0}."""
    if not M:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    n = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(M, b):
    """One solution of M x = b, or None if inconsistent."""
    n = len(M[0])
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return tuple(x)


def column_basis(M):
    """Independent columns spanning the column space of M."""
    if not M:
        return []
    _, piv = rref(M)
    cols = transpose(M)
    return [tuple(_lift(x) for x in cols[p]) for p in piv]


def inverse(M):
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in R)


def determinant(M):
    rows = [[_lift(x) for x in r] for r in M]
    n = len(rows)
    det = _lift(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            return _lift(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if not is_zero(f):
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def simplify(x):
    """Collapse Fractions with denominator 1 to int, rational field elements to Fraction."""
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def simplify_matrix(M):
    return tuple(tuple(simplify(x) for x in r) for r in M)
