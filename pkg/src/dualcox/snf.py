"""Integer Smith normal form, dense and sparse.

Boundary matrices of interval complexes are very sparse with mostly unit
entries, so :func:`invariant_factors` first eliminates unit pivots on a
dict-of-rows representation and only runs the dense algorithm on whatever
is left.
"""

from __future__ import annotations


def _dense_copy(M):
    return [list(map(int, row)) for row in M]


def smith_diagonal(M):
    """Nonzero diagonal entries d_1 | d_2 | ... of the Smith form of an integer matrix."""
    A = _dense_copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                # a smaller remainder appeared in row/column t: move it to the pivot
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best][t])):
                        best = i
                A[t], A[best] = A[best], A[t]
                bestc = None
                for j in range(t, n):
                    if A[t][j] and (bestc is None or abs(A[t][j]) < abs(A[t][bestc])):
                        bestc = j
                for row in A:
                    row[t], row[bestc] = row[bestc], row[t]
                continue
            # divisibility: the pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def invariant_factors(entries, nrows, ncols):
    """(rank, torsion) of a sparse integer matrix given as {(i, j): value}.

    torsion lists the invariant factors greater than one.
    """
    rows = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = int(v)
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    rank = 0
    while True:
        # unit pivot in the shortest row
        pivot = None
        for i in sorted(rows, key=lambda i: (len(rows[i]), i)):
            for j, v in rows[i].items():
                if v in (1, -1):
                    if pivot is None or len(cols[j]) < len(cols[pivot[1]]):
                        pivot = (i, j)
            if pivot is not None:
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        pv = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            f = r[pj] * pv  # pv = +-1 so pv^-1 = pv
            for j, v in prow.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        # column operations clear the rest of the pivot row for free
        del cols[pj]
        rank += 1
    if not rows:
        return rank, []
    ridx = sorted(rows)
    cidx = sorted({j for r in rows.values() for j in r})
    dense = [[rows[i].get(j, 0) for j in cidx] for i in ridx]
    diag = smith_diagonal(dense)
    return rank + len(diag), [d for d in diag if d > 1]
