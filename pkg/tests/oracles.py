"""Independent oracles used to freeze derived test values.

Nothing here calls the reflection-length formula or the poset builder: the
length oracle is a breadth-first search in the Cayley graph generated by a
finite set of reflections, the symmetric-group oracles work with plain
permutation tuples, and the homology oracle runs sympy's Smith form.
"""

from __future__ import annotations

import itertools
from math import factorial

from dualcox import linalg
from dualcox.isometry import all_reflections, enumerate_reflections


# ------------------------------------------------------------ Cayley-graph BFS


def _reflection_matrices(system, depth):
    if system.is_spherical:
        return [r.matrix for r in all_reflections(system)]
    return [r.matrix for r in enumerate_reflections(system, depth)]


def bfs_levels(system, depth, max_level=2):
    """Levels L_0..L_max of the Cayley graph on the depth-``depth`` reflections."""
    gens = _reflection_matrices(system, depth)
    one = linalg.identity(system.dim + 1)
    one = tuple(tuple(r) for r in one)
    seen = {one: 0}
    levels = [{one}]
    for k in range(1, max_level + 1):
        nxt = set()
        for M in levels[-1]:
            for R in gens:
                P = linalg.mat_mul(M, R)
                if P not in seen:
                    seen[P] = k
                    nxt.add(P)
        levels.append(nxt)
    return gens, seen


def bfs_length(system, matrix, depth, max_length=4):
    """Word length of ``matrix`` over the depth-``depth`` reflections, or None.

    Uses stored levels up to 2 and one more reflection on each side, so
    lengths up to 4 are decided.
    """
    gens, seen = _levels_cached(system, depth)
    if matrix in seen:
        return seen[matrix]
    best = None
    for R in gens:
        v = seen.get(linalg.mat_mul(R, matrix))
        if v is not None and (best is None or v + 1 < best):
            best = v + 1
    if best is not None and best <= 3:
        return best
    if max_length >= 4:
        for R in gens:
            RM = linalg.mat_mul(R, matrix)
            for S in gens:
                v = seen.get(linalg.mat_mul(RM, S))
                if v is not None and v + 2 == 4:
                    return 4
    return best


_LEVELS = {}


def _levels_cached(system, depth):
    key = (id(system), depth)
    if key not in _LEVELS:
        _LEVELS[key] = bfs_levels(system, depth) + (system,)
    gens, seen, _ = _LEVELS[key]
    return gens, seen


def stabilized_length(system, matrix, depth, extra=2):
    """BFS length over growing reflection windows, once two depths agree."""
    prev = bfs_length(system, matrix, depth)
    for d in range(depth + 1, depth + 1 + extra):
        cur = bfs_length(system, matrix, d)
        if cur == prev:
            return cur
        prev = cur
    return prev


# ------------------------------------------------------------ symmetric groups


def perm_mul(p, q):
    """(p q)(i) = p(q(i)): apply q first, matching the library's convention."""
    return tuple(p[q[i]] for i in range(len(p)))


def transpositions(n):
    out = []
    for i, j in itertools.combinations(range(n), 2):
        p = list(range(n))
        p[i], p[j] = j, i
        out.append(tuple(p))
    return out


def cycle_count(p):
    seen, c = set(), 0
    for i in range(len(p)):
        if i not in seen:
            c += 1
            while i not in seen:
                seen.add(i)
                i = p[i]
    return c


def t_length(p):
    return len(p) - cycle_count(p)


def long_cycle(n):
    return tuple((i + 1) % n for i in range(n))


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def nc_size_bruteforce(n):
    """Number of permutations below the n-cycle in absolute order."""
    c = long_cycle(n)
    total = 0
    for p in itertools.permutations(range(n)):
        if t_length(p) + t_length(perm_mul(inverse(p), c)) == n - 1:
            total += 1
    return total


def max_chain_count_bruteforce(n):
    """Number of transposition words of length n-1 multiplying to the n-cycle."""
    c = long_cycle(n)
    T = transpositions(n)
    # dynamic programming over permutations reachable in k steps
    counts = {tuple(range(n)): 1}
    for _ in range(n - 1):
        nxt = {}
        for p, k in counts.items():
            for t in T:
                q = perm_mul(p, t)
                if t_length(q) == t_length(p) + 1:
                    nxt[q] = nxt.get(q, 0) + k
        counts = nxt
    return counts.get(c, 0)


def catalan(n):
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


# ------------------------------------------------------------ homology via sympy


def sympy_homology(K):
    """[(free rank, torsion tuple)] per dimension using sympy's Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    ranks, tors = {}, {}
    for d in range(1, K.dim + 1):
        rows, cols = len(K.cells[d - 1]), len(K.cells[d])
        if rows == 0 or cols == 0:
            ranks[d], tors[d] = 0, ()
            continue
        M = Matrix.zeros(rows, cols)
        for (r, c), v in K.boundary.get(d, {}).items():
            M[r, c] = v
        S = smith_normal_form(M, domain=ZZ)
        diag = [abs(int(S[i, i])) for i in range(min(rows, cols)) if S[i, i] != 0]
        ranks[d] = len(diag)
        tors[d] = tuple(sorted(x for x in diag if x > 1))
    out = []
    for d in range(K.dim + 1):
        free = len(K.cells[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        out.append((free, tors.get(d + 1, ())))
    return out
