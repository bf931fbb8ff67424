"""Interval complexes K_{W,w}, the spherical-parabolic subcomplex X' and homology.

A d-cell is a tuple ``(x_1, ..., x_d)`` of poset ids, none the identity, whose
product x_1 ... x_d is again in the poset with l(x_1) + ... + l(x_d) equal to
its length.  Faces follow the bar construction: drop the first entry, merge
two neighbours, drop the last entry.  For affine systems the poset is a
window, so a cell is kept only if all of its iterated faces exist as well.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from . import linalg
from .coxeter import CoxeterError, CoxeterSystem, cosine_form, is_spherical_subset, subset_type
from .isometry import Isometry, alcove_vertices, coxeter_element, identity, simple_reflections
from .ncp import IntervalPoset, is_below
from .scalars import sign
from .snf import invariant_factors

__all__ = [
    "CellComplex",
    "SphericalSubset",
    "SphericalSubsetCensus",
    "HomologyGroup",
    "build_interval_complex",
    "spherical_subsets",
    "parabolic_point",
    "build_salvetti_subcomplex",
    "homology",
    "boundary_squared_is_zero",
    "find_coxeter_word",
]

log = logging.getLogger(__name__)


class CellComplex:
    """Cells graded by dimension with sparse integer boundary maps.

    ``boundary[d]`` (d >= 1) maps (face index, cell index) to the coefficient
    of the (d-1)-cell in the boundary of the d-cell.
    """

    def __init__(self, cells, boundary, poset=None, window=None, info=None):
        self.cells = [list(c) for c in cells]
        self.boundary = boundary
        self.poset = poset
        self.window = window
        self.index = [{c: i for i, c in enumerate(cs)} for cs in self.cells]
        self.info = dict(info or {})
        self._cache = {}

    @property
    def dim(self):
        return len(self.cells) - 1

    def cell_vector(self):
        return tuple(len(c) for c in self.cells)

    def euler_characteristic(self):
        return sum((-1) ** d * len(c) for d, c in enumerate(self.cells))

    def faces(self, d, i):
        """{face index: coefficient} of cell i in dimension d."""
        if d == 0:
            return {}
        return dict(self._columns(d).get(i, {}))

    def cofaces(self, d, i):
        """{coface index: coefficient} of cell i in dimension d."""
        if d + 1 > self.dim:
            return {}
        return dict(self._rows(d + 1).get(i, {}))

    def _columns(self, d):
        key = ("cols", d)
        if key not in self._cache:
            cols = {}
            for (r, c), v in self.boundary.get(d, {}).items():
                cols.setdefault(c, {})[r] = v
            self._cache[key] = cols
        return self._cache[key]

    def _rows(self, d):
        key = ("rows", d)
        if key not in self._cache:
            rows = {}
            for (r, c), v in self.boundary.get(d, {}).items():
                rows.setdefault(r, {})[c] = v
            self._cache[key] = rows
        return self._cache[key]

    def cell_descriptor(self, d, i):
        cell = self.cells[d][i]
        if self.poset is None or not isinstance(cell, tuple) or not all(isinstance(x, int) for x in cell):
            return str(cell)
        return "[" + "|".join(_element_name(self.poset, x) for x in cell) + "]"

    def to_json(self):
        return {
            "cell_vector": list(self.cell_vector()),
            "cells": [[self.cell_descriptor(d, i) for i in range(len(cs))] for d, cs in enumerate(self.cells)],
            "boundary": {
                str(d): [[r, c, v] for (r, c), v in sorted(b.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
                for d, b in sorted(self.boundary.items())
            },
            "window": self.window.to_json() if self.window is not None else None,
            **self.info,
        }


def _element_name(poset: IntervalPoset, x):
    if poset.rank[x] == 1:
        lab = poset.label_of(poset.bottom, x)
        if lab is not None:
            return poset.labels[lab].descriptor()
    if x == poset.top and not poset.system.symmetric_degree:
        return "w"
    return poset.element_descriptor(x)


def _bar_faces(cell, mult):
    """[(face tuple, sign)] in bar-construction order; ``mult`` multiplies two ids."""
    d = len(cell)
    out = [(cell[1:], 1)]
    for i in range(d - 1):
        merged = mult(cell[i], cell[i + 1])
        face = None if merged is None else cell[:i] + (merged,) + cell[i + 2 :]
        out.append((face, (-1) ** (i + 1)))
    out.append((cell[:-1], (-1) ** d))
    return out


def build_interval_complex(poset: IntervalPoset, max_dim=None) -> CellComplex:
    """All length-additive factorizations of poset elements, up to ``max_dim`` factors."""
    top = poset.max_rank
    if max_dim is None:
        max_dim = top
    if max_dim > top:
        log.warning("max_dim %d exceeds l(w) = %d; clamped", max_dim, top)
        max_dim = top
    els = poset.elements
    inv = [u.inverse() for u in els]
    n = len(els)
    rank = poset.rank

    # right[u] = [(x, y)]: u = x y, length additive, x != 1, both in the poset
    right = [[] for _ in range(n)]
    for u in range(1, n):
        for x in poset.interval_ids(poset.bottom, u):
            if x == 0:
                continue
            if x == u:
                right[u].append((x, None))
                continue
            y = poset.find(inv[x] * els[u])
            if y is not None and rank[x] + rank[y] == rank[u]:
                right[u].append((x, y))

    def factorizations(u, d):
        if d == 1:
            return [(u,)]
        out = []
        for x, y in right[u]:
            if y is None or rank[y] < d - 1:
                continue
            out.extend((x,) + rest for rest in factorizations(y, d - 1))
        return out

    prod_cache = {}

    def mult(a, b):
        key = (a, b)
        if key not in prod_cache:
            prod_cache[key] = poset.find(els[a] * els[b])
        return prod_cache[key]

    cells = [[()]]
    boundary = {}
    dropped = 0
    for d in range(1, max_dim + 1):
        prev = {c: i for i, c in enumerate(cells[d - 1])}
        cand = sorted(c for u in range(1, n) if rank[u] >= d for c in factorizations(u, d))
        kept, bd = [], {}
        for c in cand:
            fs = _bar_faces(c, mult)
            if any(f is None or f not in prev for f, _ in fs):
                dropped += 1
                continue
            j = len(kept)
            kept.append(c)
            for f, s in fs:
                key = (prev[f], j)
                v = bd.get(key, 0) + s
                if v:
                    bd[key] = v
                else:
                    bd.pop(key, None)
        cells.append(kept)
        boundary[d] = bd
    info = {"system": poset.system.type_name, "windowed": not poset.system.is_spherical}
    if dropped:
        info["dropped_open_cells"] = dropped
    return CellComplex(cells, boundary, poset=poset, window=poset.window, info=info)


def boundary_squared_is_zero(K: CellComplex) -> bool:
    for d in range(2, K.dim + 1):
        cols = K._columns(d - 1)
        acc = {}
        for (mid, c), v in K.boundary[d].items():
            for low, u in cols.get(mid, {}).items():
                acc[(low, c)] = acc.get((low, c), 0) + u * v
        if any(acc.values()):
            return False
    return True


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = ["Z^%d" % self.free_rank if self.free_rank != 1 else "Z"] if self.free_rank else []
        parts += ["Z/%d" % t for t in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def homology(K: CellComplex):
    """[H_0, ..., H_dim] over the integers via Smith normal form."""
    ranks = {}
    tors = {}
    for d in range(1, K.dim + 1):
        r, t = invariant_factors(K.boundary.get(d, {}), len(K.cells[d - 1]), len(K.cells[d]))
        ranks[d], tors[d] = r, tuple(sorted(t))
    out = []
    for d in range(K.dim + 1):
        free = len(K.cells[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        out.append(HomologyGroup(free, tors.get(d + 1, ())))
    return out


# ------------------------------------------------------------ spherical parabolics


@dataclass(frozen=True)
class SphericalSubset:
    subset: tuple
    type_tag: str
    word: tuple  # T in the order induced by the ambient Coxeter word
    element: Isometry = field(compare=False, default=None)

    def to_json(self):
        return {"subset": list(self.subset), "type": self.type_tag, "word": list(self.word)}


@dataclass
class SphericalSubsetCensus:
    subsets: list
    word: tuple

    def __iter__(self):
        return iter(self.subsets)

    def __len__(self):
        return len(self.subsets)

    def to_json(self):
        return {"word": list(self.word), "subsets": [s.to_json() for s in self.subsets]}


def _word_product(system, word):
    gens = simple_reflections(system)
    u = identity(system)
    for s in word:
        u = u * gens[s].isometry
    return u


def spherical_subsets(system: CoxeterSystem, word=None) -> SphericalSubsetCensus:
    """Every T with W_T finite; w_T is the subword of ``word`` on T."""
    if word is None:
        word = tuple(range(system.rank))
    word = tuple(word)
    out = []
    for k in range(system.rank + 1):
        for T in itertools.combinations(range(system.rank), k):
            if not is_spherical_subset(system, T):
                continue
            sub = tuple(s for s in word if s in T)
            elem = None
            if system.generators is not None:
                elem = _word_product(system, sub)
            out.append(SphericalSubset(T, subset_type(system, T), sub, elem))
    return SphericalSubsetCensus(out, word)


def _signed_simple_roots(system):
    G = system.gram
    roots = [list(r.root) for r in simple_reflections(system)]
    fixed = [False] * system.rank
    for start in range(system.rank):
        if fixed[start]:
            continue
        fixed[start] = True
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(system.rank):
                if fixed[j] or system.m(i, j) == 2:
                    continue
                if sign(linalg.form(G, roots[i], roots[j])) > 0:
                    roots[j] = [-x for x in roots[j]]
                fixed[j] = True
                stack.append(j)
    return roots


def parabolic_point(system: CoxeterSystem, T):
    """A point whose stabilizer in W is exactly the standard parabolic W_T."""
    T = set(T)
    if system.is_affine:
        verts = [v for j, v in enumerate(alcove_vertices(system)) if j not in T]
        if not verts:
            raise CoxeterError("W_S is infinite; no fixed point")
        return tuple(linalg.simplify(sum(v[i] for v in verts) / len(verts)) for i in range(system.dim))
    system.require_geometry()
    roots = _signed_simple_roots(system)
    G = system.gram
    rows = [tuple(linalg.mat_vec(G, r)) for r in roots]  # B(alpha_j, x) = row_j . x
    rhs = [0 if j in T else 1 for j in range(system.rank)]
    q = linalg.solve(rows, rhs)
    return tuple(linalg.simplify(x) for x in q)


def find_coxeter_word(system: CoxeterSystem, w: Isometry):
    """The lexicographically first ordering of S whose product is ``w``, or None."""
    for perm in itertools.permutations(range(system.rank)):
        if coxeter_element(system, perm) == w:
            return perm
    return None


def build_salvetti_subcomplex(system: CoxeterSystem, w: Isometry, K: CellComplex, word=None) -> CellComplex:
    """Union over spherical T of the cells of K_{W_T, w_T} inside K.

    A cell [x_1|...|x_d] belongs to the T-piece when every x_i fixes the
    parabolic point of T and the product is below w_T.  Problems with the
    subword choice of w_T are listed under ``info["embedding_problems"]``.
    """
    poset = K.poset
    if poset is None:
        raise CoxeterError("subcomplex extraction needs a complex built from a poset")
    if word is None:
        word = find_coxeter_word(system, w)
        if word is None:
            raise CoxeterError("w is not a Coxeter element of this system")
    census = spherical_subsets(system, word)
    els = poset.elements
    problems = []
    pieces = []
    for sub in census:
        if not is_below(sub.element, w):
            problems.append("w_T for T=%s is not below w" % (list(sub.subset),))
            continue
        if sub.subset and poset.find(sub.element) is None:
            problems.append("w_T for T=%s lies outside the window" % (list(sub.subset),))
            continue
        q = parabolic_point(system, sub.subset) if system.is_affine or len(sub.subset) < system.rank else None
        inside = []
        for x, u in enumerate(els):
            fixes = q is None or tuple(u.apply(q)) == tuple(q)
            inside.append(fixes and (x == 0 or is_below(u, sub.element)))
        pieces.append((sub, inside))

    def member(cell):
        if not cell:
            return True
        for _, inside in pieces:
            # x_i fixes q_T and the product (an element <= w_T) also fixes it
            if all(inside[x] for x in cell) and inside[_product(cell)]:
                return True
        return False

    def _product(cell):
        u = identity(system)
        for x in cell:
            u = u * els[x]
        return poset.find(u)

    keep = [[i for i, c in enumerate(cs) if member(c)] for cs in K.cells]
    cells = [[K.cells[d][i] for i in ids] for d, ids in enumerate(keep)]
    while len(cells) > 1 and not cells[-1]:
        cells.pop()
    new_index = [{old: new for new, old in enumerate(ids)} for ids in keep]
    boundary = {}
    for d in range(1, len(cells)):
        bd = {}
        for (r, c), v in K.boundary[d].items():
            if c in new_index[d]:
                if r not in new_index[d - 1]:
                    raise AssertionError("subcomplex is not face-closed")
                bd[(new_index[d - 1][r], new_index[d][c])] = v
        boundary[d] = bd
    info = {
        "census": census.to_json(),
        "embedding_problems": problems,
        "parent_index": [list(ids) for ids in keep[: len(cells)]],
    }
    return CellComplex(cells, boundary, poset=poset, window=K.window, info=info)
