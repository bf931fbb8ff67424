"""Discrete Morse matchings on interval complexes.

Cells are addressed as ``(d, i)``: dimension and index into ``K.cells[d]``.
A matching is a list of pairs (face, coface) with the face of codimension
one.  The modified Hasse digraph points down along every unmatched face
relation and up along matched ones; acyclicity is checked with networkx.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .complex import CellComplex
from .coxeter import CoxeterError
from .isometry import Reflection
from .shellability import AxialOrder, lexicographic_order

__all__ = [
    "MatchingError",
    "MorseMatching",
    "MatchingReport",
    "verify_matching",
    "affine_a1_matching",
    "greedy_matching",
    "morse_reduce",
    "split_critical",
]


class MatchingError(ValueError):
    pass


@dataclass
class MorseMatching:
    pairs: list  # [((d, i), (d + 1, j))]
    info: dict = field(default_factory=dict)

    def matched(self):
        out = set()
        for a, b in self.pairs:
            out.add(a)
            out.add(b)
        return out

    def critical(self, K: CellComplex):
        m = self.matched()
        return [(d, i) for d in range(K.dim + 1) for i in range(len(K.cells[d])) if (d, i) not in m]

    def to_json(self, K: CellComplex = None):
        enc = (lambda c: K.cell_descriptor(*c)) if K is not None else list
        return {"pairs": [[enc(a), enc(b)] for a, b in self.pairs], **self.info}


@dataclass
class MatchingReport:
    well_formed: bool
    acyclic: bool
    cycle: list  # cells along a directed cycle, empty when acyclic
    critical: list
    critical_outside_target: list
    complete_on_complement: bool  # None without a target
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return self.well_formed and self.acyclic and self.complete_on_complement is not False

    def to_json(self, K: CellComplex, m: MorseMatching):
        return {
            "pairs": [[K.cell_descriptor(*a), K.cell_descriptor(*b)] for a, b in m.pairs],
            "critical": [K.cell_descriptor(*c) for c in self.critical],
            "acyclic": self.acyclic,
            "complete_on_complement": self.complete_on_complement,
            "well_formed": self.well_formed,
            "cycle": [K.cell_descriptor(*c) for c in self.cycle],
            "critical_outside_target": [K.cell_descriptor(*c) for c in self.critical_outside_target],
            "problems": list(self.problems),
        }


def _hasse_digraph(K: CellComplex, pairs):
    matched = set(pairs)
    G = nx.DiGraph()
    for d in range(K.dim + 1):
        G.add_nodes_from((d, i) for i in range(len(K.cells[d])))
    for d in range(1, K.dim + 1):
        for (r, c), v in K.boundary.get(d, {}).items():
            if not v:
                continue
            lo, hi = (d - 1, r), (d, c)
            if (lo, hi) in matched:
                G.add_edge(lo, hi)
            else:
                G.add_edge(hi, lo)
    return G


def _target_cells(K: CellComplex, target: CellComplex):
    """Cells of K lying in the subcomplex ``target`` (matched by cell key)."""
    out = set()
    for d in range(min(K.dim, target.dim) + 1):
        for c in target.cells[d]:
            i = K.index[d].get(c)
            if i is not None:
                out.add((d, i))
    return out


def verify_matching(K: CellComplex, m: MorseMatching, target: CellComplex = None) -> MatchingReport:
    problems = []
    seen = set()
    for a, b in m.pairs:
        (da, ia), (db, ib) = a, b
        if db != da + 1 or ib >= len(K.cells[db]) or ia >= len(K.cells[da]):
            raise MatchingError("pair %r, %r is not a (d, d+1) pair of cells" % (a, b))
        coeff = K.faces(db, ib).get(ia, 0)
        if coeff == 0:
            raise MatchingError(
                "%s is not a codimension-one face of %s" % (K.cell_descriptor(*a), K.cell_descriptor(*b))
            )
        if coeff not in (1, -1):
            problems.append("incidence %d between %s and %s" % (coeff, K.cell_descriptor(*a), K.cell_descriptor(*b)))
        for c in (a, b):
            if c in seen:
                problems.append("cell %s matched twice" % K.cell_descriptor(*c))
            seen.add(c)
    G = _hasse_digraph(K, m.pairs)
    try:
        cycle = [u for u, _ in nx.find_cycle(G)]
    except nx.NetworkXNoCycle:
        cycle = []
    critical = m.critical(K)
    outside, complete = [], None
    if target is not None:
        inside = _target_cells(K, target)
        outside = [c for c in critical if c not in inside]
        complete = not outside
    return MatchingReport(not problems, not cycle, cycle, critical, outside, complete, problems)


# ------------------------------------------------------------ affine A1


def affine_a1_matching(K: CellComplex) -> MorseMatching:
    """The explicit matching for affine A1 with w the translation by 2.

    a_i is the reflection in the point i (mirrored when w = s0 s1).  Pairs:
    [a_i] with [a_i|a_{i-1}] for i >= 2, [a_i] with [a_{i+1}|a_i] for i < 0,
    and [w] with [a_1|a_0].  Partners missing from the window are listed in
    ``info["missing"]`` and the corresponding 1-cells stay critical.
    """
    P = K.poset
    if P is None or not P.system.is_affine or P.system.rank != 2 or P.system.m(0, 1) != float("inf"):
        raise CoxeterError("affine_a1_matching needs a complex built on affine A1")
    shift = P.w.translation[0]
    if abs(shift) != 2 or P.w.linear != ((1,),):
        raise CoxeterError("w must be a Coxeter element (translation by +-2)")
    point = {}
    for x in P.atoms():
        r = P.labels[P.label_of(P.bottom, x)]
        i = r.offset / r.normal[0]
        point[x] = int(i) if shift > 0 else int(1 - i)
    atom_at = {i: x for x, i in point.items()}
    pairs, missing = [], []

    def want(one_cell, two_cell):
        a = K.index[1].get(one_cell)
        b = K.index[2].get(two_cell) if K.dim >= 2 else None
        if a is None:
            return
        if b is None:
            missing.append(K.cell_descriptor(1, a))
            return
        pairs.append(((1, a), (2, b)))

    for i in sorted(atom_at):
        x = atom_at[i]
        if i >= 2:
            y = atom_at.get(i - 1)
            want((x,), (x, y) if y is not None else None)
        elif i < 0:
            y = atom_at.get(i + 1)
            want((x,), (y, x) if y is not None else None)
    if 0 in atom_at and 1 in atom_at:
        want((P.top,), (atom_at[1], atom_at[0]))
    return MorseMatching(pairs, {"rule": "affine-A1", "missing": missing})


# ------------------------------------------------------------ greedy


def _cell_profile(K: CellComplex, order: AxialOrder):
    """Per-cell (labels used, position word, product rank) from lex-first chains."""
    P = K.poset
    pos = order.position()
    lab_pos = [pos.get(r.matrix, len(pos)) for r in P.labels]
    # lex-first chain word from the bottom to each element
    word = {P.bottom: ()}
    labels = {P.bottom: ()}
    for x in sorted(range(len(P)), key=lambda i: P.rank[i]):
        if x == P.bottom:
            continue
        best = None
        for y, lab in P.down[x]:
            if y in word:
                cand = word[y] + (lab_pos[lab],)
                if best is None or cand < best[0]:
                    best = (cand, labels[y] + (lab,))
        if best is not None:
            word[x], labels[x] = best
    prof = {}
    for d, cells in enumerate(K.cells):
        for i, cell in enumerate(cells):
            w, labs = (), ()
            for x in cell:
                w += word.get(x, ())
                labs += labels.get(x, ())
            prank = sum(P.rank[x] for x in cell)
            prof[(d, i)] = (labs, w, prank)
    return prof


def _distance(order: AxialOrder, P, labs):
    ts = [abs(order.crossing[P.labels[k].matrix]) for k in labs if P.labels[k].matrix in order.crossing]
    return max(ts) if ts else 0


def greedy_matching(K: CellComplex, avoid: CellComplex = None, order_hint: AxialOrder = None) -> MorseMatching:
    """Best-effort acyclic matching of the cells outside ``avoid``.

    Cells are visited from the window edge inwards (largest crossing
    parameter first), elements of larger rank first among ties; each is
    matched to the free coface whose label word is smallest under the order,
    provided the digraph stays acyclic.  Heuristic by design.
    """
    P = K.poset
    order = order_hint or lexicographic_order(P)
    blocked = _target_cells(K, avoid) if avoid is not None else set()
    prof = _cell_profile(K, order)
    G = _hasse_digraph(K, [])
    matched = set()
    pairs = []
    free = lambda c: c not in blocked and c not in matched  # noqa: E731

    def visit_key(c):
        labs, w, prank = prof[c]
        return (-_distance(order, P, labs), -prank, -c[0], w, c)

    for c in sorted((c for c in prof if c not in blocked and c[0] < K.dim), key=visit_key):
        if c in matched:
            continue
        d, i = c
        cands = [(d + 1, j) for j, v in K.cofaces(d, i).items() if v in (1, -1) and free((d + 1, j))]
        cands.sort(key=lambda t: (prof[t][1], t))
        for t in cands:
            G.remove_edge(t, c)
            if nx.has_path(G, t, c):
                G.add_edge(t, c)
                continue
            G.add_edge(c, t)
            matched.update((c, t))
            pairs.append((c, t))
            break
    pairs.sort()
    leftover = [c for c in prof if c not in matched and c not in blocked]
    return MorseMatching(pairs, {"rule": "greedy", "unmatched_outside_avoid": len(leftover)})


def split_critical(K: CellComplex, cells, order: AxialOrder, width=1):
    """(interior, boundary): boundary cells use one of the ``width`` outermost
    vertical labels on either side of the window, by crossing parameter."""
    P = K.poset
    ts = sorted(set(order.crossing[r.matrix] for r in P.labels if r.matrix in order.crossing))
    if not ts:
        return list(cells), []
    lo = ts[min(width, len(ts)) - 1]
    hi = ts[max(len(ts) - width, 0)]
    prof = _cell_profile(K, order)
    interior, boundary = [], []
    for c in cells:
        edge = False
        for k in prof[c][0]:
            t = order.crossing.get(P.labels[k].matrix)
            if t is not None and (t <= lo or t >= hi):
                edge = True
        (boundary if edge else interior).append(c)
    return interior, boundary


# ------------------------------------------------------------ reduction


def morse_reduce(K: CellComplex, m: MorseMatching) -> CellComplex:
    """Morse complex on the critical cells, by sequential Gaussian elimination.

    Each matched pair (a, b) with incidence e = +-1 is cancelled by
    replacing the boundary of every other c having a as a face with
    d(c) - [c:a] e d(b).  This is the signed sum over gradient paths.
    """
    rep = verify_matching(K, m)
    if not (rep.acyclic and rep.well_formed):
        raise MatchingError("morse_reduce needs a well-formed acyclic matching")
    cols = {d: {} for d in range(1, K.dim + 1)}
    rows = {d: {} for d in range(1, K.dim + 1)}
    for d in range(1, K.dim + 1):
        for (r, c), v in K.boundary.get(d, {}).items():
            cols[d].setdefault(c, {})[r] = v
            rows[d].setdefault(r, {})[c] = v
    alive = [set(range(len(cs))) for cs in K.cells]

    def setv(d, r, c, v):
        if v:
            cols[d].setdefault(c, {})[r] = v
            rows[d].setdefault(r, {})[c] = v
        else:
            cols[d].get(c, {}).pop(r, None)
            rows[d].get(r, {}).pop(c, None)

    for (da, a), (db, b) in m.pairs:
        col_b = dict(cols[db].get(b, {}))
        e = col_b.get(a, 0)
        if e not in (1, -1):
            raise MatchingError("incidence changed to %d during reduction" % e)
        for c, lam in list(rows[db].get(a, {}).items()):
            if c == b:
                continue
            for r, v in col_b.items():
                setv(db, r, c, cols[db].get(c, {}).get(r, 0) - lam * e * v)
        # drop b (with its boundary and its appearances one dimension up) and a
        for r in list(col_b):
            setv(db, r, b, 0)
        if db + 1 in rows:
            for c in list(rows[db + 1].get(b, {})):
                setv(db + 1, b, c, 0)
        for c in list(rows[db].get(a, {})):
            setv(db, a, c, 0)
        if da >= 1:
            for r in list(cols[da].get(a, {})):
                setv(da, r, a, 0)
        alive[da].discard(a)
        alive[db].discard(b)

    keep = [sorted(s) for s in alive]
    new = [{old: k for k, old in enumerate(ids)} for ids in keep]
    boundary = {}
    for d in range(1, K.dim + 1):
        bd = {}
        for c, col in cols[d].items():
            if c not in new[d]:
                continue
            for r, v in col.items():
                if v:
                    bd[(new[d - 1][r], new[d][c])] = v
        boundary[d] = bd
    cells = [[K.cells[d][i] for i in ids] for d, ids in enumerate(keep)]
    info = {"morse_of": K.info.get("system"), "critical": [len(ids) for ids in keep]}
    return CellComplex(cells, boundary, poset=K.poset, window=K.window, info=info)
