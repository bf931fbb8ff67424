"""Coxeter axis, axial orders and EL-shellability certificates.

An affine Coxeter element w is a hyperbolic isometry whose min-set is a line
(the axis).  Reflections are vertical when their hyperplane crosses the axis
and horizontal when it is parallel to it.  The axial order lists verticals
crossed after the base point, then the horizontals (ordered by tilting the
axis), then the verticals crossed before the base point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .coxeter import CoxeterError, GeometryError
from .isometry import (
    Isometry,
    Reflection,
    all_reflections,
    axis_parameter,
    coxeter_axis,
    decompose,
    enumerate_reflections,
    identity,
    simple_reflections,
)
from .ncp import IntervalPoset, Window, is_below, reflection_length, window_reflections
from .polyhedra import feasible, recession_is_lineality
from .scalars import is_zero, sign, to_float

__all__ = [
    "AxisData",
    "AxialOrder",
    "ELCertificate",
    "ELViolation",
    "compute_axis",
    "axial_order",
    "lexicographic_order",
    "sorting_word_order",
    "check_el_shellability",
    "maximal_chains",
    "increasing_chains",
    "recheck_violation",
    "verify_lemma_321",
    "Lemma321Report",
]


class OrderError(CoxeterError):
    """An order is not total on the labels it must compare."""


# ------------------------------------------------------------------- axis


@dataclass
class AxisData:
    base_point: tuple
    direction: tuple
    vertical: list  # (Reflection, t) with base_point + t*direction on the hyperplane
    horizontal: list
    tilt: tuple
    axis_point: tuple = None  # projection of the alcove barycenter onto the axis
    base_parameter: Fraction = Fraction(0)

    def parameter(self, refl: Reflection):
        return axis_parameter(refl, self.base_point, self.direction)

    def to_json(self):
        return {
            "base_point": [str(x) for x in self.base_point],
            "direction": [str(x) for x in self.direction],
            "tilt": [str(x) for x in self.tilt],
            "vertical": [
                {"reflection": r.descriptor(), "t": str(t), "t_approx": round(to_float(t), 6)} for r, t in self.vertical
            ],
            "horizontal": [r.descriptor() for r in self.horizontal],
        }


def _reflection_pool(system, w, window, extra):
    pool = {}
    for r in window_reflections(system, w, window):
        pool[r.matrix] = r
    for r in extra or ():
        pool.setdefault(r.matrix, r)
    return list(pool.values())


def _default_tilt(n, rng=None):
    # small primes keep generic ties unlikely; a seeded rng perturbs them
    primes = [3, 7, 13, 19, 29, 37, 43]
    vec = [Fraction(1, primes[i % len(primes)]) * (i + 1) for i in range(n)]
    if rng is not None:
        vec = [v + Fraction(rng.randint(1, 97), 101) for v in vec]
    return tuple(vec)


def compute_axis(system, w: Isometry, window: Window = None, reflections=None, tilt=None, seed=None) -> AxisData:
    """Axis data for an affine Coxeter element.

    ``reflections`` adds to the window pool (e.g. the labels of a poset, some of
    which may lie outside the window).  The base point is the first candidate
    x0 + t0 d, t0 in 0, 1/7, -1/7, 2/7, ..., avoiding every pooled hyperplane;
    with ``seed`` the candidates are shuffled rationals instead.
    """
    if not system.is_affine:
        raise GeometryError("the axis needs an affine system")
    window = window or Window()
    x0, d = coxeter_axis(w)
    pool = _reflection_pool(system, w, window, reflections)
    rng = random.Random(seed) if seed is not None else None

    def candidates():
        if rng is None:
            yield Fraction(0)
            k = 1
            while True:
                yield Fraction(k, 7)
                yield Fraction(-k, 7)
                k += 1
        else:
            while True:
                yield Fraction(rng.randint(-200, 200), rng.choice([17, 19, 23, 29, 31]))

    for t0 in candidates():
        p0 = tuple(linalg.simplify(a + t0 * b) for a, b in zip(x0, d))
        if all(not is_zero(r.evaluate(p0)) for r in pool):
            break
    vertical, horizontal = [], []
    for r in pool:
        t = axis_parameter(r, p0, d)
        if t is None:
            horizontal.append(r)
        else:
            vertical.append((r, t))
    vertical.sort(key=lambda rt: (rt[1], rt[0].sort_key()))
    horizontal.sort(key=lambda r: r.sort_key())
    if tilt is None:
        tilt = _default_tilt(system.dim, rng)
    return AxisData(p0, d, vertical, horizontal, tuple(Fraction(x) for x in tilt), x0, t0)


@dataclass
class AxialOrder:
    ordered_labels: list
    blocks: dict = field(default_factory=dict)  # descriptor -> "above" | "horizontal" | "below"
    crossing: dict = field(default_factory=dict)  # matrix -> axis parameter t (verticals only)

    def position(self):
        return {r.matrix: k for k, r in enumerate(self.ordered_labels)}

    def restrict(self, labels):
        keep = {r.matrix for r in labels}
        return AxialOrder([r for r in self.ordered_labels if r.matrix in keep], self.blocks, self.crossing)

    def descriptors(self):
        return [r.descriptor() for r in self.ordered_labels]


def _axial_key(axis: AxisData, r: Reflection):
    """Sort key realizing the axial order, or raise on an unbreakable tie."""
    n_d = linalg.dot(r.normal, axis.direction)
    n_tilt = linalg.dot(r.normal, axis.tilt)
    if not is_zero(n_d):
        t = axis_parameter(r, axis.base_point, axis.direction)
        # first-order change of the crossing parameter when d becomes d + eps*tilt
        dt = -t * n_tilt / n_d
        block = 0 if sign(t) > 0 else 2
        return (block, t, dt)
    if is_zero(n_tilt):
        raise OrderError("tilt is parallel to the horizontal hyperplane %s" % r.descriptor())
    c = (r.offset - linalg.dot(r.normal, axis.base_point)) / n_tilt
    return (1, 0 if sign(c) > 0 else 1, c)


def axial_order(axis: AxisData, labels=None) -> AxialOrder:
    """Total order on ``labels`` (default: every pooled reflection of the axis)."""
    if labels is None:
        labels = [r for r, _ in axis.vertical] + list(axis.horizontal)
    keyed = sorted(((_axial_key(axis, r), r) for r in labels), key=lambda kr: kr[0])
    for (k1, r1), (k2, r2) in zip(keyed, keyed[1:]):
        if k1 == k2:
            raise OrderError("tilt does not separate %s and %s" % (r1.descriptor(), r2.descriptor()))
    names = {0: "above", 1: "horizontal", 2: "below"}
    crossing = {r.matrix: k[1] for k, r in keyed if k[0] != 1}
    return AxialOrder([r for _, r in keyed], {r.descriptor(): names[k[0]] for k, r in keyed}, crossing)


def lexicographic_order(poset: IntervalPoset) -> AxialOrder:
    """Labels in their stored order (lexicographic on transpositions for S_n)."""
    return AxialOrder(list(poset.labels))


def sorting_word_order(poset: IntervalPoset, word) -> AxialOrder:
    """Reflection order of a spherical group read off the c-sorting word of w0.

    Scanning c c c ... and keeping a letter s exactly when u s u^-1 is a new
    reflection (u the product kept so far) yields a reduced word for the
    longest element; its inversion sequence lists every reflection once.
    """
    system = poset.system
    if not system.is_spherical:
        raise OrderError("sorting-word orders need a spherical system")
    word = list(word)
    gens = [r.isometry for r in simple_reflections(system)]
    total = len(all_reflections(system))
    u, seq, seen = identity(system), [], set()
    steps = 0
    while len(seq) < total:
        s = gens[word[steps % len(word)]]
        t = u * s * u.inverse()
        if t not in seen:
            seen.add(t)
            seq.append(t)
            u = u * s
        steps += 1
        if steps > total * len(word) + len(word):
            raise OrderError("word %s does not sort the longest element" % word)
    pos = {t.matrix: k for k, t in enumerate(seq)}
    return AxialOrder(sorted(poset.labels, key=lambda r: pos[r.matrix]))


# ------------------------------------------------------------ EL checking


@dataclass
class ELViolation:
    interval: tuple  # (x, y) element ids
    reason: str  # no-increasing-chain | multiple-increasing-chains | increasing-not-lex-first
    chains: list  # witness chains as lists of element ids

    def to_json(self):
        return {"interval": list(self.interval), "reason": self.reason, "chains": [list(c) for c in self.chains]}


@dataclass
class ELCertificate:
    verdict: str  # shellable | violated
    violations: list
    order: list  # label ids in order
    intervals_checked: int = 0
    skipped: int = 0  # x <= y without a chain of covers inside the window

    def to_json(self):
        return {
            "verdict": self.verdict,
            "order": self.order,
            "intervals_checked": self.intervals_checked,
            "skipped": self.skipped,
            "violations": [v.to_json() for v in self.violations],
        }


def _label_ranks(poset, order):
    if isinstance(order, AxialOrder):
        order = order.ordered_labels
    pos = {}
    for k, r in enumerate(order):
        pos[r.matrix if isinstance(r, Reflection) else poset.labels[r].matrix] = k
    ranks = []
    for lab in poset.labels:
        if lab.matrix not in pos:
            raise OrderError("label %s is not in the order" % lab.descriptor())
        ranks.append(pos[lab.matrix])
    return ranks


def _chain_reach(poset):
    n = len(poset)
    reach = [0] * n
    for i in sorted(range(n), key=lambda i: -poset.rank[i]):
        b = 1 << i
        for j, _ in poset.up[i]:
            b |= reach[j]
        reach[i] = b
    return reach


def maximal_chains(poset: IntervalPoset, x: int, y: int):
    """All maximal chains from x to y along covers (brute force)."""
    reach = _chain_reach(poset)
    out = []

    def walk(z, path):
        if z == y:
            out.append(list(path))
            return
        for j, _ in poset.up[z]:
            if reach[j] >> y & 1:
                path.append(j)
                walk(j, path)
                path.pop()

    if reach[x] >> y & 1:
        walk(x, [x])
    return out


def _chain_word(poset, chain, lab_rank):
    return tuple(lab_rank[poset.label_of(a, b)] for a, b in zip(chain, chain[1:]))


def check_el_shellability(poset: IntervalPoset, order, max_violations=50) -> ELCertificate:
    """Check every interval [x, y] for a unique increasing chain that is lex-first.

    For each x a depth-first search over increasing chains counts them per
    endpoint; the lex-first chain to y is found greedily.
    """
    lab_rank = _label_ranks(poset, order)
    n = len(poset)
    reach = _chain_reach(poset)
    ups = [sorted(((lab_rank[lab], j) for j, lab in poset.up[i])) for i in range(n)]
    violations = []
    checked = skipped = 0
    for x in range(n):
        inc = {}  # y -> list of increasing chains (at most two kept)

        def walk(z, last, path):
            for lr, j in ups[z]:
                if lr <= last:
                    continue
                path.append(j)
                lst = inc.setdefault(j, [])
                if len(lst) < 2:
                    lst.append(list(path))
                else:
                    lst.append(None)
                walk(j, lr, path)
                path.pop()

        walk(x, -1, [x])
        for y in range(n):
            if y == x or not poset.leq(x, y):
                continue
            if not reach[x] >> y & 1:
                skipped += 1
                continue
            checked += 1
            # lexicographically first maximal chain, greedily
            lex = [x]
            z = x
            while z != y:
                z = next(j for _, j in ups[z] if reach[j] >> y & 1)
                lex.append(z)
            chains = inc.get(y, [])
            if not chains:
                violations.append(ELViolation((x, y), "no-increasing-chain", [lex]))
            elif len(chains) > 1:
                violations.append(ELViolation((x, y), "multiple-increasing-chains", [c for c in chains[:2]]))
            elif chains[0] != lex:
                violations.append(ELViolation((x, y), "increasing-not-lex-first", [chains[0], lex]))
            if len(violations) >= max_violations:
                break
        if len(violations) >= max_violations:
            break
    order_ids = sorted(range(len(poset.labels)), key=lambda k: lab_rank[k])
    verdict = "violated" if violations else "shellable"
    return ELCertificate(verdict, violations, order_ids, checked, skipped)


def recheck_violation(poset: IntervalPoset, order, violation: ELViolation) -> bool:
    """Re-derive a violation from the full list of maximal chains of its interval."""
    lab_rank = _label_ranks(poset, order)
    x, y = violation.interval
    chains = maximal_chains(poset, x, y)
    words = [_chain_word(poset, c, lab_rank) for c in chains]
    increasing = [c for c, wd in zip(chains, words) if all(a < b for a, b in zip(wd, wd[1:]))]
    lex = chains[min(range(len(chains)), key=lambda k: words[k])] if chains else None
    if violation.reason == "no-increasing-chain":
        return not increasing
    if violation.reason == "multiple-increasing-chains":
        return len(increasing) > 1
    if violation.reason == "increasing-not-lex-first":
        return len(increasing) == 1 and increasing[0] != lex
    return False


def increasing_chains(poset: IntervalPoset, order, x=None, y=None):
    """Label words (as Reflections) of all increasing maximal chains of [x, y]."""
    lab_rank = _label_ranks(poset, order)
    x = poset.bottom if x is None else x
    y = poset.top if y is None else y
    out = []
    for c in maximal_chains(poset, x, y):
        wd = _chain_word(poset, c, lab_rank)
        if all(a < b for a, b in zip(wd, wd[1:])):
            out.append([poset.labels[poset.label_of(a, b)] for a, b in zip(c, c[1:])])
    return out


# ------------------------------------------------------------ chamber walls of hyperbolic elements


@dataclass
class Lemma321Report:
    u: Isometry
    length: int
    walls: list
    vertical_above: list
    horizontal: list
    vertical_below: list
    wall_count_ok: bool
    valid_permutations: list  # horizontal orders (as descriptor lists) whose product is u
    irreducible: bool
    bounded: bool
    depth_used: int
    diagram: list = None

    @property
    def passed(self):
        return self.wall_count_ok and bool(self.valid_permutations) and self.bounded

    def to_json(self):
        return {
            "length": self.length,
            "walls": [r.descriptor() for r in self.walls],
            "vertical_above": [r.descriptor() for r in self.vertical_above],
            "horizontal": [r.descriptor() for r in self.horizontal],
            "vertical_below": [r.descriptor() for r in self.vertical_below],
            "wall_count_ok": self.wall_count_ok,
            "valid_horizontal_orders": self.valid_permutations,
            "irreducible": self.irreducible,
            "bounded": self.bounded,
            "conjugation_depth": self.depth_used,
            "passed": self.passed,
        }


class LemmaPreconditionError(CoxeterError):
    pass


def _closure(gens, depth):
    seen = {r.matrix: r for r in gens}
    frontier = list(gens)
    for d in range(depth):
        nxt = []
        for r in frontier:
            for s in gens:
                M = linalg.mat_mul(linalg.mat_mul(s.matrix, r.matrix), s.matrix)
                if M not in seen:
                    seen[M] = Reflection(Isometry(r.system, M, M), r.word_depth)
                    nxt.append(seen[M])
        frontier = nxt
        if not frontier:
            break
    return list(seen.values())


def _oriented(hyps, p):
    # (normal, offset) scaled so the point p is on the positive side
    out = []
    for r in hyps:
        s = sign(r.evaluate(p))
        out.append((tuple(s * x for x in r.normal), s * r.offset, r))
    return out


def _walls(hyps, p, dim):
    """Hyperplanes among ``hyps`` that are walls of the chamber containing p."""
    cons = _oriented(hyps, p)
    # identical hyperplanes come from distinct reflections only in degenerate input
    walls = []
    for i, (a, b, r) in enumerate(cons):
        system = [(a, b, False), (tuple(-x for x in a), -b, False)]
        system += [(aj, bj, True) for j, (aj, bj, _) in enumerate(cons) if j != i]
        if feasible(system, dim):
            walls.append((a, b, r))
    return walls


def _coxeter_m(system, a, b):
    """m for two oriented wall normals (covectors) via the inverse Gram form."""
    Ginv = linalg.inverse(system.gram)
    ab = linalg.form(Ginv, a, b)
    aa = linalg.form(Ginv, a, a)
    bb = linalg.form(Ginv, b, b)
    c2 = Fraction(ab * ab) / (aa * bb)
    table = {Fraction(0): 2, Fraction(1, 4): 3, Fraction(1, 2): 4, Fraction(3, 4): 6, Fraction(1): float("inf")}
    if c2 not in table:
        raise GeometryError("walls meet at an angle that is not pi/m")
    return table[c2]


def verify_lemma_321(system, w, u: Isometry, window: Window = None, poset: IntervalPoset = None, axis: AxisData = None, max_depth=4):
    """Check the wall count and the ordered wall product for a hyperbolic u <= w.

    The arrangement of W_u is approximated by conjugation closures of the
    reflections below u; the depth is raised until the chamber walls stop
    changing and the chamber is bounded modulo its lineality space.
    """
    if not system.is_affine:
        raise GeometryError("the wall count check needs an affine system")
    window = window or Window()
    if decompose(u).kind != "hyperbolic":
        raise LemmaPreconditionError("u is elliptic")
    if not is_below(u, w):
        raise LemmaPreconditionError("u is not below w")
    if poset is None:
        from .ncp import build_interval

        poset = build_interval(system, w, window)
    if axis is None:
        axis = compute_axis(system, w, window, reflections=poset.labels)
    below = [r for r in poset.labels if is_below(r.isometry, u)]
    lu = reflection_length(u)
    dim = system.dim
    p = axis.base_point
    prev = None
    walls = None
    depth_used = None
    for depth in range(max_depth + 1):
        hyps = _closure(below, depth)
        if any(is_zero(r.evaluate(p)) for r in hyps):
            # move along the axis to a point of the chamber missed by all hyperplanes
            raise LemmaPreconditionError("base point lies on a hyperplane of the arrangement of u")
        ws = _walls(hyps, p, dim)
        key = sorted(r.sort_key() for _, _, r in ws)
        if key == prev:
            walls = ws
            depth_used = depth - 1
            break
        prev = key
        walls = ws
        depth_used = depth
    normals = [a for a, _, _ in walls]
    bounded = recession_is_lineality(normals) if normals else False
    wall_refl = [r for _, _, r in walls]

    # Coxeter diagram of the walls
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(len(walls)))
    diagram = [[1] * len(walls) for _ in walls]
    for i, j in itertools.combinations(range(len(walls)), 2):
        m = _coxeter_m(system, normals[i], normals[j])
        diagram[i][j] = diagram[j][i] = m
        if m != 2:
            g.add_edge(i, j)
    irreducible = len(walls) > 0 and nx.is_connected(g)

    above, below_l, horiz = [], [], []
    for r in wall_refl:
        t = axis_parameter(r, p, axis.direction)
        if t is None:
            horiz.append(r)
        elif sign(t) > 0:
            above.append((t, r))
        else:
            below_l.append((t, r))
    above = [r for _, r in sorted(above, key=lambda x: x[0])]
    below_l = [r for _, r in sorted(below_l, key=lambda x: x[0])]
    valid = []
    for perm in itertools.permutations(horiz):
        prod = identity(system)
        for r in above + list(perm) + below_l:
            prod = prod * r.isometry
        if prod == u:
            valid.append([r.descriptor() for r in perm])
    return Lemma321Report(
        u, lu, wall_refl, above, horiz, below_l, len(walls) == lu, valid, irreducible, bounded, depth_used, diagram
    )
