"""Coxeter systems and their exact reflection representations.

Spherical systems act linearly on R^S in the basis of simple roots.
Affine systems of rank n+1 act on R^n (basis: the simple roots of the
finite part) by the standard alcove geometry; every group element is an
(n+1)x(n+1) homogeneous matrix.  For crystallographic data the roots are
rescaled so that all matrices are integral.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf

import networkx as nx

from . import linalg
from .scalars import FieldElement, number_field, sign, two_cos

__all__ = [
    "INF",
    "CoxeterError",
    "GeometryError",
    "CoxeterSystem",
    "build_system",
    "coxeter_matrix_for",
    "parse_system_spec",
]

INF = inf


class CoxeterError(ValueError):
    """Malformed Coxeter data or an unknown type name."""


class GeometryError(CoxeterError):
    """A geometric operation was requested on a system that has no supported realization."""


# ---------------------------------------------------------------- catalog


def _path(n, weights=None):
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i in range(n - 1):
        w = weights[i] if weights else 3
        m[i][i + 1] = m[i + 1][i] = w
    return m


def _attach(m, a, b, w=3):
    m[a][b] = m[b][a] = w


def _grow(m):
    n = len(m)
    out = [row + [2] for row in m] + [[2] * n + [1]]
    return out


def _spherical_matrix(letter, n):
    if letter == "A" and n >= 1:
        return _path(n)
    if letter in "BC" and n >= 2:
        return _path(n, [3] * (n - 2) + [4])
    if letter == "D" and n >= 4:
        m = _grow(_path(n - 1))
        _attach(m, n - 1, n - 3)
        return m
    if letter == "E" and n in (6, 7, 8):
        m = _grow(_path(n - 1))
        _attach(m, n - 1, 2)
        return m
    if letter == "F" and n == 4:
        return _path(4, [3, 4, 3])
    if letter == "G" and n == 2:
        return _path(2, [6])
    if letter == "H" and n in (3, 4):
        return _path(n, [5] + [3] * (n - 2))
    raise CoxeterError("unknown spherical type %s%d" % (letter, n))


def _affine_matrix(letter, n):
    # affine node is always the last index
    if letter == "A" and n == 1:
        return [[1, INF], [INF, 1]]
    if letter == "A" and n >= 2:
        m = _grow(_path(n))
        _attach(m, n, n - 1)
        _attach(m, n, 0)
        return m
    if letter == "B" and n >= 3:
        m = _grow(_spherical_matrix("B", n))
        _attach(m, n, 1)
        return m
    if letter == "C" and n >= 2:
        return _path(n + 1, [4] + [3] * (n - 2) + [4])
    if letter == "D" and n >= 4:
        m = _grow(_spherical_matrix("D", n))
        _attach(m, n, 1)
        return m
    if letter == "E" and n in (6, 7, 8):
        m = _grow(_spherical_matrix("E", n))
        _attach(m, n, {6: 5, 7: 0, 8: 6}[n])
        return m
    if letter == "F" and n == 4:
        m = _grow(_spherical_matrix("F", 4))
        _attach(m, 4, 0)
        return m
    if letter == "G" and n == 2:
        return _path(3, [6, 3])
    if letter == "B" and n == 2:
        return _affine_matrix("C", 2)
    raise CoxeterError("unknown affine type %s%d" % (letter, n))


_NAME_RE = re.compile(
    r"^\s*(?P<aff>affine\s+|aff|~|tilde\s*)?(?P<letter>[A-Ia-i]|S)(?P<rank>\d+)(?:\((?P<m>\d+)\))?\s*$",
    re.IGNORECASE,
)


def parse_system_spec(spec):
    """Parse a type name, ``S<n>``, a JSON object or a raw matrix.

    Returns (name, matrix, symmetric_group_degree or None).
    """
    if isinstance(spec, str):
        s = spec.strip()
        if s.startswith("{") or s.startswith("["):
            return parse_system_spec(json.loads(s))
        mt = _NAME_RE.match(s)
        if not mt:
            raise CoxeterError("unrecognized Coxeter type name %r" % spec)
        letter = mt.group("letter").upper()
        n = int(mt.group("rank"))
        affine = bool(mt.group("aff"))
        if letter == "S":
            if affine or n < 2:
                raise CoxeterError("S<n> needs n >= 2 and is spherical")
            return "S%d" % n, _spherical_matrix("A", n - 1), n
        if letter == "I":
            if affine or n != 2 or not mt.group("m"):
                raise CoxeterError("dihedral types are written I2(m)")
            m = int(mt.group("m"))
            return "I2(%d)" % m, _path(2, [m]), None
        if affine:
            return "affine %s%d" % (letter, n), _affine_matrix(letter, n), None
        return "%s%d" % (letter, n), _spherical_matrix(letter, n), None
    if isinstance(spec, dict):
        m = spec.get("m") or spec.get("coxeter_matrix")
        if m is None:
            raise CoxeterError("JSON system needs an 'm' matrix")
        if "rank" in spec and spec["rank"] != len(m):
            raise CoxeterError("rank %s does not match matrix size %d" % (spec["rank"], len(m)))
        return spec.get("name"), m, None
    if isinstance(spec, (list, tuple)):
        return None, spec, None
    raise CoxeterError("cannot interpret system spec %r" % (spec,))


def _norm_entry(x):
    if x in ("inf", "infinity", "oo", "∞") or x == INF or x == 0 or x == -1:
        return INF
    if isinstance(x, float):
        if x != int(x):
            raise CoxeterError("non-integer Coxeter matrix entry %r" % x)
        x = int(x)
    if not isinstance(x, int):
        raise CoxeterError("bad Coxeter matrix entry %r" % (x,))
    return x


def _validate(matrix):
    n = len(matrix)
    if n == 0:
        raise CoxeterError("empty Coxeter matrix")
    m = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise CoxeterError("Coxeter matrix is not square")
        out = []
        for j, x in enumerate(row):
            if i == j:
                if x != 1:
                    raise CoxeterError("diagonal entry m(%d,%d) must be 1" % (i, i))
                out.append(1)
            else:
                v = _norm_entry(x)
                if v != INF and v < 2:
                    raise CoxeterError("off-diagonal entry m(%d,%d)=%r < 2" % (i, j, x))
                out.append(v)
        m.append(out)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise CoxeterError("Coxeter matrix is not symmetric at (%d,%d)" % (i, j))
    return tuple(tuple(r) for r in m)


def coxeter_matrix_for(name):
    return _validate(parse_system_spec(name)[1])


# ------------------------------------------------------------ cosine forms


def _lcm(a, b):
    return a * b // gcd(a, b)


def _field_order(m):
    N = 2
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if i != j and x != INF:
                N = _lcm(N, 2 * x)
    return N


def _working_order(m):
    # smallest N0 with every needed 2cos(pi/m) in Q(2cos(pi/N0))
    N = 1
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if i != j and x not in (INF, 2, 3):
                N = _lcm(N, x)
    return N


_COS2 = {2: Fraction(0), 3: Fraction(1, 4), 4: Fraction(1, 2), 6: Fraction(3, 4), INF: Fraction(1)}
_RATIO = {3: 1, INF: 1, 4: 2, 6: 3}


def _rat_sqrt(q):
    q = Fraction(q)
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _rational_gram(m):
    """Rescaled Gram matrix with rational entries, or None."""
    n = len(m)
    if any(m[i][j] not in _COS2 for i in range(n) for j in range(n) if i != j):
        return None
    length = [None] * n
    for start in range(n):
        if length[start] is not None:
            continue
        length[start] = Fraction(1)
        stack = [start]
        while stack:
            s = stack.pop()
            for t in range(n):
                if t != s and m[s][t] != 2 and length[t] is None:
                    length[t] = length[s] * _RATIO[m[s][t]]
                    stack.append(t)
    den = 1
    for x in length:
        den = _lcm(den, x.denominator)
    length = [x * den for x in length]
    G = [[Fraction(0)] * n for _ in range(n)]
    for s in range(n):
        G[s][s] = length[s]
        for t in range(n):
            if s != t and m[s][t] != 2:
                r = _rat_sqrt(_COS2[m[s][t]] * length[s] * length[t])
                if r is None:
                    return None
                G[s][t] = -r
    return tuple(tuple(linalg.simplify(x) for x in r) for r in G)


def _cosine_gram(m, field):
    n = len(m)
    G = []
    for s in range(n):
        row = []
        for t in range(n):
            if s == t:
                row.append(field(1))
            elif m[s][t] == INF:
                row.append(field(-1))
            else:
                row.append(-two_cos(m[s][t], field) / 2)
        G.append(tuple(row))
    return tuple(G)


def _components(m, nodes=None):
    nodes = list(range(len(m))) if nodes is None else list(nodes)
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for a, b in itertools.combinations(nodes, 2):
        if m[a][b] != 2:
            g.add_edge(a, b)
    return [sorted(c) for c in sorted(nx.connected_components(g), key=min)]


def _principal(G, idx):
    return tuple(tuple(G[i][j] for j in idx) for i in idx)


def _positive_definite(G, idx):
    for k in range(1, len(idx) + 1):
        if sign(linalg.determinant(_principal(G, idx[:k]))) <= 0:
            return False
    return True


def _is_affine_component(G, idx):
    if len(idx) < 2:
        return False
    if sign(linalg.determinant(_principal(G, idx))) != 0:
        return False
    for drop in idx:
        rest = [i for i in idx if i != drop]
        if not _positive_definite(G, rest):
            return False
    return True


def _catalog(rank, affine):
    out = []
    if affine:
        n = rank - 1
        for letter in "ABCDEFG":
            if letter == "B" and n == 2:
                continue
            try:
                out.append(("affine %s%d" % (letter, n), _affine_matrix(letter, n)))
            except CoxeterError:
                pass
    else:
        for letter in "ABDEFGH":
            try:
                out.append(("%s%d" % (letter, rank), _spherical_matrix(letter, rank)))
            except CoxeterError:
                pass
    return out


def _graph_of(m, idx):
    g = nx.Graph()
    g.add_nodes_from(range(len(idx)))
    for a, b in itertools.combinations(range(len(idx)), 2):
        w = m[idx[a]][idx[b]]
        if w != 2:
            g.add_edge(a, b, m=w)
    return g


def _identify(m, idx, affine):
    sub = [[m[i][j] for j in idx] for i in idx]
    if not affine and len(idx) == 2:
        w = sub[0][1]
        return {2: "A1xA1", 3: "A2", 4: "B2", 6: "G2"}.get(w, "I2(%s)" % w)
    g = _graph_of(m, idx)
    em = nx.algorithms.isomorphism.numerical_edge_match("m", 0)
    for name, cand in _catalog(len(idx), affine):
        if nx.is_isomorphic(g, _graph_of(cand, list(range(len(cand)))), edge_match=em):
            return name
    return None


# ----------------------------------------------------------------- system


@dataclass(frozen=True, eq=False)
class CoxeterSystem:
    rank: int
    coxeter_matrix: tuple
    classification: str  # spherical | affine | other
    type_name: str
    field_order: int
    name: str = None
    symmetric_degree: int = None
    # geometry (None when classification == "other")
    dim: int = None
    gram: tuple = None  # invariant form on direction vectors, coordinate basis
    generators: tuple = None  # homogeneous matrices of simple reflections
    affine_node: int = None
    scale: Fraction = None
    exact_field: object = None  # NumberField or None (rational realization)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_affine(self):
        return self.classification == "affine"

    @property
    def is_spherical(self):
        return self.classification == "spherical"

    def require_geometry(self):
        if self.generators is None:
            raise GeometryError(
                "system %s (%s) has no spherical/affine realization" % (self.type_name, self.classification)
            )

    def m(self, s, t):
        return self.coxeter_matrix[s][t]

    def generator_names(self):
        return ["s%d" % i for i in range(self.rank)]

    def to_json(self):
        return {
            "name": self.name,
            "rank": self.rank,
            "m": [[("inf" if x == INF else x) for x in r] for r in self.coxeter_matrix],
            "classification": self.classification,
            "type": self.type_name,
            "field_order": self.field_order,
        }

    def __repr__(self):
        return "CoxeterSystem(%s, rank=%d, %s)" % (self.type_name, self.rank, self.classification)


def _homogeneous(L, b):
    n = len(L)
    rows = [tuple(L[i]) + (b[i],) for i in range(n)]
    rows.append(tuple([0] * n + [1]))
    return tuple(rows)


def _linear_reflection(G, i, coords):
    # s_i(x) = x - (2 B(a_i, x)/B(a_i,a_i)) a_i in the coordinate basis ``coords``
    n = len(coords)
    L = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    row = coords.index(i)
    gii = G[i][i]
    for c, j in enumerate(coords):
        L[row][c] = L[row][c] - Fraction(2) * G[i][j] / gii
    return L


def _realize_spherical(G):
    n = len(G)
    coords = list(range(n))
    gens = []
    for i in range(n):
        L = _linear_reflection(G, i, coords)
        gens.append(_homogeneous(L, [0] * n))
    return gens, G


def _realize_affine(G, a):
    n = len(G)
    F = [i for i in range(n) if i != a]
    ker = linalg.nullspace(G)
    if len(ker) != 1:
        raise GeometryError("affine cosine form must have a 1-dimensional radical")
    delta = ker[0]
    delta = [x / delta[a] for x in delta]
    theta = [delta[f] for f in F]
    GF = tuple(tuple(G[i][j] for j in F) for i in F)
    gens = [None] * n
    for i in F:
        gens[i] = _homogeneous(_linear_reflection(G, i, F), [0] * len(F))
    Gtheta = linalg.mat_vec(GF, theta)
    btt = linalg.dot(theta, Gtheta)
    k = len(F)
    L = [[(1 if r == c else 0) - 2 * theta[r] * Gtheta[c] / btt for c in range(k)] for r in range(k)]
    b = [2 * theta[r] / btt for r in range(k)]
    gens[a] = _homogeneous(L, b)
    return gens, GF


def _integralize(gens):
    """Scale translations so all entries become integers (when rational)."""
    den = 1
    for M in gens:
        for row in M:
            for x in row:
                if isinstance(x, FieldElement):
                    return gens, Fraction(1)
                den = _lcm(den, Fraction(x).denominator)
    n = len(gens[0]) - 1
    out = []
    for M in gens:
        rows = []
        for r in range(n + 1):
            row = []
            for c in range(n + 1):
                x = Fraction(M[r][c])
                if c == n and r < n:
                    x *= den
                row.append(x)
            rows.append(row)
        out.append(tuple(tuple(linalg.simplify(x) for x in r) for r in rows))
    return out, Fraction(den)


def _all_int(gens):
    return all(isinstance(x, int) for M in gens for r in M for x in r)


def build_system(spec, name=None) -> CoxeterSystem:
    """Build a Coxeter system from a type name, ``S<n>``, JSON, or a Coxeter matrix."""
    parsed_name, raw, sym_deg = parse_system_spec(spec)
    m = _validate(raw)
    n = len(m)
    N = _field_order(m)
    G = _rational_gram(m)
    exact_field = None
    if G is None:
        exact_field = number_field(max(_working_order(m), 1))
        G = _cosine_gram(m, exact_field)

    comps = _components(m)
    comp_kind = []
    for c in comps:
        if len(c) == 1 or _positive_definite(G, c):
            comp_kind.append("spherical")
        elif _is_affine_component(G, c):
            comp_kind.append("affine")
        else:
            comp_kind.append("other")
    if all(k == "spherical" for k in comp_kind):
        classification = "spherical"
    elif len(comps) == 1 and comp_kind[0] == "affine":
        classification = "affine"
    else:
        classification = "other"

    names = []
    for c, k in zip(comps, comp_kind):
        if len(c) == 1:
            names.append("A1")
            continue
        ident = _identify(m, c, k == "affine") if k != "other" else None
        names.append(ident or ("%s(rank %d)" % (k, len(c))))
    type_name = "x".join(names)

    geometry = {}
    if classification == "spherical":
        gens, gram = _realize_spherical(G)
        gens, scale = _integralize(gens)
        geometry = dict(dim=n, gram=gram, generators=tuple(gens), scale=scale)
    elif classification == "affine":
        best = None
        for a in reversed(range(n)):
            gens, gram = _realize_affine(G, a)
            gens, scale = _integralize(gens)
            if best is None:
                best = (a, gens, gram, scale)
            if _all_int(gens):
                best = (a, gens, gram, scale)
                break
        a, gens, gram, scale = best
        geometry = dict(dim=n - 1, gram=gram, generators=tuple(gens), scale=scale, affine_node=a)

    return CoxeterSystem(
        rank=n,
        coxeter_matrix=m,
        classification=classification,
        type_name=type_name,
        field_order=N,
        name=name or parsed_name or type_name,
        symmetric_degree=sym_deg,
        exact_field=exact_field,
        **geometry,
    )


def cosine_form(system: CoxeterSystem):
    """The |S| x |S| bilinear form on simple roots (rescaled rationally when possible)."""
    if "form" not in system._cache:
        G = _rational_gram(system.coxeter_matrix)
        if G is None:
            G = _cosine_gram(system.coxeter_matrix, system.exact_field)
        system._cache["form"] = G
    return system._cache["form"]


def is_spherical_subset(system: CoxeterSystem, subset) -> bool:
    """Whether the standard parabolic subgroup on ``subset`` is finite."""
    idx = sorted(subset)
    if not idx:
        return True
    return _positive_definite(cosine_form(system), idx)


def subset_type(system: CoxeterSystem, subset) -> str:
    idx = sorted(subset)
    if not idx:
        return "trivial"
    names = []
    for comp in _components(system.coxeter_matrix, idx):
        if len(comp) == 1:
            names.append("A1")
        else:
            names.append(_identify(system.coxeter_matrix, comp, False) or "spherical(rank %d)" % len(comp))
    return "x".join(names)
