"""Group elements as exact Euclidean/affine isometries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .coxeter import CoxeterError, CoxeterSystem
from .scalars import FieldElement, as_rational, is_zero, sign

__all__ = [
    "Isometry",
    "AffineSubspace",
    "IsometryDecomposition",
    "Reflection",
    "identity",
    "decompose",
    "simple_reflections",
    "enumerate_reflections",
    "coxeter_element",
    "permutation_of",
    "cycle_notation",
    "alcove_vertices",
    "alcove_barycenter",
    "coxeter_axis",
    "axis_parameter",
    "fold_to_alcove",
    "reflections_through",
]


class Isometry:
    """An element of W as an (n+1)x(n+1) homogeneous matrix.

    ``u * v`` is the composition "first v, then u", so a word s_1 s_2 ... s_k
    is the matrix product in the same order.
    """

    __slots__ = ("system", "matrix", "_inv", "_hash")

    def __init__(self, system: CoxeterSystem, matrix, inverse=None):
        self.system = system
        self.matrix = matrix
        self._inv = inverse
        self._hash = None

    @property
    def dim(self):
        return len(self.matrix) - 1

    @property
    def linear(self):
        n = self.dim
        return tuple(row[:n] for row in self.matrix[:n])

    @property
    def translation(self):
        n = self.dim
        return tuple(row[n] for row in self.matrix[:n])

    def __mul__(self, other: "Isometry") -> "Isometry":
        inv = None
        if self._inv is not None and other._inv is not None:
            inv = linalg.mat_mul(other._inv, self._inv)
        return Isometry(self.system, linalg.mat_mul(self.matrix, other.matrix), inv)

    def inverse(self) -> "Isometry":
        if self._inv is None:
            self._inv = linalg.simplify_matrix(linalg.inverse(self.matrix))
        return Isometry(self.system, self._inv, self.matrix)

    def apply(self, point):
        return linalg.mat_vec(self.matrix, tuple(point) + (1,))[:-1]

    def is_identity(self):
        return self.matrix == linalg.identity(len(self.matrix))

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.matrix)
        return self._hash

    def __pow__(self, k):
        out = identity(self.system)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        if self.system.symmetric_degree:
            return "Isometry%s" % cycle_notation(permutation_of(self))
        return "Isometry(%r)" % (self.matrix,)


def identity(system: CoxeterSystem) -> Isometry:
    system.require_geometry()
    eye = linalg.identity(system.dim + 1)
    return Isometry(system, eye, eye)


@dataclass(frozen=True)
class AffineSubspace:
    point: tuple
    basis: tuple  # direction vectors

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, x):
        diff = [a - b for a, b in zip(x, self.point)]
        if not self.basis:
            return all(is_zero(d) for d in diff)
        return linalg.solve(linalg.transpose(self.basis), diff) is not None

    def is_linear(self):
        return self.contains(tuple(0 for _ in self.point))


@dataclass(frozen=True)
class IsometryDecomposition:
    fix: AffineSubspace  # None when hyperbolic
    mov: AffineSubspace
    kind: str  # elliptic | hyperbolic
    min_set: AffineSubspace
    translation_along_min_set: tuple


def _project(G, basis, v):
    # G-orthogonal projection of v onto span(basis)
    if not basis:
        return tuple(Fraction(0) for _ in v)
    K = basis
    M = [[linalg.form(G, a, b) for b in K] for a in K]
    rhs = [linalg.form(G, a, v) for a in K]
    c = linalg.solve(M, rhs)
    return tuple(sum(ci * k[j] for ci, k in zip(c, K)) for j in range(len(v)))


def decompose(u: Isometry) -> IsometryDecomposition:
    G = u.system.gram
    L, b = u.linear, u.translation
    n = u.dim
    A = linalg.mat_sub(L, linalg.identity(n))
    ker = linalg.nullspace(A, ncols=n)
    b_par = _project(G, ker, b)
    b_perp = tuple(x - y for x, y in zip(b, b_par))
    p = linalg.solve(A, tuple(-x for x in b_perp)) if n else ()
    if p is None:
        raise ArithmeticError("form is not invariant: b_perp outside Im(L - I)")
    min_set = AffineSubspace(tuple(p), tuple(ker))
    elliptic = all(is_zero(x) for x in b_par)
    mov = AffineSubspace(tuple(b_par), tuple(linalg.column_basis(A)))
    return IsometryDecomposition(
        fix=min_set if elliptic else None,
        mov=mov,
        kind="elliptic" if elliptic else "hyperbolic",
        min_set=min_set,
        translation_along_min_set=tuple(b_par),
    )


# ------------------------------------------------------------ reflections


def _normalize(vec):
    if all(isinstance(x, (int, Fraction)) for x in vec):
        vec = [Fraction(x) for x in vec]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        ints = [x // g for x in ints]
        first = next(x for x in ints if x)
        if first < 0:
            ints = [-x for x in ints]
        return tuple(ints)
    first = next(x for x in vec if not is_zero(x))
    return tuple(x / first for x in vec)


class Reflection:
    """A reflection of W together with its hyperplane {x : normal . x = offset}."""

    __slots__ = ("isometry", "normal", "root", "offset", "word_depth")

    def __init__(self, isometry: Isometry, word_depth: int = 0):
        self.isometry = isometry
        self.word_depth = word_depth
        n = isometry.dim
        A = linalg.mat_sub(isometry.linear, linalg.identity(n))
        rows = [r for r in A if any(not is_zero(x) for x in r)]
        if linalg.rank(A) != 1:
            raise CoxeterError("not a reflection: linear part moves %d dimensions" % linalg.rank(A))
        normal = _normalize(rows[0])
        k = next(i for i, r in enumerate(A) if any(not is_zero(x) for x in r))
        j0 = next(j for j, x in enumerate(normal) if not is_zero(x))
        mu = linalg._lift(A[k][j0]) / normal[j0]
        offset = -linalg._lift(isometry.translation[k]) / mu
        self.normal = normal
        self.offset = linalg.simplify(offset)
        self.root = _normalize(linalg.column_basis(A)[0])
        # still must fix its hyperplane
        b = isometry.translation
        if linalg.solve(A, tuple(-x for x in b)) is None:
            raise CoxeterError("not a reflection: no fixed points")

    @property
    def system(self):
        return self.isometry.system

    @property
    def matrix(self):
        return self.isometry.matrix

    def evaluate(self, x):
        """normal . x - offset (zero exactly on the hyperplane)."""
        return linalg.dot(self.normal, x) - self.offset

    def descriptor(self):
        sys = self.system
        if sys.symmetric_degree:
            return cycle_notation(permutation_of(self.isometry))
        parts = ",".join(_fmt(x) for x in self.normal)
        if sys.is_affine:
            return "H[%s|%s]" % (parts, _fmt(self.offset))
        return "r[%s]" % parts

    def sort_key(self):
        if self.system.symmetric_degree:
            return tuple(c for cyc in _cycles(permutation_of(self.isometry)) for c in cyc)
        return (self.word_depth, tuple(_num_key(x) for x in self.normal), _num_key(self.offset))

    def __eq__(self, other):
        return isinstance(other, Reflection) and self.isometry == other.isometry

    def __hash__(self):
        return hash(self.isometry)

    def __repr__(self):
        return "Reflection(%s)" % self.descriptor()


def _num_key(x):
    r = as_rational(x)
    if r is not None:
        return (0, r)
    return (1, tuple(x.coeffs))


def _fmt(x):
    if isinstance(x, FieldElement):
        r = x.rational()
        if r is None:
            return "%.6g" % float(x)
        x = r
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def simple_reflections(system: CoxeterSystem):
    system.require_geometry()
    return [Reflection(Isometry(system, g, g), 0) for g in system.generators]


def enumerate_reflections(system: CoxeterSystem, depth: int):
    """Reflections u s u^-1 with |u| <= depth, in breadth-first order.

    Spherical systems stop early once the (finite) reflection set is exhausted.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    cache = system._cache.setdefault("reflections", {})
    if depth in cache:
        return list(cache[depth])
    simple = simple_reflections(system)
    seen = {r.isometry.matrix: r for r in simple}
    out = list(simple)
    frontier = list(simple)
    for d in range(1, depth + 1):
        nxt = []
        for r in frontier:
            for s in simple:
                M = linalg.mat_mul(linalg.mat_mul(s.matrix, r.matrix), s.matrix)
                if M in seen:
                    continue
                refl = Reflection(Isometry(system, M, M), d)
                seen[M] = refl
                out.append(refl)
                nxt.append(refl)
        frontier = nxt
        if not frontier:
            break
    cache[depth] = tuple(out)
    return out


def all_reflections(system: CoxeterSystem):
    """Full reflection set of a spherical system."""
    if not system.is_spherical:
        raise CoxeterError("only spherical systems have finitely many reflections")
    d = 0
    while True:
        refl = enumerate_reflections(system, d)
        if len(enumerate_reflections(system, d + 1)) == len(refl):
            return refl
        d += 1


def coxeter_element(system: CoxeterSystem, order) -> Isometry:
    order = list(order)
    if sorted(order) != list(range(system.rank)):
        raise CoxeterError("Coxeter word must be a permutation of 0..%d" % (system.rank - 1))
    gens = simple_reflections(system)
    w = identity(system)
    for i in order:
        w = w * gens[i].isometry
    return w


# ------------------------------------------------------- symmetric groups


def permutation_of(u: Isometry):
    """The permutation (0-based images) of an element of S_n realized as A_{n-1}."""
    n = u.system.symmetric_degree
    if not n:
        raise CoxeterError("not a symmetric-group system")
    L = u.linear
    perm = [None] * n
    for i in range(n - 1):
        c = tuple(1 if k >= i else 0 for k in range(n - 1))
        img = linalg.mat_vec(L, c)
        e = [img[0]] + [img[j] - img[j - 1] for j in range(1, n - 1)] + [-img[n - 2]]
        plus = [j for j, x in enumerate(e) if x == 1]
        minus = [j for j, x in enumerate(e) if x == -1]
        perm[i] = plus[0]
        perm[n - 1] = minus[0]
    return tuple(perm)


def _cycles(perm):
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append(tuple(x + 1 for x in cyc))
    return out


def cycle_notation(perm):
    cycles = _cycles(perm)
    if not cycles:
        return "()"
    sep = "" if len(perm) < 10 else " "
    return "".join("(" + sep.join(str(x) for x in c) + ")" for c in cycles)


# ------------------------------------------------------------ alcove / axis


def alcove_vertices(system: CoxeterSystem):
    """Vertices of the fundamental alcove, vertex j opposite wall j (affine only)."""
    if not system.is_affine:
        raise CoxeterError("alcove vertices need an affine system")
    walls = simple_reflections(system)
    out = []
    for j in range(system.rank):
        rows = [w.normal for i, w in enumerate(walls) if i != j]
        rhs = [w.offset for i, w in enumerate(walls) if i != j]
        out.append(linalg.solve(rows, rhs))
    return out


def alcove_barycenter(system: CoxeterSystem):
    verts = alcove_vertices(system)
    n = system.dim
    return tuple(sum(v[i] for v in verts) / len(verts) for i in range(n))


def coxeter_axis(w: Isometry):
    """(x0, d): a point of the min-set line of ``w`` and its translation vector.

    x0 is the G-orthogonal projection of the fundamental alcove's barycenter.
    """
    dec = decompose(w)
    if dec.kind != "hyperbolic":
        raise CoxeterError("element is elliptic; it has no axis")
    if dec.min_set.dim != 1:
        raise CoxeterError("min-set has dimension %d, not an axis" % dec.min_set.dim)
    G = w.system.gram
    d = dec.translation_along_min_set
    m = dec.min_set.point
    bary = alcove_barycenter(w.system)
    diff = tuple(a - b for a, b in zip(bary, m))
    s = linalg.form(G, diff, d) / linalg.form(G, d, d)
    x0 = tuple(linalg.simplify(a + s * b) for a, b in zip(m, d))
    return x0, tuple(linalg.simplify(x) for x in d)


def axis_parameter(refl: Reflection, x0, d):
    """t with x0 + t d on the hyperplane of ``refl``; None when parallel."""
    slope = linalg.dot(refl.normal, d)
    if is_zero(slope):
        return None
    return linalg.simplify(linalg._lift(-refl.evaluate(x0)) / slope)


def fold_to_alcove(system: CoxeterSystem, point):
    """(g, p') with p' = g(p) in the closed fundamental alcove."""
    if not system.is_affine:
        raise CoxeterError("folding needs an affine system")
    walls = simple_reflections(system)
    bary = alcove_barycenter(system)
    side = [sign(r.evaluate(bary)) for r in walls]
    g = identity(system)
    p = tuple(point)
    moved = True
    while moved:
        moved = False
        for r, s in zip(walls, side):
            if sign(r.evaluate(p)) == -s:
                p = r.isometry.apply(p)
                g = r.isometry * g
                moved = True
                break
    return g, p


def reflections_through(system: CoxeterSystem, point):
    """All reflections of W whose hyperplane contains ``point``; a finite set.

    The point is folded into the fundamental alcove, where its stabilizer is the
    standard parabolic subgroup on the walls through it.
    """
    if system.is_spherical:
        return [r for r in all_reflections(system) if is_zero(r.evaluate(point))]
    g, p = fold_to_alcove(system, point)
    walls = [r for r in simple_reflections(system) if is_zero(r.evaluate(p))]
    seen = {r.matrix: r for r in walls}
    frontier = list(walls)
    while frontier:
        nxt = []
        for r in frontier:
            for s in walls:
                M = linalg.mat_mul(linalg.mat_mul(s.matrix, r.matrix), s.matrix)
                if M not in seen:
                    seen[M] = Reflection(Isometry(system, M, M), r.word_depth + 1)
                    nxt.append(seen[M])
        frontier = nxt
    ginv = g.inverse()
    out = []
    for r in seen.values():
        M = (ginv * r.isometry * g).matrix
        out.append(Reflection(Isometry(system, M, M), None))
    return out
