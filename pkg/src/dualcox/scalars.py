"""Exact scalars in the real cyclotomic fields Q(2cos(pi/N)).

Rational data is handled with plain ``int``/``Fraction``; everything else
goes through :class:`FieldElement`.  Elements are polynomials in the
generator ``c = 2cos(pi/N)`` reduced modulo its minimal polynomial, so
equality is a coefficient comparison.  Signs are decided by refining a
rational enclosure of ``c`` until the interval evaluation excludes zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "NumberField",
    "FieldElement",
    "number_field",
    "two_cos",
    "sign",
    "to_float",
    "is_zero",
    "as_rational",
]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = [Fraction(x) for x in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
    return _trim(q), _trim(a)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


class NumberField:
    """The field Q(2cos(pi/N)) with a certified enclosure of its generator."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("field order must be positive")
        self.order = order
        self.minpoly = self._minimal_polynomial(order)
        self.degree = len(self.minpoly) - 1
        approx = 2 * math.cos(math.pi / order)
        self._lo, self._hi = self._isolate(approx)

    @staticmethod
    def _minimal_polynomial(order):
        if order in (1, 2, 3):
            # 2cos(pi/N) is -2, 0, 1
            return (Fraction(-round(2 * math.cos(math.pi / order))), Fraction(1))
        import sympy

        x = sympy.Symbol("x")
        p = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / order), x), x)
        coeffs = [Fraction(int(c)) for c in reversed(p.all_coeffs())]
        return tuple(coeffs)

    def _eval_rational(self, t):
        acc = Fraction(0)
        for a in reversed(self.minpoly):
            acc = acc * t + a
        return acc

    def _isolate(self, approx):
        if self.degree == 1:
            root = -self.minpoly[0]
            return root, root
        eps = Fraction(1, 10**9)
        lo = Fraction(approx).limit_denominator(10**12) - eps
        hi = lo + 2 * eps
        flo, fhi = self._eval_rational(lo), self._eval_rational(hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            raise ArithmeticError("could not isolate 2cos(pi/%d)" % self.order)
        return lo, hi

    def _refine(self):
        mid = (self._lo + self._hi) / 2
        fm = self._eval_rational(mid)
        if fm == 0:
            self._lo = self._hi = mid
            return
        if (fm > 0) == (self._eval_rational(self._lo) > 0):
            self._lo = mid
        else:
            self._hi = mid

    def enclosure(self):
        return self._lo, self._hi

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (self._lo,))
        return FieldElement(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    def reduce(self, poly) -> tuple:
        poly = _trim(Fraction(x) for x in poly)
        if len(poly) > self.degree:
            _, poly = _poly_divmod(poly, self.minpoly)
        poly = list(poly) + [Fraction(0)] * (self.degree - len(poly))
        return tuple(poly)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("mixing elements of different fields")
            return value
        return FieldElement(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))

    def __repr__(self):
        return "NumberField(2cos(pi/%d), degree=%d)" % (self.order, self.degree)


@lru_cache(maxsize=None)
def number_field(order: int) -> NumberField:
    return NumberField(order)


def _interval_mul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(prods), max(prods)


class FieldElement:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)
        self._hash = None

    # coercion
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Rational)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, (x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, (-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, (x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return FieldElement(self.field, (x * other for x in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.reduce(_poly_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: find s with s*a = 1 mod minpoly
        r0, r1 = list(self.field.minpoly), _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        s1 = [x / r1[0] for x in s1]
        return FieldElement(self.field, self.field.reduce(s1))

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, (x / other for x in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not any(self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(self.coeffs)
        return self._hash

    def rational(self):
        """The value as a Fraction if it lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def _enclose(self):
        lo, hi = self.field.enclosure()
        acc = (Fraction(0), Fraction(0))
        for a in reversed(self.coeffs):
            acc = _interval_mul(acc, (lo, hi))
            acc = (acc[0] + a, acc[1] + a)
        return acc

    def sign(self) -> int:
        if self.is_zero():
            return 0
        while True:
            lo, hi = self._enclose()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.field._refine()

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        lo, hi = self._enclose()
        return float((lo + hi) / 2)

    def __repr__(self):
        terms = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                terms.append("%s*c^%d" % (a, k) if k > 1 else "%s*c" % a)
        body = " + ".join(terms) if terms else "0"
        return "<%s in Q(2cos(pi/%d))>" % (body, self.field.order)


def two_cos(m: int, field: NumberField):
    """2cos(pi/m) as an element of ``field`` (requires m | order)."""
    if m == 2:
        return field(0)
    if m == 3:
        return field(1)
    N = field.order
    if N % m:
        raise ValueError("2cos(pi/%d) is not in Q(2cos(pi/%d))" % (m, N))
    k = N // m
    c = field.generator()
    prev, cur = field(2), c
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, c * cur - prev
    return cur


def sign(x) -> int:
    if isinstance(x, FieldElement):
        return x.sign()
    return (x > 0) - (x < 0)


def is_zero(x) -> bool:
    if isinstance(x, FieldElement):
        return x.is_zero()
    return x == 0


def to_float(x) -> float:
    return float(x)


def as_rational(x):
    """Fraction value of a rational scalar or None when irrational."""
    if isinstance(x, FieldElement):
        return x.rational()
    return Fraction(x)
