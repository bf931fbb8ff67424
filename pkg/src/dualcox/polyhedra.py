"""Exact feasibility of small systems of linear inequalities (Fourier-Motzkin).

A constraint is ``(a, b, strict)`` meaning ``a . x > b`` when strict and
``a . x >= b`` otherwise.  Dimensions here are at most about five and the
systems are small, so plain elimination with duplicate pruning is enough.
"""

from __future__ import annotations

from fractions import Fraction


def _normalize(a, b, strict):
    scale = max(abs(x) for x in a)
    if scale == 0:
        return tuple(a), Fraction(b), strict
    return tuple(Fraction(x) / scale for x in a), Fraction(b) / scale, strict


def _prune(cons):
    # keep only the tightest constraint for each normalized direction
    best = {}
    for a, b, strict in cons:
        a, b, strict = _normalize(a, b, strict)
        old = best.get(a)
        if old is None or b > old[0] or (b == old[0] and strict and not old[1]):
            best[a] = (b, strict)
    return [(a, b, s) for a, (b, s) in best.items()]


def feasible(constraints, dim) -> bool:
    """True iff some x in Q^dim satisfies every constraint."""
    cons = _prune([(tuple(Fraction(x) for x in a), Fraction(b), s) for a, b, s in constraints])
    for k in range(dim):
        pos, neg, rest = [], [], []
        for c in cons:
            ak = c[0][k]
            (pos if ak > 0 else neg if ak < 0 else rest).append(c)
        for ap, bp, sp in pos:
            for an, bn, sn in neg:
                # ap.x > bp with ap_k > 0 and an.x > bn with an_k < 0
                lp, ln = -an[k], ap[k]
                a = tuple(lp * x + ln * y for x, y in zip(ap, an))
                rest.append((a, lp * bp + ln * bn, sp or sn))
        cons = _prune(rest)
    for a, b, strict in cons:
        if any(a):
            raise AssertionError("variable left after elimination")
        if (strict and not 0 > b) or (not strict and not 0 >= b):
            return False
    return True


def recession_is_lineality(normals) -> bool:
    """For the cone {v : n_i . v >= 0}: True iff it reduces to {v : n_i . v = 0}.

    This holds iff some strictly positive combination of the normals is zero
    (Stiemke); equivalently each n_i . v >= 0 forces n_i . v = 0.
    """
    dim = len(normals[0])
    for i, ni in enumerate(normals):
        cons = [(tuple(nj), 0, False) for nj in normals]
        cons.append((tuple(ni), 0, True))
        if feasible(cons, dim):
            return False
    return True
