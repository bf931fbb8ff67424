"""Standard and dual Artin presentations, with an abelianization sanity check."""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field

from .coxeter import INF, CoxeterSystem
from .ncp import IntervalPoset
from .shellability import maximal_chains
from .snf import invariant_factors

__all__ = [
    "GroupPresentation",
    "Abelianization",
    "standard_presentation",
    "dual_presentation",
    "abelianization_invariants",
]


@dataclass
class GroupPresentation:
    generators: list
    relations: list  # pairs (lhs, rhs) of tuples of generator names
    provenance: str  # "standard" or "dual"
    derived: bool = False  # reduced dual form: every chain equated to a base chain
    truncated: bool = False  # windowed affine data; the true group is infinitely presented
    legend: dict = field(default_factory=dict)  # generator -> reflection descriptor
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        gens = set(self.generators)
        for lhs, rhs in self.relations:
            for g in itertools.chain(lhs, rhs):
                if g not in gens:
                    raise ValueError("relation uses undeclared generator %r" % g)

    def to_text(self):
        lines = ["gens: " + " ".join(self.generators)]
        for lhs, rhs in self.relations:
            lines.append("rel: %s = %s" % (" ".join(lhs), " ".join(rhs)))
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "generators": list(self.generators),
            "relations": [[list(l), list(r)] for l, r in self.relations],
            "provenance": self.provenance,
            "derived": self.derived,
            "truncated": self.truncated,
            "legend": dict(self.legend),
            **self.info,
        }


def standard_presentation(system: CoxeterSystem) -> GroupPresentation:
    """Artin presentation: st... = ts... (m letters each side) for finite m(s, t)."""
    names = system.generator_names()
    rels = []
    for s, t in itertools.combinations(range(system.rank), 2):
        m = system.m(s, t)
        if m == INF:
            continue
        lhs = tuple(names[(s, t)[k % 2]] for k in range(m))
        rhs = tuple(names[(t, s)[k % 2]] for k in range(m))
        rels.append((lhs, rhs))
    return GroupPresentation(names, rels, "standard")


def _letter_names(k):
    letters = string.ascii_lowercase
    if k <= len(letters):
        return list(letters[:k])
    return ["x%d" % i for i in range(k)]


def dual_presentation(poset: IntervalPoset, naming="descriptor", reduced=False) -> GroupPresentation:
    """Relations equating the label words of maximal chains of [1, w].

    With ``reduced`` only (chains - 1) relations are emitted, each chain against
    the first one.  ``naming="letters"`` names generators a, b, c, ... in order
    of first appearance along the chains sorted by label position; otherwise
    reflection descriptors are used.
    """
    chains = maximal_chains(poset, poset.bottom, poset.top)
    words = sorted(tuple(poset.label_of(a, b) for a, b in zip(c, c[1:])) for c in chains)
    used = sorted({k for wd in words for k in wd})
    if naming == "letters":
        first = []
        for wd in words:
            for k in wd:
                if k not in first:
                    first.append(k)
        first += [k for k in range(len(poset.labels)) if k not in first]
        names = dict(zip(first, _letter_names(len(first))))
        gens = [names[k] for k in first if k in used or not words]
        word_names = sorted(tuple(names[k] for k in wd) for wd in words)
    elif naming == "descriptor":
        names = {k: poset.labels[k].descriptor() for k in range(len(poset.labels))}
        gens = [names[k] for k in range(len(poset.labels))]
        word_names = [tuple(names[k] for k in wd) for wd in words]
    else:
        raise ValueError("naming must be 'descriptor' or 'letters'")
    if not words:
        word_names = []
    if poset.max_rank == 1 and not gens:
        gens = [names[k] for k in range(len(poset.labels))]
    if reduced:
        rels = [(word_names[0], other) for other in word_names[1:]]
    else:
        rels = list(itertools.combinations(word_names, 2))
    legend = {names[k]: poset.labels[k].descriptor() for k in range(len(poset.labels)) if names[k] in gens}
    return GroupPresentation(
        gens,
        rels,
        "dual",
        derived=reduced,
        truncated=not poset.system.is_spherical,
        legend=legend,
        info={"chains": len(words), "window": poset.window.to_json()},
    )


@dataclass(frozen=True)
class Abelianization:
    free_rank: int
    torsion: tuple

    def as_list(self):
        return [self.free_rank] + list(self.torsion)


def abelianization_invariants(p: GroupPresentation) -> Abelianization:
    """Free rank and torsion of the abelianized group, via Smith normal form."""
    index = {g: i for i, g in enumerate(p.generators)}
    entries = {}
    for r, (lhs, rhs) in enumerate(p.relations):
        for g in lhs:
            entries[(r, index[g])] = entries.get((r, index[g]), 0) + 1
        for g in rhs:
            entries[(r, index[g])] = entries.get((r, index[g]), 0) - 1
    rank, torsion = invariant_factors(entries, len(p.relations), len(p.generators))
    return Abelianization(len(p.generators) - rank, tuple(sorted(torsion)))
