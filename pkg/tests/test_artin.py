import os

import pytest

from dualcox.artin import (
    GroupPresentation,
    abelianization_invariants,
    dual_presentation,
    standard_presentation,
)
from dualcox.ncp import build_interval
from dualcox.isometry import simple_reflections

from conftest import poset, system

GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "s3_dual_presentation.txt")


def test_s3_dual_matches_golden(S3):
    p = dual_presentation(S3, naming="letters", reduced=True)
    with open(GOLDEN, encoding="utf-8") as fh:
        assert p.to_text() == fh.read()
    assert p.legend == {"a": "(12)", "b": "(23)", "c": "(13)"}
    assert p.provenance == "dual" and not p.truncated


def test_dual_relations_are_chain_words(S3):
    p = dual_presentation(S3, naming="descriptor")
    words = {w for rel in p.relations for w in rel}
    assert words == {("(12)", "(23)"), ("(13)", "(12)"), ("(23)", "(13)")}
    assert len(p.relations) == 3


def test_standard_presentations():
    a2 = standard_presentation(system("A2"))
    assert a2.relations == [(("s0", "s1", "s0"), ("s1", "s0", "s1"))]
    a1a1 = standard_presentation(system("B3"))
    assert (("s0", "s2"), ("s2", "s0")) in a1a1.relations
    free = standard_presentation(system("affA1"))
    assert free.generators == ["s0", "s1"] and free.relations == []
    assert abelianization_invariants(free).free_rank == 2


def test_affine_a1_dual_window(A1_window):
    p = dual_presentation(A1_window, naming="descriptor", reduced=True)
    assert p.truncated
    words = {w for rel in p.relations for w in rel}
    # every chain word is a_{i+1} a_i
    for first, second in words:
        i = int(second.split("|")[1].rstrip("]"))
        assert first == "H[1|%d]" % (i + 1)
    assert len(words) == len(A1_window.atoms())


def test_rank_one_interval():
    s = system("A2")
    r = simple_reflections(s)[0].isometry
    P = build_interval(s, r)
    p = dual_presentation(P, naming="letters")
    assert p.generators == ["a"] and p.relations == []


def test_undeclared_generator():
    with pytest.raises(ValueError):
        GroupPresentation(["a"], [(("a",), ("b",))], "standard")


@pytest.mark.parametrize("name,free", [("A2", 1), ("A3", 1), ("B3", 2), ("H3", 1)])
def test_abelianizations_agree(name, free):
    std = abelianization_invariants(standard_presentation(system(name)))
    dual = abelianization_invariants(dual_presentation(poset(name)))
    assert std == dual
    assert std.free_rank == free and std.torsion == ()


def test_s3_abelianization(S3):
    ab = abelianization_invariants(dual_presentation(S3, naming="letters", reduced=True))
    assert ab.as_list() == [1]
