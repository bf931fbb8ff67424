from math import comb

import pytest

from dualcox.coxeter import build_system
from dualcox.isometry import coxeter_element, identity, permutation_of, simple_reflections
from dualcox.ncp import (
    Cover,
    IntervalPoset,
    Window,
    WindowError,
    build_interval,
    certify_bowtie,
    check_lattice,
    is_below,
    isometry_length,
    reflection_length,
    verify_bowtie,
)

from conftest import poset, system
from oracles import bfs_levels, catalan, nc_size_bruteforce, stabilized_length


def test_length_examples():
    s = build_system("affA1")
    assert reflection_length(identity(s)) == 0
    assert reflection_length(simple_reflections(s)[0].isometry) == 1
    assert reflection_length(coxeter_element(s, [1, 0])) == 2
    a2 = build_system("affA2")
    assert reflection_length(coxeter_element(a2, [0, 1, 2])) == 3


def test_below_in_s3(S3):
    names = {P: S3.element_descriptor(i) for i, P in enumerate(S3.elements)}
    by_name = {v: k for k, v in names.items()}
    w = by_name["(123)"]
    assert is_below(by_name["(12)"], w)
    assert is_below(w, w)
    other = w * w  # (132)
    assert not is_below(other, w)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_catalan_and_narayana(n):
    P = poset("S%d" % n)
    assert len(P) == catalan(n)
    narayana = [comb(n, r) * comb(n, r + 1) // n for r in range(n)]
    assert P.rank_counts() == narayana


@pytest.mark.parametrize("n", [3, 4, 5])
def test_poset_matches_bruteforce(n):
    P = poset("S%d" % n)
    assert len(P) == nc_size_bruteforce(n)


def test_s3_elements_and_covers(S3):
    assert [S3.element_descriptor(i) for i in range(5)] == ["()", "(12)", "(13)", "(23)", "(123)"]
    assert S3.rank == [0, 1, 1, 1, 2]
    for c in S3.covers:
        assert S3.elements[c.hi] == S3.elements[c.lo] * S3.labels[c.label].isometry
        assert S3.rank[c.hi] == S3.rank[c.lo] + 1


def test_affine_a1_window(A1_window):
    P = A1_window
    atoms = sorted(P.labels[P.label_of(0, x)].offset for x in P.atoms())
    assert atoms == [-2, -1, 0, 1, 2, 3]
    assert len(P) == 8 and P.max_rank == 2


INTERVALS = [
    ("S3", None, None),
    ("S4", None, None),
    ("affA1", (1, 0), 4),
    ("affA2", None, 4),
    ("affC2", None, 4),
    ("affC2", (2, 0, 1), 3),
]


@pytest.mark.parametrize("name,word,depth", INTERVALS)
def test_length_formula_against_bfs(name, word, depth):
    P = poset(name, word, depth or 3)
    s = P.system
    for u in P.elements:
        assert reflection_length(u) == stabilized_length(s, u.matrix, (depth or 0) + 1)


@pytest.mark.parametrize("name", ["affA2", "affC2", "affG2"])
def test_formula_is_a_lower_bound_on_a_ball(name):
    """Over products of two windowed reflections the formula never exceeds BFS."""
    s = system(name)
    gens, seen = bfs_levels(s, 1, max_level=2)
    from dualcox.isometry import Isometry

    for M, k in seen.items():
        u = Isometry(s, M)
        lf = reflection_length(u)
        assert lf <= k and (k - lf) % 2 == 0
        assert isometry_length(u) <= lf


def test_window_without_atoms():
    s = build_system("affA1")
    w = coxeter_element(s, [1, 0])
    with pytest.raises(WindowError):
        build_interval(s, w, Window(3, (100, 101)))


def test_window_monotonicity():
    s = build_system("affA2")
    w = coxeter_element(s, [0, 1, 2])
    prev = None
    for d in range(1, 5):
        P = build_interval(s, w, Window(d))
        cur = {u.matrix for u in P.elements}
        if prev is not None:
            assert prev <= cur
        prev = cur


@pytest.mark.parametrize("name", ["S3", "A2", "A3", "B3", "D4", "A4", "B4"])
def test_spherical_lattices(name):
    cert = check_lattice(poset(name))
    assert cert.verdict == "lattice" and cert.definitive


@pytest.mark.parametrize("name,word,depth", [("affA1", (1, 0), 4), ("affA2", None, 4), ("affC2", None, 4)])
def test_affine_windows_without_violation(name, word, depth):
    cert = check_lattice(poset(name, word, depth))
    assert cert.verdict in ("lattice", "window-inconclusive")
    assert cert.witness is None


def test_affine_b3_bowtie():
    P = poset("affB3", None, 3)
    cert = check_lattice(P)
    assert cert.verdict == "bowtie-found" and cert.definitive
    assert verify_bowtie(P, cert.witness)
    assert [P.rank[i] for i in cert.witness] == [1, 1, 3, 3]
    assert certify_bowtie(P, cert.witness)[0] is True


def _restrict(P, keep):
    keep = sorted(keep)
    new = {o: i for i, o in enumerate(keep)}
    covers = [Cover(new[c.lo], new[c.hi], c.label) for c in P.covers if c.lo in new and c.hi in new]
    rel = [[a != b and P.leq(a, b) for b in keep] for a in keep]
    return IntervalPoset(
        P.system, P.w, P.window, [P.elements[i] for i in keep], [P.rank[i] for i in keep], covers, P.labels,
        False, rel,
    )


def test_removed_join_gives_refuted_window_bowtie():
    """Deleting a rank-2 join from a window creates bowties that certification rejects."""
    P = poset("affA3", None, 2)
    z = next(i for i in range(len(P)) if P.rank[i] == 2)
    Q = _restrict(P, [i for i in range(len(P)) if i != z])
    raw = check_lattice(Q, certify=False)
    assert raw.verdict == "bowtie-found" and verify_bowtie(Q, raw.witness)
    ok, between = certify_bowtie(Q, raw.witness)
    assert ok is False
    x1, x2, y1, y2 = (Q.elements[i] for i in raw.witness)
    assert all(is_below(x, between) for x in (x1, x2)) and all(is_below(between, y) for y in (y1, y2))
    cert = check_lattice(Q)
    assert cert.witness is None and "refuted" in cert.note


def test_json_and_dot(S3):
    js = S3.to_json()
    assert len(js["elements"]) == 5 and len(js["covers"]) == 6
    dot = S3.to_dot()
    assert dot.startswith("digraph") and "(123)" in dot


def test_permutation_labels(S3):
    perms = sorted(permutation_of(u) for u in S3.elements)
    assert len(set(perms)) == 5
