import itertools

import pytest

from dualcox import linalg
from dualcox.coxeter import INF, CoxeterError, GeometryError, build_system
from dualcox.isometry import identity, simple_reflections

SYSTEMS = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "D5", "E6", "F4", "G2", "H3", "H4",
    "I2(5)", "I2(7)", "I2(8)", "S5",
    "affA1", "affA2", "affA3", "affB3", "affC2", "affC3", "affD4", "affG2", "affF4",
]


def test_examples():
    a2 = build_system("A2")
    assert a2.rank == 2 and a2.m(0, 1) == 3 and a2.is_spherical
    a1 = build_system("affA1")
    assert a1.rank == 2 and a1.m(0, 1) == INF and a1.is_affine and a1.dim == 1
    raw = build_system([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
    assert raw.type_name == "A3" and raw.is_spherical


def test_json_spec():
    s = build_system('{"name": "mine", "m": [[1, 4], [4, 1]]}')
    assert s.name == "mine" and s.type_name == "B2"


@pytest.mark.parametrize(
    "bad",
    [
        [[1, 3], [2, 1]],
        [[2, 3], [3, 1]],
        [[1, 1], [1, 1]],
        [[1, 3, 2], [3, 1]],
    ],
)
def test_malformed_matrices(bad):
    with pytest.raises(CoxeterError):
        build_system(bad)


def test_unnamed_and_indefinite():
    hyp = build_system([[1, 3, 3], [3, 1, 7], [3, 7, 1]])
    assert hyp.classification == "other"
    with pytest.raises(GeometryError):
        hyp.require_geometry()
    with pytest.raises(CoxeterError):
        build_system("Q4")


def test_classification_catalogue():
    assert build_system("affB2").type_name == "affine C2"
    assert build_system("S4").type_name == "A3"
    assert build_system("H3").exact_field is not None
    assert build_system("affE6").is_affine


@pytest.mark.parametrize("name", SYSTEMS)
def test_involutions_and_braid_relations(name):
    s = build_system(name)
    gens = [r.isometry for r in simple_reflections(s)]
    one = identity(s)
    for g in gens:
        assert (g * g).is_identity()
    for i, j in itertools.combinations(range(s.rank), 2):
        prod = gens[i] * gens[j]
        m = s.m(i, j)
        if m == INF:
            assert all(not (prod ** k).is_identity() for k in range(1, 7))
        else:
            assert (prod ** m) == one
            assert all(not (prod ** k).is_identity() for k in range(1, m))


@pytest.mark.parametrize("name", SYSTEMS)
def test_generators_preserve_form(name):
    s = build_system(name)
    G = [list(row) for row in s.gram]
    for r in simple_reflections(s):
        L = r.isometry.linear
        pulled = linalg.mat_mul(linalg.mat_mul(linalg.transpose(L), G), L)
        assert [list(row) for row in pulled] == G
