from fractions import Fraction

from dualcox.polyhedra import feasible, recession_is_lineality


def test_interval_feasibility():
    # 0 < x < 1
    assert feasible([((1,), 0, True), ((-1,), -1, True)], 1)
    # x > 1 and x < 1
    assert not feasible([((1,), 1, True), ((-1,), -1, True)], 1)
    # x >= 1 and x <= 1 has the single point x = 1
    assert feasible([((1,), 1, False), ((-1,), -1, False)], 1)


def test_triangle():
    cons = [((1, 0), 0, True), ((0, 1), 0, True), ((-1, -1), -1, True)]
    assert feasible(cons, 2)
    cons.append(((1, 1), Fraction(3, 2), False))
    assert not feasible(cons, 2)


def test_recession_cones():
    # triangle normals: bounded
    assert recession_is_lineality([(1, 0), (0, 1), (-1, -1)])
    # a strip is bounded modulo its lineality direction
    assert recession_is_lineality([(1, 0), (-1, 0)])
    # a quadrant is not
    assert not recession_is_lineality([(1, 0), (0, 1)])
