import pytest

from dualcox.isometry import decompose, simple_reflections
from dualcox.ncp import Window
from dualcox.shellability import (
    AxialOrder,
    LemmaPreconditionError,
    OrderError,
    axial_order,
    check_el_shellability,
    compute_axis,
    increasing_chains,
    lexicographic_order,
    maximal_chains,
    recheck_violation,
    sorting_word_order,
    verify_lemma_321,
)

from conftest import poset
from oracles import max_chain_count_bruteforce


def _axis(P, **kw):
    return compute_axis(P.system, P.w, P.window, reflections=P.labels, **kw)


def test_affine_a1_axis_and_order(A1_window):
    ax = _axis(A1_window)
    assert ax.horizontal == []
    ts = {r.offset: t for r, t in ax.vertical}
    # crossing parameters are increasing in the point i and none vanish
    pts = sorted(ts)
    assert [ts[i] for i in pts] == sorted(ts.values()) and all(t != 0 for t in ts.values())
    order = axial_order(ax, A1_window.labels)
    # a_-3 only labels the cover a_-2 < w (w = a_-2 a_-3); it lies outside the window
    assert [r.offset for r in order.ordered_labels] == [1, 2, 3, -3, -2, -1, 0]
    tilted = axial_order(_axis(A1_window, tilt=(5,)), A1_window.labels)
    assert tilted.descriptors() == order.descriptors()


def test_affine_a2_horizontals_and_shape():
    P = poset("affA2", None, 4)
    ax = _axis(P)
    labels = {r.matrix for r in P.labels}
    assert len([r for r in ax.horizontal if r.matrix in labels]) == 2
    order = axial_order(ax, P.labels)
    blocks = [order.blocks[n] for n in order.descriptors()]
    shape = [b for i, b in enumerate(blocks) if i == 0 or blocks[i - 1] != b]
    assert shape == ["above", "horizontal", "below"]


def test_affine_c2_classification():
    P = poset("affC2", None, 4)
    ax = _axis(P)
    assert ax.horizontal and ax.vertical
    vert = {r.matrix for r, _ in ax.vertical}
    hor = {r.matrix for r in ax.horizontal}
    assert not (vert & hor)
    assert {r.matrix for r in P.labels} <= vert | hor


def test_tilt_parallel_to_horizontal_is_rejected():
    P = poset("affA2", None, 3)
    ax = _axis(P, tilt=_axis(P).direction)
    with pytest.raises(OrderError):
        axial_order(ax, P.labels)


def test_s3_lex_shellable(S3):
    order = lexicographic_order(S3)
    assert order.descriptors() == ["(12)", "(13)", "(23)"]
    cert = check_el_shellability(S3, order)
    assert cert.verdict == "shellable" and not cert.violations
    (chain,) = increasing_chains(S3, order)
    assert [r.descriptor() for r in chain] == ["(12)", "(23)"]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_reversed_order_violations_recheck(n):
    P = poset("S%d" % n)
    rev = AxialOrder(list(reversed(P.labels)))
    cert = check_el_shellability(P, rev)
    assert cert.verdict == "violated"
    for v in cert.violations:
        assert recheck_violation(P, rev, v)


@pytest.mark.parametrize("n", [4, 5])
def test_lex_shellable_larger(n):
    P = poset("S%d" % n)
    assert check_el_shellability(P, lexicographic_order(P)).verdict == "shellable"


@pytest.mark.parametrize("n", [3, 4, 5])
def test_maximal_chain_counts(n):
    P = poset("S%d" % n)
    chains = maximal_chains(P, P.bottom, P.top)
    assert len(chains) == n ** (n - 2) == max_chain_count_bruteforce(n)


@pytest.mark.parametrize(
    "name,word,depth", [("affA1", (1, 0), 3), ("affA2", None, 3), ("affA2", None, 5), ("affC2", None, 4), ("affG2", None, 4)]
)
def test_axial_order_shellable(name, word, depth):
    P = poset(name, word, depth)
    order = axial_order(_axis(P), P.labels)
    cert = check_el_shellability(P, order)
    assert cert.verdict == "shellable", cert.violations[:3]


def test_affine_a1_unique_increasing_chain(A1_window):
    order = axial_order(_axis(A1_window), A1_window.labels)
    (chain,) = increasing_chains(A1_window, order)
    assert [r.offset for r in chain] == [1, 0]


def test_label_missing_from_order(S3):
    with pytest.raises(OrderError):
        check_el_shellability(S3, AxialOrder(S3.labels[:2]))


def test_lemma_affine_a1_and_a2(A1_window):
    P = A1_window
    rep = verify_lemma_321(P.system, P.w, P.w, P.window, P)
    assert rep.passed and rep.length == 2 and len(rep.walls) == 2
    Q = poset("affA2", None, 3)
    rep = verify_lemma_321(Q.system, Q.w, Q.w, Q.window, Q)
    assert rep.passed and len(rep.walls) == 3


def test_lemma_rejects_elliptic(S3, A1_window):
    P = A1_window
    atom = P.elements[P.atoms()[0]]
    with pytest.raises(LemmaPreconditionError):
        verify_lemma_321(P.system, P.w, atom, P.window, P)


@pytest.mark.parametrize("name,depth", [("affA2", 4), ("affC2", 4)])
def test_lemma_all_hyperbolic(name, depth):
    P = poset(name, None, depth)
    ax = _axis(P)
    seen = 0
    for u in P.elements:
        if decompose(u).kind != "hyperbolic":
            continue
        rep = verify_lemma_321(P.system, P.w, u, P.window, P, ax)
        if rep.irreducible:
            seen += 1
            assert rep.passed, rep.to_json()
    assert seen > 0


@pytest.mark.parametrize(
    "name,word",
    [("A3", (0, 1, 2)), ("A3", (0, 2, 1)), ("B3", (0, 1, 2)), ("B3", (2, 1, 0)), ("D4", (0, 1, 2, 3)),
     ("H3", (0, 1, 2)), ("I2(5)", (0, 1)), ("S4", (0, 1, 2))],
)
def test_sorting_word_order_shellable(name, word):
    P = poset(name, word)
    order = sorting_word_order(P, word)
    assert len(order.ordered_labels) == len(P.labels)
    cert = check_el_shellability(P, order)
    assert cert.verdict == "shellable" and not cert.violations
    # the reversed order is not an EL labeling, so the check has teeth
    assert check_el_shellability(P, AxialOrder(order.ordered_labels[::-1])).violations
    assert len(increasing_chains(P, order)) == 1


def test_sorting_word_order_a2_is_inversion_sequence():
    # c = s0 s1 sorts w0 = s0 s1 s0: inversions r0, s0 r1 s0, s0 s1 r0 s1 s0 = r1
    P = poset("A2", (0, 1))
    order = sorting_word_order(P, (0, 1))
    s0, s1 = (r.isometry for r in simple_reflections(P.system))
    assert [r.isometry for r in order.ordered_labels] == [s0, s0 * s1 * s0, s1]


def test_sorting_word_order_rejects_affine(A1_window):
    with pytest.raises(OrderError):
        sorting_word_order(A1_window, (1, 0))
