from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wordrank.errors import PreconditionError, ResourceError
from wordrank.graphs import (LabeledGraph, bouquet, closed_classifications, cycle_forward,
                             cycle_graph, cycle_orientation, fold, is_efficient, morphism_code,
                             multi_cycle, cover_diagram, quotient_by_partition,
                             quotient_from_classes, set_partitions, signed_multiplicities)
from wordrank.words import parse_word

from conftest import W


def _brute_classifications(g, fibers=None):
    """Every set partition, folded; a fold-closed classification is a stable code."""
    codes = set()
    for part in set_partitions(g.num_vertices):
        _, q = quotient_by_partition(g, part)
        code = morphism_code(q)
        if fibers is not None and len({(code[u], fibers[u]) for u in range(g.num_vertices)}) != g.num_vertices:
            continue
        codes.add(code)
    return codes


def test_cycle_graph_shape():
    g, eta = cycle_graph(W("abAB"))
    assert g.num_vertices == 4 and g.num_edges == 4
    assert g.euler_char() == 0
    assert g.is_immersed() and g.is_core()
    eta.validate()
    with pytest.raises(PreconditionError):
        cycle_graph(W("abA"))


def test_bouquet():
    b = bouquet(3)
    assert b.num_vertices == 1 and b.num_edges == 3 and b.rank() == 3


def test_fold_simple():
    # two a-edges leaving vertex 0 fold into one
    g = LabeledGraph.from_edges(3, [(0, 1, 1), (0, 2, 1)])
    f, q = fold(g)
    assert f.num_vertices == 2 and f.num_edges == 1
    q.validate()


@pytest.mark.parametrize("text", ["aa", "ab", "abAB", "aab", "aaabAB", "abba", "aabAB"])
def test_closed_classifications_match_brute_force(text):
    g, _ = cycle_graph(W(text))
    got = list(closed_classifications(g, None, None))
    assert len(got) == len(set(got))
    assert set(got) == _brute_classifications(g)


@pytest.mark.parametrize("text,nu", [("aa", (2,)), ("ab", (1, 1)), ("aB", (2,)), ("abAB", (1, 1)), ("aab", (2,))])
def test_fiber_constrained_classifications(text, nu):
    cover = multi_cycle(W(text), nu)
    fibers = cover.rho.vmap
    got = set(closed_classifications(cover.P, fibers, None))
    assert got == _brute_classifications(cover.P, fibers)


def test_cap():
    g, _ = cycle_graph(W("ababababab"))
    with pytest.raises(ResourceError):
        list(closed_classifications(g, None, 8))


def test_multi_cycle_covers():
    cover = multi_cycle(W("abAB"), (2, 1))
    assert cover.P.num_vertices == 12
    assert cover.degree == 3
    cover.rho.validate()
    # each vertex of Γ_w has three preimages
    assert all(list(cover.rho.vmap).count(x) == 3 for x in range(4))


def test_signed_multiplicities_and_efficiency():
    w = W("aa")
    cover = multi_cycle(w, (1,))
    # collapse Γ_aa onto a single loop: the loop is read twice
    d = cover_diagram(cover, (0, 0))
    assert signed_multiplicities(d.b, d.forward) == [2]
    assert is_efficient(d)
    assert d.ratio == Fraction(0)


def test_cycle_orientation_matches_forward():
    w = W("aBAb")
    g, _ = cycle_graph(w)
    fwd = cycle_orientation(g)
    assert len(fwd) == 4
    assert sorted(e >> 1 for e in fwd) == [0, 1, 2, 3]
    assert len(cycle_forward(w)) == 4


words = st.text(alphabet="abAB", min_size=1, max_size=7).map(parse_word).filter(
    lambda w: len(w) > 0 and w.is_cyclically_reduced())


@settings(max_examples=40, deadline=None)
@given(words, st.data())
def test_fold_confluence(w, data):
    """Folding after merging blocks in any order gives the same quotient."""
    g, _ = cycle_graph(w)
    n = g.num_vertices
    classes = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = {}
    for v, c in enumerate(classes):
        blocks.setdefault(c, []).append(v)
    part = list(blocks.values())
    _, q1 = quotient_by_partition(g, part)
    _, q2 = quotient_by_partition(g, list(reversed([list(reversed(b)) for b in part])))
    assert morphism_code(q1) == morphism_code(q2)
    delta, q3 = quotient_from_classes(g, morphism_code(q1))
    assert delta.is_immersed()
    assert q3.vmap == morphism_code(q1)
