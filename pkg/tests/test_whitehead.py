import random

import pytest

from wordrank.errors import PreconditionError
from wordrank.graphs import (GraphMorphism, LabeledGraph, canonical_code, closed_classifications,
                             cycle_forward, cycle_graph, multi_cycle, quotient_by_partition,
                             quotient_from_classes)
from wordrank.whitehead import (Connected, CutVertex, Disconnected, WhEdge, WhiteheadGraph,
                                decorated_whitehead_graph, eta_whitehead, find_cut_or_disconnect,
                                is_algebraic, unfold, whitehead_graphs)
from wordrank.words import Word, cyclic_reduce, cyclic_words, parse_word, render

from conftest import W


def _eta(text):
    w = W(text)
    _, eta = cycle_graph(w)
    return eta, cycle_forward(w)


def _identity(text):
    g, _ = cycle_graph(W(text))
    return GraphMorphism(g, g, tuple(range(g.num_vertices)), tuple(range(g.num_oriented_edges)))


def test_eta_whitehead_of_example_word():
    wh = eta_whitehead(W("aaabAB"))
    assert len(wh.wh_vertices) == 4
    assert len(wh.wh_edges) == 6
    dec = decorated_whitehead_graph(W("aaabAB"))
    # edge v_i joins -w[i-1] and w[i]
    assert dec.edges == ((2, 1), (-1, 1), (-1, 1), (-1, 2), (-2, -1), (1, -2))
    assert set(dec.letters) == {1, -1, 2, -2}


def test_k33():
    dec = decorated_whitehead_graph(W("aBcbbaCac"))
    pairs = {frozenset(e) for e in dec.edges}
    assert len(pairs) == len(dec.edges) == 9       # no double edges
    assert all(len(p) == 2 for p in pairs)         # no loops
    # 2-colour by BFS and confirm the parts have size 3 and every cross pair is an edge
    verts = set(dec.letters)
    colour = {}
    start = next(iter(verts))
    colour[start] = 0
    stack = [start]
    while stack:
        x = stack.pop()
        for p in pairs:
            if x in p:
                (y,) = p - {x}
                if y in colour:
                    assert colour[y] != colour[x]
                else:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
    left = [v for v in verts if colour[v] == 0]
    right = [v for v in verts if colour[v] == 1]
    assert len(left) == len(right) == 3
    assert pairs == {frozenset((x, y)) for x in left for y in right}


def test_identity_whitehead_graphs_are_single_edges():
    b = _identity("abAB")
    for wh in whitehead_graphs(b).values():
        assert len(wh.wh_edges) == 1
        assert wh.wh_edges[0].tail != wh.wh_edges[0].head


def test_find_cut_or_disconnect_toy_graphs():
    cyc = WhiteheadGraph(0, (0, 1, 2, 3), tuple(WhEdge(i, (i + 1) % 4, i) for i in range(4)))
    assert find_cut_or_disconnect(cyc) == Connected()
    two = WhiteheadGraph(0, (0, 1, 2, 3), (WhEdge(0, 1, 0), WhEdge(2, 3, 1)))
    res = find_cut_or_disconnect(two)
    assert isinstance(res, Disconnected)
    assert set(res.side) == {0, 1} and set(res.other) == {2, 3}
    path = WhiteheadGraph(0, (0, 1, 2), (WhEdge(0, 1, 0), WhEdge(1, 2, 1)))
    assert find_cut_or_disconnect(path) == CutVertex(1)
    # disconnected with a cut vertex in one part: disconnection wins
    both = WhiteheadGraph(0, (0, 1, 2, 3, 4), (WhEdge(0, 1, 0), WhEdge(1, 2, 1), WhEdge(3, 4, 2)))
    assert isinstance(find_cut_or_disconnect(both), Disconnected)


def test_algebraicity_examples():
    assert is_algebraic(*_eta("abAB"))
    assert not is_algebraic(*_eta("ab"))
    assert not is_algebraic(*_eta("aab"))
    assert is_algebraic(*_eta("aa"))
    assert is_algebraic(_identity("abAB"))
    assert is_algebraic(*_eta("aBcbbaCac"))


def test_unfold_rejects_non_cut():
    b, fwd = _eta("abAB")
    wh = whitehead_graphs(b, fwd)[0]
    with pytest.raises(PreconditionError):
        unfold(b, 0, wh.wh_vertices[0], fwd)


def test_is_algebraic_preconditions():
    g = LabeledGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(PreconditionError):
        is_algebraic(GraphMorphism(g, g, (0, 1, 2), tuple(range(4))))


# ------------------------------------------------------------ random diagrams

def _random_diagrams(count, seed):
    rng = random.Random(seed)
    pool = [w for n in range(2, 6) for w in cyclic_words(n, 2)]
    out = []
    while len(out) < count:
        w = rng.choice(pool)
        nu = rng.choice([(1,), (2,), (1, 1)])
        cover = multi_cycle(w, nu)
        classes = list(closed_classifications(cover.P, cover.rho.vmap, None))
        c = rng.choice(classes)
        _, b = quotient_from_classes(cover.P, c)
        out.append((w, cover, b))
    return out


def test_edge_count_conservation_on_random_diagrams():
    for w, cover, b in _random_diagrams(100, 7):
        graphs = whitehead_graphs(b, cover.forward)
        assert sum(len(g.wh_edges) for g in graphs.values()) == cover.P.num_oriented_edges // 2


def test_unfold_invariants_on_random_diagrams():
    done = 0
    for w, cover, b in _random_diagrams(200, 11):
        graphs = whitehead_graphs(b, cover.forward)
        for v, wh in graphs.items():
            res = find_cut_or_disconnect(wh)
            if not isinstance(res, CutVertex):
                continue
            b2 = unfold(b, v, res.vertex, cover.forward)
            d1, d2 = b.target, b2.target
            assert d2.num_vertices == d1.num_vertices + 1
            assert d2.euler_char() == d1.euler_char()
            assert b2.is_immersion()
            assert sum(len(g.wh_edges) for g in whitehead_graphs(b2, cover.forward).values()) == \
                cover.P.num_vertices
            # merging the split vertex back and folding recovers the target
            new = d2.num_vertices - 1
            part = [[x] for x in range(d2.num_vertices) if x not in (v, new)] + [[v, new]]
            refold, _ = quotient_by_partition(d2, part)
            assert canonical_code(refold) == canonical_code(d1)
            # algebraicity is unchanged by an unfolding
            assert is_algebraic(b2, cover.forward) == is_algebraic(b, cover.forward)
            done += 1
            break
    assert done >= 10


# ------------------------------------------------------------ primitive oracle

def _primitive_cyclic_classes(max_len):
    """Cyclic classes of primitive elements of F_2 found by Nielsen moves from ``a``."""
    def canon(w):
        core, _ = cyclic_reduce(w)
        n = len(core)
        return min(core.rotate(k).letters for k in range(n)) if n else ()

    moves = []
    for x, y in ((1, 2), (2, 1)):
        for s in (1, -1):
            moves.append({x: [x, s * y]})
            moves.append({x: [s * y, x]})
    moves.append({1: [2], 2: [1]})
    moves.append({1: [-1]})
    moves.append({2: [-2]})

    def apply(mv, w):
        out = []
        for z in w.letters:
            img = mv.get(abs(z), [abs(z)])
            out += img if z > 0 else [-t for t in reversed(img)]
        return Word(tuple(out), 2)

    start = Word((1,), 2)
    seen = {canon(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for mv in moves:
                u = apply(mv, w)
                core, _ = cyclic_reduce(u)
                if len(core) > max_len + 4:
                    continue
                key = canon(core)
                if key not in seen:
                    seen.add(key)
                    nxt.append(core)
        frontier = nxt
    return {k for k in seen if len(k) <= max_len}


def test_algebraicity_of_words_matches_primitive_powers():
    prims = _primitive_cyclic_classes(6)
    for n in range(2, 7):
        for w in cyclic_words(n, 2):
            if len(w.generators()) < 2:
                continue
            key = min(w.rotate(k).letters for k in range(n))
            power_of_primitive = False
            for p in range(1, n + 1):
                if n % p == 0 and key[:p] * (n // p) == key:
                    root = min(Word(key[:p], 2).rotate(k).letters for k in range(p))
                    power_of_primitive = power_of_primitive or root in prims
            b, fwd = _eta(render(w))
            assert is_algebraic(b, fwd) == (not power_of_primitive), render(w)
