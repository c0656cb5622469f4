"""Whitehead graphs of cycle maps, cut vertices, unfolding and algebraicity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import InternalInvariantError, PreconditionError
from .graphs import (GraphMorphism, LabeledGraph, cycle_graph, cycle_forward,
                     cycle_orientation, predecessors, _check_cycle_forward)
from .words import Word, render


@dataclass(frozen=True)
class WhEdge:
    tail: int
    head: int
    decoration: int


@dataclass(frozen=True)
class WhiteheadGraph:
    """Whitehead graph at one target vertex.

    Vertices are the target's oriented edges leaving ``at_vertex``. Each
    preimage point contributes one edge from the image of its reversed
    incoming edge (tail) to the image of its outgoing edge (head).
    """

    at_vertex: int
    wh_vertices: Tuple[int, ...]
    wh_edges: Tuple[WhEdge, ...]

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.wh_vertices}
        for e in self.wh_edges:
            adj[e.tail].append(e.head)
            adj[e.head].append(e.tail)
        return adj


@dataclass(frozen=True)
class Connected:
    pass


@dataclass(frozen=True)
class Disconnected:
    side: Tuple[int, ...]
    other: Tuple[int, ...]


@dataclass(frozen=True)
class CutVertex:
    vertex: int


CutResult = Union[Connected, Disconnected, CutVertex]


def whitehead_graphs(b: GraphMorphism, forward: Optional[Sequence[int]] = None,
                     decorations: Optional[Sequence[int]] = None) -> Dict[int, WhiteheadGraph]:
    """Whitehead graph of every target vertex of ``b``.

    ``decorations[u]`` labels the edge contributed by source vertex ``u``
    (defaults to ``u`` itself).
    """
    P = b.source
    if forward is None:
        forward = cycle_orientation(P)
    else:
        _check_cycle_forward(P, forward)
    pred = predecessors(P, forward)
    if decorations is None:
        decorations = range(P.num_vertices)
    target = b.target
    table = target.out_table()
    edges: Dict[int, List[WhEdge]] = {v: [] for v in range(target.num_vertices)}
    for u in range(P.num_vertices):
        incoming_reversed = forward[pred[u]] ^ 1
        edges[b.vmap[u]].append(WhEdge(b.emap[incoming_reversed], b.emap[forward[u]], decorations[u]))
    return {v: WhiteheadGraph(v, tuple(sorted(table[v])), tuple(edges[v]))
            for v in range(target.num_vertices)}


def _components(vertices: Sequence[int], adj: Dict[int, List[int]], removed: Optional[int] = None) -> List[List[int]]:
    seen = set()
    comps = []
    for s in vertices:
        if s == removed or s in seen:
            continue
        comp = [s]
        seen.add(s)
        for x in comp:
            for y in adj[x]:
                if y != removed and y not in seen:
                    seen.add(y)
                    comp.append(y)
        comps.append(sorted(comp))
    return comps


def find_cut_or_disconnect(wh: WhiteheadGraph) -> CutResult:
    """Classify a Whitehead graph; a disconnection is reported before a cut vertex."""
    adj = wh.adjacency()
    comps = _components(wh.wh_vertices, adj)
    if len(comps) > 1:
        side = tuple(comps[0])
        other = tuple(v for v in wh.wh_vertices if v not in comps[0])
        return Disconnected(side, other)
    for v in wh.wh_vertices:
        if len(_components(wh.wh_vertices, adj, removed=v)) > 1:
            return CutVertex(v)
    return Connected()


def _check_immersion(b: GraphMorphism, forward: Sequence[int]) -> None:
    pred = predecessors(b.source, forward)
    for u in range(b.source.num_vertices):
        if b.emap[forward[u]] == b.emap[forward[pred[u]] ^ 1]:
            raise PreconditionError(f"b is not an immersion at source vertex {u}")


def unfold(b: GraphMorphism, v: int, cut: int, forward: Optional[Sequence[int]] = None) -> GraphMorphism:
    """Split vertex ``v`` of the target along the cut vertex ``cut`` of its Whitehead graph.

    The new target has one more vertex and one more edge; folding the two
    copies of ``cut`` recovers ``b``.
    """
    if forward is None:
        forward = cycle_orientation(b.source)
    wh = whitehead_graphs(b, forward)[v]
    adj = wh.adjacency()
    comps = _components(wh.wh_vertices, adj, removed=cut)
    if cut not in wh.wh_vertices or len(comps) < 2:
        raise PreconditionError(f"edge {cut} is not a cut vertex of the Whitehead graph at {v}")
    delta = b.target
    side2 = set(v2 for c in comps[1:] for v2 in c)
    v_new = delta.num_vertices
    e_new = delta.num_oriented_edges
    # keep the positive orientation even for the new edge pair
    pos = cut if delta.label[cut] > 0 else cut ^ 1
    origin = list(delta.origin)
    for e in side2:
        origin[e] = v_new
    label = list(delta.label)
    if pos == cut:
        origin += [v_new, origin[cut ^ 1]]
    else:
        origin += [origin[cut ^ 1], v_new]
    label += [delta.label[pos], delta.label[pos ^ 1]]
    split_cut = e_new if pos == cut else e_new + 1
    new_delta = LabeledGraph(delta.num_vertices + 1, tuple(origin), tuple(label))

    P = b.source
    pred = predecessors(P, forward)
    side_of: Dict[int, int] = {}
    for u in range(P.num_vertices):
        if b.vmap[u] != v:
            continue
        ends = (b.emap[forward[pred[u]] ^ 1], b.emap[forward[u]])
        other = ends[1] if ends[0] == cut else ends[0]
        side_of[u] = 2 if other in side2 else 1
    vmap = [v_new if side_of.get(u) == 2 else b.vmap[u] for u in range(P.num_vertices)]
    emap = list(b.emap)
    for f in range(P.num_oriented_edges):
        img = b.emap[f]
        if img == cut and side_of.get(P.origin[f]) == 2:
            emap[f] = split_cut
            emap[f ^ 1] = split_cut ^ 1
    out = GraphMorphism(P, new_delta, tuple(vmap), tuple(emap))
    out.validate()
    return out


def is_algebraic(b: GraphMorphism, forward: Optional[Sequence[int]] = None) -> bool:
    """Decide algebraicity of an immersion of cycles into a core graph by unfolding."""
    P = b.source
    if forward is None:
        forward = cycle_orientation(P)
    else:
        _check_cycle_forward(P, forward)
    b.validate()
    _check_immersion(b, forward)
    if not b.target.is_core():
        raise PreconditionError("target is not a core graph")
    bound = P.num_edges - b.target.num_vertices
    steps = 0
    while True:
        graphs = whitehead_graphs(b, forward)
        results = [(v, find_cut_or_disconnect(graphs[v])) for v in sorted(graphs)]
        if any(isinstance(r, Disconnected) for _, r in results):
            return False
        cuts = [(v, r.vertex) for v, r in results if isinstance(r, CutVertex)]
        if not cuts:
            return True
        v, cut = cuts[0]
        b = unfold(b, v, cut, forward)
        steps += 1
        if steps > bound:
            raise InternalInvariantError("unfolding did not terminate within |E(P)|/2 - |V(Δ)| steps")


@dataclass(frozen=True)
class DecoratedWhiteheadGraph:
    """Whitehead graph of ``Γ_w → Ω`` at the wedge point.

    Vertices are signed letters (the letter of the outgoing bouquet edge);
    edge ``i`` is decorated by ``v_i`` and runs from ``-w[i-1]`` (tail) to
    ``w[i]`` (head), indices cyclic.
    """

    word: Word
    letters: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "word": render(self.word),
            "vertices": [render([x]) for x in self.letters],
            "edges": {str(i): {"tail": render([t]), "head": render([h])} for i, (t, h) in enumerate(self.edges)},
        }


def decorated_whitehead_graph(w: Word) -> DecoratedWhiteheadGraph:
    if not w or not w.is_cyclically_reduced():
        raise PreconditionError("the decorated Whitehead graph needs a nonempty cyclically reduced word")
    n = len(w)
    edges = tuple((-w[(i - 1) % n], w[i]) for i in range(n))
    letters = tuple(sorted({x for e in edges for x in e}, key=lambda x: (abs(x), x < 0)))
    return DecoratedWhiteheadGraph(w, letters, edges)


def eta_whitehead(w: Word) -> WhiteheadGraph:
    """``Wh_{η_w}(o)`` computed through the generic construction."""
    gw, eta = cycle_graph(w)
    return whitehead_graphs(eta, cycle_forward(w))[0]
