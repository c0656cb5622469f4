"""Serre graphs labeled over the bouquet, Stallings folding and quotients.

Oriented edges come in pairs ``2k, 2k + 1`` with ``bar(e) = e ^ 1``; the even
edge of each pair carries the positive label. That even edge is the fixed
orientation used for signed multiplicities.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import kernels
from .errors import DomainError, PreconditionError, ResourceError
from .words import Word, render

DEFAULT_MAX_VERTICES = 12


def bar(e: int) -> int:
    return e ^ 1


@dataclass(frozen=True)
class LabeledGraph:
    """A finite Serre graph with oriented edges labeled by signed generators."""

    num_vertices: int
    origin: Tuple[int, ...]
    label: Tuple[int, ...]

    def __post_init__(self):
        if len(self.origin) != len(self.label) or len(self.origin) % 2:
            raise DomainError("oriented edges must come in pairs")
        for e in range(0, len(self.label), 2):
            if self.label[e] <= 0 or self.label[e + 1] != -self.label[e]:
                raise DomainError(f"edge pair {e} has labels {self.label[e]}, {self.label[e + 1]}")
        for v in self.origin:
            if not 0 <= v < self.num_vertices:
                raise DomainError(f"origin {v} out of range")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Sequence[Tuple[int, int, int]]) -> "LabeledGraph":
        """Build from geometric edges ``(tail, head, label)``; negative labels are flipped."""
        origin, label = [], []
        for tail, head, lab in edges:
            if lab == 0:
                raise DomainError("label 0 is not a generator")
            if lab < 0:
                tail, head, lab = head, tail, -lab
            origin += [tail, head]
            label += [lab, -lab]
        return cls(num_vertices, tuple(origin), tuple(label))

    @property
    def num_oriented_edges(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.origin) // 2

    def terminus(self, e: int) -> int:
        return self.origin[e ^ 1]

    def outgoing(self, v: int) -> List[int]:
        return [e for e, o in enumerate(self.origin) if o == v]

    def out_table(self) -> List[List[int]]:
        table: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for e, o in enumerate(self.origin):
            table[o].append(e)
        return table

    def degree(self, v: int) -> int:
        return sum(1 for o in self.origin if o == v)

    def euler_char(self) -> int:
        return self.num_vertices - self.num_edges

    def is_immersed(self) -> bool:
        seen = set()
        for o, lab in zip(self.origin, self.label):
            if (o, lab) in seen:
                return False
            seen.add((o, lab))
        return True

    def is_core(self) -> bool:
        return all(d >= 2 for d in self._degrees())

    def _degrees(self) -> List[int]:
        deg = [0] * self.num_vertices
        for o in self.origin:
            deg[o] += 1
        return deg

    def components(self) -> List[List[int]]:
        """Vertex sets of connected components, each sorted, ordered by least vertex."""
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(0, self.num_oriented_edges, 2):
            a, b = find(self.origin[e]), find(self.origin[e + 1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: Dict[int, List[int]] = {}
        for v in range(self.num_vertices):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def rank(self) -> int:
        """Rank of the fundamental group (connected graphs only)."""
        return 1 - self.euler_char()

    def to_json(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "edges": [
                {"tail": self.origin[e], "head": self.origin[e + 1], "label": render([self.label[e]])}
                for e in range(0, self.num_oriented_edges, 2)
            ],
        }


def euler_char(g: LabeledGraph) -> int:
    return g.euler_char()


@dataclass(frozen=True)
class GraphMorphism:
    """A label-preserving map of Serre graphs given by vertex and oriented-edge maps."""

    source: LabeledGraph
    target: LabeledGraph
    vmap: Tuple[int, ...]
    emap: Tuple[int, ...]

    def validate(self) -> None:
        s, t = self.source, self.target
        if len(self.vmap) != s.num_vertices or len(self.emap) != s.num_oriented_edges:
            raise PreconditionError("morphism maps have the wrong length")
        for e, f in enumerate(self.emap):
            if self.emap[e ^ 1] != f ^ 1:
                raise PreconditionError(f"edge map does not commute with bar at {e}")
            if self.vmap[s.origin[e]] != t.origin[f]:
                raise PreconditionError(f"edge map does not commute with origin at {e}")
            if s.label[e] != t.label[f]:
                raise PreconditionError(f"edge {e} changes label")

    def is_surjective(self) -> bool:
        return (set(self.vmap) == set(range(self.target.num_vertices))
                and set(self.emap) == set(range(self.target.num_oriented_edges)))

    def is_isomorphism(self) -> bool:
        return (self.source.num_vertices == self.target.num_vertices
                and self.source.num_oriented_edges == self.target.num_oriented_edges
                and self.is_surjective())

    def is_immersion(self) -> bool:
        """Locally injective: distinct outgoing edges at a vertex have distinct images."""
        seen = set()
        for e, f in enumerate(self.emap):
            key = (self.source.origin[e], f)
            if key in seen:
                return False
            seen.add(key)
        return True

    def compose(self, other: "GraphMorphism") -> "GraphMorphism":
        """``other ∘ self``."""
        return GraphMorphism(
            self.source, other.target,
            tuple(other.vmap[v] for v in self.vmap),
            tuple(other.emap[e] for e in self.emap),
        )

    def restrict_to(self, vertices: Sequence[int]) -> Tuple["GraphMorphism", List[int], List[int]]:
        """Restriction to the preimage of a set of target vertices.

        Returns the restricted morphism together with the source and target
        vertex lists (old indices) of the restriction.
        """
        tv = sorted(vertices)
        tpos = {v: i for i, v in enumerate(tv)}
        sv = [u for u in range(self.source.num_vertices) if self.vmap[u] in tpos]
        spos = {u: i for i, u in enumerate(sv)}
        src = _induced(self.source, sv, spos)
        tgt = _induced(self.target, tv, tpos)
        s_old = [e for e in range(self.source.num_oriented_edges) if self.source.origin[e] in spos and self.source.origin[e ^ 1] in spos]
        t_old = [e for e in range(self.target.num_oriented_edges) if self.target.origin[e] in tpos and self.target.origin[e ^ 1] in tpos]
        t_epos = {e: i for i, e in enumerate(t_old)}
        emap = tuple(t_epos[self.emap[e]] for e in s_old)
        vmap = tuple(tpos[self.vmap[u]] for u in sv)
        return GraphMorphism(src, tgt, vmap, emap), sv, tv


def _induced(g: LabeledGraph, verts: Sequence[int], pos: Dict[int, int]) -> LabeledGraph:
    origin, label = [], []
    for e in range(0, g.num_oriented_edges, 2):
        if g.origin[e] in pos and g.origin[e + 1] in pos:
            origin += [pos[g.origin[e]], pos[g.origin[e + 1]]]
            label += [g.label[e], g.label[e + 1]]
    return LabeledGraph(len(verts), tuple(origin), tuple(label))


def bouquet(rank: int) -> LabeledGraph:
    if rank < 1:
        raise DomainError("the bouquet needs at least one petal")
    return bouquet_on(range(1, rank + 1))


def bouquet_on(generators) -> LabeledGraph:
    """One-vertex graph with a petal for each listed generator."""
    gens = sorted(set(generators))
    return LabeledGraph.from_edges(1, [(0, 0, g) for g in gens])


def _bouquet_edge(bq: LabeledGraph, lab: int) -> int:
    for e, x in enumerate(bq.label):
        if x == lab:
            return e
    raise DomainError(f"bouquet has no petal labeled {lab}")


def to_bouquet(g: LabeledGraph, bq: Optional[LabeledGraph] = None) -> GraphMorphism:
    """The labeling map of ``g`` as a morphism onto a bouquet."""
    if bq is None:
        bq = bouquet_on({abs(x) for x in g.label} or {1})
    index = {x: e for e, x in enumerate(bq.label)}
    return GraphMorphism(g, bq, (0,) * g.num_vertices, tuple(index[x] for x in g.label))


@dataclass(frozen=True)
class CycleCover:
    """Disjoint cycles ``P`` covering ``Γ_w``, one cycle per part of ``nu``.

    ``forward[u]`` is the oriented edge leaving ``u`` in the direction in
    which ``w`` is read.
    """

    word: Word
    P: LabeledGraph
    rho: GraphMorphism
    nu: Tuple[int, ...]
    forward: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.nu)


def _cycle_edges(letters: Sequence[int], offset: int):
    n = len(letters)
    edges = []
    for i, x in enumerate(letters):
        edges.append((offset + i, offset + (i + 1) % n, x))
    return edges


def _forward_edges(letters: Sequence[int], edge_offset: int) -> List[int]:
    # edge i of the cycle is stored positively oriented; forward is 2i or 2i+1
    return [2 * (edge_offset + i) + (0 if x > 0 else 1) for i, x in enumerate(letters)]


def cycle_graph(w: Word) -> Tuple[LabeledGraph, GraphMorphism]:
    """``Γ_w`` with vertices ``v_0..v_{n-1}`` and edge ``v_i → v_{i+1}`` labeled ``w[i]``."""
    if not w:
        raise PreconditionError("Γ_w needs a nonempty word")
    if not w.is_cyclically_reduced():
        raise PreconditionError(f"{render(w)} is not cyclically reduced")
    g = LabeledGraph.from_edges(len(w), _cycle_edges(w.letters, 0))
    return g, to_bouquet(g, bouquet_on(w.generators()))


def cycle_forward(w: Word) -> Tuple[int, ...]:
    return tuple(_forward_edges(w.letters, 0))


def multi_cycle(w: Word, nu: Sequence[int]) -> CycleCover:
    """``Γ_{w^ν}`` together with its covering map onto ``Γ_w``."""
    gw, _ = cycle_graph(w)
    n = len(w)
    nu = tuple(nu)
    if any(p < 1 for p in nu):
        raise DomainError(f"partition parts must be positive: {nu}")
    edges = []
    forward = []
    vmap = []
    emap = []
    offset = 0
    gw_fwd = cycle_forward(w)
    for part in nu:
        letters = w.letters * part
        edges += _cycle_edges(letters, offset)
        forward += _forward_edges(letters, offset)
        for i in range(len(letters)):
            vmap.append(i % n)
        for i, x in enumerate(letters):
            f = gw_fwd[i % n]
            # stored positive edge of P maps to the positive edge of Γ_w
            emap += [f & ~1, (f & ~1) + 1]
        offset += len(letters)
    P = LabeledGraph.from_edges(offset, edges)
    rho = GraphMorphism(P, gw, tuple(vmap), tuple(emap))
    return CycleCover(w, P, rho, nu, tuple(forward))


def cycle_orientation(P: LabeledGraph) -> Tuple[int, ...]:
    """A traversal of a disjoint union of cycles: one forward oriented edge per vertex."""
    table = P.out_table()
    if any(len(t) != 2 for t in table):
        raise PreconditionError("P is not a disjoint union of cycles")
    forward = [-1] * P.num_vertices
    for start in range(P.num_vertices):
        if forward[start] >= 0:
            continue
        e = min(table[start])
        u = start
        while forward[u] < 0:
            forward[u] = e
            u = P.terminus(e)
            a, b = table[u]
            e = b if a == e ^ 1 else a
    return tuple(forward)


def _check_cycle_forward(P: LabeledGraph, forward: Sequence[int]) -> None:
    if len(forward) != P.num_vertices:
        raise PreconditionError("traversal must list one edge per vertex")
    table = P.out_table()
    if any(len(t) != 2 for t in table):
        raise PreconditionError("P is not a disjoint union of cycles")
    seen = set()
    for u, e in enumerate(forward):
        if P.origin[e] != u:
            raise PreconditionError(f"forward edge {e} does not start at {u}")
        seen.add(e >> 1)
    if len(seen) != P.num_edges:
        raise PreconditionError("traversal does not cover every edge once")


def predecessors(P: LabeledGraph, forward: Sequence[int]) -> List[int]:
    pred = [0] * P.num_vertices
    for u, e in enumerate(forward):
        pred[P.terminus(e)] = u
    return pred


def fold(g: LabeledGraph) -> Tuple[LabeledGraph, GraphMorphism]:
    """Fold ``g`` until it is immersed over the bouquet."""
    vpar = list(range(g.num_vertices))
    epar = list(range(g.num_oriented_edges))

    def vfind(x):
        while vpar[x] != x:
            vpar[x] = vpar[vpar[x]]
            x = vpar[x]
        return x

    def efind(x):
        while epar[x] != x:
            epar[x] = epar[epar[x]]
            x = epar[x]
        return x

    changed = True
    while changed:
        changed = False
        slots: Dict[Tuple[int, int], int] = {}
        for e in range(g.num_oriented_edges):
            r = efind(e)
            key = (vfind(g.origin[e]), g.label[e])
            other = slots.get(key)
            if other is None:
                slots[key] = r
            elif other != r:
                a, b = sorted((other, r))
                epar[b] = a
                a2, b2 = sorted((efind(e ^ 1), efind(other ^ 1)))
                if a2 != b2:
                    epar[b2] = a2
                x, y = sorted((vfind(g.origin[e ^ 1]), vfind(g.origin[other ^ 1])))
                if x != y:
                    vpar[y] = x
                changed = True
                break
    vroots = sorted({vfind(v) for v in range(g.num_vertices)})
    vidx = {v: i for i, v in enumerate(vroots)}
    # one geometric edge per class pair; keep the positively labeled side even
    groups: Dict[int, int] = {}
    origin, label = [], []
    emap = [0] * g.num_oriented_edges
    for e in range(0, g.num_oriented_edges, 2):
        r = efind(e)
        if r not in groups:
            groups[r] = len(origin)
            origin += [vidx[vfind(g.origin[e])], vidx[vfind(g.origin[e + 1])]]
            label += [g.label[e], g.label[e + 1]]
        # e is positive; its class representative r may be either orientation
        emap[e] = groups[r]
        emap[e + 1] = groups[r] + 1
    folded = LabeledGraph(len(vroots), tuple(origin), tuple(label))
    q = GraphMorphism(g, folded, tuple(vidx[vfind(v)] for v in range(g.num_vertices)), tuple(emap))
    return folded, q


def merge_vertices(g: LabeledGraph, partition: Sequence[Sequence[int]]) -> Tuple[LabeledGraph, GraphMorphism]:
    """Identify the vertices of each block, without folding."""
    block = [-1] * g.num_vertices
    for i, b in enumerate(partition):
        for v in b:
            block[v] = i
    if min(block, default=0) < 0:
        raise PreconditionError("partition must cover every vertex")
    merged = LabeledGraph(len(partition), tuple(block[o] for o in g.origin), g.label)
    return merged, GraphMorphism(g, merged, tuple(block), tuple(range(g.num_oriented_edges)))


def quotient_by_partition(g: LabeledGraph, partition: Sequence[Sequence[int]]) -> Tuple[LabeledGraph, GraphMorphism]:
    merged, m = merge_vertices(g, partition)
    folded, q = fold(merged)
    return folded, m.compose(q)


def quotient_from_classes(g: LabeledGraph, classes: Sequence[int]) -> Tuple[LabeledGraph, GraphMorphism]:
    """The quotient of ``g`` by a fold-closed vertex classification (block index per vertex)."""
    k = max(classes) + 1 if classes else 0
    slot: Dict[Tuple[int, int], int] = {}
    origin, label = [], []
    emap = [0] * g.num_oriented_edges
    for e in range(0, g.num_oriented_edges, 2):
        key = (classes[g.origin[e]], g.label[e])
        j = slot.get(key)
        if j is None:
            j = len(origin)
            slot[key] = j
            origin += [classes[g.origin[e]], classes[g.origin[e + 1]]]
            label += [g.label[e], -g.label[e]]
        elif origin[j + 1] != classes[g.origin[e + 1]]:
            raise PreconditionError("classification is not closed under folding")
        emap[e], emap[e + 1] = j, j + 1
    delta = LabeledGraph(k, tuple(origin), tuple(label))
    if not delta.is_immersed():
        raise PreconditionError("classification is not closed under folding")
    return delta, GraphMorphism(g, delta, tuple(classes), tuple(emap))


def _check_cap(n: int, max_vertices: Optional[int]) -> None:
    if max_vertices is not None and n > max_vertices:
        raise ResourceError(f"{n} vertices exceeds the partition-enumeration cap of {max_vertices}")


def closed_classifications(g: LabeledGraph, fibers: Optional[Sequence[int]] = None,
                           max_vertices: Optional[int] = DEFAULT_MAX_VERTICES) -> Iterator[Tuple[int, ...]]:
    """Every fold-closed vertex classification of ``g``, each exactly once.

    Classifications are restricted growth strings. With ``fibers`` given, no
    class may contain two vertices of the same fiber.
    """
    _check_cap(g.num_vertices, max_vertices)
    yield from kernels.closed_partitions(g.num_vertices, g.origin, g.label,
                                         None if fibers is None else list(fibers))


def enumerate_quotients(g: LabeledGraph, max_vertices: Optional[int] = DEFAULT_MAX_VERTICES,
                        fibers: Optional[Sequence[int]] = None) -> Iterator[Tuple[LabeledGraph, GraphMorphism]]:
    """All folded quotients ``(Δ, b)`` of ``g``, one per distinct morphism."""
    for classes in closed_classifications(g, fibers, max_vertices):
        yield quotient_from_classes(g, classes)


def set_partitions(n: int) -> Iterator[List[List[int]]]:
    """All set partitions of ``range(n)``."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def morphism_code(b: GraphMorphism) -> Tuple[int, ...]:
    """Canonical code of a surjective quotient map: its vertex map as a growth string."""
    seen: Dict[int, int] = {}
    out = []
    for v in b.vmap:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return tuple(out)


def canonical_code(g: LabeledGraph) -> Tuple:
    """Isomorphism-invariant code of an immersed labeled graph."""
    if not g.is_immersed():
        raise PreconditionError("canonical codes are defined for immersed graphs")
    table = g.out_table()
    codes = []
    for comp in g.components():
        best = None
        for start in comp:
            order = {start: 0}
            queue = [start]
            code = []
            for v in queue:
                for e in sorted(table[v], key=lambda e: (abs(g.label[e]), g.label[e] < 0)):
                    t = g.terminus(e)
                    if t not in order:
                        order[t] = len(order)
                        queue.append(t)
                    code.append((order[v], g.label[e], order[t]))
            code = tuple(code)
            if best is None or code < best:
                best = code
        codes.append((len(comp), best))
    return tuple(sorted(codes))


def signed_multiplicities(b: GraphMorphism, forward: Optional[Sequence[int]] = None) -> List[int]:
    """Signed traversal count of every geometric edge of the target.

    Entry ``k`` refers to the positive orientation ``2k``; traversals of the
    opposite orientation count negatively.
    """
    P = b.source
    if forward is None:
        forward = cycle_orientation(P)
    else:
        _check_cycle_forward(P, forward)
    counts = [0] * b.target.num_edges
    for e in forward:
        f = b.emap[e]
        counts[f >> 1] += -1 if f & 1 else 1
    return counts


def divisible(counts: Sequence[int], m: int) -> bool:
    if m == 0:
        return all(c == 0 for c in counts)
    return all(c % m == 0 for c in counts)


@dataclass
class Diagram:
    """A commuting square ``P → Γ`` over ``Γ_w → Ω`` with ``P`` covering ``Γ_w``."""

    word: Word
    P: LabeledGraph
    rho: GraphMorphism
    b: GraphMorphism
    forward: Tuple[int, ...]
    nu: Tuple[int, ...] = ()

    @property
    def gamma(self) -> LabeledGraph:
        return self.b.target

    @property
    def degree(self) -> int:
        # every vertex of Γ_w has the same number of preimages
        return sum(1 for x in self.rho.vmap if x == 0)

    @property
    def ratio(self) -> Fraction:
        return Fraction(-self.gamma.euler_char(), self.degree)

    def to_json(self) -> dict:
        return {
            "word": render(self.word),
            "degree": self.degree,
            "nu": list(self.nu),
            "ratio": _frac_str(self.ratio),
            "P": self.P.to_json(),
            "gamma": self.gamma.to_json(),
            "rho": {"vmap": list(self.rho.vmap)},
            "b": {"vmap": list(self.b.vmap), "emap": list(self.b.emap)},
        }


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_efficient(d: Diagram) -> bool:
    """Whether ``b`` is injective on the fibers of ``rho``."""
    _check_square(d)
    seen = set()
    for u, (x, v) in enumerate(zip(d.rho.vmap, d.b.vmap)):
        if (x, v) in seen:
            return False
        seen.add((x, v))
    return True


def _check_square(d: Diagram) -> None:
    d.rho.validate()
    d.b.validate()
    if d.rho.source is not d.P and d.rho.source != d.P:
        raise PreconditionError("rho does not start at P")
    if d.b.source is not d.P and d.b.source != d.P:
        raise PreconditionError("b does not start at P")
    # morphisms preserve labels, so both paths to the bouquet agree
    if not d.gamma.is_immersed():
        raise PreconditionError("Γ is not immersed over the bouquet")


def diagram_json(d: Diagram) -> str:
    return json.dumps(d.to_json(), indent=2)


def cover_diagram(cover: CycleCover, classes: Sequence[int]) -> Diagram:
    gamma, b = quotient_from_classes(cover.P, classes)
    return Diagram(cover.word, cover.P, cover.rho, b, cover.forward, cover.nu)
