"""Stable mod-m primitivity rank through pieces of the decorated Whitehead graph.

A diagram whose signed edge multiplicities are all divisible by ``m`` is cut
into the Whitehead graphs of its vertices. Each of these is a *piece*: a set
of decorations (positions of the cyclic word) of the Whitehead graph of
``Γ_w → Ω`` whose wh-vertices are balanced mod ``m``. Gluing pieces back
together imposes linear balance equations on the piece multiplicities, and
the Euler characteristic is linear in them, so the rank is the optimum of an
exact rational LP.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (DomainError, InternalInvariantError, PreconditionError,
                     ResourceError, UnsupportedParameterError)
from .graphs import (Diagram, cover_diagram, divisible, is_efficient, multi_cycle,
                     signed_multiplicities)
from .ratlp import Infeasible, LinearProgram, solve
from .values import INFINITY
from .whitehead import decorated_whitehead_graph
from .words import Word, cyclic_reduce, exponent_vector, letter_counts, render

DEFAULT_MAX_LENGTH = 22


@dataclass(frozen=True)
class Piece:
    """A balanced subgraph of the decorated Whitehead graph, given by its decorations."""

    decorations: Tuple[int, ...]
    heads: Tuple[Tuple[int, int], ...]   # (wh-vertex, number of edges arriving there)
    tails: Tuple[Tuple[int, int], ...]   # (wh-vertex, number of edges leaving there)
    vertex_sets: Tuple[Tuple[int, Tuple[int, ...]], ...]   # wh-vertex -> decorations at it

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.vertex_sets)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_sets)

    def at(self, letter: int) -> Tuple[int, ...]:
        for v, s in self.vertex_sets:
            if v == letter:
                return s
        return ()

    def weight(self) -> Fraction:
        """Contribution ``½|V| − 1`` of one copy to ``−χ``."""
        return Fraction(self.num_vertices, 2) - 1

    def label(self, w: Word) -> str:
        return "{" + ",".join(f"v{i}" for i in self.decorations) + "}"


def _piece(w: Word, decorations: Sequence[int]) -> Piece:
    n = len(w)
    heads: Dict[int, int] = {}
    tails: Dict[int, int] = {}
    sets: Dict[int, List[int]] = {}
    for i in decorations:
        t, h = -w[(i - 1) % n], w[i]
        heads[h] = heads.get(h, 0) + 1
        tails[t] = tails.get(t, 0) + 1
        sets.setdefault(h, []).append(i)
        sets.setdefault(t, []).append(i)
    order = sorted(sets, key=lambda x: (abs(x), x < 0))
    return Piece(tuple(decorations), tuple(sorted(heads.items())), tuple(sorted(tails.items())),
                 tuple((v, tuple(sorted(sets[v]))) for v in order))


def _balanced(diff: int, m: int) -> bool:
    return diff == 0 if m == 0 else diff % m == 0


def _connected(w: Word, decorations: Sequence[int]) -> bool:
    n = len(w)
    adj: Dict[int, List[int]] = {}
    for i in decorations:
        t, h = -w[(i - 1) % n], w[i]
        adj.setdefault(t, []).append(h)
        adj.setdefault(h, []).append(t)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def _check_m(m: int) -> None:
    if m == 1:
        raise UnsupportedParameterError("m = 1 is not handled by the LP; use ranks.bounded_sp_search")
    if m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m}")


def enumerate_pieces(w: Word, m: int, connected_only: bool = True,
                     max_length: Optional[int] = DEFAULT_MAX_LENGTH) -> List[Piece]:
    """All pieces of the decorated Whitehead graph of ``w`` for modulus ``m``.

    Subsets are searched position by position; a branch is abandoned as soon
    as some wh-vertex can no longer reach a balanced in/out difference with
    the remaining edges.
    """
    _check_m(m)
    if not w or not w.is_cyclically_reduced():
        raise PreconditionError("pieces need a nonempty cyclically reduced word")
    n = len(w)
    if max_length is not None and n > max_length:
        raise ResourceError(f"|w| = {n} exceeds the piece-enumeration cap of {max_length}")
    dwh = decorated_whitehead_graph(w)
    verts = list(dwh.letters)
    index = {x: k for k, x in enumerate(verts)}
    tail_of = [index[t] for t, _ in dwh.edges]
    head_of = [index[h] for _, h in dwh.edges]
    nv = len(verts)
    # remaining head/tail incidences at each wh-vertex among positions >= i
    rem_heads = [[0] * nv for _ in range(n + 1)]
    rem_tails = [[0] * nv for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        rem_heads[i] = rem_heads[i + 1][:]
        rem_tails[i] = rem_tails[i + 1][:]
        rem_heads[i][head_of[i]] += 1
        rem_tails[i][tail_of[i]] += 1

    def reachable(diff: int, lo_off: int, hi_off: int) -> bool:
        lo, hi = diff - lo_off, diff + hi_off
        if m == 0:
            return lo <= 0 <= hi
        return (hi // m) * m >= lo

    found: List[Tuple[int, ...]] = []
    diff = [0] * nv
    chosen: List[int] = []

    def rec(i: int) -> None:
        # prune with the vertices touched so far
        for k in range(nv):
            if not reachable(diff[k], rem_tails[i][k], rem_heads[i][k]):
                return
        if i == n:
            if chosen and all(_balanced(d, m) for d in diff):
                found.append(tuple(chosen))
            return
        chosen.append(i)
        diff[head_of[i]] += 1
        diff[tail_of[i]] -= 1
        rec(i + 1)
        diff[head_of[i]] -= 1
        diff[tail_of[i]] += 1
        chosen.pop()
        rec(i + 1)

    rec(0)
    pieces = []
    for decs in found:
        if connected_only and not _connected(w, decs):
            continue
        p = _piece(w, decs)
        if p.num_vertices >= 2:
            pieces.append(p)
    pieces.sort(key=lambda p: (len(p.decorations), p.decorations))
    return pieces


def act(w: Word, a: int, x: int) -> int:
    """``a.x``: the other end of the ``a``-edge at ``v_x`` in ``Γ_w`` (``a`` positive)."""
    n = len(w)
    if w[x] == a:
        return (x + 1) % n
    if w[(x - 1) % n] == -a:
        return (x - 1) % n
    raise PreconditionError(f"v{x} has no {render([a])}-edge")


def _act_set(w: Word, a: int, s: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(act(w, a, x) for x in s))


@dataclass
class PieceSystem:
    word: Word
    m: int
    pieces: List[Piece]
    keys: List[Tuple[int, Tuple[int, ...]]]
    anchor: int
    lp: LinearProgram


def balance_keys(w: Word, pieces: Sequence[Piece]) -> List[Tuple[int, Tuple[int, ...]]]:
    """Realized keys ``(a, S)``: ``S`` occurs at an ``a``-vertex or ``a.S`` at an ``A``-vertex."""
    keys = set()
    for p in pieces:
        for v, s in p.vertex_sets:
            if v > 0:
                keys.add((v, s))
            else:
                a = -v
                # preimage of s under x -> a.x, which is a bijection on the a-vertices
                keys.add((a, tuple(sorted(_inverse_act(w, a, y) for y in s))))
    return sorted(keys, key=lambda k: (k[0], len(k[1]), k[1]))


def _inverse_act(w: Word, a: int, y: int) -> int:
    n = len(w)
    # y lies on an A-vertex: either the edge into v_y reads a (x = y-1) or the edge out reads A (x = y+1)
    if w[(y - 1) % n] == a:
        return (y - 1) % n
    if w[y] == -a:
        return (y + 1) % n
    raise PreconditionError(f"v{y} has no incoming {render([a])}-edge")


def assemble_lp(w: Word, m: int, pieces: Sequence[Piece], anchor: int = 0) -> PieceSystem:
    """The LP whose optimum is the stable mod-m primitivity rank."""
    if not pieces:
        raise PreconditionError("no pieces: the LP is empty (value ∞)")
    if not 0 <= anchor < len(w):
        raise DomainError(f"anchor v{anchor} is not a vertex of Γ_w")
    k = len(pieces)
    keys = balance_keys(w, pieces)
    names = [f"n{j}" for j in range(k)]
    lp = LinearProgram(k, [], tuple(p.weight() for p in pieces), names)
    for a, s in keys:
        target = _act_set(w, a, s)
        row = [0] * k
        for j, p in enumerate(pieces):
            if p.at(a) == s:
                row[j] += 1
            if p.at(-a) == target:
                row[j] -= 1
        lp.add_constraint(row, 0, name=f"bal[{render([a])}:{','.join(map(str, s))}]")
    lp.add_constraint([1 if anchor in p.decorations else 0 for p in pieces], 1, name=f"deg[v{anchor}]")
    return PieceSystem(w, m, list(pieces), keys, anchor, lp)


@dataclass
class SpmResult:
    word: Word
    m: int
    value: object                        # Fraction or INFINITY
    pieces: int = 0
    system: Optional[PieceSystem] = None
    solution: Optional[Tuple[Fraction, ...]] = None
    witness: Optional[Diagram] = None
    shortcut: Optional[str] = None


def shortcut_value(w: Word, m: int) -> Optional[Tuple[object, str]]:
    """Values decided without the LP, or None."""
    if not w:
        return Fraction(-1), "trivial word"
    outside_commutator = any(exponent_vector(w))
    if m == 0 and outside_commutator:
        return INFINITY, "nonzero exponent sum with m = 0"
    if m >= 2 and letter_count_certificate(w, m):
        return INFINITY, "w outside [F,F] and every letter occurs fewer than m times"
    return None


def letter_count_certificate(w: Word, m: int) -> bool:
    """True when ``w ∉ [F,F]`` and each signed letter occurs fewer than ``m`` times.

    Efficiency then bounds every signed multiplicity by ``m - 1`` in absolute
    value, forcing all of them to vanish, which a word outside the
    commutator subgroup cannot achieve.
    """
    if m < 2 or not any(exponent_vector(w)):
        return False
    return all(c < m for c in letter_counts(w).values())


def stable_mod_m_rank(w: Word, m: int, connected_only: bool = True, anchor: int = 0,
                      use_shortcuts: bool = True, witness: bool = False,
                      max_length: Optional[int] = DEFAULT_MAX_LENGTH) -> SpmResult:
    _check_m(m)
    core, _ = cyclic_reduce(w)
    if not core:
        return SpmResult(core, m, Fraction(-1), shortcut="trivial word")
    if use_shortcuts:
        sc = shortcut_value(core, m)
        if sc is not None:
            return SpmResult(core, m, sc[0], shortcut=sc[1])
    pieces = enumerate_pieces(core, m, connected_only, max_length)
    if not pieces:
        return SpmResult(core, m, INFINITY, 0)
    system = assemble_lp(core, m, pieces, anchor % len(core))
    res = solve(system.lp)
    if isinstance(res, Infeasible):
        return SpmResult(core, m, INFINITY, len(pieces), system)
    out = SpmResult(core, m, res.value, len(pieces), system, res.solution)
    if witness:
        out.witness = extract_witness(system, res.solution)
    return out


def extract_witness(system: PieceSystem, solution: Sequence[Fraction]) -> Diagram:
    """Glue an integral multiple of an LP solution into a valid diagram."""
    w, m, pieces = system.word, system.m, system.pieces
    n = len(w)
    scale = lcm(*[Fraction(x).denominator for x in solution]) if solution else 1
    counts = [int(Fraction(x) * scale) for x in solution]
    instances: List[Piece] = []
    for p, c in zip(pieces, counts):
        instances += [p] * c
    if not instances:
        raise InternalInvariantError("LP solution has no pieces")
    # partner[(i, a)] for a signed letter: the instance glued along that wh-vertex
    partner: Dict[Tuple[int, int], int] = {}
    gens = sorted({abs(x) for x in w.letters})
    for a in gens:
        outs: Dict[Tuple[int, ...], List[int]] = {}
        for i, p in enumerate(instances):
            s = p.at(a)
            if s:
                outs.setdefault(s, []).append(i)
        ins: Dict[Tuple[int, ...], List[int]] = {}
        for i, p in enumerate(instances):
            t = p.at(-a)
            if t:
                ins.setdefault(t, []).append(i)
        for s, group in outs.items():
            t = _act_set(w, a, s)
            cands = ins.get(t, [])
            if len(cands) != len(group):
                raise InternalInvariantError(f"unbalanced gluing for {render([a])} at {s}")
            for i, j in zip(group, cands):
                partner[(i, a)] = j
                partner[(j, -a)] = i
            ins[t] = []
        if any(ins.values()):
            raise InternalInvariantError(f"unmatched {render([-a])}-vertices")
    # walk the cycles of P: (i, x) -> (partner of i along w[x], x + 1)
    succ: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for i, p in enumerate(instances):
        for x in p.decorations:
            succ[(i, x)] = (partner[(i, w[x])], (x + 1) % n)
    classes: List[int] = []
    nu: List[int] = []
    seen = set()
    for i, p in enumerate(instances):
        if 0 not in p.decorations or (i, 0) in seen:
            continue
        start = (i, 0)
        cur = start
        length = 0
        while True:
            seen.add(cur)
            classes.append(cur[0])
            length += 1
            cur = succ[cur]
            if cur == start:
                break
        if length % n:
            raise InternalInvariantError("a glued cycle does not cover Γ_w")
        nu.append(length // n)
    if len(seen) != len(succ):
        raise InternalInvariantError("glued cycles do not use every piece edge")
    cover = multi_cycle(w, nu)
    d = cover_diagram(cover, classes)
    if d.gamma.num_vertices != len(instances):
        raise InternalInvariantError("gluing produced an unexpected quotient")
    if not is_efficient(d):
        raise InternalInvariantError("witness diagram is not efficient")
    if not divisible(signed_multiplicities(d.b, d.forward), m):
        raise InternalInvariantError("witness diagram fails the divisibility condition")
    value = sum((Fraction(x) * p.weight() for x, p in zip(solution, pieces)), Fraction(0))
    if d.ratio != value:
        raise InternalInvariantError(f"witness ratio {d.ratio} differs from LP value {value}")
    return d
