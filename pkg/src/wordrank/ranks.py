"""Primitivity ranks from quotients of ``Γ_w``, and bounded-degree diagram searches.

``π(w)`` and ``π^(m)(w)`` only need the quotients of the single cycle
``Γ_w``. The stable invariants are approached from above by enumerating
every diagram ``Γ_{w^ν} → Γ`` of degree at most ``D``: each efficient
diagram is a fold-closed classification of ``Γ_{w^ν}`` that never merges
two vertices of one fiber.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import kernels
from .errors import DomainError, InternalInvariantError, ResourceError
from .graphs import (DEFAULT_MAX_VERTICES, Diagram, GraphMorphism, LabeledGraph,
                     closed_classifications, cover_diagram, cycle_forward, cycle_graph,
                     cycle_orientation, divisible, is_efficient, multi_cycle,
                     quotient_from_classes, signed_multiplicities)
from .values import INFINITY
from .whitehead import is_algebraic
from .words import Word, cyclic_reduce

DEFAULT_MAX_DEGREE = 4
# fiber-constrained enumeration grows far slower than Bell numbers
DEFAULT_SEARCH_MAX_VERTICES = 24


@dataclass
class RankResult:
    value: object                          # int or INFINITY
    witness: Optional[Tuple[LabeledGraph, GraphMorphism]] = None
    quotients: int = 0

    @property
    def is_finite(self) -> bool:
        return self.value is not INFINITY


@dataclass
class DiagramSearchResult:
    best_ratio: object                     # Fraction or INFINITY
    best_diagram: Optional[Diagram]
    degree_bound: int
    per_degree_census: Dict[Tuple[int, Fraction], int] = field(default_factory=dict)
    per_degree_seconds: Dict[int, float] = field(default_factory=dict)
    m: int = 0
    connected_only: bool = False

    def census_rows(self) -> List[Tuple[int, Fraction, int]]:
        return sorted((d, r, c) for (d, r), c in self.per_degree_census.items())


def partitions_of(d: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of ``d`` in reverse lexicographic order."""
    if d == 0:
        return [()]
    largest = d if largest is None else largest
    out = []
    for k in range(min(d, largest), 0, -1):
        for rest in partitions_of(d - k, k):
            out.append((k,) + rest)
    return out


def _quotient_rank(delta: LabeledGraph) -> int:
    return 1 - delta.euler_char()


def primitivity_rank(w: Word, max_vertices: Optional[int] = DEFAULT_MAX_VERTICES) -> RankResult:
    """``π(w)``: least rank of a proper algebraic extension of ``⟨w⟩``."""
    core, _ = cyclic_reduce(w)
    if not core:
        return RankResult(0)
    gw, _ = cycle_graph(core)
    fwd = cycle_forward(core)
    best = RankResult(INFINITY)
    count = 0
    for classes in closed_classifications(gw, None, max_vertices):
        count += 1
        delta, b = quotient_from_classes(gw, classes)
        if b.is_isomorphism():
            continue
        r = _quotient_rank(delta)
        if best.value is not INFINITY and r >= best.value:
            continue
        if is_algebraic(b, fwd):
            best = RankResult(r, (delta, b))
    best.quotients = count
    return best


def mod_m_rank(w: Word, m: int, max_vertices: Optional[int] = DEFAULT_MAX_VERTICES) -> RankResult:
    """``π^(m)(w)``: least rank of ``H`` with ``w`` in the kernel of ``H → (Z/m)^{rk H}``."""
    if m == 1:
        return primitivity_rank(w, max_vertices)
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    core, _ = cyclic_reduce(w)
    if not core:
        return RankResult(0)
    gw, _ = cycle_graph(core)
    fwd = cycle_forward(core)
    best = RankResult(INFINITY)
    count = 0
    for classes in closed_classifications(gw, None, max_vertices):
        count += 1
        delta, b = quotient_from_classes(gw, classes)
        r = _quotient_rank(delta)
        if best.value is not INFINITY and r >= best.value:
            continue
        if divisible(signed_multiplicities(b, fwd), m):
            best = RankResult(r, (delta, b))
    best.quotients = count
    return best


def _check_search_args(w: Word, max_degree: int) -> Word:
    if max_degree < 1:
        raise DomainError("the degree bound must be at least 1")
    core, _ = cyclic_reduce(w)
    return core


def _covers(core: Word, max_degree: int, connected_only: bool, max_vertices: Optional[int]):
    for d in range(1, max_degree + 1):
        nus = [(d,)] if connected_only else partitions_of(d)
        if max_vertices is not None and d * len(core) > max_vertices:
            raise ResourceError(f"degree {d} needs {d * len(core)} vertices, above the cap of {max_vertices}")
        yield d, [multi_cycle(core, nu) for nu in nus]


def bounded_spm_search_multi(w: Word, ms: Sequence[int], max_degree: int = DEFAULT_MAX_DEGREE,
                             max_vertices: Optional[int] = DEFAULT_SEARCH_MAX_VERTICES,
                             connected_only: bool = False) -> Dict[int, DiagramSearchResult]:
    """Bounded search for several moduli ``m ≠ 1`` sharing one enumeration."""
    ms = list(ms)
    if any(m == 1 or m < 0 for m in ms):
        raise DomainError("moduli must be nonnegative and different from 1 here")
    core = _check_search_args(w, max_degree)
    results = {m: DiagramSearchResult(INFINITY, None, max_degree, m=m, connected_only=connected_only) for m in ms}
    if not core:
        for r in results.values():
            r.best_ratio = Fraction(-1)
        return results
    best_code: Dict[int, Tuple[int, object, Tuple[int, ...]]] = {}
    for d, covers in _covers(core, max_degree, connected_only, max_vertices):
        t0 = time.perf_counter()
        for cover in covers:
            P = cover.P
            census, best = kernels.score_quotients(P.num_vertices, P.origin, P.label,
                                                   list(cover.rho.vmap), cover.forward, ms)
            for m, cen, bst in zip(ms, census, best):
                res = results[m]
                for negchi, c in cen.items():
                    key = (d, Fraction(negchi, d))
                    res.per_degree_census[key] = res.per_degree_census.get(key, 0) + c
                if bst is not None:
                    ratio = Fraction(bst[0], d)
                    if res.best_ratio is INFINITY or ratio < res.best_ratio:
                        res.best_ratio = ratio
                        best_code[m] = (d, cover, bst[1])
        dt = time.perf_counter() - t0
        for res in results.values():
            res.per_degree_seconds[d] = dt
    for m, (d, cover, classes) in best_code.items():
        diagram = cover_diagram(cover, classes)
        if not is_efficient(diagram) or not divisible(signed_multiplicities(diagram.b, diagram.forward), m):
            raise InternalInvariantError("bounded search produced an invalid best diagram")
        if diagram.ratio != results[m].best_ratio:
            raise InternalInvariantError("best diagram ratio disagrees with the census")
        results[m].best_diagram = diagram
    return results


def bounded_spm_search(w: Word, m: int, max_degree: int = DEFAULT_MAX_DEGREE,
                       max_vertices: Optional[int] = DEFAULT_SEARCH_MAX_VERTICES,
                       connected_only: bool = False) -> DiagramSearchResult:
    """Upper bound for ``sπ^(m)(w)`` from all efficient diagrams of degree ``≤ D``."""
    if m == 1:
        return bounded_sp_search(w, max_degree, connected_only, max_vertices)
    return bounded_spm_search_multi(w, [m], max_degree, max_vertices, connected_only)[m]


def _component_checks(diagram: Diagram) -> bool:
    """Algebraic and not an isomorphism over every component of ``Γ``."""
    b = diagram.b
    for comp in diagram.gamma.components():
        sub, _, _ = b.restrict_to(comp)
        if sub.is_isomorphism():
            return False
        if not is_algebraic(sub, cycle_orientation(sub.source)):
            return False
    return True


def score_diagram(diagram: Diagram, m: int) -> bool:
    """Validity of one diagram for ``sπ^(m)`` (``m = 1``: algebraic variant)."""
    if not is_efficient(diagram):
        return False
    if m == 1:
        return _component_checks(diagram)
    return divisible(signed_multiplicities(diagram.b, diagram.forward), m)


def bounded_sp_search(w: Word, max_degree: int = DEFAULT_MAX_DEGREE, connected_only: bool = False,
                      max_vertices: Optional[int] = DEFAULT_SEARCH_MAX_VERTICES) -> DiagramSearchResult:
    """Upper bound for ``sπ(w)`` (``s̃π(w)`` with ``connected_only``) from diagrams of degree ``≤ D``."""
    core = _check_search_args(w, max_degree)
    res = DiagramSearchResult(INFINITY, None, max_degree, m=1, connected_only=connected_only)
    if not core:
        res.best_ratio = Fraction(-1)
        return res
    for d, covers in _covers(core, max_degree, connected_only, max_vertices):
        t0 = time.perf_counter()
        for cover in covers:
            for classes in closed_classifications(cover.P, cover.rho.vmap, None):
                diagram = cover_diagram(cover, classes)
                if not _component_checks(diagram):
                    continue
                ratio = diagram.ratio
                key = (d, ratio)
                res.per_degree_census[key] = res.per_degree_census.get(key, 0) + 1
                if res.best_ratio is INFINITY or ratio < res.best_ratio:
                    res.best_ratio = ratio
                    res.best_diagram = diagram
        res.per_degree_seconds[d] = time.perf_counter() - t0
    return res
