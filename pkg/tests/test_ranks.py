from fractions import Fraction

import pytest

from wordrank.errors import DomainError, ResourceError
from wordrank.graphs import (cycle_forward, cycle_graph, divisible, is_efficient, morphism_code,
                             quotient_by_partition, set_partitions, signed_multiplicities)
from wordrank.ranks import (bounded_sp_search, bounded_spm_search, bounded_spm_search_multi,
                            mod_m_rank, partitions_of, primitivity_rank, score_diagram)
from wordrank.values import INFINITY
from wordrank.whitehead import is_algebraic
from wordrank.words import cyclic_words, parse_word, render

from conftest import W


def _brute_rank(w, accept):
    """Least rank over every folded quotient of Γ_w passing ``accept``, via all set partitions."""
    g, _ = cycle_graph(w)
    fwd = cycle_forward(w)
    best = INFINITY
    seen = set()
    for part in set_partitions(g.num_vertices):
        delta, b = quotient_by_partition(g, part)
        code = morphism_code(b)
        if code in seen:
            continue
        seen.add(code)
        if accept(b, fwd):
            r = 1 - delta.euler_char()
            best = r if best is INFINITY else min(best, r)
    return best


@pytest.mark.parametrize("text,expected", [
    ("a", INFINITY), ("aa", 1), ("aaa", 1), ("ab", INFINITY), ("abAB", 2),
    ("aabb", 2), ("aaabAB", 2), ("aBcbbaCac", 3), ("", 0),
])
def test_primitivity_rank_values(text, expected):
    assert primitivity_rank(parse_word(text)).value == expected


def test_primitivity_rank_matches_brute_force():
    for n in range(1, 7):
        for w in cyclic_words(n, 2):
            oracle = _brute_rank(w, lambda b, f: not b.is_isomorphism() and is_algebraic(b, f))
            assert primitivity_rank(w).value == oracle, render(w)


@pytest.mark.parametrize("m", [0, 2, 3])
def test_mod_m_rank_matches_brute_force(m):
    for n in range(1, 7):
        for w in cyclic_words(n, 2):
            oracle = _brute_rank(w, lambda b, f: divisible(signed_multiplicities(b, f), m))
            assert mod_m_rank(w, m).value == oracle, (render(w), m)


def test_mod_m_examples():
    assert mod_m_rank(W("aa"), 2).value == 1
    assert mod_m_rank(W("aa"), 3).value is INFINITY
    assert mod_m_rank(W("abAB"), 0).value == 2
    assert mod_m_rank(W("abAB"), 1).value == primitivity_rank(W("abAB")).value


def test_conjugate_and_witness():
    assert primitivity_rank(parse_word("baaB")).value == 1
    res = primitivity_rank(W("abAB"))
    delta, b = res.witness
    assert delta.rank() == 2 and not b.is_isomorphism()


def test_partitions_of():
    assert partitions_of(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert partitions_of(0) == [()]


def test_bounded_spm_examples():
    assert bounded_spm_search(W("aaa"), 2, 2).best_ratio == 0
    assert bounded_spm_search(W("abAB"), 0, 1).best_ratio == 1
    assert bounded_spm_search(W("a"), 2, 3).best_ratio is INFINITY
    assert bounded_spm_search(parse_word(""), 2, 2).best_ratio == -1


def test_bounded_sp_examples():
    assert bounded_sp_search(W("abAB"), 1).best_ratio == 1
    assert bounded_sp_search(W("aa"), 2).best_ratio == 0
    assert bounded_sp_search(W("a"), 2).best_ratio is INFINITY
    assert bounded_spm_search(W("abAB"), 1, 1).best_ratio == 1


def test_bounded_search_caps_and_errors():
    with pytest.raises(DomainError):
        bounded_spm_search(W("aa"), 2, 0)
    with pytest.raises(ResourceError):
        bounded_spm_search(W("abAB"), 2, 4, max_vertices=8)
    with pytest.raises(DomainError):
        bounded_spm_search_multi(W("aa"), [1, 2], 2)


def test_bounded_search_is_monotone_in_degree_and_connectivity():
    for text in ["aa", "abAB", "aab", "aabb", "abab"]:
        w = W(text)
        for m in (0, 2, 3):
            prev = INFINITY
            for d in (1, 2, 3):
                r = bounded_spm_search(w, m, d).best_ratio
                assert r <= prev
                prev = r
                conn = bounded_spm_search(w, m, d, connected_only=True).best_ratio
                assert conn >= r


def test_best_diagram_rescores():
    res = bounded_spm_search(W("aabb"), 2, 3)
    d = res.best_diagram
    assert score_diagram(d, 2)
    assert is_efficient(d)
    assert d.ratio == res.best_ratio == 1


def test_census_counts_are_consistent():
    res = bounded_spm_search(W("aa"), 2, 2)
    rows = res.census_rows()
    assert all(c > 0 for _, _, c in rows)
    assert {d for d, _, _ in rows} <= {1, 2}
    # degree 1: only the collapse onto one loop is divisible by 2 (Γ_aa itself reads each edge once)
    assert [(r, c) for d, r, c in rows if d == 1] == [(Fraction(0), 1)]


def test_multi_matches_single():
    w = W("abAAB")
    multi = bounded_spm_search_multi(w, [0, 2, 3], 2)
    for m in (0, 2, 3):
        single = bounded_spm_search(w, m, 2)
        assert multi[m].best_ratio == single.best_ratio
        assert multi[m].per_degree_census == single.per_degree_census
