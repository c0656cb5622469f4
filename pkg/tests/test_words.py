import pytest
from hypothesis import given, strategies as st

from wordrank.errors import DomainError, ParseError, RankError
from wordrank.words import (Word, cyclic_reduce, cyclic_words, exponent_vector, is_proper_power,
                            letter_counts, parse_word, reduced_words, render, word_power)

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14)


def test_parse_and_render():
    w = parse_word("abAB")
    assert w.letters == (1, 2, -1, -2)
    assert render(w) == "abAB"
    assert parse_word("aA").letters == ()
    assert parse_word("abBA").letters == ()
    assert parse_word("a", rank=3).rank == 3


def test_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_word("ab1")
    assert exc.value.position == 2
    with pytest.raises(RankError):
        parse_word("c", rank=2)
    with pytest.raises(DomainError):
        Word((0,))


def test_cyclic_reduce():
    core, conj = cyclic_reduce(parse_word("baaB"))
    assert render(core) == "aa"
    assert render(conj) == "b"
    core, conj = cyclic_reduce(parse_word("abAB"))
    assert render(core) == "abAB" and not conj


def test_powers_and_counts():
    assert is_proper_power(parse_word("abab")) == (parse_word("ab"), 2)
    assert is_proper_power(parse_word("aab")) is None
    assert render(word_power(parse_word("ab"), 3)) == "ababab"
    assert exponent_vector(parse_word("aabAB")) == (1, 0)
    assert letter_counts(parse_word("aaB")) == {1: 2, -2: 1}


def _brute_cyclic_classes(n, rank):
    alphabet = [g * s for g in range(1, rank + 1) for s in (1, -1)]
    classes = set()

    def rec(p):
        if len(p) == n:
            if n == 1 or p[0] != -p[-1]:
                classes.add(frozenset(tuple(p[k:] + p[:k]) for k in range(n)))
            return
        for x in alphabet:
            if not p or x != -p[-1]:
                rec(p + [x])

    rec([])
    return classes


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cyclic_words_one_per_rotation_class(n):
    got = list(cyclic_words(n, 2))
    assert len(got) == len(_brute_cyclic_classes(n, 2))
    keys = {frozenset(w.rotate(k).letters for k in range(n)) for w in got}
    assert keys == _brute_cyclic_classes(n, 2)
    assert all(w.is_cyclically_reduced() for w in got)


def test_reduced_words_count():
    # 4 * 3^(k-1) reduced words of length k in rank 2
    assert len(list(reduced_words(4, 2))) == sum(4 * 3 ** (k - 1) for k in range(1, 5))


@given(letters)
def test_reduction_is_idempotent_and_inverse(xs):
    w = Word.of(xs, 3)
    assert Word(w.letters, 3) == w
    assert (w * w.inverse()).letters == ()
    assert parse_word(render(w), 3) == w
    assert all(w.letters[i] != -w.letters[i + 1] for i in range(len(w) - 1))


@given(letters)
def test_cyclic_reduce_conjugates_back(xs):
    w = Word.of(xs, 3)
    core, conj = cyclic_reduce(w)
    assert conj * core * conj.inverse() == w
    assert core.is_cyclically_reduced()
