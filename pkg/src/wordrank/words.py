"""Free-group words as tuples of signed generator indices.

Generator ``i`` (1-based) is written with the i-th lowercase letter and its
inverse with the matching uppercase letter, so ``"abAB"`` is the commutator
``[1, 2, -1, -2]``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import DomainError, ParseError, RankError

_LOWER = string.ascii_lowercase
_UPPER = string.ascii_uppercase


def _free_reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the free group of the given rank."""

    letters: Tuple[int, ...]
    rank: int = 1

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(x == 0 for x in letters):
            raise DomainError("generator index 0 is not allowed")
        letters = _free_reduce(letters)
        object.__setattr__(self, "letters", letters)
        used = max((abs(x) for x in letters), default=1)
        if self.rank < 1:
            raise RankError(f"rank must be positive, got {self.rank}")
        if used > self.rank:
            raise RankError(f"rank {self.rank} is smaller than generator index {used}")

    @classmethod
    def of(cls, letters: Iterable[int], rank: Optional[int] = None) -> "Word":
        letters = tuple(letters)
        if rank is None:
            rank = max((abs(x) for x in letters), default=1)
        return cls(letters, rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, max(self.rank, other.rank))

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    def with_rank(self, rank: int) -> "Word":
        return Word(self.letters, rank)

    def generators(self) -> Tuple[int, ...]:
        """Sorted positive generator indices occurring in the word."""
        return tuple(sorted({abs(x) for x in self.letters}))

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def rotate(self, k: int) -> "Word":
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k], self.rank)

    def relabel(self, mapping: dict) -> "Word":
        """Apply a signed permutation of generators, ``mapping[i] = ±j``."""
        out = []
        for x in self.letters:
            y = mapping.get(abs(x), abs(x))
            out.append(y if x > 0 else -y)
        return Word(tuple(out), max(self.rank, max((abs(y) for y in out), default=1)))

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Word({render(self)!r}, rank={self.rank})"


def letter_char(x: int) -> str:
    if not 1 <= abs(x) <= 26:
        raise DomainError(f"generator index {x} has no letter")
    return _LOWER[x - 1] if x > 0 else _UPPER[-x - 1]


def render(w: Word | Sequence[int]) -> str:
    letters = w.letters if isinstance(w, Word) else w
    return "".join(letter_char(x) for x in letters)


def parse_word(text: str, rank: Optional[int] = None) -> Word:
    """Parse ``text`` (a-z generators, A-Z inverses) into a reduced word.

    >>> parse_word("abAB").letters
    (1, 2, -1, -2)
    >>> parse_word("aA").letters
    ()
    """
    letters = []
    for pos, ch in enumerate(text):
        if ch in _LOWER:
            letters.append(_LOWER.index(ch) + 1)
        elif ch in _UPPER:
            letters.append(-(_UPPER.index(ch) + 1))
        else:
            raise ParseError(f"unexpected character {ch!r} at position {pos}", pos)
    used = max((abs(x) for x in letters), default=1)
    if rank is None:
        rank = used
    elif rank < used:
        raise RankError(f"rank {rank} is smaller than generator index {used}")
    return Word(tuple(letters), rank)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator**-1`` with ``core`` cyclically reduced."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    core = Word(letters[i:j + 1], w.rank)
    conj = Word(letters[:i], w.rank)
    return core, conj


def word_power(w: Word, n: int) -> Word:
    if n < 1:
        raise DomainError(f"power must be positive, got {n}")
    if not w:
        raise DomainError("power of the empty word is not a cycle")
    if not w.is_cyclically_reduced():
        raise DomainError(f"{render(w)} is not cyclically reduced")
    return Word(w.letters * n, w.rank)


def exponent_vector(w: Word) -> Tuple[int, ...]:
    vec = [0] * w.rank
    for x in w.letters:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def letter_counts(w: Word) -> dict:
    """Occurrences of each signed letter."""
    counts: dict = {}
    for x in w.letters:
        counts[x] = counts.get(x, 0) + 1
    return counts


def is_proper_power(w: Word) -> Optional[Tuple[Word, int]]:
    """Return ``(root, t)`` with ``w == root**t`` and ``t >= 2`` maximal, else ``None``."""
    if not w:
        raise DomainError("the empty word has no root")
    n = len(w)
    letters = w.letters
    for p in range(1, n // 2 + 1):
        if n % p == 0 and letters[p:] + letters[:p] == letters:
            return Word(letters[:p], w.rank), n // p
    return None


def cyclic_words(length: int, rank: int) -> Iterator[Word]:
    """Cyclically reduced words of the given length, one per rotation class."""
    alphabet = [i for g in range(1, rank + 1) for i in (g, -g)]

    def extend(prefix):
        if len(prefix) == length:
            if prefix[0] != -prefix[-1] or length == 1:
                yield tuple(prefix)
            return
        for x in alphabet:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    seen = set()
    for letters in extend([]):
        rots = [letters[k:] + letters[:k] for k in range(length)]
        key = min(rots, key=_letter_key)
        if key in seen:
            continue
        seen.add(key)
        yield Word(key, rank)


def reduced_words(max_length: int, rank: int) -> Iterator[Word]:
    """All freely reduced words of length 1..max_length."""
    alphabet = [i for g in range(1, rank + 1) for i in (g, -g)]

    def extend(prefix):
        if prefix:
            yield Word(tuple(prefix), rank)
        if len(prefix) == max_length:
            return
        for x in alphabet:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def _letter_key(letters):
    return tuple((abs(x), x < 0) for x in letters)
