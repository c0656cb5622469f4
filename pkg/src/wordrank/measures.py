"""Exact word-measure expectations of stable characters on S_N and C_m ≀ S_N.

Everything is an exact rational: a sum of integer character values over all
``k``-tuples of permutations (``k`` = number of generators occurring in the
word) divided by ``(N!)^k``. For the wreath product the ``C_m`` coordinates
are integrated analytically: a labeled cover contributes only when every
cover edge is traversed a multiple of ``m`` times in total.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import kernels
from .errors import DomainError, InsufficientDataError, ResourceError, UnsupportedParameterError
from .words import Word, render

DEFAULT_MAX_TUPLES = 2_000_000

Partition = Tuple[int, ...]


def as_partition(parts: Sequence[int]) -> Partition:
    parts = tuple(int(p) for p in parts)
    if any(p <= 0 for p in parts):
        raise DomainError(f"partition parts must be positive: {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"partition parts must be weakly decreasing: {parts}")
    return parts


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()[]")
    if not text:
        return ()
    return as_partition(int(x) for x in text.split(",") if x.strip())


def partitions(n: int, largest: Optional[int] = None) -> Iterator[Partition]:
    """Partitions of ``n``, largest first part first."""
    if n == 0:
        yield ()
        return
    largest = n if largest is None else largest
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def _mn(betas: Tuple[int, ...], rho: Tuple[int, ...]) -> int:
    if not rho:
        return 1
    r = rho[0]
    rest = rho[1:]
    bset = set(betas)
    total = 0
    for b in betas:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in betas if nb < c < b)
        new = tuple(sorted((bset - {b}) | {nb}, reverse=True))
        total += (-1) ** height * _mn(new, rest)
    return total


def mn_character(mu: Sequence[int], cycle_type: Sequence[int]) -> int:
    """``χ^μ`` on the class of the given cycle type (Murnaghan–Nakayama)."""
    mu = as_partition(mu)
    ct = tuple(sorted((int(c) for c in cycle_type), reverse=True))
    if any(c <= 0 for c in ct):
        raise DomainError(f"cycle lengths must be positive: {cycle_type}")
    if sum(mu) != sum(ct):
        raise DomainError(f"|μ| = {sum(mu)} but the cycle type has size {sum(ct)}")
    ell = len(mu)
    betas = tuple(mu[i] + ell - 1 - i for i in range(ell))
    return _mn(betas, ct)


def character_dimension(mu: Sequence[int]) -> int:
    """Hook length formula."""
    mu = as_partition(mu)
    n = sum(mu)
    conj = [sum(1 for p in mu if p > j) for j in range(mu[0])] if mu else []
    hooks = 1
    for i, row in enumerate(mu):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // hooks


def padded(mu: Sequence[int], N: int) -> Partition:
    """``μ[N] = (N − |μ|, μ_1, μ_2, …)``; needs ``N ≥ |μ| + μ_1``."""
    mu = as_partition(mu)
    first = N - sum(mu)
    if mu and first < mu[0] or first < 0:
        raise DomainError(f"N = {N} is too small for the stable character of {mu}")
    return ((first,) if first else ()) + mu


def cycle_type(perm: Sequence[int]) -> Partition:
    n = len(perm)
    seen = [False] * n
    out = []
    for s in range(n):
        if not seen[s]:
            ln = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            out.append(ln)
    return tuple(sorted(out, reverse=True))


def stable_char_Sn(mu: Sequence[int], N: int, sigma: Sequence[int]) -> int:
    if len(sigma) != N:
        raise DomainError("σ must be a permutation of N points")
    lam = padded(mu, N)
    return mn_character(lam, cycle_type(sigma))


def stable_dimension_Sn(mu: Sequence[int], N: int) -> int:
    return character_dimension(padded(mu, N))


def stable_dimension_wreath(mu: Sequence[int], N: int) -> int:
    mu = as_partition(mu)
    if N < sum(mu):
        raise DomainError(f"N = {N} is smaller than |μ| = {sum(mu)}")
    return math.comb(N, sum(mu)) * (character_dimension(mu) if mu else 1)


@dataclass(frozen=True)
class ExpectationRecord:
    word: str
    family: str                 # "sn" or "wreath"
    mu: Partition
    m: int                      # 1 for the symmetric group
    N: int
    value: Fraction
    numerator: int              # integer character sum over all tuples
    denominator: int            # (N!)^k
    generators: int             # k

    def to_json(self) -> dict:
        v = self.value
        return {
            "word": self.word, "family": self.family, "mu": list(self.mu), "m": self.m, "N": self.N,
            "value": str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}",
            "sum": self.numerator, "denominator": self.denominator, "generators": self.generators,
        }


def _relabel(w: Word) -> Tuple[List[int], int]:
    gens = sorted({abs(x) for x in w.letters})
    index = {g: i + 1 for i, g in enumerate(gens)}
    return [index[abs(x)] * (1 if x > 0 else -1) for x in w.letters], len(gens)


def _check_tuples(N: int, k: int, max_tuples: Optional[int]) -> int:
    total = math.factorial(N) ** k
    if max_tuples is not None and total > max_tuples:
        raise ResourceError(f"(N!)^k = {total} tuples exceeds the cap of {max_tuples}")
    return total


def expect_Sn(w: Word, N: int, mu: Sequence[int], max_tuples: Optional[int] = DEFAULT_MAX_TUPLES) -> ExpectationRecord:
    """``E_w[χ^{μ[N]}]`` under the ``w``-measure on ``S_N``."""
    mu = as_partition(mu)
    lam = padded(mu, N)
    letters, k = _relabel(w)
    total = _check_tuples(N, k, max_tuples)
    perms = list(permutations(range(N)))
    hist = kernels.sn_cycle_histogram(N, perms, letters, k)
    s = sum(c * mn_character(lam, ct) for ct, c in hist.items())
    return ExpectationRecord(render(w), "sn", mu, 1, N, Fraction(s, total), s, total, k)


def expect_wreath_phi(w: Word, N: int, m: int, mu: Sequence[int],
                      max_tuples: Optional[int] = DEFAULT_MAX_TUPLES) -> ExpectationRecord:
    """``E_w`` of the stable character of ``C_m ≀ S_N`` attaching ``μ`` to ``φ_m``.

    For each tuple of permutations and each ``σ_w``-invariant union ``B`` of
    cycles with ``|B| = |μ|``, the weight ``χ^μ(σ_w|_B)`` counts when the lifts
    of ``w`` from the sheets of ``B`` traverse every cover edge a multiple of
    ``m`` times (exactly zero times net for ``m = 0``).
    """
    if m == 1:
        raise UnsupportedParameterError("m = 1 is the symmetric group: use expect_Sn")
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    mu = as_partition(mu)
    d = sum(mu)
    if N < d:
        raise DomainError(f"N = {N} is smaller than |μ| = {d}")
    letters, k = _relabel(w)
    total = _check_tuples(N, k, max_tuples)
    perms = list(permutations(range(N)))
    hist = kernels.wreath_histogram(N, perms, letters, k, m, d)
    s = sum(c * (mn_character(mu, ct) if mu else 1) for ct, c in hist.items())
    return ExpectationRecord(render(w), "wreath", mu, m, N, Fraction(s, total), s, total, k)


@dataclass
class BetaFit:
    """Least-squares decay exponent; a diagnostic, never a proof of the liminf."""

    beta: Optional[float]
    slope: Optional[float]
    residuals: List[float] = field(default_factory=list)
    pointwise: List[float] = field(default_factory=list)
    infinite_consistent: bool = False
    constant_sign: bool = True
    diagnostic: bool = True

    def to_json(self) -> dict:
        return {"beta": "infinity" if self.infinite_consistent else self.beta, "slope": self.slope,
                "residuals": self.residuals, "pointwise": self.pointwise,
                "constant_sign": self.constant_sign, "diagnostic": True}


def beta_fit(records: Sequence[ExpectationRecord], dims: Sequence[int]) -> BetaFit:
    """Fit ``log|E| ≈ −β log(dim) + c`` over the records with nonzero value."""
    if len(records) != len(dims):
        raise DomainError("one dimension per record is required")
    if records and all(r.value == 0 for r in records):
        return BetaFit(None, None, infinite_consistent=True)
    pts = [(math.log(dm), math.log(abs(r.value)), r.value) for r, dm in zip(records, dims)
           if r.value != 0 and dm > 1]
    if len(pts) < 3:
        raise InsufficientDataError(f"need at least 3 usable points, got {len(pts)}")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    fit = statistics.linear_regression(xs, ys)
    residuals = [y - (fit.slope * x + fit.intercept) for x, y in zip(xs, ys)]
    pointwise = [-y / x for x, y in zip(xs, ys)]
    signs = {p[2] > 0 for p in pts}
    return BetaFit(-fit.slope, fit.slope, residuals, pointwise, False, len(signs) == 1)
