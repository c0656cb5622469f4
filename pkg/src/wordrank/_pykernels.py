"""Pure-Python hot loops; the compiled ``_ckernels`` module mirrors this API."""
from __future__ import annotations

from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


def closed_partitions(n: int, origin: Sequence[int], label: Sequence[int],
                      fibers: Optional[Sequence[int]] = None) -> Iterator[Tuple[int, ...]]:
    """Yield every fold-closed classification of the vertices exactly once.

    Vertices are decided in index order: each either joins the class of an
    earlier vertex or opens a new class. Taking the fold closure after every
    decision may never merge two classes that already hold decided vertices,
    which makes the growth string of the final classification unique.
    """
    parent = list(range(n))
    members: List[List[int]] = [[v] for v in range(n)]
    out: List[Dict[int, int]] = [{} for _ in range(n)]
    decided = [False] * n
    if fibers is None:
        mask = [0] * n
    else:
        mask = [1 << f for f in fibers]
    trail: list = []

    def union(ra: int, rb: int, pending: list) -> None:
        if len(members[ra]) < len(members[rb]):
            ra, rb = rb, ra
        big, small = ra, rb
        added = []
        out_big = out[big]
        for lab, t in out[small].items():
            t2 = out_big.get(lab)
            if t2 is None:
                out_big[lab] = t
                added.append(lab)
            else:
                pending.append((t, t2))
        trail.append((small, big, added, decided[big], mask[big]))
        for v in members[small]:
            parent[v] = big
        members[big].extend(members[small])
        decided[big] = decided[big] or decided[small]
        mask[big] |= mask[small]

    def closure(x: int, y: int) -> bool:
        pending = [(x, y)]
        while pending:
            a, b = pending.pop()
            ra, rb = parent[a], parent[b]
            if ra == rb:
                continue
            if decided[ra] and decided[rb]:
                return False
            if mask[ra] & mask[rb]:
                return False
            union(ra, rb, pending)
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            entry = trail.pop()
            if entry[0] == -1:
                decided[entry[1]] = False
                continue
            small, big, added, old_decided, old_mask = entry
            out_big = out[big]
            for lab in added:
                del out_big[lab]
            del members[big][len(members[big]) - len(members[small]):]
            for v in members[small]:
                parent[v] = small
            decided[big] = old_decided
            mask[big] = old_mask

    # initial closure: a non-immersed graph folds before any choice is made
    for e in range(len(origin)):
        u = origin[e]
        t = origin[e ^ 1]
        r = parent[u]
        t2 = out[r].get(label[e])
        if t2 is None:
            out[r][label[e]] = t
        elif not closure(t, t2):
            return
    trail.clear()

    def rgs() -> Tuple[int, ...]:
        index: Dict[int, int] = {}
        return tuple(index.setdefault(parent[v], len(index)) for v in range(n))

    def rec(p: int) -> Iterator[Tuple[int, ...]]:
        while p < n and decided[parent[p]]:
            p += 1
        if p == n:
            yield rgs()
            return
        roots = []
        for v in range(p):
            r = parent[v]
            if r not in roots:
                roots.append(r)
        for r in roots:
            mark = len(trail)
            if closure(p, members[r][0]):
                yield from rec(p + 1)
            undo(mark)
        mark = len(trail)
        trail.append((-1, parent[p]))
        decided[parent[p]] = True
        yield from rec(p + 1)
        undo(mark)

    yield from rec(0)


def _cycle_type(perm: Sequence[int]) -> Tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    lengths = []
    for s in range(n):
        if not seen[s]:
            ln = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            lengths.append(ln)
    lengths.sort(reverse=True)
    return tuple(lengths)


def _tables(perms, letters):
    inverses = []
    for p in perms:
        inv = [0] * len(p)
        for i, x in enumerate(p):
            inv[x] = i
        inverses.append(tuple(inv))
    steps = [(abs(x) - 1, x > 0) for x in letters]
    return inverses, steps


def sn_cycle_histogram(N: int, perms: Sequence[Sequence[int]], letters: Sequence[int],
                       k: int) -> Dict[Tuple[int, ...], int]:
    """Cycle type counts of the endpoint map of ``w`` over all ``k``-tuples of permutations."""
    inverses, steps = _tables(perms, letters)
    hist: Dict[Tuple[int, ...], int] = {}
    ident = list(range(N))
    for idx in product(range(len(perms)), repeat=k):
        cur = ident
        for g, pos in steps:
            table = perms[idx[g]] if pos else inverses[idx[g]]
            cur = [table[c] for c in cur]
        ct = _cycle_type(cur)
        hist[ct] = hist.get(ct, 0) + 1
    return hist


def wreath_histogram(N: int, perms: Sequence[Sequence[int]], letters: Sequence[int], k: int,
                     m: int, d: int) -> Dict[Tuple[int, ...], int]:
    """Cycle type counts of ``σ_w`` restricted to invariant ``d``-sets with balanced lifts.

    For every tuple, every union ``B`` of cycles of the endpoint map with
    ``|B| = d`` is kept when the lifts of ``w`` from the sheets of ``B``
    traverse every cover edge a number of times divisible by ``m``
    (exactly zero for ``m = 0``).
    """
    inverses, steps = _tables(perms, letters)
    hist: Dict[Tuple[int, ...], int] = {}
    size = k * N
    for idx in product(range(len(perms)), repeat=k):
        if d == 0:
            hist[()] = hist.get((), 0) + 1
            continue
        ends = [0] * N
        paths = []
        for j in range(N):
            s = j
            vec = [0] * size
            for g, pos in steps:
                if pos:
                    vec[g * N + s] += 1
                    s = perms[idx[g]][s]
                else:
                    s = inverses[idx[g]][s]
                    vec[g * N + s] -= 1
            ends[j] = s
            paths.append(vec)
        seen = [False] * N
        cycles = []
        for s in range(N):
            if seen[s]:
                continue
            vec = [0] * size
            ln = 0
            j = s
            while not seen[j]:
                seen[j] = True
                pv = paths[j]
                for t in range(size):
                    vec[t] += pv[t]
                j = ends[j]
                ln += 1
            if ln <= d:
                cycles.append((ln, vec))
        _subsets(cycles, 0, d, [0] * size, [], m, hist)
    return hist


def _subsets(cycles, start, remaining, acc, lengths, m, hist):
    if remaining == 0:
        if m == 0:
            ok = not any(acc)
        else:
            ok = all(x % m == 0 for x in acc)
        if ok:
            key = tuple(sorted(lengths, reverse=True))
            hist[key] = hist.get(key, 0) + 1
        return
    for i in range(start, len(cycles)):
        ln, vec = cycles[i]
        if ln > remaining:
            continue
        new = [a + b for a, b in zip(acc, vec)]
        lengths.append(ln)
        _subsets(cycles, i + 1, remaining - ln, new, lengths, m, hist)
        lengths.pop()


def score_quotients(n: int, origin: Sequence[int], label: Sequence[int], fibers: Optional[Sequence[int]],
                    forward: Sequence[int], ms: Sequence[int]):
    """Census of fold-closed classifications passing efficiency and divisibility.

    Returns ``(census, best)``: ``census[i]`` maps ``-χ`` of the quotient to
    the number of classifications whose signed edge multiplicities are all
    divisible by ``ms[i]`` (all zero for 0); ``best[i]`` is ``(-χ, classes)``
    for the first minimizer in enumeration order, or None.
    """
    census: List[Dict[int, int]] = [{} for _ in ms]
    best: List[Optional[Tuple[int, Tuple[int, ...]]]] = [None for _ in ms]
    heads = [origin[forward[u] ^ 1] for u in range(n)]
    labs = [label[forward[u]] for u in range(n)]
    for classes in closed_partitions(n, origin, label, fibers):
        out = set()
        for e in range(len(origin)):
            if label[e] > 0:
                out.add((classes[origin[e]], label[e]))
        negchi = len(out) - (max(classes) + 1)
        counts: Dict[Tuple[int, int], int] = {}
        for u in range(n):
            x = labs[u]
            if x > 0:
                key = (classes[u], x)
                counts[key] = counts.get(key, 0) + 1
            else:
                key = (classes[heads[u]], -x)
                counts[key] = counts.get(key, 0) - 1
        for i, m in enumerate(ms):
            if m == 0:
                ok = not any(counts.values())
            else:
                ok = all(c % m == 0 for c in counts.values())
            if ok:
                census[i][negchi] = census[i].get(negchi, 0) + 1
                if best[i] is None or negchi < best[i][0]:
                    best[i] = (negchi, classes)
    return census, best
