# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops in ``_pykernels`` (same API, same output order)."""
from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport uint64_t

from . import _pykernels


cdef inline int _slot(int lab):
    return 2 * (lab - 1) if lab > 0 else 2 * (-lab - 1) + 1


cdef struct State:
    int n
    int L
    int *parent
    int *size
    int *nxt
    int *out
    int *decided
    uint64_t *mask
    int *tr_small
    int *tr_big
    int *tr_olddec
    uint64_t *tr_oldmask
    uint64_t *tr_added
    int tr_len
    int *pend
    int pend_cap


cdef int _alloc(State *s, int n, int L):
    s.n = n
    s.L = L
    s.parent = <int *> malloc(n * sizeof(int))
    s.size = <int *> malloc(n * sizeof(int))
    s.nxt = <int *> malloc(n * sizeof(int))
    s.out = <int *> malloc(n * L * sizeof(int))
    s.decided = <int *> calloc(n, sizeof(int))
    s.mask = <uint64_t *> calloc(n, sizeof(uint64_t))
    s.tr_small = <int *> malloc((2 * n + 2) * sizeof(int))
    s.tr_big = <int *> malloc((2 * n + 2) * sizeof(int))
    s.tr_olddec = <int *> malloc((2 * n + 2) * sizeof(int))
    s.tr_oldmask = <uint64_t *> malloc((2 * n + 2) * sizeof(uint64_t))
    s.tr_added = <uint64_t *> malloc((2 * n + 2) * sizeof(uint64_t))
    s.pend_cap = 2 * (n * L + 2)
    s.pend = <int *> malloc(s.pend_cap * sizeof(int))
    s.tr_len = 0
    if (s.parent == NULL or s.size == NULL or s.nxt == NULL or s.out == NULL or s.decided == NULL
            or s.mask == NULL or s.tr_small == NULL or s.tr_big == NULL or s.tr_olddec == NULL
            or s.tr_oldmask == NULL or s.tr_added == NULL or s.pend == NULL):
        return 0
    cdef int v, l
    for v in range(n):
        s.parent[v] = v
        s.size[v] = 1
        s.nxt[v] = v
        for l in range(L):
            s.out[v * L + l] = -1
    return 1


cdef void _release(State *s):
    free(s.parent); free(s.size); free(s.nxt); free(s.out); free(s.decided); free(s.mask)
    free(s.tr_small); free(s.tr_big); free(s.tr_olddec); free(s.tr_oldmask); free(s.tr_added)
    free(s.pend)


cdef void _union(State *s, int ra, int rb, int *npend):
    cdef int big = ra, small = rb, tmp, l, t, t2, v
    if s.size[ra] < s.size[rb]:
        big = rb
        small = ra
    cdef uint64_t added = 0
    cdef int L = s.L
    for l in range(L):
        t = s.out[small * L + l]
        if t < 0:
            continue
        t2 = s.out[big * L + l]
        if t2 < 0:
            s.out[big * L + l] = t
            added |= (<uint64_t> 1) << l
        else:
            s.pend[npend[0]] = t
            s.pend[npend[0] + 1] = t2
            npend[0] += 2
    cdef int k = s.tr_len
    s.tr_small[k] = small
    s.tr_big[k] = big
    s.tr_olddec[k] = s.decided[big]
    s.tr_oldmask[k] = s.mask[big]
    s.tr_added[k] = added
    s.tr_len = k + 1
    v = small
    while True:
        s.parent[v] = big
        v = s.nxt[v]
        if v == small:
            break
    tmp = s.nxt[big]
    s.nxt[big] = s.nxt[small]
    s.nxt[small] = tmp
    s.size[big] += s.size[small]
    if s.decided[small]:
        s.decided[big] = 1
    s.mask[big] |= s.mask[small]


cdef int _closure(State *s, int x, int y):
    cdef int npend = 2, a, b, ra, rb
    s.pend[0] = x
    s.pend[1] = y
    while npend > 0:
        npend -= 2
        a = s.pend[npend]
        b = s.pend[npend + 1]
        ra = s.parent[a]
        rb = s.parent[b]
        if ra == rb:
            continue
        if s.decided[ra] and s.decided[rb]:
            return 0
        if s.mask[ra] & s.mask[rb]:
            return 0
        _union(s, ra, rb, &npend)
    return 1


cdef void _undo(State *s, int mark):
    cdef int k, small, big, l, v, tmp
    cdef uint64_t added
    cdef int L = s.L
    while s.tr_len > mark:
        s.tr_len -= 1
        k = s.tr_len
        small = s.tr_small[k]
        big = s.tr_big[k]
        if small < 0:
            s.decided[big] = 0
            continue
        added = s.tr_added[k]
        l = 0
        while added:
            if added & 1:
                s.out[big * L + l] = -1
            added >>= 1
            l += 1
        tmp = s.nxt[big]
        s.nxt[big] = s.nxt[small]
        s.nxt[small] = tmp
        v = small
        while True:
            s.parent[v] = small
            v = s.nxt[v]
            if v == small:
                break
        s.size[big] -= s.size[small]
        s.decided[big] = s.tr_olddec[k]
        s.mask[big] = s.tr_oldmask[k]


cdef struct Scorer:
    int nm
    int *ms
    int G
    int *fwd_slot
    int *fwd_head
    int *cnt
    long long *census
    int ncensus
    int *best
    int *best_code
    int *stamp


cdef int _init_state(State *s, int n, origin, label, fibers, int L):
    cdef int e, u, t, r, l, t2
    if not _alloc(s, n, L):
        return -1
    if fibers is not None:
        for u in range(n):
            s.mask[u] = (<uint64_t> 1) << (<int> fibers[u])
    for e in range(len(origin)):
        u = origin[e]
        t = origin[e ^ 1]
        r = s.parent[u]
        l = _slot(label[e])
        t2 = s.out[r * L + l]
        if t2 < 0:
            s.out[r * L + l] = t
        elif not _closure(s, t, t2):
            return 0
    s.tr_len = 0
    return 1


cdef void _emit_rgs(State *s, int *code):
    cdef int v, r, k = 0
    for v in range(s.n):
        code[v] = -1
    for v in range(s.n):
        r = s.parent[v]
        if code[r] < 0:
            code[r] = k
            k += 1
    return


cdef object _rgs_tuple(State *s, int *tmp):
    _emit_rgs(s, tmp)
    return tuple([tmp[s.parent[v]] for v in range(s.n)])


cdef void _score(State *s, Scorer *sc):
    cdef int n = s.n, L = s.L, G = sc.G
    cdef int v, r, g, u, classes = 0, edges = 0, negchi, slot, idx, mi, m, c, ok
    for v in range(n):
        if s.parent[v] == v:
            classes += 1
            for g in range(G):
                if s.out[v * L + 2 * g] >= 0:
                    edges += 1
    negchi = edges - classes
    for u in range(n):
        slot = sc.fwd_slot[u]
        if slot & 1:
            sc.cnt[s.parent[sc.fwd_head[u]] * G + (slot >> 1)] -= 1
        else:
            sc.cnt[s.parent[u] * G + (slot >> 1)] += 1
    for mi in range(sc.nm):
        m = sc.ms[mi]
        ok = 1
        for u in range(n):
            slot = sc.fwd_slot[u]
            if slot & 1:
                c = sc.cnt[s.parent[sc.fwd_head[u]] * G + (slot >> 1)]
            else:
                c = sc.cnt[s.parent[u] * G + (slot >> 1)]
            if m == 0:
                if c != 0:
                    ok = 0
                    break
            elif c % m != 0:
                ok = 0
                break
        if ok:
            if 0 <= negchi < sc.ncensus:
                sc.census[mi * sc.ncensus + negchi] += 1
            if sc.best[mi] < 0 or negchi < sc.best[mi]:
                sc.best[mi] = negchi
                _emit_rgs(s, sc.stamp)
                for v in range(n):
                    sc.best_code[mi * n + v] = sc.stamp[s.parent[v]]
    for u in range(n):
        slot = sc.fwd_slot[u]
        if slot & 1:
            sc.cnt[s.parent[sc.fwd_head[u]] * G + (slot >> 1)] = 0
        else:
            sc.cnt[s.parent[u] * G + (slot >> 1)] = 0


cdef int _rec(State *s, int p, int *roots, int *seen, list sink, Scorer *sc, int *tmp) except -1:
    cdef int n = s.n
    while p < n and s.decided[s.parent[p]]:
        p += 1
    if p == n:
        if sc == NULL:
            sink.append(_rgs_tuple(s, tmp))
        else:
            _score(s, sc)
        return 0
    cdef int nroots = 0, v, r, i, mark
    cdef int *my_roots = roots + p * n
    for v in range(p):
        r = s.parent[v]
        if seen[r] != p + 1:
            seen[r] = p + 1
            my_roots[nroots] = r
            nroots += 1
    for v in range(p):
        seen[s.parent[v]] = 0
    for i in range(nroots):
        mark = s.tr_len
        if _closure(s, p, my_roots[i]):
            _rec(s, p + 1, roots, seen, sink, sc, tmp)
        _undo(s, mark)
    mark = s.tr_len
    r = s.parent[p]
    s.tr_small[mark] = -1
    s.tr_big[mark] = r
    s.tr_len = mark + 1
    s.decided[r] = 1
    _rec(s, p + 1, roots, seen, sink, sc, tmp)
    _undo(s, mark)
    return 0


def _label_slots(label):
    if not label:
        return 2
    return 2 * max(abs(x) for x in label)


def _fits(n, label, fibers):
    if _label_slots(label) > 64:
        return False
    if fibers is not None and n and max(fibers) >= 64:
        return False
    return True


def closed_partitions(int n, origin, label, fibers=None):
    """Every fold-closed classification, as growth strings in enumeration order."""
    if not _fits(n, label, fibers):
        return list(_pykernels.closed_partitions(n, origin, label, fibers))
    cdef State s
    cdef int L = _label_slots(label)
    cdef int *roots = <int *> malloc((n * n + 1) * sizeof(int))
    cdef int *seen = <int *> calloc(n + 1, sizeof(int))
    cdef int *tmp = <int *> malloc((n + 1) * sizeof(int))
    out = []
    try:
        st = _init_state(&s, n, origin, label, fibers, L)
        if st < 0:
            raise MemoryError()
        if st == 1:
            _rec(&s, 0, roots, seen, out, NULL, tmp)
    finally:
        _release(&s)
        free(roots); free(seen); free(tmp)
    return out


def score_quotients(int n, origin, label, fibers, forward, ms):
    """Census of fold-closed classifications passing efficiency and divisibility.

    Returns ``(census, best)``: ``census[i]`` maps ``-χ`` to the number of
    classifications whose signed edge multiplicities are divisible by
    ``ms[i]``; ``best[i]`` is ``(-χ, classes)`` for the first minimizer or None.
    """
    if not _fits(n, label, fibers) or n == 0:
        return _pykernels.score_quotients(n, origin, label, fibers, forward, ms)
    cdef State s
    cdef Scorer sc
    cdef int L = _label_slots(label)
    cdef int nm = len(ms), i, u, e
    cdef int ncensus = len(origin) // 2 + 2
    cdef int *roots = <int *> malloc((n * n + 1) * sizeof(int))
    cdef int *seen = <int *> calloc(n + 1, sizeof(int))
    cdef int *tmp = <int *> malloc((n + 1) * sizeof(int))
    sc.nm = nm
    sc.G = L // 2
    sc.ncensus = ncensus
    sc.ms = <int *> malloc((nm + 1) * sizeof(int))
    sc.fwd_slot = <int *> malloc(n * sizeof(int))
    sc.fwd_head = <int *> malloc(n * sizeof(int))
    sc.cnt = <int *> calloc(n * sc.G + 1, sizeof(int))
    sc.census = <long long *> calloc(nm * ncensus + 1, sizeof(long long))
    sc.best = <int *> malloc((nm + 1) * sizeof(int))
    sc.best_code = <int *> malloc((nm * n + 1) * sizeof(int))
    sc.stamp = <int *> malloc((n + 1) * sizeof(int))
    for i in range(nm):
        sc.ms[i] = ms[i]
        sc.best[i] = -1
    for u in range(n):
        e = forward[u]
        sc.fwd_slot[u] = _slot(label[e])
        sc.fwd_head[u] = origin[e ^ 1]
    try:
        st = _init_state(&s, n, origin, label, fibers, L)
        if st < 0:
            raise MemoryError()
        if st == 1:
            _rec(&s, 0, roots, seen, None, &sc, tmp)
        census = []
        best = []
        for i in range(nm):
            census.append({k: sc.census[i * ncensus + k] for k in range(ncensus) if sc.census[i * ncensus + k]})
            if sc.best[i] < 0:
                best.append(None)
            else:
                best.append((sc.best[i], tuple([sc.best_code[i * n + u] for u in range(n)])))
    finally:
        _release(&s)
        free(roots); free(seen); free(tmp)
        free(sc.ms); free(sc.fwd_slot); free(sc.fwd_head); free(sc.cnt); free(sc.census)
        free(sc.best); free(sc.best_code); free(sc.stamp)
    return census, best


cdef inline void _cycle_counts(int N, int *perm, int *seen, int *counts):
    cdef int s, j, ln
    for s in range(N + 1):
        counts[s] = 0
        seen[s] = 0
    for s in range(N):
        if not seen[s]:
            ln = 0
            j = s
            while not seen[j]:
                seen[j] = 1
                j = perm[j]
                ln += 1
            counts[ln] += 1


def _counts_to_type(counts_tuple):
    parts = []
    for ln in range(len(counts_tuple) - 1, 0, -1):
        parts.extend([ln] * counts_tuple[ln])
    return tuple(parts)


def sn_cycle_histogram(int N, perms, letters, int k):
    """Cycle type counts of the endpoint map of ``w`` over all ``k``-tuples of permutations."""
    cdef int P = len(perms), nl = len(letters)
    if k == 0 or P == 0:
        return _pykernels.sn_cycle_histogram(N, perms, letters, k)
    cdef int *fwd = <int *> malloc(P * N * sizeof(int))
    cdef int *inv = <int *> malloc(P * N * sizeof(int))
    cdef int *gen = <int *> malloc((nl + 1) * sizeof(int))
    cdef int *pos = <int *> malloc((nl + 1) * sizeof(int))
    cdef int *idx = <int *> calloc(k, sizeof(int))
    cdef int *cur = <int *> malloc((N + 1) * sizeof(int))
    cdef int *seen = <int *> malloc((N + 1) * sizeof(int))
    cdef int *counts = <int *> malloc((N + 1) * sizeof(int))
    cdef int i, j, x, c, t, g
    cdef int *table
    hist = {}
    try:
        for i in range(P):
            for j in range(N):
                x = perms[i][j]
                fwd[i * N + j] = x
                inv[i * N + x] = j
        for t in range(nl):
            x = letters[t]
            gen[t] = (x if x > 0 else -x) - 1
            pos[t] = 1 if x > 0 else 0
        while True:
            for j in range(N):
                c = j
                for t in range(nl):
                    g = gen[t]
                    table = (fwd if pos[t] else inv) + idx[g] * N
                    c = table[c]
                cur[j] = c
            _cycle_counts(N, cur, seen, counts)
            key = tuple([counts[j] for j in range(N + 1)])
            hist[key] = hist.get(key, 0) + 1
            i = k - 1
            while i >= 0:
                idx[i] += 1
                if idx[i] < P:
                    break
                idx[i] = 0
                i -= 1
            if i < 0:
                break
    finally:
        free(fwd); free(inv); free(gen); free(pos); free(idx); free(cur); free(seen); free(counts)
    return {_counts_to_type(key): v for key, v in hist.items()}


cdef void _wreath_subsets(int ncyc, int *clen, int *cvec, int size, int start, int remaining,
                          int *acc, int *lens, int nlens, int m, dict hist, int maxd):
    cdef int i, t, ok
    cdef int *top = acc + nlens * size
    if remaining == 0:
        ok = 1
        for t in range(size):
            if m == 0:
                if top[t] != 0:
                    ok = 0
                    break
            elif top[t] % m != 0:
                ok = 0
                break
        if ok:
            key = tuple(sorted([lens[i] for i in range(nlens)], reverse=True))
            hist[key] = hist.get(key, 0) + 1
        return
    for i in range(start, ncyc):
        if clen[i] > remaining:
            continue
        for t in range(size):
            acc[(nlens + 1) * size + t] = acc[nlens * size + t] + cvec[i * size + t]
        lens[nlens] = clen[i]
        _wreath_subsets(ncyc, clen, cvec, size, i + 1, remaining - clen[i],
                        acc, lens, nlens + 1, m, hist, maxd)


def wreath_histogram(int N, perms, letters, int k, int m, int d):
    """Cycle type counts of ``σ_w`` restricted to invariant ``d``-sets with balanced lifts."""
    cdef int P = len(perms), nl = len(letters)
    if k == 0 or P == 0 or d == 0:
        return _pykernels.wreath_histogram(N, perms, letters, k, m, d)
    cdef int size = k * N
    cdef int *fwd = <int *> malloc(P * N * sizeof(int))
    cdef int *inv = <int *> malloc(P * N * sizeof(int))
    cdef int *gen = <int *> malloc((nl + 1) * sizeof(int))
    cdef int *pos = <int *> malloc((nl + 1) * sizeof(int))
    cdef int *idx = <int *> calloc(k, sizeof(int))
    cdef int *ends = <int *> malloc((N + 1) * sizeof(int))
    cdef int *paths = <int *> malloc((N * size + 1) * sizeof(int))
    cdef int *seen = <int *> malloc((N + 1) * sizeof(int))
    cdef int *clen = <int *> malloc((N + 1) * sizeof(int))
    cdef int *cvec = <int *> malloc((N * size + 1) * sizeof(int))
    cdef int *acc = <int *> malloc(((d + 2) * size + 1) * sizeof(int))
    cdef int *lens = <int *> malloc((d + 2) * sizeof(int))
    cdef int i, j, s, t, g, x, ln, ncyc
    hist = {}
    try:
        for i in range(P):
            for j in range(N):
                x = perms[i][j]
                fwd[i * N + j] = x
                inv[i * N + x] = j
        for t in range(nl):
            x = letters[t]
            gen[t] = (x if x > 0 else -x) - 1
            pos[t] = 1 if x > 0 else 0
        while True:
            for j in range(N):
                for t in range(size):
                    paths[j * size + t] = 0
                s = j
                for t in range(nl):
                    g = gen[t]
                    if pos[t]:
                        paths[j * size + g * N + s] += 1
                        s = fwd[idx[g] * N + s]
                    else:
                        s = inv[idx[g] * N + s]
                        paths[j * size + g * N + s] -= 1
                ends[j] = s
            for j in range(N):
                seen[j] = 0
            ncyc = 0
            for s in range(N):
                if seen[s]:
                    continue
                for t in range(size):
                    cvec[ncyc * size + t] = 0
                ln = 0
                j = s
                while not seen[j]:
                    seen[j] = 1
                    for t in range(size):
                        cvec[ncyc * size + t] += paths[j * size + t]
                    j = ends[j]
                    ln += 1
                if ln <= d:
                    clen[ncyc] = ln
                    ncyc += 1
            for t in range(size):
                acc[t] = 0
            _wreath_subsets(ncyc, clen, cvec, size, 0, d, acc, lens, 0, m, hist, d)
            i = k - 1
            while i >= 0:
                idx[i] += 1
                if idx[i] < P:
                    break
                idx[i] = 0
                i -= 1
            if i < 0:
                break
    finally:
        free(fwd); free(inv); free(gen); free(pos); free(idx); free(ends); free(paths)
        free(seen); free(clen); free(cvec); free(acc); free(lens)
    return hist
