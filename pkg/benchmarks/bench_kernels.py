"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case calls both implementations on identical inputs, checks that the
outputs agree, and reports the best wall time of each.
"""
import argparse
import time
from itertools import permutations

from wordrank import _pykernels
from wordrank.graphs import cycle_graph, multi_cycle
from wordrank.words import parse_word

try:
    from wordrank import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _relabel(w):
    gens = sorted({abs(x) for x in w.letters})
    idx = {g: i + 1 for i, g in enumerate(gens)}
    return [idx[abs(x)] * (1 if x > 0 else -1) for x in w.letters], len(gens)


def cases():
    w = parse_word("aBcbbaCac")
    g, _ = cycle_graph(w)
    yield ("closed_partitions Γ_w, |w|=9", "closed_partitions",
           (g.num_vertices, g.origin, g.label, None))

    c = multi_cycle(parse_word("aabab"), (3,))
    yield ("score_quotients aabab, ν=(3)", "score_quotients",
           (c.P.num_vertices, c.P.origin, c.P.label, list(c.rho.vmap), c.forward, [0, 2, 3]))

    c = multi_cycle(parse_word("abAB"), (2, 2))
    yield ("score_quotients abAB, ν=(2,2)", "score_quotients",
           (c.P.num_vertices, c.P.origin, c.P.label, list(c.rho.vmap), c.forward, [0, 2, 3]))

    letters, k = _relabel(parse_word("abAB"))
    perms = list(permutations(range(6)))
    yield ("sn_cycle_histogram abAB, N=6", "sn_cycle_histogram", (6, perms, letters, k))

    perms5 = list(permutations(range(5)))
    yield ("wreath_histogram abAB, N=5, m=2, d=2", "wreath_histogram", (5, perms5, letters, k, 2, 2))


def best_time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn(*args)
        if not isinstance(res, (tuple, dict)):
            res = list(res)
        best = min(best, time.perf_counter() - t0)
        out = res
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'case':44s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn, fargs in cases():
        tp, rp = best_time(getattr(_pykernels, fn), fargs, args.repeat)
        tc, rc = best_time(getattr(_ckernels, fn), fargs, args.repeat)
        if rp != rc:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:44s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
