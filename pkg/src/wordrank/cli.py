"""Command-line interface: ``wordrank <command> ...``.

Commands print an InvariantReport (JSON by default). Exit status is 0 on
success, 2 when an enumeration cap is hit or an argument is invalid, and 1
when ``verify`` finds a mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence

from . import kernels
from .errors import ParseError, ResourceError, WordRankError
from .graphs import DEFAULT_MAX_VERTICES, cycle_graph, diagram_json
from .measures import (DEFAULT_MAX_TUPLES, beta_fit, expect_Sn, expect_wreath_phi, parse_partition,
                       stable_dimension_Sn, stable_dimension_wreath)
from .ranks import (DEFAULT_MAX_DEGREE, DEFAULT_SEARCH_MAX_VERTICES, bounded_sp_search,
                    bounded_spm_search, mod_m_rank, primitivity_rank)
from .ratlp import to_text
from .spm import stable_mod_m_rank
from .values import INFINITY, format_value, parse_value
from .whitehead import decorated_whitehead_graph
from .words import cyclic_reduce, parse_word, render

SCHEMA_VERSION = 1

SURJECTIVE_NOTE = ("quotients are taken onto the image of Γ_w only: restricting H to the image keeps "
                   "w in K_m and cannot raise the rank")


def _env_int(name: str, default):
    v = os.environ.get(name)
    if v is None or v == "":
        return default
    return int(v)


def _report(word: str, invariant: str, params: dict, value, started: float, caps: dict, **extra) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "word": word,
        "invariant": invariant,
        "params": params,
        "value": value if isinstance(value, (str, list)) else format_value(value),
        "timing_s": round(time.perf_counter() - started, 6),
        "caps": caps,
        "backend": kernels.BACKEND,
    }
    out.update(extra)
    return out


def _caps(args) -> dict:
    return {"max_degree": args.max_degree, "max_vertices": args.max_vertices}


def _write(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_pi(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    core, _ = cyclic_reduce(w)
    res = primitivity_rank(w, args.max_vertices)
    extra = {"quotients": res.quotients}
    if args.witness and res.witness is not None:
        extra["witness"] = {"delta": res.witness[0].to_json(), "vmap": list(res.witness[1].vmap)}
    if args.emit_graph and core:
        _write(args.emit_graph, json.dumps({"gamma_w": cycle_graph(core)[0].to_json(),
                                            "witness": res.witness[0].to_json() if res.witness else None}, indent=2))
    return _report(render(w), "pi", {}, res.value if res.value is INFINITY else Fraction(res.value), t0,
                   _caps(args), **extra)


def cmd_pim(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    res = mod_m_rank(w, args.m, args.max_vertices)
    extra = {"quotients": res.quotients}
    if args.explain:
        extra["note"] = SURJECTIVE_NOTE
    if args.witness and res.witness is not None:
        extra["witness"] = {"delta": res.witness[0].to_json(), "vmap": list(res.witness[1].vmap)}
    if args.emit_graph and res.witness is not None:
        _write(args.emit_graph, json.dumps(res.witness[0].to_json(), indent=2))
    return _report(render(w), "pim", {"m": args.m}, res.value if res.value is INFINITY else Fraction(res.value),
                   t0, _caps(args), **extra)


def cmd_spm(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    res = stable_mod_m_rank(w, args.m, connected_only=not args.all_pieces, witness=args.witness,
                            use_shortcuts=not args.no_shortcuts)
    extra: Dict[str, object] = {"pieces": res.pieces}
    if res.system is not None:
        extra["lp"] = {"vars": res.system.lp.num_vars, "rows": res.system.lp.num_rows}
        if args.emit_lp:
            _write(args.emit_lp, to_text(res.system.lp))
    if res.shortcut:
        extra["shortcut"] = res.shortcut
    if args.anchors_check and res.system is not None:
        values = {}
        for a in range(len(res.word)):
            values[str(a)] = format_value(stable_mod_m_rank(res.word, args.m, anchor=a,
                                                            connected_only=not args.all_pieces).value)
        extra["anchors"] = values
        extra["anchors_agree"] = len(set(values.values())) == 1
    if args.witness and res.witness is not None:
        extra["witness"] = res.witness.to_json()
    if args.emit_whitehead and res.word:
        _write(args.emit_whitehead, json.dumps(decorated_whitehead_graph(res.word).to_json(), indent=2))
    return _report(render(w), "spm", {"m": args.m, "all_pieces": args.all_pieces}, res.value, t0, _caps(args), **extra)


def _census(res) -> List[dict]:
    return [{"degree": d, "ratio": format_value(r), "count": c} for d, r, c in res.census_rows()]


def cmd_sp_bound(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    res = bounded_sp_search(w, args.max_degree, args.connected, args.max_vertices)
    pi = primitivity_rank(w).value
    extra = {"census": _census(res), "per_degree_seconds": res.per_degree_seconds,
             "pi_minus_1": format_value(pi if pi is INFINITY else Fraction(pi - 1))}
    if args.witness and res.best_diagram is not None:
        extra["witness"] = res.best_diagram.to_json()
    return _report(render(w), "sp-bound", {"connected_only": args.connected}, res.best_ratio, t0, _caps(args), **extra)


def cmd_diagrams(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    res = bounded_spm_search(w, args.m, args.max_degree, args.max_vertices, args.connected)
    extra = {"census": _census(res), "per_degree_seconds": res.per_degree_seconds}
    if args.witness and res.best_diagram is not None:
        extra["witness"] = res.best_diagram.to_json()
        if args.emit_graph:
            _write(args.emit_graph, diagram_json(res.best_diagram))
    return _report(render(w), "diagrams", {"m": args.m, "connected_only": args.connected}, res.best_ratio, t0,
                   _caps(args), **extra)


def _n_range(text: str) -> List[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def cmd_measure(args) -> dict:
    t0 = time.perf_counter()
    w = parse_word(args.word)
    mu = parse_partition(args.mu)
    Ns = _n_range(args.n_range)
    records, dims = [], []
    for N in Ns:
        if args.family == "sn":
            rec = expect_Sn(w, N, mu, args.max_tuples)
            dims.append(stable_dimension_Sn(mu, N))
        else:
            rec = expect_wreath_phi(w, N, args.m, mu, args.max_tuples)
            dims.append(stable_dimension_wreath(mu, N))
        records.append(rec)
    extra = {"series": [dict(r.to_json(), dim=dm) for r, dm in zip(records, dims)]}
    try:
        extra["beta_fit"] = beta_fit(records, dims).to_json()
    except WordRankError as exc:
        extra["beta_fit"] = {"error": str(exc), "diagnostic": True}
    values = [format_value(r.value) for r in records]
    return _report(render(w), "measure", {"family": args.family, "m": args.m, "mu": list(mu), "N": Ns},
                   values if len(values) != 1 else values[0], t0,
                   dict(_caps(args), max_tuples=args.max_tuples), **extra)


TABLE_WORDS = ["a", "aa", "aaa", "abAB", "aabb", "aBcbbaCac"]
TABLE_MODULI = [0, 2, 3, 4]


def cmd_table(args) -> dict:
    t0 = time.perf_counter()
    rows = []
    for s in TABLE_WORDS:
        w = parse_word(s)
        pi = primitivity_rank(w).value
        row = {"word": s, "pi": format_value(pi if pi is INFINITY else Fraction(pi)),
               "sp_upper(pi-1)": format_value(pi if pi is INFINITY else Fraction(pi - 1))}
        for m in TABLE_MODULI:
            row[f"spm{m}"] = format_value(stable_mod_m_rank(w, m).value)
        rows.append(row)
    return _report("", "table", {"moduli": TABLE_MODULI}, [r["word"] for r in rows], t0, _caps(args), rows=rows)


# ---------------------------------------------------------------- verify

def default_corpus() -> str:
    return resources.files("wordrank").joinpath("data/default_corpus.txt").read_text()


def parse_corpus(text: str) -> List[dict]:
    checks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=>" not in line:
            raise ParseError(f"line {lineno}: expected '<command> <args> => <expected>'", lineno)
        cmd, expected = line.rsplit("=>", 1)
        argv = shlex.split(cmd)
        if not argv or not expected.strip():
            raise ParseError(f"line {lineno}: empty command or expected value", lineno)
        checks.append({"line": lineno, "argv": argv, "expected": expected.strip()})
    return checks


def _values_equal(actual, expected: str) -> bool:
    if isinstance(actual, list):
        exp = [x.strip() for x in expected.split(",")]
        return len(exp) == len(actual) and all(_values_equal(a, e) for a, e in zip(actual, exp))
    try:
        return parse_value(str(actual)) == parse_value(expected)
    except (ValueError, ZeroDivisionError):
        return str(actual) == expected


def run_check(check: dict) -> dict:
    argv = check["argv"]
    try:
        report = run(argv)
        actual = report["value"]
        ok = _values_equal(actual, check["expected"])
    except WordRankError as exc:
        actual = f"error: {exc}"
        ok = check["expected"].startswith("error")
    return {"line": check["line"], "command": " ".join(argv), "expected": check["expected"],
            "actual": actual, "pass": ok}


def cmd_verify(args) -> dict:
    t0 = time.perf_counter()
    text = default_corpus() if args.corpus is None else open(args.corpus).read()
    checks = parse_corpus(text)
    if args.only:
        wanted = set(args.only.split(","))
        checks = [c for c in checks if c["argv"][0] in wanted]
    if args.threads and args.threads > 1 and len(checks) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run_check, checks))
    else:
        results = [run_check(c) for c in checks]
    failed = [r for r in results if not r["pass"]]
    return _report("", "verify", {"corpus": args.corpus or "<built-in>", "only": args.only},
                   "pass" if not failed else "fail", t0, _caps(args),
                   checks=results, passed=len(results) - len(failed), failed=len(failed),
                   failures=[f"line {r['line']}: {r['command']}" for r in failed])


# ---------------------------------------------------------------- parsing and output

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(v):
        return argparse.SUPPRESS if suppress else v
    parser.add_argument("--format", choices=["json", "csv", "text"], default=d("json"))
    parser.add_argument("--threads", type=int, default=d(_env_int("WORDRANK_THREADS", 1)))
    parser.add_argument("--max-degree", type=int, default=d(_env_int("WORDRANK_MAX_DEGREE", DEFAULT_MAX_DEGREE)))
    parser.add_argument("--max-vertices", type=int, default=d(None),
                        help="cap on enumerated graph size (default 12 for π, 24 for bounded searches)")
    parser.add_argument("--max-tuples", type=int, default=d(_env_int("WORDRANK_MAX_TUPLES", DEFAULT_MAX_TUPLES)))
    parser.add_argument("--emit-lp", metavar="PATH", default=d(None))
    parser.add_argument("--emit-graph", metavar="PATH", default=d(None))
    parser.add_argument("--witness", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordrank", description="Primitivity ranks and word measures in free groups.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    p = sub.add_parser("pi", parents=[common], help="primitivity rank π(w)")
    p.add_argument("word")
    p.set_defaults(func=cmd_pi, kind="pi")

    p = sub.add_parser("pim", parents=[common], help="mod-m primitivity rank π^(m)(w)")
    p.add_argument("word")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--explain", action="store_true")
    p.set_defaults(func=cmd_pim, kind="pi")

    p = sub.add_parser("spm", parents=[common], help="stable mod-m primitivity rank via the exact LP")
    p.add_argument("word")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--all-pieces", action="store_true", help="use every piece, not only connected ones")
    p.add_argument("--anchors-check", action="store_true", help="re-solve with every degree anchor")
    p.add_argument("--no-shortcuts", action="store_true")
    p.add_argument("--emit-whitehead", metavar="PATH")
    p.set_defaults(func=cmd_spm, kind="spm")

    p = sub.add_parser("sp-bound", parents=[common], help="bounded-degree upper bound for sπ(w)")
    p.add_argument("word")
    p.add_argument("--connected", action="store_true", help="single-cycle covers only")
    p.set_defaults(func=cmd_sp_bound, kind="search")

    p = sub.add_parser("diagrams", parents=[common], help="bounded-degree diagram search for sπ^(m)(w)")
    p.add_argument("word")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--connected", action="store_true")
    p.set_defaults(func=cmd_diagrams, kind="search")

    p = sub.add_parser("measure", parents=[common], help="exact word-measure expectations")
    p.add_argument("word")
    p.add_argument("--family", choices=["sn", "wreath"], default="sn")
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--mu", default="1")
    p.add_argument("--n-range", default="3..5")
    p.set_defaults(func=cmd_measure, kind="measure")

    p = sub.add_parser("verify", parents=[common], help="run a regression corpus")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--only", help="comma-separated command names to run")
    p.set_defaults(func=cmd_verify, kind="verify")

    p = sub.add_parser("table", parents=[common], help="implemented subset of the value table")
    p.set_defaults(func=cmd_table, kind="table")
    return parser


def _resolve_caps(args) -> None:
    if args.max_vertices is None:
        env = _env_int("WORDRANK_MAX_VERTICES", None)
        if env is not None:
            args.max_vertices = env
        elif args.kind == "search":
            args.max_vertices = DEFAULT_SEARCH_MAX_VERTICES
        else:
            args.max_vertices = DEFAULT_MAX_VERTICES


def run(argv: Sequence[str]) -> dict:
    """Parse ``argv`` and return the report (raises WordRankError on failure)."""
    args = build_parser().parse_args(list(argv))
    _resolve_caps(args)
    return args.func(args)


def _flat_rows(report: dict) -> List[dict]:
    if report["invariant"] == "table":
        return report["rows"]
    if report["invariant"] == "verify":
        return [{"line": c["line"], "command": c["command"], "expected": c["expected"],
                 "actual": c["actual"], "pass": c["pass"]} for c in report["checks"]]
    if report["invariant"] == "measure":
        return [{"word": report["word"], "family": s["family"], "m": s["m"], "mu": ",".join(map(str, s["mu"])),
                 "N": s["N"], "value": s["value"], "dim": s["dim"]} for s in report["series"]]
    row = {"word": report["word"], "invariant": report["invariant"]}
    for k, v in report["params"].items():
        row[k] = v
    row["value"] = report["value"]
    row["timing_s"] = report["timing_s"]
    return [row]


def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, default=str)
    rows = _flat_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        fields: List[str] = []
        for r in rows:
            for k in r:
                if k not in fields:
                    fields.append(k)
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in rows:
        lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    _resolve_caps(args)
    try:
        report = args.func(args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2
    except WordRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render_report(report, args.format))
    if args.command == "verify" and report["value"] != "pass":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
