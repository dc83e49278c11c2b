"""Command-line front end.

Every invocation emits exactly one output envelope to stdout:

    {"command": ..., "parameters": ..., "result": ..., "timing": ...,
     "cache_stats": ...}   (cache_stats only when a cache is attached)

Serialization convention: values that live in the number space (elements,
bounds, excursions, minima) are decimal strings, so arbitrary precision
survives JSON; structural quantities (levels, step counts, sizes, worker
counts, seeds) are plain integers.

Exit status: 0 success; 1 usage error; 2 domain, resource, or cache error;
3 mathematical finding (a cycle, a lemma failure, a sufficient-set
violation, or a range that could not be fully verified).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import bookkeeping, core, quotient, verify
from .cache import OrbitCache
from .errors import CacheError, DomainError, ResourceLimitError

__all__ = ["main"]

_FAILURE_SAMPLE_LIMIT = 20


class _Parser(argparse.ArgumentParser):
    # Usage problems must exit 1; argparse's default is 2, which this tool
    # reserves for domain and cache errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON envelope output (default)")
    fmt.add_argument("--csv", action="store_true", help="flattened key,value CSV output")
    common.add_argument("--cache", metavar="PATH",
                        help="orbit cache file (overrides COLLATZ_CACHE)")
    common.add_argument("--quiet", action="store_true",
                        help="suppress informational notices on stderr")

    parser = _Parser(prog="collatzq",
                     description="Accelerated Collatz map, quotient classes, and verification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("orbit", parents=[common], help="forward trajectory of one element")
    p.add_argument("x", type=int)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--trace", action="store_true", help="include the full trajectory")

    p = sub.add_parser("map", parents=[common], help="apply one map to one element")
    p.add_argument("x", type=int)
    p.add_argument("--op", choices=["T", "S", "xi", "tau", "f"], default="T")
    p.add_argument("--k", type=int, default=None,
                   help="iteration count for S (>= 0) and f (signed)")

    p = sub.add_parser("preimage", parents=[common], help="preimages of an element up to a bound")
    p.add_argument("y", type=int)
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--u0-only", action="store_true")

    p = sub.add_parser("class", parents=[common], help="level-n equivalence class on a window")
    p.add_argument("x", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--method", choices=["scan", "bfs"], default="scan")

    p = sub.add_parser("class-inf", parents=[common], help="limit-level class on a window")
    p.add_argument("x", type=int)
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--cap", type=int, default=1_000)

    p = sub.add_parser("delta", parents=[common], help="minimal class element at one or many levels")
    p.add_argument("x", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--n", type=int, default=None)
    mode.add_argument("--sequence", action="store_true")
    p.add_argument("--max-n", type=int, default=10, help="last level for --sequence")

    p = sub.add_parser("merge", parents=[common], help="first level at which two elements merge")
    p.add_argument("x", type=int)
    p.add_argument("z", type=int)
    p.add_argument("--cap", type=int, default=1_000)

    p = sub.add_parser("tstar", parents=[common], help="induced map on minimal representatives")
    p.add_argument("x", type=int)
    p.add_argument("--cap", type=int, default=1_000)

    p = sub.add_parser("partition", parents=[common], help="level-n partition of a window")
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("witness", parents=[common],
                       help="element separating consecutive levels")
    p.add_argument("x", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--search-cap", type=int, default=10**6)

    p = sub.add_parser("matrix", parents=[common],
                       help="bookkeeping window: classes and minima around a base")
    p.add_argument("x", type=int)
    p.add_argument("--k-min", type=int, default=-3)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--bound", type=int, default=10_000)

    p = sub.add_parser("census", parents=[common], help="class-of-one growth per level")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--bound", type=int, default=10_000)

    p = sub.add_parser("suffset", parents=[common], help="sufficient set check or membership")
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--members", action="store_true")

    p = sub.add_parser("appendix-class", parents=[common],
                       help="union of limit-level classes along a two-sided orbit")
    p.add_argument("x", type=int)
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--k-range", type=int, default=3)
    p.add_argument("--cap", type=int, default=1_000)

    pv = sub.add_parser("verify", parents=[common], help="verification commands")
    vsub = pv.add_subparsers(dest="verify_mode", required=True, parser_class=_Parser)

    p = vsub.add_parser("lemmas", parents=[common], help="run the lemma check suite")
    p.add_argument("--bound", type=int, default=10_000)
    p.add_argument("--n-cap", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = vsub.add_parser("range", parents=[common], help="verify a range reaches 1")
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=10_000)

    return parser


# --------------------------------------------------------------------------
# command handlers: each returns (parameters, result, exit_code)

def _cmd_orbit(ns, cache):
    params = {"x": str(ns.x), "max_steps": ns.max_steps, "trace": bool(ns.trace)}
    if ns.trace:
        rec = core.orbit(ns.x, max_steps=ns.max_steps, keep_prefix=True)
    else:
        entry = cache.lookup(ns.x) if cache is not None else None
        if entry is not None:
            rec = core.OrbitRecord(start=ns.x, steps_to_one=entry.steps,
                                   max_excursion=entry.max_excursion,
                                   trajectory_prefix=None, truncated=False)
        else:
            rec = core.orbit(ns.x, max_steps=ns.max_steps)
            if cache is not None and rec.steps_to_one is not None:
                cache.store(ns.x, rec.steps_to_one, rec.max_excursion)
    result = {
        "start": str(rec.start),
        "steps_to_one": rec.steps_to_one,
        "max_excursion": str(rec.max_excursion),
        "truncated": rec.truncated,
        "cycle_value": None if rec.cycle_value is None else str(rec.cycle_value),
    }
    if rec.trajectory_prefix is not None:
        result["trajectory"] = [str(v) for v in rec.trajectory_prefix]
    return params, result, 3 if rec.cycle_value is not None else 0


def _cmd_map(ns, cache):
    op, x, k = ns.op, ns.x, ns.k
    if op in ("T", "xi", "tau") and k is not None:
        raise DomainError(f"--k does not apply to op {op}")
    params = {"x": str(x), "op": op}
    if op == "T":
        value = core.collatz_step(x)
    elif op == "xi":
        value = core.xi(x)
    elif op == "tau":
        value = core.tau(x)
    elif op == "S":
        k = 1 if k is None else k
        params["k"] = k
        value = core.shift(x, k)
    else:
        k = 1 if k is None else k
        params["k"] = k
        value = core.iterate(x, k)
    return params, {"input": str(x), "op": op, "value": str(value)}, 0


def _cmd_preimage(ns, cache):
    params = {"y": str(ns.y), "bound": str(ns.bound), "u0_only": bool(ns.u0_only)}
    pres = core.preimages(ns.y, ns.bound, u0_only=ns.u0_only)
    return params, {"preimages": [str(z) for z in pres], "count": len(pres)}, 0


def _cmd_class(ns, cache):
    params = {"x": str(ns.x), "n": ns.n, "bound": str(ns.bound), "method": ns.method}
    win = quotient.class_n(ns.x, ns.n, ns.bound, method=ns.method)
    result = {
        "base": str(win.base),
        "level": win.level,
        "bound": str(win.bound),
        "members": [str(z) for z in win.members],
        "count": len(win.members),
    }
    return params, result, 0


def _cmd_class_inf(ns, cache):
    params = {"x": str(ns.x), "bound": str(ns.bound), "cap": ns.cap}
    win = quotient.class_inf(ns.x, ns.bound, ns.cap)
    result = {
        "base": str(win.base),
        "bound": str(win.bound),
        "members": [str(z) for z in win.members],
        "count": len(win.members),
        "exact_within_bound": win.exact_within_bound,
    }
    return params, result, 0


def _cmd_delta(ns, cache):
    if ns.sequence:
        params = {"x": str(ns.x), "sequence": True, "max_n": ns.max_n}
        seq = quotient.delta_sequence(ns.x, ns.max_n)
        result = {
            "values": [str(v) for v in seq.values],
            "stabilization_index": seq.stabilization_index,
        }
        return params, result, 0
    n = 1 if ns.n is None else ns.n
    params = {"x": str(ns.x), "n": n}
    return params, {"value": str(quotient.delta_n(ns.x, n))}, 0


def _cmd_merge(ns, cache):
    params = {"x": str(ns.x), "z": str(ns.z), "cap": ns.cap}
    res = quotient.merge(ns.x, ns.z, ns.cap)
    return params, {"merge_time": res.merge_time, "decided": res.merge_time is not None}, 0


def _cmd_tstar(ns, cache):
    params = {"x": str(ns.x), "cap": ns.cap}
    return params, {"value": str(quotient.tstar_apply(ns.x, ns.cap))}, 0


def _cmd_partition(ns, cache):
    params = {"bound": str(ns.bound), "n": ns.n}
    cells = quotient.partition_n(ns.bound, ns.n)
    result = {
        "cell_count": len(cells),
        "cells": [
            {"base": str(c.base), "size": len(c.members),
             "members": [str(z) for z in c.members]}
            for c in cells
        ],
    }
    return params, result, 0


def _cmd_witness(ns, cache):
    params = {"x": str(ns.x), "n": ns.n, "search_cap": str(ns.search_cap)}
    z = quotient.strict_inclusion_witness(ns.x, ns.n, search_cap=ns.search_cap)
    return params, {"witness": str(z)}, 0


def _cmd_matrix(ns, cache):
    params = {"x": str(ns.x), "k_min": ns.k_min, "k_max": ns.k_max,
              "n_max": ns.n_max, "bound": str(ns.bound)}
    window = bookkeeping.class_matrices(ns.x, k_min=ns.k_min, k_max=ns.k_max,
                                        n_max=ns.n_max, bound=ns.bound)
    tails = bookkeeping.row_tail_analysis(window)
    rows = []
    for k in range(ns.k_min, ns.k_max + 1):
        stab, tail_value = tails[k]
        rows.append({
            "k": k,
            "minima": [str(window.minima[(k, n)]) for n in range(ns.n_max + 1)],
            "cell_sizes": [len(window.class_cells[(k, n)].members)
                           for n in range(ns.n_max + 1)],
            "stabilizes_at": stab,
            "tail_value": str(tail_value),
        })
    result = {"rows": rows, "delta_star_window": str(window.delta_star_window)}
    return params, result, 0


def _cmd_census(ns, cache):
    params = {"n_max": ns.n_max, "bound": str(ns.bound)}
    counts = bookkeeping.census_class_of_one(ns.n_max, ns.bound)
    result = {"counts": [{"level": n, "count": c} for n, c in counts]}
    return params, result, 0


def _cmd_suffset(ns, cache):
    if ns.members:
        params = {"bound": str(ns.bound), "members": True}
        members = bookkeeping.sufficient_set_members(ns.bound)
        return params, {"members": [str(z) for z in members], "count": len(members)}, 0
    params = {"bound": str(ns.bound), "members": False}
    report = bookkeeping.sufficient_set_check(ns.bound)
    result = {
        "violations": [str(z) for z in report.violations],
        "violation_count": len(report.violations),
        "tau_nu2_histogram": report.tau_nu2_histogram,
    }
    return params, result, 3 if report.violations else 0


def _cmd_appendix_class(ns, cache):
    params = {"x": str(ns.x), "bound": str(ns.bound), "k_range": ns.k_range, "cap": ns.cap}
    win = bookkeeping.connected_class(ns.x, ns.bound, ns.k_range, ns.cap)
    result = {
        "base": str(win.base),
        "members": [str(z) for z in win.members],
        "count": len(win.members),
        "exact_within_bound": win.exact_within_bound,
    }
    return params, result, 0


def _cmd_verify_lemmas(ns, cache):
    params = {"bound": str(ns.bound), "n_cap": ns.n_cap, "seed": ns.seed}
    results = verify.run_lemma_suite(ns.bound, n_cap=ns.n_cap, sample_seed=ns.seed)
    total_failures = sum(len(r.failures) for r in results)
    checks = []
    for r in results:
        checks.append({
            "check_id": r.check_id,
            "range": r.range_description,
            "instances": r.instances_tested,
            "failure_count": len(r.failures),
            "failures": [_stringify(f) for f in r.failures[:_FAILURE_SAMPLE_LIMIT]],
            "elapsed": round(r.elapsed, 6),
        })
    result = {"checks": checks, "all_passed": total_failures == 0,
              "total_instances": sum(r.instances_tested for r in results)}
    return params, result, 3 if total_failures else 0


def _cmd_verify_range(ns, cache):
    params = {"from": str(ns.lo), "to": str(ns.hi), "jobs": ns.jobs,
              "max_steps": ns.max_steps}
    report = verify.verify_conjecture_range(ns.lo, ns.hi, max_steps=ns.max_steps,
                                            workers=ns.jobs, cache=cache)
    result = {
        "lo": str(report.lo),
        "hi": str(report.hi),
        "elements_checked": report.elements_checked,
        "all_reach_one": report.all_reach_one,
        "max_steps_observed": report.max_steps_observed,
        "max_excursion_observed": str(report.max_excursion_observed),
        "cycles_found": [str(z) for z in report.cycles_found],
        "truncated_elements": [str(z) for z in report.truncated_elements],
    }
    return params, result, 0 if report.all_reach_one else 3


def _stringify(obj):
    # Replayable failure payloads: every integer becomes a decimal string
    # (bools stay bools), containers recurse.
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    return obj


_HANDLERS = {
    "orbit": _cmd_orbit,
    "map": _cmd_map,
    "preimage": _cmd_preimage,
    "class": _cmd_class,
    "class-inf": _cmd_class_inf,
    "delta": _cmd_delta,
    "merge": _cmd_merge,
    "tstar": _cmd_tstar,
    "partition": _cmd_partition,
    "witness": _cmd_witness,
    "matrix": _cmd_matrix,
    "census": _cmd_census,
    "suffset": _cmd_suffset,
    "appendix-class": _cmd_appendix_class,
    "verify lemmas": _cmd_verify_lemmas,
    "verify range": _cmd_verify_range,
}

_CACHED_COMMANDS = {"orbit", "verify range"}


def _resolve_cache(ns) -> OrbitCache | None:
    path = ns.cache or os.environ.get("COLLATZ_CACHE")
    if not path:
        return None
    cache = OrbitCache(path)
    if cache.created and not ns.quiet:
        print(f"collatzq: created new cache file at {path}", file=sys.stderr)
    return cache


def _emit_json(env) -> str:
    return json.dumps(env, indent=2) + "\n"


def _csv_scalar(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value)


def _flatten(value, prefix, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(v, f"{prefix}.{i}", rows)
    else:
        rows.append((prefix, _csv_scalar(value)))


def _emit_csv(env) -> str:
    rows: list[tuple[str, str]] = []
    _flatten(env, "", rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1

    command = ns.command if ns.command != "verify" else f"verify {ns.verify_mode}"
    cache = None
    try:
        if command in _CACHED_COMMANDS:
            cache = _resolve_cache(ns)
    except CacheError as exc:
        print(f"collatzq: cache error: {exc}", file=sys.stderr)
        return 2

    start = time.perf_counter()
    try:
        params, result, code = _HANDLERS[command](ns, cache)
    except (DomainError, ResourceLimitError) as exc:
        print(f"collatzq: error: {exc}", file=sys.stderr)
        return 2
    except CacheError as exc:
        print(f"collatzq: cache error: {exc}", file=sys.stderr)
        return 2

    env = {
        "command": command,
        "parameters": params,
        "result": result,
        "timing": round(time.perf_counter() - start, 6),
    }
    if cache is not None:
        env["cache_stats"] = {"hits": cache.hits, "misses": cache.misses}
    sys.stdout.write(_emit_csv(env) if ns.csv else _emit_json(env))
    return code
