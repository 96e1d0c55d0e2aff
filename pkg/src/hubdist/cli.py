"""Command-line surface: graph generation, label building, querying,
verification, statistics, benchmarking, and the size/time tradeoff sweep.

Exit codes: 0 success, 1 invalid input values, 2 usage errors (argparse),
3 verification found violations, 4 file or container I/O failure.

Sweep CSV columns (fixed):
    scheme,n,m,max_degree,param,radius,max_label_bits,avg_label_bits,
    max_hub,build_seconds,ns_per_query,verify_status
where param is the requested budget (T) or degree threshold (tau), radius
is the built ball radius, ns_per_query is the median over >= 10^5 random
queries, and verify_status is ok/fail.

Worker threads for exhaustive verification come from --threads, else the
HUBDIST_THREADS environment variable, else 1.  Builds and benches are
single-threaded: builds for byte-determinism, benches for stable timings.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import labelio
from .additive import (
    build_additive,
    build_correction,
    decode_corrected_batch,
    decode_exact_via_correction,
    decode_one_additive,
)
from .bench import bench_queries, probe_decode
from .generators import GENERATORS
from .graph import format_graph, load_graph
from .labels import build_exact_avg, build_full_labels, hub_stats
from .oracle import MODES, verify, verify_sample

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY = 3
EXIT_IO = 4

THREADS_ENV = "HUBDIST_THREADS"

CSV_HEADER = (
    "scheme,n,m,max_degree,param,radius,max_label_bits,avg_label_bits,"
    "max_hub,build_seconds,ns_per_query,verify_status"
)

# positional size shorthands per generator kind, in order
_GEN_KEYS = {
    "path": ("n",),
    "cycle": ("n",),
    "grid": ("rows", "cols"),
    "star": ("leaves",),
    "random-regular": ("n", "d"),
    "erdos-renyi": ("n", "m"),
}


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{THREADS_ENV}={env!r} is not an integer")
    return 1


def _parse_gen_params(kind: str, tokens: list[str], default_seed: int):
    kv: dict[str, int] = {}
    bare: list[int] = []
    for tok in tokens:
        if "=" in tok:
            key, _, val = tok.partition("=")
            try:
                kv[key] = int(val)
            except ValueError:
                raise ValueError(f"parameter {tok!r} is not key=integer")
        else:
            try:
                bare.append(int(tok))
            except ValueError:
                raise ValueError(f"parameter {tok!r} is not an integer")
    keys = _GEN_KEYS[kind]
    if len(bare) > len(keys):
        raise ValueError(f"too many bare sizes for {kind}")
    for key, val in zip(keys, bare):
        kv.setdefault(key, val)
    seed = kv.pop("seed", default_seed)
    if kind == "grid" and "rows" in kv:
        kv.setdefault("cols", kv["rows"])
    extra = sorted(set(kv) - set(keys))
    if extra:
        raise ValueError(f"unknown parameter(s) for {kind}: {', '.join(extra)}")
    missing = [k for k in keys if k not in kv]
    if missing:
        raise ValueError(f"{kind} needs {', '.join(missing)}")
    return kv, seed


def _cmd_gen(args) -> int:
    kv, seed = _parse_gen_params(args.kind, args.params, args.seed)
    fn = GENERATORS[args.kind]
    if args.kind in ("erdos-renyi", "random-regular"):
        g = fn(**kv, seed=seed)
    else:
        g = fn(**kv)
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: n={g.n} m={g.m}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build(g, scheme: str, param: int | None):
    if scheme == "exact":
        if param is None:
            raise ValueError("exact scheme needs --T")
        return build_exact_avg(g, param)
    if scheme == "full":
        return build_full_labels(g)
    return build_additive(g, param)


def _cmd_build(args) -> int:
    g = load_graph(args.graph)
    param = args.T if args.scheme == "exact" else args.tau
    t0 = time.perf_counter()
    labels = _build(g, args.scheme, param)
    correction = None
    if args.correction:
        correction = build_correction(g, labels, kind=args.correction)
    secs = time.perf_counter() - t0
    labelio.save(labels, args.out, correction)
    st = hub_stats(labels)
    size = Path(args.out).stat().st_size
    print(
        f"scheme {labels.scheme} param {labels.param}: "
        f"n={g.n} m={g.m} built in {secs:.3f}s"
    )
    print(
        f"max label bits {st['max_label_bits']}, avg {st['avg_label_bits']:.1f}, "
        f"max hub {st['max_hub']}"
    )
    if correction is not None:
        print(f"correction {correction.kind}: {correction.bits_per_node} bits/node")
    print(f"wrote {args.out} ({size} bytes)")
    return EXIT_OK


def _load_labels(path: str):
    got = labelio.load(path)
    if isinstance(got, tuple):
        return got
    return got, None


def _cmd_query(args) -> int:
    labels, corr = _load_labels(args.labels)
    if args.graph:
        g = load_graph(args.graph)
        if g.graph_hash() != labels.graph_hash:
            raise ValueError("labels were not built from this graph (hash mismatch)")
    if corr is None:
        d = labels.decode(args.u, args.v)
    elif corr.kind == "exact":
        d = decode_exact_via_correction(labels, corr, args.u, args.v)
    else:
        d = decode_one_additive(labels, corr, args.u, args.v)
    print(d)
    return EXIT_OK


def _default_mode(labels, corr) -> str:
    if corr is not None:
        return "corrected-exact" if corr.kind == "exact" else "additive1"
    return "additive2" if labels.scheme == "additive" else "exact"


def _cmd_verify(args) -> int:
    labels, corr = _load_labels(args.labels)
    g = load_graph(args.graph)
    if g.graph_hash() != labels.graph_hash:
        raise ValueError("labels were not built from this graph (hash mismatch)")
    mode = args.mode or _default_mode(labels, corr)
    decode = None
    if corr is not None and mode in ("corrected-exact", "additive1"):
        decode = lambda us, vs: decode_corrected_batch(labels, corr, us, vs)
    threads = _resolve_threads(args.threads)
    if args.sample:
        sources = min(g.n, max(1, args.sample // 400))
        targets = -(-args.sample // sources)
        report = verify_sample(labels, g, sources, targets, seed=args.seed, mode=mode, decode=decode)
    else:
        report = verify(labels, g, mode, decode=decode, threads=threads)
    print(report.text())
    if report.ok:
        print("OK, 0 violations")
        return EXIT_OK
    tail = "+" if report.truncated else ""
    print(f"FAIL, {len(report.violations)}{tail} violations")
    return EXIT_VERIFY


def _cmd_stats(args) -> int:
    labels, corr = _load_labels(args.labels)
    st = hub_stats(labels)
    total_bits = int(labels.nbits.sum())
    print(f"scheme: {labels.scheme}")
    print(f"nodes: {labels.n}")
    if labels.n_orig != labels.n:
        print(f"original nodes: {labels.n_orig} (degree-split build)")
    print(f"graph hash: {labels.graph_hash:#018x}")
    print(f"param: {labels.param}")
    print(f"degree bound: {labels.degree_bound}")
    print(f"radius: {labels.radius}")
    print(f"max hub entries: {st['max_hub']}")
    print(f"avg hub entries: {st['avg_hub']:.1f}")
    print(f"max label bits: {st['max_label_bits']}")
    print(f"avg label bits: {st['avg_label_bits']:.1f}")
    print(f"total label bits: {total_bits}")
    if corr is not None:
        print(f"correction: {corr.kind}, {corr.bits_per_node} bits/node")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    g = load_graph(args.graph)
    try:
        params = [int(x) for x in args.params.split(",")]
    except ValueError:
        raise ValueError(f"--params {args.params!r} is not a comma-separated integer list")
    if not params:
        raise ValueError("--params is empty")
    threads = _resolve_threads(args.threads)
    max_deg = int(np.diff(g.indptr).max()) if g.n else 0
    mode = "additive2" if args.scheme == "additive" else "exact"
    lines = [CSV_HEADER]
    all_ok = True
    for p in params:
        t0 = time.perf_counter()
        labels = _build(g, args.scheme, p)
        secs = time.perf_counter() - t0
        st = hub_stats(labels)
        dec = probe_decode(labels)
        if g.n <= 1024:
            report = verify(labels, g, mode, decode=dec, threads=threads)
        else:
            report = verify_sample(labels, g, 250, 400, seed=args.seed, mode=mode, decode=dec)
        res = bench_queries(labels, seed=args.seed)
        status = "ok" if report.ok else "fail"
        all_ok = all_ok and report.ok
        lines.append(
            f"{args.scheme},{g.n},{g.m},{max_deg},{p},{labels.radius},"
            f"{st['max_label_bits']},{st['avg_label_bits']:.1f},{st['max_hub']},"
            f"{secs:.3f},{res.ns_median:.1f},{status}"
        )
        print(
            f"param {p}: built in {secs:.3f}s, verify {status}, "
            f"median {res.ns_median:.1f} ns/query",
            file=sys.stderr,
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_ok else EXIT_VERIFY


def _cmd_bench(args) -> int:
    labels, _ = _load_labels(args.labels)
    res = bench_queries(labels, n_queries=args.queries, seed=args.seed)
    print(f"queries: {res.queries}")
    print(f"ns per query (median): {res.ns_median:.1f}")
    print(f"ns per query (mean): {res.ns_mean:.1f}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hubdist",
        description="Hub-based distance labels for undirected {0,1}-cost graphs.",
        epilog=(
            "exit codes: 0 ok, 1 invalid input, 2 usage, "
            "3 verification failure, 4 I/O failure"
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="write a generated graph as text")
    p.add_argument("kind", choices=sorted(_GEN_KEYS))
    p.add_argument(
        "params",
        nargs="*",
        help="bare size (e.g. 'gen path 5') or key=value pairs (n=, m=, d=, rows=, cols=, leaves=, seed=)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("build", help="build labels for a graph file")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=["exact", "full", "additive"], required=True)
    p.add_argument("--T", type=int, help="ball size budget (exact scheme)")
    p.add_argument("--tau", type=int, help="degree threshold (additive scheme; default from n)")
    p.add_argument(
        "--correction",
        choices=["exact", "one_additive"],
        help="also build a distance correction table (additive scheme)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("query", help="decode one distance from saved labels")
    p.add_argument("labels")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.add_argument("--graph", help="optional graph file to check the labels against")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("verify", help="check decoded distances against the oracle")
    p.add_argument("labels")
    p.add_argument("graph")
    p.add_argument("--mode", choices=sorted(MODES), help="tolerance mode (default by scheme)")
    p.add_argument("--sample", type=int, metavar="PAIRS", help="sampled pairs instead of exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="print label statistics (container overhead excluded)")
    p.add_argument("labels")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("sweep", help="build+verify+bench per parameter, emit CSV")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=["exact", "full", "additive"], default="exact")
    p.add_argument("--params", required=True, help="comma-separated T or tau values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bench", help="time random queries on saved labels")
    p.add_argument("labels")
    p.add_argument("--queries", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except labelio.ContainerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
