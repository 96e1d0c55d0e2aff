"""Query timing helpers: single-threaded, chunked, median-reported.

The merging batch decoder amortizes a full layer decode per query, which
hides how label sizes change with the build budget.  Timing goes through
the probing decoder instead: each ball entry is looked up in the other
side's layer set, so per-query cost follows the ball sizes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _labelops as lops
from .labels import LabelSet


@dataclass(frozen=True)
class BenchResult:
    queries: int
    chunk: int
    ns_median: float
    ns_mean: float


def probe_decode(labels: LabelSet):
    """Batch decode callable backed by the probing kernel where one exists.

    Results match labels.decode_batch; only the access pattern differs.
    Full labels are already probe-shaped and additive labels fall back to
    the merging kernel."""
    if labels.scheme != "exact":
        return labels.decode_batch

    def run(us, vs):
        us = np.asarray(us, np.int64)
        vs = np.asarray(vs, np.int64)
        if labels.fwd is not None:
            us = labels.fwd[us].astype(np.int64)
            vs = labels.fwd[vs].astype(np.int64)
        out = np.empty(len(us), np.int64)
        lops.decode_exact_probe_batch(
            labels.words, labels.start, labels.wn, labels.name0, labels.comp, us, vs, out
        )
        return out

    return run


def bench_queries(
    labels: LabelSet, n_queries: int = 100_000, seed: int = 0, chunk: int = 500
) -> BenchResult:
    """Median per-query decode time over >= n_queries random pairs.

    Pairs are drawn and mapped to labeled ids up front; deserialization and
    sampling stay outside the timed region.  Each chunk is timed around one
    kernel call and the median is taken over per-chunk means, which keeps
    rows stable without paying a timer call per query."""
    if labels.n_orig == 0:
        return BenchResult(0, chunk, 0.0, 0.0)
    rng = np.random.default_rng(seed)
    n_chunks = max(1, -(-n_queries // chunk))
    total = n_chunks * chunk
    us = rng.integers(0, labels.n_orig, size=total).astype(np.int64)
    vs = rng.integers(0, labels.n_orig, size=total).astype(np.int64)
    if labels.fwd is not None:
        us = labels.fwd[us].astype(np.int64)
        vs = labels.fwd[vs].astype(np.int64)
    out = np.empty(chunk, np.int64)
    fixed = (labels.words, labels.start, labels.wn, labels.name0, labels.comp)
    if labels.scheme == "exact":
        kernel = lops.decode_exact_probe_batch
    elif labels.scheme == "full":
        kernel = lops.decode_full_batch
    elif labels.scheme == "additive":
        kernel = lops.decode_additive_batch
    else:
        raise ValueError(f"scheme {labels.scheme!r} not benchable")
    kernel(*fixed, us[:1], vs[:1], out[:1])  # compile before timing
    samples = np.empty(n_chunks, np.float64)
    for c in range(n_chunks):
        a = us[c * chunk : (c + 1) * chunk]
        b = vs[c * chunk : (c + 1) * chunk]
        t0 = time.perf_counter_ns()
        kernel(*fixed, a, b, out)
        t1 = time.perf_counter_ns()
        samples[c] = (t1 - t0) / chunk
    return BenchResult(total, chunk, float(np.median(samples)), float(samples.mean()))
