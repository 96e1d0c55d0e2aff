"""Brute-force ground truth and label verification drivers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _graphops as gops
from .graph import Graph

APSP_CAP = 5000

# allowed decode-minus-truth differences per verification mode
MODES = {
    "exact": (0,),
    "additive2": (0, 1, 2),
    "additive1": (0, 1),
    "corrected-exact": (0,),
}


@dataclass
class ApspTable:
    n: int
    delta: np.ndarray
    hops: np.ndarray


def apsp(g: Graph, cap: int = APSP_CAP) -> ApspTable:
    """All-pairs (cheapest cost, fewest edges among cheapest); row per source."""
    if g.n > cap:
        raise ValueError(f"apsp capped at {cap} nodes, got {g.n}")
    n = g.n
    delta = np.empty((n, n), np.int32)
    hops = np.empty((n, n), np.int32)
    parent = np.empty(max(n, 1), np.int32)
    queue = np.empty(max(n, 1), np.int32)
    for s in range(n):
        if g.has_zero_cost:
            gops.dijkstra_disthop(g.indptr, g.nbr, g.cost, s, delta[s], hops[s], parent)
        else:
            gops.bfs_disthop(g.indptr, g.nbr, s, delta[s], hops[s], parent, queue)
    assert np.array_equal(delta, delta.T) and np.array_equal(hops, hops.T)
    assert not delta.diagonal().any() and not hops.diagonal().any()
    return ApspTable(n, delta, hops)


@dataclass
class VerifyReport:
    mode: str
    pairs: int
    max_error: int
    histogram: dict[int, int]
    violations: list[tuple[int, int, int, int]] = field(default_factory=list)
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and not self.truncated

    def lines(self) -> list[str]:
        return [f"pair {u} {v} expected {e} got {got}" for u, v, e, got in self.violations]

    def text(self) -> str:
        out = [
            f"mode {self.mode}: {self.pairs} pairs checked, "
            f"{len(self.violations)}{'+' if self.truncated else ''} violations, "
            f"max error {self.max_error}",
            "error histogram: "
            + (
                ", ".join(f"{k}: {v}" for k, v in sorted(self.histogram.items()))
                or "empty"
            ),
        ]
        out.extend(self.lines()[:20])
        return "\n".join(out)


MAX_KEPT_VIOLATIONS = 1000


def _tally(mode, us, vs, got, want, report):
    allowed = MODES[mode]
    reach = want >= 0
    err = got[reach] - want[reach]
    if len(err):
        report.max_error = max(report.max_error, int(err.max()))
    vals, cnts = np.unique(err, return_counts=True)
    for k, c in zip(vals, cnts):
        report.histogram[int(k)] = report.histogram.get(int(k), 0) + int(c)
    bad = np.zeros(len(us), bool)
    bad[reach] = ~np.isin(err, allowed)
    bad[~reach] = got[~reach] != -1
    for i in np.flatnonzero(bad):
        if len(report.violations) >= MAX_KEPT_VIOLATIONS:
            report.truncated = True
            break
        report.violations.append((int(us[i]), int(vs[i]), int(want[i]), int(got[i])))
    report.pairs += len(us)


def verify(labels, g: Graph, mode: str, decode=None, chunk: int = 1 << 18, threads: int = 1) -> VerifyReport:
    """Exhaustive pairwise check of decoded distances against the oracle.

    threads > 1 fans decode chunks over a thread pool; the decode kernels
    drop the GIL, the tally stays serial so reports are deterministic."""
    if mode not in MODES:
        raise ValueError(f"mode {mode!r} not one of {sorted(MODES)}")
    if decode is None:
        decode = labels.decode_batch
    table = apsp(g)
    n = g.n
    report = VerifyReport(mode, 0, 0, {})
    iu, iv = np.triu_indices(n)
    spans = [(iu[lo : lo + chunk], iv[lo : lo + chunk]) for lo in range(0, len(iu), chunk)]
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: decode(s[0], s[1]), spans))
    else:
        results = [decode(us, vs) for us, vs in spans]
    for (us, vs), got in zip(spans, results):
        want = table.delta[us, vs].astype(np.int64)
        _tally(mode, us, vs, np.asarray(got, np.int64), want, report)
    return report


def verify_sample(
    labels,
    g: Graph,
    n_sources: int,
    targets_per_source: int,
    seed: int = 0,
    mode: str = "exact",
    decode=None,
) -> VerifyReport:
    """Sampled check for graphs too large for full APSP: exact SSSP truth
    rows for a random set of sources, random targets per source."""
    if mode not in MODES:
        raise ValueError(f"mode {mode!r} not one of {sorted(MODES)}")
    if decode is None:
        decode = labels.decode_batch
    rng = np.random.default_rng(seed)
    n = g.n
    sources = rng.choice(n, size=min(n_sources, n), replace=False)
    delta = np.empty(n, np.int32)
    hops = np.empty(n, np.int32)
    parent = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    report = VerifyReport(mode, 0, 0, {})
    for s in sources:
        s = int(s)
        if g.has_zero_cost:
            gops.dijkstra_disthop(g.indptr, g.nbr, g.cost, s, delta, hops, parent)
        else:
            gops.bfs_disthop(g.indptr, g.nbr, s, delta, hops, parent, queue)
        vs = rng.integers(0, n, targets_per_source)
        us = np.full(len(vs), s)
        got = np.asarray(decode(us, vs), np.int64)
        want = delta[vs].astype(np.int64)
        _tally(mode, us, vs, got, want, report)
    return report
