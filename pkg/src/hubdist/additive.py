"""Near-exact distance labels for graphs with unbounded degree.

High-degree nodes break the ball-plus-layer scheme, so they are fenced
off: balls grow only through low-degree nodes, and a small dominating
set S' of the high-degree region is shared by all labels.  A query that
would have crossed a high-degree node is rerouted through the dominator
of the first such node it meets, which costs at most two extra hops.
The result is an estimate within {0,1,2} of the true distance.

That bounded error makes the scheme repairable: a per-node table storing
one trit per pair (its half of the id ring) turns the estimate back into
the exact distance, and one bit per pair gives a 1-additive answer.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _labelops as lops
from .graph import Graph, UNREACHABLE
from .labels import (
    LabelSet,
    _ArenaBuilder,
    _ball_lookup,
    _empty_label_set,
    _run_sssp,
    _sssp_buffers,
    choose_offset,
)
from .bits import name_width
from .naming import build_naming


@dataclass(frozen=True)
class AdditiveParams:
    """Resolved build parameters for the 2-additive scheme.

    `threshold` separates high-degree nodes from the rest; it is clamped
    to max(2, floor(log2(n) / 2)).  `radius` is the restricted ball's
    hop radius, max(1, floor(threshold / log2(threshold))).
    """

    threshold: int
    radius: int

    @classmethod
    def for_graph(cls, g: Graph, threshold: int | None = None) -> "AdditiveParams":
        cap = max(2, (g.n.bit_length() - 1) // 2) if g.n > 1 else 2
        if threshold is None:
            t = cap
        else:
            if threshold != int(threshold) or threshold < 2:
                raise ValueError(f"threshold must be an integer >= 2, got {threshold!r}")
            t = min(int(threshold), cap)
        return cls(t, max(1, int(t / math.log2(t))))


def high_degree_set(g: Graph, threshold: int) -> np.ndarray:
    """Node ids with degree strictly above the threshold, ascending."""
    return np.flatnonzero(np.diff(g.indptr) > threshold).astype(np.int64)


def greedy_dominating_set(g: Graph, vprime) -> tuple[np.ndarray, np.ndarray]:
    """Greedy dominating set for the high-degree nodes.

    Repeatedly picks the vertex (any vertex, not just a high-degree one)
    whose closed neighborhood covers the most still-uncovered members of
    vprime, ties to the smallest id.  Returns (picks in pick order,
    dominator map): dom[w] is the first pick that covered w, -1 outside
    vprime.
    """
    vprime = np.asarray(vprime, np.int64)
    n = g.n
    dom = np.full(n, -1, np.int64)
    if len(vprime) == 0:
        return np.zeros(0, np.int64), dom
    uncovered = np.zeros(n, bool)
    uncovered[vprime] = True
    count = np.zeros(n, np.int64)
    for w in vprime:
        count[w] += 1
        count[g.nbr[g.indptr[w]:g.indptr[w + 1]]] += 1
    picks = []
    remaining = len(vprime)
    while remaining:
        x = int(np.argmax(count))
        assert count[x] > 0
        picks.append(x)
        newly = [x] if uncovered[x] else []
        for y in g.nbr[g.indptr[x]:g.indptr[x + 1]]:
            if uncovered[y]:
                newly.append(int(y))
        for w in newly:
            uncovered[w] = False
            dom[w] = x
            remaining -= 1
            count[w] -= 1
            count[g.nbr[g.indptr[w]:g.indptr[w + 1]]] -= 1
    return np.array(picks, np.int64), dom


def _restricted_ball_ids(g: Graph, u: int, radius: int, blocked, visited) -> list[int]:
    """BFS for `radius` hop-steps where blocked nodes are never entered.
    The root is exempt on both counts: it is always a member and always
    expands.  `visited` is a reusable bool scratch, cleared on exit."""
    members = [u]
    visited[u] = True
    frontier = [u]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in g.nbr[g.indptr[x]:g.indptr[x + 1]]:
                if not visited[y] and not blocked[y]:
                    visited[y] = True
                    members.append(int(y))
                    nxt.append(int(y))
        frontier = nxt
        if not nxt:
            break
    for x in members:
        visited[x] = False
    return members


def restricted_ball(g: Graph, u: int, radius: int, vprime) -> list[tuple[int, int]]:
    """Members of the radius-limited ball that avoids high-degree nodes,
    each paired with its true cheapest-path cost in the full graph."""
    blocked = np.zeros(g.n, bool)
    blocked[np.asarray(vprime, np.int64)] = True
    delta, hops, parent, queue = _sssp_buffers(g)
    _run_sssp(g, u, delta, hops, parent, queue)
    ids = sorted(_restricted_ball_ids(g, u, radius, blocked, np.zeros(g.n, bool)))
    return [(x, int(delta[x])) for x in ids]


def boundary_hub_subset(g: Graph, ball_ids, vprime_mask, dom, u: int) -> np.ndarray:
    """Dominators covering every high-degree node that touches the ball.

    A high-degree node w needs covering when its closed neighborhood
    meets the ball; since the ball never contains high-degree nodes
    (beyond the root), that means w is adjacent to a ball member, or w
    is the root itself.  Returns the deduplicated dominator ids."""
    out = set()
    for b in ball_ids:
        for y in g.nbr[g.indptr[b]:g.indptr[b + 1]]:
            if vprime_mask[y]:
                out.add(int(dom[y]))
    if vprime_mask[u]:
        out.add(int(dom[u]))
    return np.array(sorted(out), np.int64)


def build_additive(g: Graph, threshold: int | None = None) -> LabelSet:
    """2-additive labels: restricted ball + residue layer + dominator data.

    Answers are within {0, 1, 2} of the true distance.  With no node
    above the degree threshold this is exactly the bounded-degree exact
    scheme.  The theoretical per-node size caps on the restricted ball
    and the dominator subset can be exceeded by high-degree roots; such
    builds are sound, so violations are reported as warnings, not errors.
    """
    params = AdditiveParams.for_graph(g, threshold)
    tau, radius = params.threshold, params.radius
    db = max(2, g.max_degree)
    if g.n == 0:
        return _empty_label_set("additive", g, tau, db, radius)

    degrees = np.diff(g.indptr)
    vmask = degrees > tau
    s_prime, dom = greedy_dominating_set(g, np.flatnonzero(vmask))
    size_cap = g.n * (1 + math.log(tau + 1)) / (tau + 1)
    if len(s_prime) > size_cap:
        raise AssertionError(
            f"dominating set has {len(s_prime)} members, over the greedy bound {size_cap:.2f}"
        )

    naming = build_naming(g)
    name0 = naming.name.astype(np.int64) - 1
    wn = name_width(g.n)
    offsets = np.zeros(g.n, np.int32)
    delta, hops, parent, queue = _sssp_buffers(g)
    visited = np.zeros(g.n, bool)
    arena = _ArenaBuilder(g.n)
    # global S' ordered by name; each label keeps the reachable prefix-filter
    s_by_name = s_prime[np.argsort(name0[s_prime])] if len(s_prime) else s_prime
    ball_cap, su_cap = tau**radius + 1, tau ** (radius + 1) + 1
    ball_over = su_over = 0

    for u in range(g.n):
        _run_sssp(g, u, delta, hops, parent, queue)
        ball_ids = _restricted_ball_ids(g, u, radius, vmask, visited)
        bn0 = name0[ball_ids]
        srt = np.argsort(bn0)
        ball_names0 = bn0[srt]
        ball_dists = delta[np.array(ball_ids, np.int64)][srt].astype(np.int64)

        off = choose_offset(hops, radius)
        offsets[u] = off
        in_layer = (hops >= 0) & (hops % radius == off)
        in_layer[u] = False
        layer_nodes = np.flatnonzero(in_layer)
        ln0 = name0[layer_nodes]
        srt = np.argsort(ln0)
        layer_names0 = ln0[srt]
        layer_dists = delta[layer_nodes][srt].astype(np.int64)

        sall_nodes = s_by_name[delta[s_by_name] >= 0] if len(s_by_name) else s_by_name
        sall_names0 = name0[sall_nodes]
        sall_dists = delta[sall_nodes].astype(np.int64)

        su_ids = boundary_hub_subset(g, ball_ids, vmask, dom, u)
        su_names0 = np.sort(name0[su_ids])

        k1, k2, k3, k4 = len(ball_ids), len(layer_names0), len(sall_names0), len(su_ids)
        ball_over += k1 > ball_cap
        su_over += k4 > su_cap
        words = arena.reserve(600 + k1 * (wn + 42) + 6144 + 200 * (k2 + k3) + (k4 + 1) * wn)
        end = lops.write_additive_label(
            words, 0, ball_names0, ball_dists, k1,
            layer_names0, layer_dists, k2,
            sall_names0, sall_dists, k3,
            su_names0, k4, wn,
        )
        arena.commit(u, int(end))

    if ball_over or su_over:
        warnings.warn(
            f"size caps exceeded (sound but oversized): {ball_over} restricted balls "
            f"over {ball_cap}, {su_over} dominator subsets over {su_cap}",
            RuntimeWarning,
            stacklevel=2,
        )
    return LabelSet(
        "additive",
        g.n,
        g.graph_hash(),
        tau,
        db,
        radius,
        naming.name,
        g.comp.copy(),
        offsets,
        arena.start,
        arena.nbits,
        arena.arena(),
        g.n,
        None,
    )


def decode_additive(label_u, label_v) -> int:
    """Reference decoder over label views; within {0,1,2} of the truth.

    Takes the minimum over three candidate kinds, each tried in both
    orientations: a direct ball hit (already exact), ball-layer meeting
    points, and dominator reroutes via the stored S' distances.
    """
    if label_u.build_id != label_v.build_id:
        raise ValueError("labels come from different builds")
    if label_u.node == label_v.node:
        return 0
    if label_u.component_id != label_v.component_id:
        return UNREACHABLE
    for a, b in ((label_u, label_v), (label_v, label_u)):
        hit = _ball_lookup(a.ball, b.name)
        if hit is not None:
            return hit
    best = None
    for a, b in ((label_u, label_v), (label_v, label_u)):
        for nm, d in a.ball:
            d2 = b.layer.find(nm)
            if d2 is not None and (best is None or d + d2 < best):
                best = d + d2
        for nm in a.s_u:
            d1 = a.s_all.find(nm)
            d2 = b.s_all.find(nm)
            if d1 is not None and d2 is not None and (best is None or d1 + d2 < best):
                best = d1 + d2
    assert best is not None, "same-component pair with no candidate hub"
    return best


@dataclass(eq=False)
class CorrectionTable:
    """Per-node packed differences between decoded and true distances.

    kind "exact" stores one trit per window pair (subtracting it recovers
    the true distance); kind "one_additive" stores one bit flagging the
    +2 cases (subtracting twice the bit leaves an error in {0, 1}).
    Node u owns the pairs (u, (u+i) mod n) for i in 1..floor(n/2); for
    even n the antipodal pair appears in both windows and the smaller id
    owns it, the larger storing an unused 0.
    """

    kind: str  # "exact" | "one_additive"
    n: int
    graph_hash: int
    label_build_id: tuple
    half: int
    bits_per_node: int
    start: np.ndarray
    words: np.ndarray


def build_correction(g: Graph, labels: LabelSet, kind: str = "exact") -> CorrectionTable:
    """Tables that repair a label set's answers on graph g.

    Every window pair is decoded once at build time; the stored value is
    that answer minus the true distance, which must land in {0, 1, 2}
    (anything else means the labels breached their error contract, and
    the build fails hard).
    """
    if kind not in ("exact", "one_additive"):
        raise ValueError(f"unknown correction kind {kind!r}")
    if labels.graph_hash != g.graph_hash():
        raise ValueError("labels were built for a different graph")
    n = g.n
    half = n // 2
    if n == 0 or half == 0:
        return CorrectionTable(
            kind, n, g.graph_hash(), labels.build_id, half, 0,
            np.zeros(n, np.int64), np.zeros(1, np.uint32),
        )

    window = np.arange(1, half + 1, dtype=np.int64)
    us = np.repeat(np.arange(n, dtype=np.int64), half)
    vs = (us + np.tile(window, n)) % n
    dprime = labels.decode_batch(us, vs).reshape(n, half)

    truth = np.empty((n, half), np.int64)
    delta, hops, parent, queue = _sssp_buffers(g)
    for u in range(n):
        _run_sssp(g, u, delta, hops, parent, queue)
        truth[u] = delta[(u + window) % n]

    diff = dprime - truth
    if diff.min() < 0 or diff.max() > 2:
        u, i = np.unravel_index(np.abs(diff).argmax(), diff.shape)
        raise AssertionError(
            f"decode error {diff[u, i]} outside {{0,1,2}} for pair "
            f"({u}, {(u + i + 1) % n})"
        )
    if n % 2 == 0:
        # antipodal pairs: the larger endpoint's slot is a placeholder
        diff[half:, half - 1] = 0

    if kind == "exact":
        bits = int(lops.trit_block_bits(half))
    else:
        diff = (diff == 2).astype(np.int64)
        bits = half
    stride = (bits + 31) >> 5
    words = np.zeros(n * stride + 2, np.uint32)
    start = np.arange(n, dtype=np.int64) * (stride << 5)
    for u in range(n):
        if kind == "exact":
            lops.pack_trits(words, start[u], diff[u], half)
        else:
            lops.pack_bits(words, start[u], diff[u], half)
    return CorrectionTable(
        kind, n, g.graph_hash(), labels.build_id, half, bits, start, words
    )


def _corrected_batch(labels: LabelSet, table: CorrectionTable, us, vs) -> np.ndarray:
    if table.label_build_id != labels.build_id:
        raise ValueError("correction table comes from a different build")
    us = np.asarray(us, np.int64)
    vs = np.asarray(vs, np.int64)
    dprime = labels.decode_batch(us, vs)
    out = np.empty(len(us), np.int64)
    lops.apply_corrections(
        table.words, table.start, table.n, table.half,
        table.kind == "exact", us, vs, dprime, out,
    )
    return out


def decode_exact_via_correction(labels: LabelSet, table: CorrectionTable, u: int, v: int) -> int:
    """True distance: the label estimate minus the pair's stored trit."""
    if table.kind != "exact":
        raise ValueError(f"need an exact-kind table, got {table.kind!r}")
    return int(_corrected_batch(labels, table, np.array([u]), np.array([v]))[0])


def decode_one_additive(labels: LabelSet, table: CorrectionTable, u: int, v: int) -> int:
    """Distance overshooting by at most 1: the estimate minus 2 per stored bit."""
    if table.kind != "one_additive":
        raise ValueError(f"need a one_additive-kind table, got {table.kind!r}")
    return int(_corrected_batch(labels, table, np.array([u]), np.array([v]))[0])


def decode_corrected_batch(labels: LabelSet, table: CorrectionTable, us, vs) -> np.ndarray:
    """Vectorized correction of label answers; kind decides the guarantee."""
    return _corrected_batch(labels, table, us, vs)
