"""Degree-splitting reduction.

Rewrites a graph of bounded average degree into one of bounded maximum
degree: every node whose degree exceeds ceil(m/n) + 2 becomes a path of
copies joined by 0-cost edges, so cheapest-path distances are unchanged
while every copy's degree stays under the cap.  Hop counts are NOT
preserved; downstream layer logic must run on the split graph's own hop
metric.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class SplitResult:
    g_split: Graph
    fwd: np.ndarray  # original node -> representative copy
    origin: np.ndarray  # copy -> original node
    cap: int


def _check_size(n_new: int, n: int) -> None:
    assert n_new <= 3 * n, f"split produced {n_new} nodes from {n}, over the 3n bound"
    if n_new > 2 * n:
        warnings.warn(
            f"split produced {n_new} nodes from {n}, above the expected 2n",
            stacklevel=3,
        )


def split_graph(g: Graph) -> SplitResult:
    n, m = g.n, g.m
    ident = np.arange(n, dtype=np.int32)
    if n == 0:
        return SplitResult(g, ident, ident.copy(), 2)
    c = max(1, -(-m // n))
    cap = -(-m // n) + 2
    if g.max_degree <= cap:
        return SplitResult(g, ident, ident.copy(), cap)

    degs = g.degrees()
    ncopies = np.ones(n, np.int64)
    split_mask = degs > cap
    ncopies[split_mask] = -(-degs[split_mask] // c)
    # extra copies appended after the originals, grouped by node id; the
    # first copy keeps the original id, so fwd is the identity
    extra_start = np.full(n, -1, np.int64)
    extra_start[split_mask] = n + np.cumsum(ncopies[split_mask] - 1) - (
        ncopies[split_mask] - 1
    )
    n_new = n + int((ncopies - 1).sum())
    _check_size(n_new, n)

    origin = np.empty(n_new, np.int32)
    origin[:n] = ident
    for v in np.flatnonzero(split_mask):
        s = extra_start[v]
        origin[s : s + ncopies[v] - 1] = v

    # per directed arc: which copy of the source carries it (adjacency order,
    # at most c originals per copy)
    src = np.repeat(np.arange(n, dtype=np.int64), degs)
    slot = np.arange(2 * m, dtype=np.int64) - g.indptr[src]
    j = np.where(split_mask[src], slot // c, 0)
    arc_copy = np.where(j == 0, src, extra_start[src] + j - 1).astype(np.int32)

    # pair the two arcs of each undirected edge via the canonical edge key
    key = np.minimum(src, g.nbr) * np.int64(n) + np.maximum(src, g.nbr)
    order = np.argsort(key, kind="stable")
    first, second = order[0::2], order[1::2]
    assert np.array_equal(key[first], key[second])
    eu = arc_copy[first]
    ev = arc_copy[second]
    ec = g.cost[first]

    chain_u = []
    chain_v = []
    for v in np.flatnonzero(split_mask):
        ids = np.concatenate(
            ([v], np.arange(extra_start[v], extra_start[v] + ncopies[v] - 1))
        )
        chain_u.append(ids[:-1])
        chain_v.append(ids[1:])
    cu = np.concatenate(chain_u)
    cv = np.concatenate(chain_v)

    edges = list(
        zip(
            np.concatenate([eu, cu]).tolist(),
            np.concatenate([ev, cv]).tolist(),
            np.concatenate([ec, np.zeros(len(cu), np.int8)]).tolist(),
        )
    )
    g2 = Graph.from_edges(n_new, edges)
    assert g2.m == m + (n_new - n)
    assert g2.max_degree <= cap, f"copy degree {g2.max_degree} over cap {cap}"
    return SplitResult(g2, ident, origin, cap)
