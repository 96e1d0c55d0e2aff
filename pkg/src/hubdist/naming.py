"""Preorder naming over a deterministic spanning forest.

Names are 1-based preorder numbers of a BFS spanning tree per component,
rooted at the component's smallest node id, children visited in ascending
node-id order.  Consecutive names stay close in the tree, which bounds the
total variation of any single-source distance sequence read in name order
by twice the node count; the succinct codec depends on that bound.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, sssp_01


class Naming:
    """Bijection between node ids and preorder names, per-component contiguous."""

    __slots__ = ("n", "name", "inverse", "parent", "comp_name_start", "comp_name_end")

    def __init__(self, n, name, inverse, parent, comp_name_start, comp_name_end):
        self.n = n
        self.name = name
        self.inverse = inverse
        self.parent = parent
        # name range [start, end) per component id
        self.comp_name_start = comp_name_start
        self.comp_name_end = comp_name_end

    def node_of(self, name: int) -> int:
        if not 1 <= name <= self.n:
            raise ValueError(f"name {name} outside [1, {self.n}]")
        return int(self.inverse[name - 1])

    def component_names(self, comp_id: int) -> range:
        return range(
            int(self.comp_name_start[comp_id]), int(self.comp_name_end[comp_id])
        )


def build_naming(g: Graph) -> Naming:
    n = g.n
    name = np.zeros(n, np.int32)
    inverse = np.zeros(n, np.int32)
    parent = np.full(n, -1, np.int32)
    comp_start = np.zeros(g.ncomp, np.int32)
    comp_end = np.zeros(g.ncomp, np.int32)

    # BFS forest: parents assigned in ascending-id pop order; children of each
    # node come out ascending because adjacency rows are sorted.
    order = np.empty(n, np.int32)
    head = tail = 0
    seen = np.zeros(n, bool)
    roots = []
    for s in range(n):
        if seen[s]:
            continue
        roots.append(s)
        seen[s] = True
        order[tail] = s
        tail += 1
        while head < tail:
            u = order[head]
            head += 1
            for v in g.nbr[g.indptr[u] : g.indptr[u + 1]]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    order[tail] = v
                    tail += 1

    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):  # ascending ids -> ascending child lists
        p = parent[v]
        if p >= 0:
            children[p].append(v)

    next_name = 1
    for root in roots:
        comp_id = int(g.comp[root])
        comp_start[comp_id] = next_name
        stack = [root]
        while stack:
            u = stack.pop()
            name[u] = next_name
            inverse[next_name - 1] = u
            next_name += 1
            stack.extend(reversed(children[u]))
        comp_end[comp_id] = next_name
    assert next_name == n + 1
    return Naming(n, name, inverse, parent, comp_start, comp_end)


def variation(g: Graph, u: int, naming: Naming) -> int:
    """Total variation of delta(u, .) read along the preorder sequence of
    u's component."""
    if not 0 <= u < g.n:
        raise ValueError(f"node {u} outside [0, {g.n})")
    comp_id = int(g.comp[u])
    names = naming.component_names(comp_id)
    nodes = naming.inverse[names.start - 1 : names.stop - 1]
    d = sssp_01(g, u).delta[nodes].astype(np.int64)
    assert (d >= 0).all()  # component-restricted, so everything is reachable
    return int(np.abs(np.diff(d)).sum())
