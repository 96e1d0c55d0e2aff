"""Traversal kernels: BFS, cost/hop search, components, hop-limited balls.

Two-key search order: a path is compared first by total cost, then by edge
count.  Both collapse into one int64 key, cost * (2n + 1) + hops, which is
injective because minimal-hop cheapest paths are simple (hops <= 2n covers
graphs whose nodes were split into chains).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def components(indptr, nbr, comp, queue):
    """Labels connected components in ascending discovery order."""
    n = comp.shape[0]
    for i in range(n):
        comp[i] = -1
    c = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = nbr[e]
                if comp[v] < 0:
                    comp[v] = c
                    queue[tail] = v
                    tail += 1
        c += 1
    return c


@njit(cache=True, nogil=True)
def bfs_disthop(indptr, nbr, src, delta, hops, parent, queue):
    """Unit-cost search: delta equals hops; parent is the BFS tree parent."""
    n = delta.shape[0]
    for i in range(n):
        delta[i] = -1
        hops[i] = -1
        parent[i] = -1
    delta[src] = 0
    hops[src] = 0
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        du = delta[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = nbr[e]
            if delta[v] < 0:
                delta[v] = du + 1
                hops[v] = du + 1
                parent[v] = u
                queue[tail] = v
                tail += 1


@njit(cache=True, nogil=True)
def dijkstra_disthop(indptr, nbr, cost, src, delta, hops, parent):
    """Cost-then-hops search for graphs with 0-cost edges."""
    n = delta.shape[0]
    mod = 2 * n + 1
    m2 = nbr.shape[0]
    INF = np.int64(1) << 62
    key = np.full(n, INF, np.int64)
    done = np.zeros(n, np.uint8)
    cap = m2 + 2
    hk = np.empty(cap, np.int64)
    hv = np.empty(cap, np.int32)
    size = 0

    for i in range(n):
        delta[i] = -1
        hops[i] = -1
        parent[i] = -1

    key[src] = 0
    hk[0] = 0
    hv[0] = src
    size = 1
    while size > 0:
        top_k = hk[0]
        top_v = hv[0]
        size -= 1
        hk[0] = hk[size]
        hv[0] = hv[size]
        # sift down
        i = 0
        while True:
            l = 2 * i + 1
            if l >= size:
                break
            r = l + 1
            c = l
            if r < size and hk[r] < hk[l]:
                c = r
            if hk[c] >= hk[i]:
                break
            hk[i], hk[c] = hk[c], hk[i]
            hv[i], hv[c] = hv[c], hv[i]
            i = c
        if done[top_v] or top_k != key[top_v]:
            continue
        done[top_v] = 1
        for e in range(indptr[top_v], indptr[top_v + 1]):
            v = nbr[e]
            nk = top_k + cost[e] * mod + 1
            if nk < key[v]:
                key[v] = nk
                parent[v] = top_v
                # sift up
                j = size
                hk[size] = nk
                hv[size] = v
                size += 1
                while j > 0:
                    p = (j - 1) >> 1
                    if hk[p] <= hk[j]:
                        break
                    hk[p], hk[j] = hk[j], hk[p]
                    hv[p], hv[j] = hv[j], hv[p]
                    j = p
    for i in range(n):
        if key[i] < INF:
            delta[i] = key[i] // mod
            hops[i] = key[i] % mod


@njit(cache=True, nogil=True)
def ball_bfs(indptr, nbr, src, radius, mark, queue):
    """Hop-limited BFS over all edges regardless of cost.

    mark must be -1 everywhere on entry; on return mark[v] is the hop depth
    for the cnt nodes stored in queue[0:cnt] and the caller must reset those
    entries to -1 before reuse.
    """
    mark[src] = 0
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        d = mark[u]
        if d >= radius:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            v = nbr[e]
            if mark[v] < 0:
                mark[v] = d + 1
                queue[tail] = v
                tail += 1
    return tail
