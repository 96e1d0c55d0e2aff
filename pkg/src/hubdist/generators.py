"""Deterministic graph generators for tests, benchmarks, and the CLI."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def gen_path(n: int) -> Graph:
    _require(n >= 1, f"path needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, i + 1, 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    _require(n >= 3, f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n, 1) for i in range(n)])


def gen_grid(rows: int, cols: int) -> Graph:
    _require(rows >= 1 and cols >= 1, f"grid needs positive sides, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, 1))
            if r + 1 < rows:
                edges.append((v, v + cols, 1))
    return Graph.from_edges(rows * cols, edges)


def gen_star(leaves: int) -> Graph:
    """K_{1,leaves}: center 0, leaves 1..leaves."""
    _require(leaves >= 1, f"star needs >= 1 leaf, got {leaves}")
    return Graph.from_edges(leaves + 1, [(0, i, 1) for i in range(1, leaves + 1)])


def gen_star_of_stars(branch: int) -> Graph:
    """Two-level star: center, `branch` mid nodes, `branch` leaves under each
    mid node.  A small power-law-ish degree profile: n = branch**2 + branch + 1."""
    _require(branch >= 1, f"star-of-stars needs branch >= 1, got {branch}")
    edges = []
    for i in range(branch):
        mid = 1 + i
        edges.append((0, mid, 1))
        for j in range(branch):
            edges.append((mid, 1 + branch + i * branch + j, 1))
    return Graph.from_edges(branch * branch + branch + 1, edges)


def gen_erdos_renyi(n: int, m: int, seed: int) -> Graph:
    """m distinct undirected edges sampled uniformly without replacement."""
    _require(n >= 1, f"need n >= 1, got {n}")
    limit = n * (n - 1) // 2
    _require(0 <= m <= limit, f"m={m} outside [0, {limit}] for n={n}")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        take = (m - len(chosen)) * 2 + 16
        us = rng.integers(0, n, take)
        vs = rng.integers(0, n, take)
        for u, v in zip(us, vs):
            if u != v:
                chosen.add((min(int(u), int(v)), max(int(u), int(v))))
                if len(chosen) == m:
                    break
    return Graph.from_edges(n, [(u, v, 1) for u, v in sorted(chosen)])


def gen_random_regular(n: int, d: int, seed: int, max_tries: int = 1000) -> Graph:
    """Uniform-ish d-regular graph by stub matching with whole-round retries."""
    _require(d >= 1 and n > d, f"need 1 <= d < n, got d={d}, n={n}")
    _require(n * d % 2 == 0, f"n*d must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        rng.shuffle(stubs)
        a, b = stubs[0::2], stubs[1::2]
        if (a == b).any():
            continue
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        key = lo.astype(np.int64) * n + hi
        if len(np.unique(key)) != len(key):
            continue
        g = Graph.from_edges(n, [(int(u), int(v), 1) for u, v in zip(lo, hi)])
        assert (g.degrees() == d).all()
        return g
    raise RuntimeError(f"no simple {d}-regular matching found in {max_tries} rounds")


def _require(ok: bool, msg: str) -> None:
    if not ok:
        raise ValueError(msg)


GENERATORS = {
    "path": gen_path,
    "cycle": gen_cycle,
    "grid": gen_grid,
    "star": gen_star,
    "star-of-stars": gen_star_of_stars,
    "erdos-renyi": gen_erdos_renyi,
    "random-regular": gen_random_regular,
}
