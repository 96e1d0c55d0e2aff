"""Graph core: parsing, adjacency, two-key shortest paths, hop balls.

Graphs are undirected with edge costs in {0, 1}.  delta(u, v) is the
cheapest-path cost and hops(u, v) the fewest edges among cheapest paths;
unreachable pairs carry the sentinel -1 throughout.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from . import _graphops as gops

UNREACHABLE = -1


class DistHop(NamedTuple):
    delta: int
    hops: int


class Graph:
    """Immutable undirected graph with {0,1} edge costs in CSR form."""

    def __init__(self, n: int, ea: np.ndarray, eb: np.ndarray, ec: np.ndarray):
        self.n = int(n)
        self.m = int(len(ea))
        # canonical undirected edge list: a < b, sorted lexicographically
        self._ea = ea
        self._eb = eb
        self._ec = ec
        src = np.concatenate([ea, eb])
        dst = np.concatenate([eb, ea])
        cst = np.concatenate([ec, ec])
        order = np.lexsort((dst, src))
        self.indptr = np.zeros(self.n + 1, np.int64)
        if self.m:
            np.cumsum(np.bincount(src, minlength=self.n), out=self.indptr[1:])
        self.nbr = dst[order].astype(np.int32)
        self.cost = cst[order].astype(np.int8)
        self.comp = np.empty(self.n, np.int32)
        queue = np.empty(max(self.n, 1), np.int32)
        self.ncomp = int(gops.components(self.indptr, self.nbr, self.comp, queue))
        degs = np.diff(self.indptr)
        self.max_degree = int(degs.max()) if self.n else 0
        self.has_zero_cost = bool(self.m and int(ec.min()) == 0)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Graph":
        """Builds a graph, dropping self-loops and collapsing parallel edges
        to their minimum cost."""
        ea, eb, ec = [], [], []
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) endpoint outside [0, {n})")
            if c not in (0, 1):
                raise ValueError(f"edge cost {c} not in {{0, 1}}")
            if u == v:
                continue
            a, b = (u, v) if u < v else (v, u)
            ea.append(a)
            eb.append(b)
            ec.append(c)
        a = np.asarray(ea, np.int32)
        b = np.asarray(eb, np.int32)
        c = np.asarray(ec, np.int8)
        if len(a):
            packed = a.astype(np.int64) * n + b
            order = np.argsort(packed, kind="stable")
            packed, a, b, c = packed[order], a[order], b[order], c[order]
            uniq, first = np.unique(packed, return_index=True)
            group = np.searchsorted(uniq, packed)
            cmin = np.full(len(uniq), 2, np.int8)
            np.minimum.at(cmin, group, c)
            a, b, c = a[first], b[first], cmin
        return cls(n, a, b, c)

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, costs) in ascending neighbor order."""
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.nbr[lo:hi], self.cost[lo:hi]

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Canonical undirected edge arrays (a < b, lexicographic)."""
        return self._ea, self._eb, self._ec

    def graph_hash(self) -> int:
        h = hashlib.blake2b(digest_size=8)
        h.update(f"{self.n} {self.m}".encode())
        h.update(self._ea.astype("<i4").tobytes())
        h.update(self._eb.astype("<i4").tobytes())
        h.update(self._ec.astype("<i1").tobytes())
        return int.from_bytes(h.digest(), "little")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, components={self.ncomp})"


class DistHopResult:
    """Per-node (delta, hops, parent) arrays from a single-source search."""

    __slots__ = ("source", "delta", "hops", "parent")

    def __init__(self, source, delta, hops, parent):
        self.source = source
        self.delta = delta
        self.hops = hops
        self.parent = parent

    def __getitem__(self, v: int) -> DistHop:
        return DistHop(int(self.delta[v]), int(self.hops[v]))


def sssp_01(g: Graph, s: int) -> DistHopResult:
    """Single-source cheapest costs with minimal hop counts among cheapest
    paths.  Runs plain BFS when every edge costs 1."""
    if not 0 <= s < g.n:
        raise ValueError(f"source {s} outside [0, {g.n})")
    delta = np.empty(g.n, np.int32)
    hops = np.empty(g.n, np.int32)
    parent = np.empty(g.n, np.int32)
    if g.has_zero_cost:
        gops.dijkstra_disthop(g.indptr, g.nbr, g.cost, s, delta, hops, parent)
    else:
        queue = np.empty(g.n, np.int32)
        gops.bfs_disthop(g.indptr, g.nbr, s, delta, hops, parent, queue)
    return DistHopResult(s, delta, hops, parent)


def hop_ball(g: Graph, u: int, r: int) -> list[tuple[int, int]]:
    """Nodes within r edges of u, paired with their true cheapest-path cost,
    sorted by node id."""
    if not 0 <= u < g.n:
        raise ValueError(f"node {u} outside [0, {g.n})")
    if r < 0:
        raise ValueError("radius must be non-negative")
    mark = np.full(g.n, -1, np.int32)
    queue = np.empty(g.n, np.int32)
    cnt = int(gops.ball_bfs(g.indptr, g.nbr, u, r, mark, queue))
    members = np.sort(queue[:cnt])
    sp = sssp_01(g, u)
    out = [(int(v), int(sp.delta[v])) for v in members]
    cap = max(2, g.max_degree) ** r + 1
    assert len(out) <= cap, f"ball size {len(out)} exceeds {cap}"
    return out


def _tokenize(line: str) -> list[str]:
    return line.split()


def parse_graph(text: str) -> Graph:
    return _parse_lines(text.splitlines())


def load_graph(source: str | Path | TextIO) -> Graph:
    """Reads the edge-list format: a header line "n m", then m lines
    "u v" (cost 1) or "u v c" with c in {0,1}.  '#' lines are comments."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            return _parse_lines(f.read().splitlines())
    return _parse_lines(source.read().splitlines())


def _parse_lines(lines: list[str]) -> Graph:
    header = None
    header_no = 0
    edges = []
    n = m = 0
    for no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if header is None:
            if len(toks) != 2:
                raise ValueError(f"line {no}: expected header 'n m'")
            try:
                n, m = int(toks[0]), int(toks[1])
            except ValueError:
                raise ValueError(f"line {no}: non-integer header field") from None
            if n < 0 or m < 0:
                raise ValueError(f"line {no}: negative header field")
            header = (n, m)
            header_no = no
            continue
        if len(edges) == m:
            raise ValueError(f"line {no}: more than {m} edge lines")
        if len(toks) not in (2, 3):
            raise ValueError(f"line {no}: expected 'u v' or 'u v c'")
        try:
            u, v = int(toks[0]), int(toks[1])
            c = int(toks[2]) if len(toks) == 3 else 1
        except ValueError:
            raise ValueError(f"line {no}: non-integer edge field") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"line {no}: endpoint outside [0, {n})")
        if c not in (0, 1):
            raise ValueError(f"line {no}: cost {c} not in {{0, 1}}")
        edges.append((u, v, c))
    if header is None:
        raise ValueError("line 1: missing header 'n m'")
    if len(edges) != m:
        raise ValueError(
            f"line {header_no}: header promises {m} edges, found {len(edges)}"
        )
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    """Canonical text form readable by load_graph."""
    ea, eb, ec = g.edges()
    lines = [f"{g.n} {g.m}"]
    for a, b, c in zip(ea, eb, ec):
        lines.append(f"{a} {b}" if c == 1 else f"{a} {b} {c}")
    return "\n".join(lines) + "\n"
