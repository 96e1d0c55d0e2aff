"""Exact distance labels for bounded-degree graphs.

Each node stores an explicit hop-limited ball and one succinct residue
layer: the set of nodes whose hop distance falls in the least-populated
residue class modulo the ball radius.  A query is answered from the ball
alone when the endpoints are close, otherwise by meeting in a ball-layer
intersection; both orientations are evaluated and the smaller sum wins,
which is always the true distance.

When the requested budget is below the graph's degree bound the scheme
cannot shrink labels, so the build falls back to storing each node's whole
component distance vector in one succinct hub set ("full" scheme).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _bitops as bops
from . import _graphops as gops
from . import _labelops as lops
from .bits import EncodedHubSet, encode_hub_set, name_width
from .graph import Graph, UNREACHABLE
from .naming import build_naming
from .split import split_graph


@dataclass(frozen=True)
class ExactParams:
    """Resolved build parameters.

    `radius` is both the ball's hop radius and the modulus of the residue
    layers; it is the largest r >= 1 with degree_bound**r <= budget, after
    the budget is clamped into [2, n].
    """

    budget: int
    degree_bound: int
    radius: int

    @classmethod
    def for_graph(cls, g: Graph, budget: int) -> "ExactParams":
        if budget != int(budget) or budget < 2:
            raise ValueError(f"budget must be an integer >= 2, got {budget!r}")
        db = max(2, g.max_degree)
        eff = max(2, min(int(budget), g.n)) if g.n > 1 else 2
        r = 1
        while db ** (r + 1) <= eff:
            r += 1
        return cls(eff, db, r)


@dataclass(eq=False)
class LabelSet:
    """A complete set of per-node labels, packed into one bit arena.

    `start[u]` is the word-aligned bit offset of node u's blob and
    `nbits[u]` its exact payload length.  When the labeled graph is a
    degree-split transform of the caller's graph, `fwd` maps original ids
    to labeled ids (None means they are the same graph).
    """

    scheme: str  # "exact" | "full" | "additive"
    n: int
    graph_hash: int
    param: int
    degree_bound: int
    radius: int
    name: np.ndarray
    comp: np.ndarray
    offset: np.ndarray
    start: np.ndarray
    nbits: np.ndarray
    words: np.ndarray
    n_orig: int
    fwd: np.ndarray | None = None

    def __post_init__(self):
        self.name0 = (self.name.astype(np.int64) - 1)
        self.wn = name_width(self.n) if self.n else 1

    @property
    def build_id(self) -> tuple:
        return (self.scheme, self.n, self.graph_hash, self.param)

    def _map(self, u: int) -> int:
        if not 0 <= u < self.n_orig:
            raise ValueError(f"node {u} outside [0, {self.n_orig})")
        return int(self.fwd[u]) if self.fwd is not None else int(u)

    def decode(self, u: int, v: int) -> int:
        """Distance between original-graph nodes u and v (-1 if unreachable)."""
        out = self.decode_batch(np.array([u]), np.array([v]))
        return int(out[0])

    def decode_batch(self, us, vs) -> np.ndarray:
        us = np.asarray(us, np.int64)
        vs = np.asarray(vs, np.int64)
        if us.shape != vs.shape:
            raise ValueError("query arrays differ in shape")
        if len(us) and (
            us.min() < 0 or us.max() >= self.n_orig or vs.min() < 0 or vs.max() >= self.n_orig
        ):
            raise ValueError(f"query node outside [0, {self.n_orig})")
        if self.fwd is not None:
            us = self.fwd[us].astype(np.int64)
            vs = self.fwd[vs].astype(np.int64)
        out = np.empty(len(us), np.int64)
        if self.scheme == "exact":
            bad = lops.decode_exact_batch(
                self.words, self.start, self.wn, self.name0, self.comp, us, vs, out
            )
        elif self.scheme == "full":
            bad = lops.decode_full_batch(
                self.words, self.start, self.wn, self.name0, self.comp, us, vs, out
            )
        elif self.scheme == "additive":
            bad = lops.decode_additive_batch(
                self.words, self.start, self.wn, self.name0, self.comp, us, vs, out
            )
        else:
            raise ValueError(f"scheme {self.scheme!r} not decodable here")
        assert bad == 0, f"{bad} same-component queries found no common hub"
        return out

    def entry_counts(self) -> tuple[np.ndarray, np.ndarray]:
        """(ball sizes, other stored entries) per node; full labels report
        (0, k), additive labels fold layer + dominator sections together."""
        k1 = np.zeros(self.n, np.int64)
        k2 = np.zeros(self.n, np.int64)
        if self.scheme == "full":
            lops.full_label_sizes(self.words, self.start, k2)
        elif self.scheme == "additive":
            a, b, c, d = self.additive_entry_counts()
            k1, k2 = a, b + c + d
        else:
            lops.exact_label_sizes(self.words, self.start, self.wn, k1, k2)
        return k1, k2

    def additive_entry_counts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(ball, layer, dominator set, dominator subset) sizes per node."""
        if self.scheme != "additive":
            raise ValueError(f"scheme {self.scheme!r} has no additive sections")
        ks = [np.zeros(self.n, np.int64) for _ in range(4)]
        lops.additive_label_sizes(self.words, self.start, self.wn, *ks)
        return tuple(ks)

    def label(self, u: int):
        """Decoded view of one node's label (on the labeled graph's ids)."""
        if not 0 <= u < self.n:
            raise ValueError(f"node {u} outside [0, {self.n})")
        s = int(self.start[u])
        if self.scheme == "full":
            kp, pos = bops.read_gamma(self.words, s)
            vec = self._read_hub_set(pos, int(kp) - 1)
            return FullLabel(
                self.build_id, self.n, u, int(self.name[u]), int(self.comp[u]), vec
            )
        if self.scheme == "additive":
            k1, wd, bb, k2, lp, k3, sp, k4, sb = lops._parse_additive(
                self.words, s, self.wn
            )
            ball = []
            pos = int(bb)
            for _ in range(int(k1)):
                nm0 = int(bops.read_bits(self.words, pos, self.wn))
                d = int(bops.read_bits(self.words, pos + self.wn, int(wd)))
                pos += self.wn + int(wd)
                ball.append((nm0 + 1, d))
            s_u = tuple(
                int(bops.read_bits(self.words, int(sb) + i * self.wn, self.wn)) + 1
                for i in range(int(k4))
            )
            return AdditiveLabel(
                self.build_id,
                self.n,
                u,
                int(self.name[u]),
                int(self.comp[u]),
                int(self.offset[u]),
                tuple(ball),
                self._read_hub_set(int(lp), int(k2)),
                self._read_hub_set(int(sp), int(k3)),
                s_u,
            )
        k1p, pos = bops.read_gamma(self.words, s)
        k1 = int(k1p) - 1
        ball = []
        if k1:
            wd = int(bops.read_bits(self.words, pos, 6))
            pos += 6
            for _ in range(k1):
                nm0 = int(bops.read_bits(self.words, pos, self.wn))
                d = int(bops.read_bits(self.words, pos + self.wn, wd))
                pos += self.wn + wd
                ball.append((nm0 + 1, d))
        k2p, pos = bops.read_gamma(self.words, pos)
        layer = self._read_hub_set(pos, int(k2p) - 1)
        return ExactLabel(
            self.build_id,
            self.n,
            u,
            int(self.name[u]),
            int(self.comp[u]),
            int(self.offset[u]),
            tuple(ball),
            layer,
        )

    def _read_hub_set(self, pos: int, k: int) -> EncodedHubSet:
        nm = np.empty(k, np.int64)
        dd = np.empty(k, np.int64)
        bops.hubset_decode_all(self.words, pos, k, self.wn, nm, dd)
        return encode_hub_set([(int(a) + 1, int(b)) for a, b in zip(nm, dd)], self.n)


@dataclass(frozen=True)
class ExactLabel:
    build_id: tuple
    n: int
    node: int
    name: int
    component_id: int
    offset: int
    ball: tuple[tuple[int, int], ...]
    layer: EncodedHubSet


@dataclass(frozen=True)
class FullLabel:
    build_id: tuple
    n: int
    node: int
    name: int
    component_id: int
    vector: EncodedHubSet


@dataclass(frozen=True)
class AdditiveLabel:
    """ball avoids high-degree nodes; s_all holds distances to the whole
    dominating set; s_u lists the dominators relevant near this node."""

    build_id: tuple
    n: int
    node: int
    name: int
    component_id: int
    offset: int
    ball: tuple[tuple[int, int], ...]
    layer: EncodedHubSet
    s_all: EncodedHubSet
    s_u: tuple[int, ...]


def choose_offset(hops_from_u: np.ndarray, radius: int) -> int:
    """Residue class (mod radius) with the fewest reachable nodes; ties go to
    the smallest class index.  Unreachable entries are negative and ignored."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    reach = hops_from_u[hops_from_u >= 0]
    counts = np.bincount(reach % radius, minlength=radius)
    return int(np.argmin(counts))


class _ArenaBuilder:
    """Accumulates word-aligned per-node blobs into one uint32 arena."""

    def __init__(self, n: int):
        self.start = np.zeros(n, np.int64)
        self.nbits = np.zeros(n, np.int64)
        self.chunks: list[np.ndarray] = []
        self.scratch = np.zeros(256, np.uint32)
        self.total_words = 0

    def reserve(self, bound_bits: int) -> np.ndarray:
        need = (bound_bits >> 5) + 4
        if len(self.scratch) < need:
            self.scratch = np.zeros(need + (need >> 1), np.uint32)
        return self.scratch

    def commit(self, u: int, nbits: int) -> None:
        nwords = (nbits + 31) >> 5
        if nbits & 31:
            bops.zero_bits(self.scratch, nbits, 32 - (nbits & 31))
        self.start[u] = self.total_words << 5
        self.nbits[u] = nbits
        self.chunks.append(self.scratch[:nwords].copy())
        self.total_words += nwords

    def arena(self) -> np.ndarray:
        if not self.chunks:
            return np.zeros(1, np.uint32)
        # trailing guard words let readers over-fetch the last blob safely
        return np.concatenate(self.chunks + [np.zeros(2, np.uint32)])


def _sssp_buffers(g: Graph):
    n = max(g.n, 1)
    return (
        np.empty(n, np.int32),
        np.empty(n, np.int32),
        np.empty(n, np.int32),
        np.empty(n, np.int32),
    )


def _run_sssp(g, u, delta, hops, parent, queue):
    if g.has_zero_cost:
        gops.dijkstra_disthop(g.indptr, g.nbr, g.cost, u, delta, hops, parent)
    else:
        gops.bfs_disthop(g.indptr, g.nbr, u, delta, hops, parent, queue)


def _empty_label_set(scheme: str, g: Graph, param: int, db: int, radius: int) -> LabelSet:
    z32 = np.zeros(0, np.int32)
    z64 = np.zeros(0, np.int64)
    return LabelSet(
        scheme, 0, g.graph_hash(), param, db, radius, z32, z32, z32, z64, z64,
        np.zeros(1, np.uint32), 0, None,
    )


def build_exact_bounded(g: Graph, budget: int) -> LabelSet:
    """Labels for a graph whose maximum degree is within the budget.

    Falls back to full-vector labels when budget < max degree, where the
    ball construction cannot cover even one hop of expansion.
    """
    if budget != int(budget) or budget < 2:
        raise ValueError(f"budget must be an integer >= 2, got {budget!r}")
    if g.n > 1 and budget < max(2, g.max_degree):
        return build_full_labels(g, param=int(budget))
    params = ExactParams.for_graph(g, budget)
    radius = params.radius
    if g.n == 0:
        return _empty_label_set("exact", g, params.budget, params.degree_bound, radius)

    naming = build_naming(g)
    name0 = naming.name.astype(np.int64) - 1
    wn = name_width(g.n)
    offsets = np.zeros(g.n, np.int32)
    delta, hops, parent, queue = _sssp_buffers(g)
    arena = _ArenaBuilder(g.n)

    for u in range(g.n):
        _run_sssp(g, u, delta, hops, parent, queue)
        reach = hops >= 0
        ball_nodes = np.flatnonzero(reach & (hops <= radius))
        bn0 = name0[ball_nodes]
        srt = np.argsort(bn0)
        ball_names0 = bn0[srt]
        ball_dists = delta[ball_nodes][srt].astype(np.int64)

        off = choose_offset(hops, radius)
        offsets[u] = off
        in_layer = reach & (hops % radius == off)
        in_layer[u] = False
        layer_nodes = np.flatnonzero(in_layer)
        ln0 = name0[layer_nodes]
        srt = np.argsort(ln0)
        layer_names0 = ln0[srt]
        layer_dists = delta[layer_nodes][srt].astype(np.int64)

        k1, k2 = len(ball_names0), len(layer_names0)
        words = arena.reserve(200 + k1 * (wn + 42) + 2048 + 200 * k2)
        end = lops.write_exact_label(
            words, 0, ball_names0, ball_dists, k1, layer_names0, layer_dists, k2, wn
        )
        arena.commit(u, int(end))

    return LabelSet(
        "exact",
        g.n,
        g.graph_hash(),
        params.budget,
        params.degree_bound,
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


def build_full_labels(g: Graph, *, param: int = 0) -> LabelSet:
    """Baseline labels: every node stores its whole component's distance
    vector as one succinct hub set."""
    db = max(2, g.max_degree)
    if g.n == 0:
        return _empty_label_set("full", g, param, db, 0)
    naming = build_naming(g)
    name0 = naming.name.astype(np.int64) - 1
    wn = name_width(g.n)
    delta, hops, parent, queue = _sssp_buffers(g)
    arena = _ArenaBuilder(g.n)

    for u in range(g.n):
        _run_sssp(g, u, delta, hops, parent, queue)
        comp_id = g.comp[u]
        lo = int(naming.comp_name_start[comp_id]) - 1
        hi = int(naming.comp_name_end[comp_id]) - 1
        nodes = naming.inverse[lo:hi]  # ascending names within the component
        names0 = np.arange(lo, hi, dtype=np.int64)
        dists = delta[nodes].astype(np.int64)
        k = len(names0)
        words = arena.reserve(200 + 2048 + 200 * k)
        end = lops.write_full_label(words, 0, names0, dists, k, wn)
        arena.commit(u, int(end))

    return LabelSet(
        "full",
        g.n,
        g.graph_hash(),
        param,
        db,
        0,
        naming.name,
        g.comp.copy(),
        np.zeros(g.n, np.int32),
        arena.start,
        arena.nbits,
        arena.arena(),
        g.n,
        None,
    )


def build_exact_avg(g: Graph, budget: int) -> LabelSet:
    """Labels for arbitrary graphs: split high-degree nodes first, label the
    bounded-degree result, and route queries through the copy mapping."""
    res = split_graph(g)
    if res.g_split is g:
        return build_exact_bounded(g, budget)
    labels = build_exact_bounded(res.g_split, budget)
    labels.graph_hash = g.graph_hash()
    labels.n_orig = g.n
    labels.fwd = res.fwd.astype(np.int64)
    return labels


def decode_exact(label_u, label_v, *, with_probes: bool = False):
    """Reference decoder over label views; counts hub-set lookups when asked.

    Returns the exact distance, or the unreachable sentinel for separated
    components.  Probe count covers ball membership tests and per-ball-entry
    layer lookups for both orientations.
    """
    if label_u.build_id != label_v.build_id:
        raise ValueError("labels come from different builds")
    probes = 0

    def done(value):
        return (value, probes) if with_probes else value

    if label_u.node == label_v.node:
        return done(0)
    if label_u.component_id != label_v.component_id:
        return done(UNREACHABLE)

    if isinstance(label_u, FullLabel):
        probes += 1
        return done(label_u.vector.find(label_v.name))

    best = None
    for a, b in ((label_u, label_v), (label_v, label_u)):
        probes += 1
        hit = _ball_lookup(a.ball, b.name)
        if hit is not None:
            return done(hit)
    for a, b in ((label_u, label_v), (label_v, label_u)):
        for nm, d in a.ball:
            probes += 1
            d2 = b.layer.find(nm)
            if d2 is not None and (best is None or d + d2 < best):
                best = d + d2
    assert best is not None, "same-component pair with no common hub"
    return done(best)


def _ball_lookup(ball, target_name):
    lo, hi = 0, len(ball) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        nm, d = ball[mid]
        if nm == target_name:
            return d
        if nm < target_name:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def hub_stats(labels: LabelSet) -> dict:
    """Hub-set sizes and label bit sizes; checks the exact scheme's hub bound
    degree_bound**radius + 1 + ceil(n / radius)."""
    k1, k2 = labels.entry_counts()
    hub = k1 + k2
    n = labels.n
    stats = {
        "max_hub": int(hub.max()) if n else 0,
        "avg_hub": float(hub.mean()) if n else 0.0,
        "max_label_bits": int(labels.nbits.max()) if n else 0,
        "avg_label_bits": float(labels.nbits.mean()) if n else 0.0,
    }
    if labels.scheme == "exact" and n:
        r = labels.radius
        bound = labels.degree_bound**r + 1 + -(-n // r)
        assert stats["max_hub"] <= bound, (
            f"hub set size {stats['max_hub']} over bound {bound}"
        )
    return stats
