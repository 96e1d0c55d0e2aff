"""Ground-truth tables and verification drivers."""

import numpy as np
import pytest

from hubdist import Graph, apsp, build_exact_bounded, build_full_labels, verify, verify_sample
from hubdist import _bitops as bops
from hubdist.generators import gen_cycle, gen_erdos_renyi, gen_path, gen_random_regular
from hubdist.oracle import VerifyReport


class TestApsp:
    def test_path_corner(self):
        assert apsp(gen_path(5)).delta[0, 4] == 4

    def test_cycle_antipode(self):
        assert apsp(gen_cycle(6)).delta[0, 3] == 3

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            apsp(gen_path(10), cap=5)

    def test_matches_under_node_relabeling(self):
        g = gen_erdos_renyi(30, 80, seed=3)
        rng = np.random.default_rng(0)
        perm = rng.permutation(30)
        ea, eb, ec = g.edges()
        h = Graph.from_edges(
            30,
            [(int(perm[a]), int(perm[b]), int(c)) for a, b, c in zip(ea, eb, ec)],
        )
        ta, th = apsp(g), apsp(h)
        assert np.array_equal(ta.delta, th.delta[np.ix_(perm, perm)])

    def test_self_checks_on_mixed_costs(self):
        rng = np.random.default_rng(4)
        edges = [
            (int(u), int(v), int(c))
            for u, v, c in zip(
                rng.integers(0, 40, 90), rng.integers(0, 40, 90), rng.integers(0, 2, 90)
            )
            if u != v
        ]
        t = apsp(Graph.from_edges(40, edges))
        reach = t.delta >= 0
        assert (t.hops[reach] >= t.delta[reach]).all()
        assert (t.hops >= 0).sum() == reach.sum()

    def test_delta_equals_hops_on_unit_costs(self):
        t = apsp(gen_erdos_renyi(50, 100, seed=5))
        assert np.array_equal(t.delta, t.hops)

    def test_triangle_inequality_small(self):
        t = apsp(gen_erdos_renyi(25, 60, seed=6))
        d = t.delta.astype(np.int64)
        n = t.n
        for w in range(n):
            for u in range(n):
                if d[w, u] < 0:
                    continue
                for v in range(n):
                    if d[w, v] < 0:
                        continue
                    assert 0 <= d[u, v] <= d[w, u] + d[w, v]


class TestVerify:
    def test_clean_labels_pass(self):
        g = gen_path(5)
        rep = verify(build_exact_bounded(g, 4), g, "exact")
        assert rep.ok
        assert rep.pairs == 15
        assert rep.histogram == {0: 15}  # every unordered pair plus the diagonal
        assert "0 violations" in rep.text() or rep.lines() == []

    def test_histogram_counts_reachable_pairs(self):
        g = gen_cycle(6)
        rep = verify(build_exact_bounded(g, 4), g, "exact")
        assert rep.histogram == {0: 21}

    def test_rejects_unknown_mode(self):
        g = gen_path(3)
        with pytest.raises(ValueError):
            verify(build_exact_bounded(g, 4), g, "bogus")

    def test_corrupted_label_reports_violation(self):
        g = gen_path(5)
        ls = build_full_labels(g)
        # walk label 0's blob to its stored distance for the far endpoint and
        # bump it: gamma count, explicit flag, 6-bit width, then (name, dist)
        # pairs of wn+wd bits each
        pos = int(ls.start[0])
        kp, pos = bops.read_gamma(ls.words, pos)
        k = int(kp) - 1
        assert bops.get_bit(ls.words, pos) == 0  # k=5 stays explicit
        pos += 1
        wd = int(bops.read_bits(ls.words, pos, 6))
        pos += 6
        target = pos + (k - 1) * (ls.wn + wd) + ls.wn
        old = int(bops.read_bits(ls.words, target, wd))
        bops.write_bits(ls.words, target, old - 1, wd)
        rep = verify(ls, g, "exact")
        assert not rep.ok
        assert (0, 4, 4, 3) in rep.violations
        assert "pair 0 4 expected 4 got 3" in rep.lines()

    def test_sampled_verification(self):
        g = gen_random_regular(256, 3, seed=9)
        ls = build_exact_bounded(g, 16)
        rep = verify_sample(ls, g, n_sources=20, targets_per_source=50, seed=1)
        assert rep.ok
        assert rep.pairs == 20 * 50

    def test_report_text_shape(self):
        rep = VerifyReport("exact", 3, 1, {0: 2, 1: 1}, [(0, 1, 2, 3)])
        txt = rep.text()
        assert "1 violations" in txt
        assert "0: 2, 1: 1" in txt
        assert rep.lines() == ["pair 0 1 expected 2 got 3"]

    def test_threaded_verify_matches_serial(self):
        g = gen_random_regular(128, 3, seed=4)
        ls = build_exact_bounded(g, 16)
        serial = verify(ls, g, "exact", chunk=500)
        pooled = verify(ls, g, "exact", chunk=500, threads=3)
        assert pooled.ok and serial.ok
        assert pooled.pairs == serial.pairs == 128 * 129 // 2
        assert pooled.histogram == serial.histogram
