"""Codec tests: gamma, zigzag, monotone sequences, hub sets."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hubdist.bits import (
    BitReader,
    BitWriter,
    Bits,
    EncodedHubSet,
    MonotoneSeq,
    encode_hub_set,
    gamma_decode,
    gamma_encode,
    monotone_encode,
    unzigzag,
    zigzag,
)


def test_gamma_pinned_codes():
    assert gamma_encode([1]).to_bitstring() == "1"
    assert gamma_encode([2]).to_bitstring() == "010"
    assert gamma_encode([3]).to_bitstring() == "011"
    assert gamma_encode([5]).to_bitstring() == "00101"
    assert gamma_encode([2, 5]).to_bitstring() == "01000101"


def test_gamma_code_length_law():
    for x in list(range(1, 600)) + [10**6, (1 << 40) + 7]:
        assert len(gamma_encode([x])) == 2 * int(math.floor(math.log2(x))) + 1


def test_gamma_roundtrip_sequence():
    values = [1, 2, 3, 5, 8, 1000, 1, 77, 2**40]
    assert gamma_decode(gamma_encode(values), len(values)) == values


def test_gamma_decode_from_string():
    assert gamma_decode("01000101", 2) == [2, 5]


def test_gamma_rejects_zero():
    with pytest.raises(ValueError):
        gamma_encode([0])


@given(st.lists(st.integers(min_value=1, max_value=2**50), max_size=60))
@settings(max_examples=200, deadline=None)
def test_gamma_roundtrip_property(values):
    assert gamma_decode(gamma_encode(values), len(values)) == values


def test_zigzag_pinned():
    assert [zigzag(x) for x in (0, -1, 1, -2, 7)] == [1, 2, 3, 4, 15]


@given(st.integers(min_value=-(2**40), max_value=2**40))
@settings(max_examples=200, deadline=None)
def test_zigzag_roundtrip(x):
    z = zigzag(x)
    assert z >= 1
    assert unzigzag(z) == x


def test_bitwriter_reader_roundtrip():
    w = BitWriter()
    fields = [(5, 3), (0, 1), (1023, 10), (1, 1), (0, 7), ((1 << 40) - 3, 41)]
    for v, width in fields:
        w.write(v, width)
    w.write_gamma(19)
    w.write(6, 4)
    r = BitReader(w.getdata())
    for v, width in fields:
        assert r.read(width) == v
    assert r.read_gamma() == 19
    assert r.read(4) == 6
    assert r.remaining == 0


def test_bitreader_overrun_raises():
    w = BitWriter()
    w.write(3, 2)
    r = BitReader(w.getdata())
    r.read(2)
    with pytest.raises(EOFError):
        r.read(1)


@given(
    st.lists(
        st.tuples(st.integers(min_value=0, max_value=2**30), st.integers(1, 31)),
        max_size=40,
    )
)
@settings(max_examples=150, deadline=None)
def test_bitwriter_reader_property(fields):
    w = BitWriter()
    kept = []
    for v, width in fields:
        v &= (1 << width) - 1
        kept.append((v, width))
        w.write(v, width)
    r = BitReader(w.getdata())
    for v, width in kept:
        assert r.read(width) == v


def test_bits_bitstring_roundtrip():
    s = "0110100011101"
    assert Bits.from_bitstring(s).to_bitstring() == s


# --- monotone sequences ----------------------------------------------------


def _check_monotone(values, universe):
    seq = monotone_encode(values, universe)
    assert len(seq) == len(values)
    assert seq.to_list() == list(values)
    for i, v in enumerate(values):
        assert seq.access(i) == v
    return seq

def test_monotone_empty_and_singleton():
    seq = _check_monotone([], 100)
    assert seq.size_bits == 0
    assert seq.successor_rank(50) == 0
    _check_monotone([0], 0)
    _check_monotone([7], 9)


def test_monotone_exhaustive_rank_small():
    values = [0, 2, 2, 3, 9, 9, 9, 14]
    seq = _check_monotone(values, 20)
    for x in range(-1, 22):
        assert seq.successor_rank(x) == sum(1 for v in values if v < x), x


def test_monotone_randomized_vs_naive():
    rng = np.random.default_rng(7)
    for trial in range(60):
        k = int(rng.integers(0, 400))
        universe = int(rng.integers(0, 10**5))
        values = np.sort(rng.integers(0, universe + 1, size=k)).astype(np.int64)
        seq = monotone_encode(values.tolist(), universe)
        assert seq.to_list() == values.tolist()
        idx = rng.integers(0, k, size=30) if k else []
        for i in idx:
            assert seq.access(int(i)) == values[i]
        probes = rng.integers(-2, universe + 3, size=40)
        for x in probes:
            x = int(x)
            assert seq.successor_rank(x) == int(np.sum(values < x)), (trial, x)


def test_monotone_large_triggers_select_samples():
    rng = np.random.default_rng(11)
    values = np.sort(rng.integers(0, 10**6, size=5000)).astype(np.int64)
    seq = monotone_encode(values.tolist(), 10**6)
    for i in rng.integers(0, 5000, size=200):
        assert seq.access(int(i)) == values[i]
    for x in rng.integers(0, 10**6, size=200):
        assert seq.successor_rank(int(x)) == int(np.sum(values < int(x)))


def test_monotone_dense_repeats():
    values = [5] * 300
    seq = _check_monotone(values, 6)
    assert seq.successor_rank(5) == 0
    assert seq.successor_rank(6) == 300


def test_monotone_rejects_bad_input():
    with pytest.raises(ValueError):
        monotone_encode([3, 2], 10)
    with pytest.raises(ValueError):
        monotone_encode([1, 11], 10)
    with pytest.raises(ValueError):
        monotone_encode([-1, 2], 10)


def test_monotone_size_bound():
    rng = np.random.default_rng(3)
    for _ in range(40):
        k = int(rng.integers(1, 600))
        universe = int(rng.integers(1, 10**6))
        values = np.sort(rng.integers(0, universe + 1, size=k))
        seq = monotone_encode(values.tolist(), universe)
        bound = 4 * k + k * math.ceil(math.log2(universe / k + 1 + 1e-12)) + 256
        assert seq.size_bits <= bound + k  # integer-ratio ceiling vs float ceil


@given(st.lists(st.integers(min_value=0, max_value=10**6), max_size=200))
@settings(max_examples=100, deadline=None)
def test_monotone_roundtrip_property(values):
    values.sort()
    universe = (values[-1] if values else 0) + 3
    seq = monotone_encode(values, universe)
    assert seq.to_list() == values


# --- hub sets --------------------------------------------------------------


def _naive_diff_vectors(dists):
    """Reference append rule for the two difference bit-vectors."""
    bp, bn = "", ""
    for i in range(1, len(dists)):
        d = dists[i] - dists[i - 1]
        if d >= 0:
            bp += "0" * d + "1"
            bn += "1"
        else:
            bp += "1"
            bn += "0" * (-d) + "1"
    return bp, bn


def _naive_dist(dists, i):
    """dist(i) from the reference vectors: base plus signed zero counts."""
    bp, bn = _naive_diff_vectors(dists)
    if i == 0:
        return dists[0]

    def zeros_before_one(s, j):
        ones = 0
        for pos, ch in enumerate(s):
            if ch == "1":
                ones += 1
                if ones == j:
                    return pos - (j - 1)
        raise AssertionError("one not found")

    return dists[0] + zeros_before_one(bp, i) - zeros_before_one(bn, i)


def test_diff_vector_reference_pinned():
    # dists 0,1,2: +1 appends "01" to B+ and "1" to B- each step
    assert _naive_diff_vectors([0, 1, 2]) == ("0101", "11")
    assert _naive_dist([0, 1, 2], 2) == 2


def test_hubset_roundtrip_tiny():
    entries = [(1, 0), (2, 1), (3, 2)]
    hs = encode_hub_set(entries, 5)
    assert list(hs.items()) == entries
    assert hs.find(2) == 1
    assert hs.find(4) is None
    assert hs.member(3) == 2
    assert hs.member(5) is None
    assert hs.dist(0) == 0


def test_hubset_empty():
    hs = encode_hub_set([], 10)
    assert hs.size_bits == 0
    assert list(hs.items()) == []
    assert hs.find(3) is None


def test_hubset_explicit_succinct_boundary():
    for k in (1, 7, 8, 9, 10, 40):
        n = 64
        entries = [(i + 1, (i * 7) % 13) for i in range(k)]
        hs = encode_hub_set(entries, n)
        assert list(hs.items()) == entries
        for name, dist in entries:
            assert hs.find(name) == dist
        assert hs.find(k + 1) is None if k + 1 <= n else True


def test_hubset_matches_reference_decoder():
    rng = np.random.default_rng(23)
    for trial in range(30):
        k = int(rng.integers(9, 80))  # succinct branch
        n = int(rng.integers(k, 4 * k + 2))
        names = np.sort(rng.choice(np.arange(1, n + 1), size=k, replace=False))
        dists = rng.integers(0, n, size=k).tolist()
        entries = [(int(a), int(b)) for a, b in zip(names, dists)]
        hs = encode_hub_set(entries, n)
        for i in range(k):
            assert hs.dist(i) == _naive_dist(dists, i), (trial, i)
        assert list(hs.items()) == entries


def test_hubset_membership_exhaustive():
    rng = np.random.default_rng(5)
    for trial in range(25):
        n = int(rng.integers(1, 512))
        k = int(rng.integers(0, n + 1))
        names = np.sort(rng.choice(np.arange(1, n + 1), size=k, replace=False))
        entries = [(int(a), int(rng.integers(0, n + 1))) for a in names]
        hs = encode_hub_set(entries, n)
        table = dict(entries)
        for name in range(1, n + 1):
            got = hs.find(name)
            assert got == table.get(name), (trial, name)


def test_hubset_rejects_duplicates_and_unsorted():
    with pytest.raises(ValueError):
        encode_hub_set([(2, 0), (2, 1)], 5)
    with pytest.raises(ValueError):
        encode_hub_set([(3, 0), (1, 1)], 5)
    with pytest.raises(ValueError):
        encode_hub_set([(0, 0)], 5)
    with pytest.raises(ValueError):
        encode_hub_set([(6, 0)], 5)


def test_hubset_size_bound_randomized():
    rng = np.random.default_rng(17)
    for _ in range(200):
        n = int(rng.integers(1, 2000))
        k = int(rng.integers(0, n + 1))
        names = np.sort(rng.choice(np.arange(1, n + 1), size=k, replace=False))
        base = int(rng.integers(0, n))
        walk = rng.integers(-3, 4, size=k)
        dists = np.maximum(0, base + np.cumsum(walk))
        entries = [(int(a), int(d)) for a, d in zip(names, dists)]
        hs = encode_hub_set(entries, n)
        if k:
            assert hs.size_bits <= 24 * k * math.log2(2 + n / k)
        else:
            assert hs.size_bits == 0


def test_hubset_probe_min_matches_table():
    from hubdist._bitops import hubset_probe_min

    big = np.int64(1) << 62
    rng = np.random.default_rng(31)
    for trial in range(50):
        n = int(rng.integers(1, 700))
        k = int(rng.integers(0, n + 1))
        names = np.sort(rng.choice(np.arange(1, n + 1), size=k, replace=False))
        base = int(rng.integers(0, 30))
        walk = rng.integers(-2, 3, size=k)
        dists = np.maximum(0, base + np.cumsum(walk)) if k else np.empty(0, np.int64)
        entries = [(int(a), int(d)) for a, d in zip(names, dists)]
        hs = encode_hub_set(entries, n)
        kq = int(rng.integers(0, n + 1))
        qn = np.sort(rng.choice(np.arange(1, n + 1), size=kq, replace=False)).astype(np.int64)
        qd = rng.integers(0, 50, size=kq).astype(np.int64)
        table = dict(entries)
        want = big
        for nm, extra in zip(qn, qd):
            if int(nm) in table:
                want = min(want, table[int(nm)] + int(extra))
        got = hubset_probe_min(hs._padded(), 0, k, hs.wn, qn - 1, qd, kq, big)
        assert got == want, trial


def test_hubset_probe_min_bucket_runs_and_jumps():
    from hubdist._bitops import hubset_probe_min

    big = np.int64(1) << 62
    # dense runs share occupancy buckets, the lone far name forces a
    # sampled jump across thousands of empty buckets
    n = 4096
    names = list(range(100, 160)) + list(range(3000, 3030)) + [4096]
    entries = [(nm, (nm * 7) % 23) for nm in names]
    hs = encode_hub_set(entries, n)
    table = dict(entries)
    queries = sorted(set(range(90, 170, 3)) | {2000, 4095, 4096} | set(range(2999, 3031)))
    qn = np.array(queries, np.int64)
    qd = np.zeros(len(qn), np.int64)
    want = min(table[q] for q in queries if q in table)
    got = hubset_probe_min(hs._padded(), 0, len(entries), hs.wn, qn - 1, qd, len(qn), big)
    assert got == want
    # disjoint probes leave best untouched
    miss = np.array([170, 171, 2500], np.int64)
    kept = hubset_probe_min(hs._padded(), 0, len(entries), hs.wn, miss - 1, qd[:3], 3, big)
    assert kept == big
