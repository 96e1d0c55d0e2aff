"""Label blob kernels: per-node serialization and batch decoding.

Blob layouts (bit offsets relative to each node's word-aligned start):

exact scheme
    gamma(k1 + 1)                       ball entry count
    [k1 > 0] 6-bit dist width wd
    k1 * (name0 wn bits, dist wd bits)  sorted by name0
    gamma(k2 + 1)                       layer entry count
    hub-set payload                     layer names0 + dists

full scheme
    gamma(k + 1)
    hub-set payload                     whole component, names0 + dists

Names are stored 0-based.  Decoding evaluates both query orientations and
returns the minimum; NONE signals that no common hub exists (impossible for
same-component pairs when the build is sound).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._bitops import (
    _bitlen,
    hubset_decode_all,
    hubset_find,
    hubset_probe_min,
    hubset_skip,
    read_bits,
    read_gamma,
    write_bits,
    write_gamma,
    hubset_write,
)

INF = np.int64(1) << 62
NONE = np.int64(-2)
UNREACH = np.int64(-1)


@njit(cache=True, nogil=True)
def write_exact_label(words, pos, ball_names0, ball_dists, k1, layer_names0, layer_dists, k2, wn):
    pos = write_gamma(words, pos, k1 + 1)
    if k1 > 0:
        md = 0
        for i in range(k1):
            if ball_dists[i] > md:
                md = ball_dists[i]
        wd = _bitlen(md)
        if wd < 1:
            wd = 1
        pos = write_bits(words, pos, wd, 6)
        for i in range(k1):
            pos = write_bits(words, pos, ball_names0[i], wn)
            pos = write_bits(words, pos, ball_dists[i], wd)
    pos = write_gamma(words, pos, k2 + 1)
    return hubset_write(words, pos, layer_names0, layer_dists, k2, wn)


@njit(cache=True, nogil=True)
def write_full_label(words, pos, names0, dists, k, wn):
    pos = write_gamma(words, pos, k + 1)
    return hubset_write(words, pos, names0, dists, k, wn)


@njit(cache=True, nogil=True, inline="always")
def _parse_ball(words, pos, wn):
    """-> (k1, wd, pair_base, pos_after_ball)"""
    k1p, pos = read_gamma(words, pos)
    k1 = k1p - 1
    wd = 0
    base = pos
    if k1 > 0:
        wd = read_bits(words, pos, 6)
        base = pos + 6
        pos = base + k1 * (wn + wd)
    return k1, wd, base, pos


@njit(cache=True, nogil=True, inline="always")
def _ball_find(words, base, k1, wn, wd, target):
    """Binary search the sorted ball pairs; stored dist or -1."""
    lo, hi = 0, k1 - 1
    step = wn + wd
    while lo <= hi:
        mid = (lo + hi) >> 1
        nm = read_bits(words, base + mid * step, wn)
        if nm == target:
            return read_bits(words, base + mid * step + wn, wd)
        if nm < target:
            lo = mid + 1
        else:
            hi = mid - 1
    return np.int64(-1)


@njit(cache=True, nogil=True, inline="always")
def _merge_ball_layer(words, base, k1, wn, wd, lay_names, lay_dists, k2, best):
    """min over common names of ball dist + layer dist, merged in name order."""
    j = 0
    step = wn + wd
    for i in range(k1):
        nm = read_bits(words, base + i * step, wn)
        while j < k2 and lay_names[j] < nm:
            j += 1
        if j >= k2:
            break
        if lay_names[j] == nm:
            cand = read_bits(words, base + i * step + wn, wd) + lay_dists[j]
            if cand < best:
                best = cand
    return best


@njit(cache=True, nogil=True)
def exact_label_sizes(words, start, wn, out_k1, out_k2):
    for u in range(start.shape[0]):
        k1, wd, base, pos = _parse_ball(words, start[u], wn)
        k2p, _ = read_gamma(words, pos)
        out_k1[u] = k1
        out_k2[u] = k2p - 1


@njit(cache=True, nogil=True)
def full_label_sizes(words, start, out_k):
    for u in range(start.shape[0]):
        kp, _ = read_gamma(words, start[u])
        out_k[u] = kp - 1


@njit(cache=True, nogil=True, inline="always")
def _layer_decode(words, start, wn, sn, sd):
    """Skip the ball section, decode the layer hub set into sn/sd; -> k2."""
    k1, wd, base, pos = _parse_ball(words, start, wn)
    k2p, pos = read_gamma(words, pos)
    k2 = k2p - 1
    hubset_decode_all(words, pos, k2, wn, sn, sd)
    return k2


@njit(cache=True, nogil=True)
def decode_exact_one(words, start, wn, name0, comp, u, v, sn, sd):
    if u == v:
        return np.int64(0)
    if comp[u] != comp[v]:
        return UNREACH
    k1u, wdu, bu, _ = _parse_ball(words, start[u], wn)
    hit = _ball_find(words, bu, k1u, wn, wdu, name0[v])
    if hit >= 0:
        return hit
    k1v, wdv, bv, _ = _parse_ball(words, start[v], wn)
    hit = _ball_find(words, bv, k1v, wn, wdv, name0[u])
    if hit >= 0:
        return hit
    best = INF
    k2 = _layer_decode(words, start[v], wn, sn, sd)
    best = _merge_ball_layer(words, bu, k1u, wn, wdu, sn, sd, k2, best)
    k2 = _layer_decode(words, start[u], wn, sn, sd)
    best = _merge_ball_layer(words, bv, k1v, wn, wdv, sn, sd, k2, best)
    if best >= INF:
        return NONE
    return best


@njit(cache=True, nogil=True)
def decode_exact_batch(words, start, wn, name0, comp, us, vs, out):
    n = name0.shape[0]
    sn = np.empty(n, np.int64)
    sd = np.empty(n, np.int64)
    bad = 0
    for q in range(us.shape[0]):
        r = decode_exact_one(words, start, wn, name0, comp, us[q], vs[q], sn, sd)
        if r == NONE:
            bad += 1
        out[q] = r
    return bad


@njit(cache=True, nogil=True)
def decode_exact_probe_one(words, start, wn, name0, comp, u, v, qn, qd):
    """Same result as decode_exact_one, but probes the other side's layer
    set per ball entry instead of decoding it wholesale, so per-query cost
    tracks the ball sizes and timings reflect how labels grow.  qn/qd are
    caller scratch with room for the largest ball."""
    if u == v:
        return np.int64(0)
    if comp[u] != comp[v]:
        return UNREACH
    k1u, wdu, bu, pu = _parse_ball(words, start[u], wn)
    hit = _ball_find(words, bu, k1u, wn, wdu, name0[v])
    if hit >= 0:
        return hit
    k1v, wdv, bv, pv = _parse_ball(words, start[v], wn)
    hit = _ball_find(words, bv, k1v, wn, wdv, name0[u])
    if hit >= 0:
        return hit
    k2up, lu = read_gamma(words, pu)
    k2vp, lv = read_gamma(words, pv)
    best = INF
    step = wn + wdu
    for i in range(k1u):
        qn[i] = read_bits(words, bu + i * step, wn)
        qd[i] = read_bits(words, bu + i * step + wn, wdu)
    best = hubset_probe_min(words, lv, k2vp - 1, wn, qn, qd, k1u, best)
    step = wn + wdv
    for i in range(k1v):
        qn[i] = read_bits(words, bv + i * step, wn)
        qd[i] = read_bits(words, bv + i * step + wn, wdv)
    best = hubset_probe_min(words, lu, k2up - 1, wn, qn, qd, k1v, best)
    if best >= INF:
        return NONE
    return best


@njit(cache=True, nogil=True)
def decode_exact_probe_batch(words, start, wn, name0, comp, us, vs, out):
    n = name0.shape[0]
    qn = np.empty(n, np.int64)
    qd = np.empty(n, np.int64)
    for q in range(us.shape[0]):
        out[q] = decode_exact_probe_one(words, start, wn, name0, comp, us[q], vs[q], qn, qd)


# --- additive labels ------------------------------------------------------
# Blob layout:
#   gamma(k1 + 1); [k1 > 0] 6-bit wd; k1 * (name0 wn, dist wd)   restricted ball
#   gamma(k2 + 1); hub-set payload                               residue layer
#   gamma(k3 + 1); hub-set payload                               dists to S'
#   gamma(k4 + 1); k4 * name0 wn bits                            boundary subset


@njit(cache=True, nogil=True)
def write_additive_label(
    words, pos, ball_names0, ball_dists, k1,
    layer_names0, layer_dists, k2,
    sall_names0, sall_dists, k3,
    su_names0, k4, wn,
):
    pos = write_gamma(words, pos, k1 + 1)
    if k1 > 0:
        md = 0
        for i in range(k1):
            if ball_dists[i] > md:
                md = ball_dists[i]
        wd = _bitlen(md)
        if wd < 1:
            wd = 1
        pos = write_bits(words, pos, wd, 6)
        for i in range(k1):
            pos = write_bits(words, pos, ball_names0[i], wn)
            pos = write_bits(words, pos, ball_dists[i], wd)
    pos = write_gamma(words, pos, k2 + 1)
    pos = hubset_write(words, pos, layer_names0, layer_dists, k2, wn)
    pos = write_gamma(words, pos, k3 + 1)
    pos = hubset_write(words, pos, sall_names0, sall_dists, k3, wn)
    pos = write_gamma(words, pos, k4 + 1)
    for i in range(k4):
        pos = write_bits(words, pos, su_names0[i], wn)
    return pos


@njit(cache=True, nogil=True, inline="always")
def _parse_additive(words, start, wn):
    """-> (k1, wd, ball_base, k2, layer_pos, k3, sall_pos, k4, su_base)"""
    k1, wd, ball_base, pos = _parse_ball(words, start, wn)
    k2p, layer_pos = read_gamma(words, pos)
    k2 = k2p - 1
    pos = hubset_skip(words, layer_pos, k2, wn)
    k3p, sall_pos = read_gamma(words, pos)
    k3 = k3p - 1
    pos = hubset_skip(words, sall_pos, k3, wn)
    k4p, su_base = read_gamma(words, pos)
    return k1, wd, ball_base, k2, layer_pos, k3, sall_pos, k4p - 1, su_base


@njit(cache=True, nogil=True)
def additive_label_sizes(words, start, wn, out_k1, out_k2, out_k3, out_k4):
    for u in range(start.shape[0]):
        k1, wd, bb, k2, lp, k3, sp, k4, sb = _parse_additive(words, start[u], wn)
        out_k1[u] = k1
        out_k2[u] = k2
        out_k3[u] = k3
        out_k4[u] = k4


@njit(cache=True, nogil=True, inline="always")
def _sorted_find(names, k, target):
    lo, hi = 0, k - 1
    while lo <= hi:
        mid = (lo + hi) >> 1
        if names[mid] == target:
            return mid
        if names[mid] < target:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


@njit(cache=True, nogil=True)
def decode_additive_one(words, start, wn, name0, comp, u, v, ln, ld, an, ad, bn, bd):
    if u == v:
        return np.int64(0)
    if comp[u] != comp[v]:
        return UNREACH
    k1u, wdu, bu, k2u, lpu, k3u, spu, k4u, sbu = _parse_additive(words, start[u], wn)
    hit = _ball_find(words, bu, k1u, wn, wdu, name0[v])
    if hit >= 0:
        return hit
    k1v, wdv, bv, k2v, lpv, k3v, spv, k4v, sbv = _parse_additive(words, start[v], wn)
    hit = _ball_find(words, bv, k1v, wn, wdv, name0[u])
    if hit >= 0:
        return hit
    best = INF
    hubset_decode_all(words, lpv, k2v, wn, ln, ld)
    best = _merge_ball_layer(words, bu, k1u, wn, wdu, ln, ld, k2v, best)
    hubset_decode_all(words, lpu, k2u, wn, ln, ld)
    best = _merge_ball_layer(words, bv, k1v, wn, wdv, ln, ld, k2u, best)
    hubset_decode_all(words, spu, k3u, wn, an, ad)
    hubset_decode_all(words, spv, k3v, wn, bn, bd)
    for i in range(k4u):
        nm = read_bits(words, sbu + i * wn, wn)
        ia = _sorted_find(an, k3u, nm)
        ib = _sorted_find(bn, k3v, nm)
        if ia >= 0 and ib >= 0:
            cand = ad[ia] + bd[ib]
            if cand < best:
                best = cand
    for i in range(k4v):
        nm = read_bits(words, sbv + i * wn, wn)
        ia = _sorted_find(bn, k3v, nm)
        ib = _sorted_find(an, k3u, nm)
        if ia >= 0 and ib >= 0:
            cand = bd[ia] + ad[ib]
            if cand < best:
                best = cand
    if best >= INF:
        return NONE
    return best


@njit(cache=True, nogil=True)
def decode_additive_batch(words, start, wn, name0, comp, us, vs, out):
    n = name0.shape[0]
    ln = np.empty(n, np.int64)
    ld = np.empty(n, np.int64)
    an = np.empty(n, np.int64)
    ad = np.empty(n, np.int64)
    bn = np.empty(n, np.int64)
    bd = np.empty(n, np.int64)
    bad = 0
    for q in range(us.shape[0]):
        r = decode_additive_one(
            words, start, wn, name0, comp, us[q], vs[q], ln, ld, an, ad, bn, bd
        )
        if r == NONE:
            bad += 1
        out[q] = r
    return bad


# --- correction tables ----------------------------------------------------
# Trits are packed 20 per 32-bit word base 3; the final partial group of t
# trits is one base-3 integer in bitlen(3**t - 1) bits.  Bit mode is a plain
# bit per window slot.

TRITS_PER_WORD = 20


@njit(cache=True, nogil=True, inline="always")
def _pow3(e):
    r = np.int64(1)
    for _ in range(e):
        r *= 3
    return r


@njit(cache=True, nogil=True)
def trit_block_bits(count):
    full = count // TRITS_PER_WORD
    tail = count % TRITS_PER_WORD
    bits = full * 32
    if tail:
        bits += _bitlen(_pow3(tail) - 1)
    return bits


@njit(cache=True, nogil=True)
def pack_trits(words, pos, trits, count):
    i = 0
    while count - i >= TRITS_PER_WORD:
        val = np.int64(0)
        for j in range(TRITS_PER_WORD - 1, -1, -1):
            val = val * 3 + trits[i + j]
        pos = write_bits(words, pos, val, 32)
        i += TRITS_PER_WORD
    tail = count - i
    if tail:
        val = np.int64(0)
        for j in range(tail - 1, -1, -1):
            val = val * 3 + trits[i + j]
        pos = write_bits(words, pos, val, _bitlen(_pow3(tail) - 1))
    return pos


@njit(cache=True, nogil=True, inline="always")
def read_trit(words, base, count, idx):
    group = idx // TRITS_PER_WORD
    within = idx % TRITS_PER_WORD
    if group < count // TRITS_PER_WORD:
        val = read_bits(words, base + group * 32, 32)
    else:
        tail = count % TRITS_PER_WORD
        val = read_bits(words, base + (count // TRITS_PER_WORD) * 32, _bitlen(_pow3(tail) - 1))
    return (val // _pow3(within)) % 3


@njit(cache=True, nogil=True)
def pack_bits(words, pos, bits, count):
    for i in range(count):
        pos = write_bits(words, pos, bits[i], 1)
    return pos


@njit(cache=True, nogil=True)
def apply_corrections(words, start, n, half, trit_mode, us, vs, dprime, out):
    """out = dprime - stored difference for each query's canonical window slot."""
    for q in range(us.shape[0]):
        u = us[q]
        v = vs[q]
        d = dprime[q]
        if u == v or d < 0:
            out[q] = d
            continue
        r = (v - u) % n
        if r > half or (2 * r == n and v < u):
            u, v = v, u
            r = n - r
        idx = r - 1
        base = start[u]
        if trit_mode:
            t = read_trit(words, base, half, idx)
        else:
            t = 2 * read_bits(words, base + idx, 1)
        out[q] = d - t


@njit(cache=True, nogil=True)
def decode_full_one(words, start, wn, name0, comp, u, v):
    if u == v:
        return np.int64(0)
    if comp[u] != comp[v]:
        return UNREACH
    kp, pos = read_gamma(words, start[u])
    d = hubset_find(words, pos, kp - 1, wn, name0[v])
    if d < 0:
        return NONE
    return d


@njit(cache=True, nogil=True)
def decode_full_batch(words, start, wn, name0, comp, us, vs, out):
    bad = 0
    for q in range(us.shape[0]):
        r = decode_full_one(words, start, wn, name0, comp, us[q], vs[q])
        if r == NONE:
            bad += 1
        out[q] = r
    return bad
