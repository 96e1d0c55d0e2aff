"""Bit-stream kernels shared by the codecs and the label encoders.

Streams are arrays of uint32 limbs; bit position p lives in limb p >> 5 at
bit p & 31, and multi-bit fields are written least-significant bit first.
The one exception is the Elias gamma code, whose value bits follow the
classic most-significant-first layout so that gamma(2) reads as "010".

All arithmetic is carried out in int64; field widths are capped at 57 bits
so three limbs always suffice.  Functions here assume pre-sized buffers and
do not bounds-check; callers own the sizing maths.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_FIELD_WIDTH = 57
# worst-case bits written by a gamma code for values < 2**57
GAMMA_MAX_BITS = 115


@njit(cache=True, nogil=True, inline="always")
def _bitlen(x):
    n = 0
    while x > 0:
        x >>= 1
        n += 1
    return n


@njit(cache=True, nogil=True, inline="always")
def _popcount32(x):
    x = x - ((x >> 1) & 0x55555555)
    x = (x & 0x33333333) + ((x >> 2) & 0x33333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F
    return ((x * 0x01010101) >> 24) & 0x3F


@njit(cache=True, nogil=True, inline="always")
def write_bits(words, pos, value, width):
    """Masked insert of `width` bits of `value` at `pos`; returns end position."""
    while width > 0:
        w = pos >> 5
        o = pos & 31
        take = 32 - o
        if take > width:
            take = width
        mask = (1 << take) - 1
        cur = np.int64(words[w])
        cur = (cur & ~(mask << o)) | ((value & mask) << o)
        words[w] = cur & 0xFFFFFFFF
        value >>= take
        pos += take
        width -= take
    return pos


@njit(cache=True, nogil=True, inline="always")
def read_bits(words, pos, width):
    w = pos >> 5
    o = pos & 31
    v = np.int64(words[w]) >> o
    got = 32 - o
    while got < width:
        w += 1
        v |= np.int64(words[w]) << got
        got += 32
    return v & ((1 << width) - 1)


@njit(cache=True, nogil=True, inline="always")
def zero_bits(words, pos, length):
    end = pos + length
    while pos < end and (pos & 31) != 0:
        w = pos >> 5
        words[w] = np.int64(words[w]) & ~(1 << (pos & 31)) & 0xFFFFFFFF
        pos += 1
    while end - pos >= 32:
        words[pos >> 5] = 0
        pos += 32
    while pos < end:
        w = pos >> 5
        words[w] = np.int64(words[w]) & ~(1 << (pos & 31)) & 0xFFFFFFFF
        pos += 1


@njit(cache=True, nogil=True, inline="always")
def set_bit(words, pos):
    w = pos >> 5
    words[w] = (np.int64(words[w]) | (1 << (pos & 31))) & 0xFFFFFFFF


@njit(cache=True, nogil=True, inline="always")
def get_bit(words, pos):
    return (np.int64(words[pos >> 5]) >> (pos & 31)) & 1


@njit(cache=True, nogil=True, inline="always")
def write_gamma(words, pos, value):
    """Elias gamma for value >= 1: floor(log2) zeros, then the value MSB-first."""
    nb = _bitlen(value) - 1
    pos = write_bits(words, pos, 0, nb)
    for i in range(nb, -1, -1):
        pos = write_bits(words, pos, (value >> i) & 1, 1)
    return pos


@njit(cache=True, nogil=True, inline="always")
def read_gamma(words, pos):
    """Returns (value, end position); value -1 on a malformed run of zeros."""
    nb = 0
    while get_bit(words, pos) == 0:
        nb += 1
        pos += 1
        if nb > MAX_FIELD_WIDTH:
            return -1, pos
    pos += 1
    value = 1
    for _ in range(nb):
        value = (value << 1) | get_bit(words, pos)
        pos += 1
    return value, pos


@njit(cache=True, nogil=True, inline="always")
def gamma_cost(value):
    return 2 * (_bitlen(value) - 1) + 1


# --- monotone sequence (high/low split over one-positions) -----------------
#
# Layout for k > 0 values (k is stored by the caller, not here):
#   gamma(U + 1)              U = largest value
#   l                         6-bit low-part width, floor(log2(U / k)) or 0
#   low                       k * l bits, value & (2^l - 1) each
#   high                      k + nb bits; bucket b = value >> l contributes
#                             one 1-bit per value, buckets terminated by 0;
#                             nb = (U >> l) + 1 buckets
#   sel1                      if k > 64: ceil(k/64) 32-bit positions of every
#                             64th 1-bit inside high
#   sel0                      if nb > 64: ceil(nb/64) 32-bit positions of
#                             every 64th 0-bit inside high
#
# k = 0 writes nothing at all.

SELECT_SAMPLE = 64


@njit(cache=True, nogil=True)
def monotone_write(words, pos, values, k):
    if k == 0:
        return pos
    U = values[k - 1]
    pos = write_gamma(words, pos, U + 1)
    q = U // k
    l = _bitlen(q) - 1 if q >= 1 else 0
    pos = write_bits(words, pos, l, 6)
    if l > 0:
        mask = (1 << l) - 1
        for i in range(k):
            pos = write_bits(words, pos, values[i] & mask, l)
    nb = (U >> l) + 1
    hlen = k + nb
    zero_bits(words, pos, hlen)
    for i in range(k):
        set_bit(words, pos + (values[i] >> l) + i)
    pos += hlen
    if k > SELECT_SAMPLE:
        for s in range((k + SELECT_SAMPLE - 1) // SELECT_SAMPLE):
            i = s * SELECT_SAMPLE
            pos = write_bits(words, pos, (values[i] >> l) + i, 32)
    if nb > SELECT_SAMPLE:
        for s in range((nb + SELECT_SAMPLE - 1) // SELECT_SAMPLE):
            j = s * SELECT_SAMPLE
            # ones at buckets <= j = count of values <= ((j+1) << l) - 1
            lo = 0
            hi = k
            target = ((j + 1) << l) - 1
            while lo < hi:
                mid = (lo + hi) >> 1
                if values[mid] <= target:
                    lo = mid + 1
                else:
                    hi = mid
            pos = write_bits(words, pos, lo + j, 32)
    return pos


@njit(cache=True, nogil=True, inline="always")
def _monotone_parse(words, pos, k):
    """Returns (U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, end)."""
    U, p = read_gamma(words, pos)
    U -= 1
    l = read_bits(words, p, 6)
    p += 6
    low_pos = p
    p += k * l
    high_pos = p
    nb = (U >> l) + 1
    hlen = k + nb
    p += hlen
    sel1_pos = p
    if k > SELECT_SAMPLE:
        p += ((k + SELECT_SAMPLE - 1) // SELECT_SAMPLE) * 32
    sel0_pos = p
    if nb > SELECT_SAMPLE:
        p += ((nb + SELECT_SAMPLE - 1) // SELECT_SAMPLE) * 32
    return U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, p


@njit(cache=True, nogil=True)
def monotone_skip(words, pos, k):
    if k == 0:
        return pos
    return _monotone_parse(words, pos, k)[8]


@njit(cache=True, nogil=True, inline="always")
def _scan_select1(words, high_pos, hlen, start_rel, need):
    """H-relative position of the 1-bit reached after seeing `need` ones,
    scanning from start_rel.  Returns -1 past the end (corrupt stream)."""
    p = high_pos + start_rel
    end = high_pos + hlen
    while p < end:
        o = p & 31
        chunk = (np.int64(words[p >> 5]) >> o) & ((1 << (32 - o)) - 1)
        avail = 32 - o
        if p + avail > end:
            avail = end - p
            chunk &= (1 << avail) - 1
        c = _popcount32(chunk)
        if c >= need:
            idx = 0
            while True:
                if chunk & 1:
                    need -= 1
                    if need == 0:
                        return p + idx - high_pos
                chunk >>= 1
                idx += 1
        need -= c
        p += avail
    return -1


@njit(cache=True, nogil=True, inline="always")
def _scan_select0(words, high_pos, hlen, start_rel, need):
    p = high_pos + start_rel
    end = high_pos + hlen
    while p < end:
        o = p & 31
        chunk = (~np.int64(words[p >> 5]) >> o) & ((1 << (32 - o)) - 1)
        avail = 32 - o
        if p + avail > end:
            avail = end - p
            chunk &= (1 << avail) - 1
        c = _popcount32(chunk)
        if c >= need:
            idx = 0
            while True:
                if chunk & 1:
                    need -= 1
                    if need == 0:
                        return p + idx - high_pos
                chunk >>= 1
                idx += 1
        need -= c
        p += avail
    return -1


@njit(cache=True, nogil=True, inline="always")
def _select1(words, high_pos, hlen, sel1_pos, k, i):
    """H-relative position of 1-bit number i (0-indexed)."""
    if k > SELECT_SAMPLE:
        s = i // SELECT_SAMPLE
        base = read_bits(words, sel1_pos + s * 32, 32)
        skip = i - s * SELECT_SAMPLE
        if skip == 0:
            return base
        return _scan_select1(words, high_pos, hlen, base + 1, skip)
    return _scan_select1(words, high_pos, hlen, 0, i + 1)


@njit(cache=True, nogil=True, inline="always")
def _select0(words, high_pos, hlen, sel0_pos, nb, j):
    """H-relative position of 0-bit number j (0-indexed)."""
    if nb > SELECT_SAMPLE:
        s = j // SELECT_SAMPLE
        base = read_bits(words, sel0_pos + s * 32, 32)
        skip = j - s * SELECT_SAMPLE
        if skip == 0:
            return base
        return _scan_select0(words, high_pos, hlen, base + 1, skip)
    return _scan_select0(words, high_pos, hlen, 0, j + 1)


@njit(cache=True, nogil=True)
def monotone_access(words, pos, k, i):
    U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, _ = _monotone_parse(
        words, pos, k
    )
    p = _select1(words, high_pos, hlen, sel1_pos, k, i)
    if p < 0:
        return -1
    b = p - i
    v = b << l
    if l > 0:
        v |= read_bits(words, low_pos + i * l, l)
    return v


@njit(cache=True, nogil=True)
def monotone_succ_rank(words, pos, k, x):
    """Number of stored values strictly below x."""
    if k == 0:
        return 0
    U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, _ = _monotone_parse(
        words, pos, k
    )
    if x > U:
        return k
    if x < 0:
        return 0
    b = x >> l
    if b == 0:
        first = 0
        run_pos = 0
    else:
        p0 = _select0(words, high_pos, hlen, sel0_pos, nb, b - 1)
        if p0 < 0:
            return -1
        first = p0 + 1 - b
        run_pos = p0 + 1
    xl = x & ((1 << l) - 1)
    e = first
    while run_pos < hlen and get_bit(words, high_pos + run_pos) == 1:
        lo = read_bits(words, low_pos + e * l, l) if l > 0 else 0
        if lo >= xl:
            break
        e += 1
        run_pos += 1
    return e


@njit(cache=True, nogil=True)
def monotone_member(words, pos, k, x):
    """Index of x among the stored values, or -1.  First match on repeats."""
    if k == 0:
        return -1
    U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, _ = _monotone_parse(
        words, pos, k
    )
    if x < 0 or x > U:
        return -1
    b = x >> l
    if b == 0:
        first = 0
        run_pos = 0
    else:
        p0 = _select0(words, high_pos, hlen, sel0_pos, nb, b - 1)
        if p0 < 0:
            return -1
        first = p0 + 1 - b
        run_pos = p0 + 1
    xl = x & ((1 << l) - 1)
    e = first
    while run_pos < hlen and get_bit(words, high_pos + run_pos) == 1:
        lo = read_bits(words, low_pos + e * l, l) if l > 0 else 0
        if lo == xl:
            return e
        if lo > xl:
            return -1
        e += 1
        run_pos += 1
    return -1


@njit(cache=True, nogil=True)
def monotone_decode_all(words, pos, k, out):
    if k == 0:
        return
    U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, _ = _monotone_parse(
        words, pos, k
    )
    e = 0
    b = 0
    p = 0
    while e < k and p < hlen:
        if get_bit(words, high_pos + p) == 1:
            v = b << l
            if l > 0:
                v |= read_bits(words, low_pos + e * l, l)
            out[e] = v
            e += 1
        else:
            b += 1
        p += 1


def monotone_size_bits(values, k):
    """Exact encoded size, mirroring monotone_write (python-side planning)."""
    if k == 0:
        return 0
    U = int(values[k - 1])
    q = U // k
    l = q.bit_length() - 1 if q >= 1 else 0
    nb = (U >> l) + 1
    bits = (2 * ((U + 1).bit_length() - 1) + 1) + 6 + k * l + k + nb
    if k > SELECT_SAMPLE:
        bits += ((k + SELECT_SAMPLE - 1) // SELECT_SAMPLE) * 32
    if nb > SELECT_SAMPLE:
        bits += ((nb + SELECT_SAMPLE - 1) // SELECT_SAMPLE) * 32
    return bits


# --- hub set (names + distances) -------------------------------------------
#
# A hub set of k entries (name, dist), sorted by name, is stored after a
# caller-written gamma(k + 1) count as:
#   k == 0            nothing
#   k <= 8            flag 0, 6-bit dist width wd, then k fixed-width pairs
#                     (name - 1 in wn bits, dist in wd bits)
#   k > 8             flag 1, gamma(dist_0 + 1), monotone(name - 1 values),
#                     monotone(one-positions of the non-negative difference
#                     vector), monotone(same for negative differences)
#
# The difference vectors follow the append rule: for each consecutive pair,
# a step of +d appends d zeros then a one to the positive vector and a bare
# one to the negative vector (and symmetrically for -d).  dist(i) is then
# dist_0 plus the zeros preceding one i in the positive vector minus the
# zeros preceding one i in the negative vector.

EXPLICIT_MAX = 8


@njit(cache=True, nogil=True)
def hubset_write(words, pos, names0, dists, k, wn):
    if k == 0:
        return pos
    if k <= EXPLICIT_MAX:
        pos = write_bits(words, pos, 0, 1)
        md = 0
        for i in range(k):
            if dists[i] > md:
                md = dists[i]
        wd = _bitlen(md)
        if wd < 1:
            wd = 1
        pos = write_bits(words, pos, wd, 6)
        for i in range(k):
            pos = write_bits(words, pos, names0[i], wn)
            pos = write_bits(words, pos, dists[i], wd)
        return pos
    pos = write_bits(words, pos, 1, 1)
    pos = write_gamma(words, pos, dists[0] + 1)
    pos = monotone_write(words, pos, names0, k)
    kp = k - 1
    pos_p = np.empty(kp, np.int64)
    pos_n = np.empty(kp, np.int64)
    cp = 0
    cn = 0
    for i in range(1, k):
        d = dists[i] - dists[i - 1]
        if d >= 0:
            cp += d
        else:
            cn -= d
        pos_p[i - 1] = cp + (i - 1)
        pos_n[i - 1] = cn + (i - 1)
    pos = monotone_write(words, pos, pos_p, kp)
    pos = monotone_write(words, pos, pos_n, kp)
    return pos


@njit(cache=True, nogil=True)
def hubset_skip(words, pos, k, wn):
    if k == 0:
        return pos
    flag = get_bit(words, pos)
    pos += 1
    if flag == 0:
        wd = read_bits(words, pos, 6)
        return pos + 6 + k * (wn + wd)
    _, pos = read_gamma(words, pos)
    pos = monotone_skip(words, pos, k)
    pos = monotone_skip(words, pos, k - 1)
    pos = monotone_skip(words, pos, k - 1)
    return pos


@njit(cache=True, nogil=True)
def hubset_find(words, pos, k, wn, name0):
    """Distance stored for name0, or -1 when absent."""
    if k == 0:
        return -1
    flag = get_bit(words, pos)
    pos += 1
    if flag == 0:
        wd = read_bits(words, pos, 6)
        pos += 6
        stride = wn + wd
        lo = 0
        hi = k
        while lo < hi:
            mid = (lo + hi) >> 1
            nm = read_bits(words, pos + mid * stride, wn)
            if nm < name0:
                lo = mid + 1
            elif nm > name0:
                hi = mid
            else:
                return read_bits(words, pos + mid * stride + wn, wd)
        return -1
    base, pos = read_gamma(words, pos)
    base -= 1
    idx = monotone_member(words, pos, k, name0)
    if idx < 0:
        return -1
    if idx == 0:
        return base
    pos = monotone_skip(words, pos, k)
    q1 = monotone_access(words, pos, k - 1, idx - 1)
    pos = monotone_skip(words, pos, k - 1)
    q2 = monotone_access(words, pos, k - 1, idx - 1)
    if q1 < 0 or q2 < 0:
        return -1
    return base + q1 - q2


@njit(cache=True, nogil=True)
def hubset_member_index(words, pos, k, wn, name0):
    if k == 0:
        return -1
    flag = get_bit(words, pos)
    pos += 1
    if flag == 0:
        wd = read_bits(words, pos, 6)
        pos += 6
        stride = wn + wd
        lo = 0
        hi = k
        while lo < hi:
            mid = (lo + hi) >> 1
            nm = read_bits(words, pos + mid * stride, wn)
            if nm < name0:
                lo = mid + 1
            elif nm > name0:
                hi = mid
            else:
                return mid
        return -1
    _, pos = read_gamma(words, pos)
    return monotone_member(words, pos, k, name0)


@njit(cache=True, nogil=True)
def hubset_decode_all(words, pos, k, wn, out_names0, out_dists):
    if k == 0:
        return
    flag = get_bit(words, pos)
    pos += 1
    if flag == 0:
        wd = read_bits(words, pos, 6)
        pos += 6
        for i in range(k):
            out_names0[i] = read_bits(words, pos, wn)
            pos += wn
            out_dists[i] = read_bits(words, pos, wd)
            pos += wd
        return
    base, pos = read_gamma(words, pos)
    base -= 1
    monotone_decode_all(words, pos, k, out_names0)
    pos = monotone_skip(words, pos, k)
    kp = k - 1
    pp = np.empty(kp, np.int64)
    pn = np.empty(kp, np.int64)
    monotone_decode_all(words, pos, kp, pp)
    pos = monotone_skip(words, pos, kp)
    monotone_decode_all(words, pos, kp, pn)
    out_dists[0] = base
    for i in range(1, k):
        out_dists[i] = base + (pp[i - 1] - pn[i - 1])


@njit(cache=True, nogil=True, inline="always")
def _monotone_access_pre(words, l, low_pos, high_pos, hlen, sel1_pos, k, i):
    """monotone_access against an already-parsed header."""
    p = _select1(words, high_pos, hlen, sel1_pos, k, i)
    if p < 0:
        return np.int64(-1)
    v = (p - i) << l
    if l > 0:
        v |= read_bits(words, low_pos + i * l, l)
    return v


@njit(cache=True, nogil=True)
def hubset_probe_min(words, pos, k, wn, q_names, q_dists, kq, best):
    """Fold min(q_dists[j] + stored dist of q_names[j]) into best, over the
    query names present in the set.  q_names must be strictly ascending.

    The set is parsed once and its occupancy stream is walked forward
    across all probes, so a sorted batch costs far less than kq
    independent find calls."""
    if k == 0 or kq == 0:
        return best
    flag = get_bit(words, pos)
    pos += 1
    if flag == 0:
        wd = read_bits(words, pos, 6)
        pos += 6
        stride = wn + wd
        i = 0
        for j in range(kq):
            t = q_names[j]
            while i < k:
                nm = read_bits(words, pos + i * stride, wn)
                if nm < t:
                    i += 1
                elif nm > t:
                    break
                else:
                    cand = q_dists[j] + read_bits(words, pos + i * stride + wn, wd)
                    if cand < best:
                        best = cand
                    i += 1
                    break
            if i >= k:
                break
        return best
    base, pos = read_gamma(words, pos)
    base -= 1
    U, l, low_pos, high_pos, hlen, nb, sel1_pos, sel0_pos, endn = _monotone_parse(
        words, pos, k
    )
    kp = k - 1
    pl = plow = phigh = phlen = psel1 = np.int64(0)
    nl = nlow = nhigh = nhlen = nsel1 = np.int64(0)
    if kp > 0:
        pr = _monotone_parse(words, endn, kp)
        pl, plow, phigh, phlen, psel1 = pr[1], pr[2], pr[3], pr[4], pr[6]
        nr = _monotone_parse(words, pr[8], kp)
        nl, nlow, nhigh, nhlen, nsel1 = nr[1], nr[2], nr[3], nr[4], nr[6]
    xmask = (np.int64(1) << l) - 1
    cur_rel = np.int64(0)  # next occupancy bit to examine
    cur_b = np.int64(0)  # zeros consumed before cur_rel
    cur_e = np.int64(0)  # ones consumed before cur_rel
    for j in range(kq):
        x = q_names[j]
        if x > U:
            break
        b = x >> l
        if b > cur_b:
            gap = b - cur_b
            if nb > SELECT_SAMPLE and gap > SELECT_SAMPLE:
                p0 = _select0(words, high_pos, hlen, sel0_pos, nb, b - 1)
            else:
                p0 = _scan_select0(words, high_pos, hlen, cur_rel, gap)
            if p0 < 0:
                break
            cur_rel = p0 + 1
            cur_b = b
            cur_e = cur_rel - b
        xl = x & xmask
        while cur_rel < hlen and get_bit(words, high_pos + cur_rel) == 1:
            lo = read_bits(words, low_pos + cur_e * l, l) if l > 0 else np.int64(0)
            if lo > xl:
                break
            advance_hit = lo == xl
            if advance_hit:
                ok = True
                d = base
                if cur_e > 0:
                    q1 = _monotone_access_pre(
                        words, pl, plow, phigh, phlen, psel1, kp, cur_e - 1
                    )
                    q2 = _monotone_access_pre(
                        words, nl, nlow, nhigh, nhlen, nsel1, kp, cur_e - 1
                    )
                    ok = q1 >= 0 and q2 >= 0
                    d = base + q1 - q2
                if ok:
                    cand = q_dists[j] + d
                    if cand < best:
                        best = cand
            cur_rel += 1
            cur_e += 1
            if advance_hit:
                break
    return best
