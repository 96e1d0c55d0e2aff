"""Bit-stream codecs: Elias gamma, zigzag, monotone sequences, hub sets.

The writer/reader pair and the two container classes share one bit-stream
convention with the compiled kernels in _bitops: little-endian uint32 limbs,
fields packed least-significant bit first, gamma value bits MSB-first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _bitops as ops

MAX_VALUE = (1 << ops.MAX_FIELD_WIDTH) - 1


def _alloc(bits: int) -> np.ndarray:
    return np.zeros((bits + 31) // 32 + 2, np.uint32)


def _trim(words: np.ndarray, nbits: int) -> np.ndarray:
    return words[: (nbits + 31) // 32].copy()


@dataclass(frozen=True)
class Bits:
    """An immutable packed bit sequence."""

    words: np.ndarray
    nbits: int

    def to_bitstring(self) -> str:
        return "".join(
            "1" if ops.get_bit(self.words, i) else "0" for i in range(self.nbits)
        )

    @classmethod
    def from_bitstring(cls, s: str) -> "Bits":
        words = _alloc(len(s))
        for i, ch in enumerate(s):
            if ch == "1":
                ops.set_bit(words, i)
            elif ch != "0":
                raise ValueError(f"invalid bit character {ch!r}")
        return cls(_trim(words, len(s)), len(s))

    def __len__(self) -> int:
        return self.nbits

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bits):
            return NotImplemented
        return self.nbits == other.nbits and self.to_bitstring() == other.to_bitstring()


class BitWriter:
    """Appends fields to a growing bit stream."""

    def __init__(self) -> None:
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or width > ops.MAX_FIELD_WIDTH:
            raise ValueError(f"field width {width} out of range")
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc |= value << self._nbits
        self._nbits += width

    def write_gamma(self, value: int) -> None:
        if value < 1 or value > MAX_VALUE:
            raise ValueError(f"gamma value {value} out of range")
        nb = value.bit_length() - 1
        self._nbits += nb  # leading zeros
        for i in range(nb, -1, -1):
            self._acc |= ((value >> i) & 1) << self._nbits
            self._nbits += 1

    @property
    def nbits(self) -> int:
        return self._nbits

    def getdata(self) -> Bits:
        nwords = (self._nbits + 31) // 32
        words = np.zeros(max(nwords, 1), np.uint32)
        acc = self._acc
        for i in range(nwords):
            words[i] = acc & 0xFFFFFFFF
            acc >>= 32
        return Bits(words[:nwords] if nwords else words[:0], self._nbits)


class BitReader:
    """Consumes fields from a bit stream produced by BitWriter or the kernels."""

    def __init__(self, data: Bits | tuple[np.ndarray, int]) -> None:
        if isinstance(data, Bits):
            words, nbits = data.words, data.nbits
        else:
            words, nbits = data
        # two guard limbs so kernel reads near the end stay in bounds
        self._words = np.concatenate([words, np.zeros(2, np.uint32)])
        self._nbits = nbits
        self.pos = 0

    def read(self, width: int) -> int:
        if self.pos + width > self._nbits:
            raise EOFError("read past end of bit stream")
        v = int(ops.read_bits(self._words, self.pos, width)) if width else 0
        self.pos += width
        return v

    def read_gamma(self) -> int:
        v, p = ops.read_gamma(self._words, self.pos)
        if v < 0 or p > self._nbits:
            raise EOFError("malformed gamma code")
        self.pos = p
        return int(v)

    @property
    def remaining(self) -> int:
        return self._nbits - self.pos


def gamma_encode(values: Iterable[int]) -> Bits:
    w = BitWriter()
    for v in values:
        w.write_gamma(v)
    return w.getdata()


def gamma_decode(bits: Bits | str, count: int) -> list[int]:
    if isinstance(bits, str):
        bits = Bits.from_bitstring(bits)
    r = BitReader(bits)
    return [r.read_gamma() for _ in range(count)]


def zigzag(x: int) -> int:
    """Signed-to-positive map: 0,-1,1,-2,2,... -> 1,2,3,4,5,..."""
    return 2 * x + 1 if x >= 0 else -2 * x


def unzigzag(z: int) -> int:
    if z < 1:
        raise ValueError(f"zigzag codes start at 1, got {z}")
    return (z - 1) // 2 if z & 1 else -(z // 2)


def _ceil_log2_ratio(p: int, q: int) -> int:
    """ceil(log2(p / q)) for positive integers, exact."""
    t = 0
    while (q << t) < p:
        t += 1
    return t


class MonotoneSeq:
    """A non-decreasing integer sequence with O(1) access and rank queries."""

    __slots__ = ("words", "k", "universe", "size_bits")

    def __init__(self, words: np.ndarray, k: int, universe: int, size_bits: int):
        self.words = words
        self.k = k
        self.universe = universe
        self.size_bits = size_bits

    @classmethod
    def encode(cls, values: Sequence[int], universe: int) -> "MonotoneSeq":
        k = len(values)
        arr = np.asarray(values, np.int64)
        if k:
            if arr.min() < 0:
                raise ValueError("negative value in monotone sequence")
            if arr.max() > universe:
                raise ValueError("value exceeds declared universe")
            if np.any(np.diff(arr) < 0):
                raise ValueError("sequence is not non-decreasing")
            if universe > MAX_VALUE:
                raise ValueError("universe out of range")
        size = ops.monotone_size_bits(arr, k)
        words = _alloc(size)
        end = ops.monotone_write(words, 0, arr, k) if k else 0
        assert end == size
        bound = 4 * k + k * _ceil_log2_ratio(universe + k, k) + 256 if k else 256
        assert size <= bound, f"monotone size {size} exceeds bound {bound}"
        return cls(_trim(words, size), k, universe, size)

    def __len__(self) -> int:
        return self.k

    def access(self, i: int) -> int:
        if not 0 <= i < self.k:
            raise IndexError(i)
        return int(ops.monotone_access(self._padded(), 0, self.k, i))

    def successor_rank(self, x: int) -> int:
        """Number of stored values strictly below x."""
        return int(ops.monotone_succ_rank(self._padded(), 0, self.k, x))

    def to_list(self) -> list[int]:
        out = np.empty(self.k, np.int64)
        ops.monotone_decode_all(self._padded(), 0, self.k, out)
        return out.tolist()

    def _padded(self) -> np.ndarray:
        return np.concatenate([self.words, np.zeros(2, np.uint32)])


def monotone_encode(values: Sequence[int], universe: int) -> MonotoneSeq:
    return MonotoneSeq.encode(values, universe)


def name_width(n: int) -> int:
    """Fixed field width for storing name-1 of a graph with n nodes."""
    return max(1, (n - 1).bit_length())


class EncodedHubSet:
    """Distances to a set of hubs, addressed by preorder name.

    The payload excludes the entry count; containers embedding a hub set
    write gamma(k + 1) ahead of it and account for those bits themselves.
    """

    __slots__ = ("words", "k", "n", "wn", "size_bits")

    def __init__(self, words: np.ndarray, k: int, n: int, size_bits: int):
        self.words = words
        self.k = k
        self.n = n
        self.wn = name_width(n)
        self.size_bits = size_bits

    @classmethod
    def encode(cls, entries: Sequence[tuple[int, int]], n: int) -> "EncodedHubSet":
        k = len(entries)
        names0 = np.empty(k, np.int64)
        dists = np.empty(k, np.int64)
        prev = 0
        for i, (name, dist) in enumerate(entries):
            if not 1 <= name <= n:
                raise ValueError(f"name {name} outside [1, {n}]")
            if not 0 <= dist <= 1 << 40:
                raise ValueError(f"distance {dist} out of range")
            if name <= prev:
                raise ValueError("entries must be strictly sorted by name")
            prev = name
            names0[i] = name - 1
            dists[i] = dist
        wn = name_width(n)
        if k == 0:
            return cls(np.zeros(0, np.uint32), 0, n, 0)
        bound_bits = 2048 + k * 200
        words = _alloc(bound_bits)
        size = int(ops.hubset_write(words, 0, names0, dists, k, wn))
        limit = 24.0 * k * math.log2(2.0 + n / k)
        assert size <= limit, f"hub set size {size} exceeds bound {limit:.1f}"
        return cls(_trim(words, size), k, n, size)

    def __len__(self) -> int:
        return self.k

    def member(self, name: int) -> int | None:
        """Index of name in the set, or None."""
        if not 1 <= name <= self.n:
            return None
        idx = int(
            ops.hubset_member_index(self._padded(), 0, self.k, self.wn, name - 1)
        )
        return idx if idx >= 0 else None

    def find(self, name: int) -> int | None:
        """Distance stored for name, or None."""
        if not 1 <= name <= self.n:
            return None
        d = int(ops.hubset_find(self._padded(), 0, self.k, self.wn, name - 1))
        return d if d >= 0 else None

    def dist(self, index: int) -> int:
        if not 0 <= index < self.k:
            raise IndexError(index)
        names0, dists = self._decode()
        return int(dists[index])

    def items(self) -> Iterator[tuple[int, int]]:
        """Entries as (name, dist), in name order."""
        names0, dists = self._decode()
        for i in range(self.k):
            yield int(names0[i]) + 1, int(dists[i])

    def _decode(self) -> tuple[np.ndarray, np.ndarray]:
        names0 = np.empty(self.k, np.int64)
        dists = np.empty(self.k, np.int64)
        ops.hubset_decode_all(self._padded(), 0, self.k, self.wn, names0, dists)
        return names0, dists

    def _padded(self) -> np.ndarray:
        return np.concatenate([self.words, np.zeros(2, np.uint32)])


def encode_hub_set(entries: Sequence[tuple[int, int]], n: int) -> EncodedHubSet:
    return EncodedHubSet.encode(entries, n)
