"""Binary persistence for label sets and correction tables.

One container file holds one label set, optionally with one correction
table.  The layout (documented field-by-field in docs/FORMAT.md) is a
fixed 64-byte header followed by a single checksummed payload: node
names, component ids, residue offsets, the per-node blob directory with
bit-granular lengths, an optional original-id forward map, the label
bit arena, and optionally the correction block.

Files are deterministic: the same graph and parameters produce the same
bytes.  Integers are little-endian; bit streams pack LSB-first within
32-bit words.  Files are immutable once written.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .additive import CorrectionTable
from .labels import LabelSet

MAGIC = b"HUBDLBL\0"
VERSION = 1

_HEADER = struct.Struct("<8sHBBIQQQQIIII")
assert _HEADER.size == 64

_SCHEME_TAGS = {"exact": 1, "full": 2, "additive": 3}
_TAG_SCHEMES = {v: k for k, v in _SCHEME_TAGS.items()}
_TAG_ADDITIVE_EXACT_CORR = 4
_TAG_ADDITIVE_ONE_CORR = 5

_FLAG_FWD = 1

_CORR_HEADER = struct.Struct("<QQQ")  # half, bits per node, word count


class ContainerError(Exception):
    """Base for label container I/O failures."""


class BadMagicError(ContainerError):
    pass


class VersionMismatchError(ContainerError):
    pass


class TruncationError(ContainerError):
    pass


class ChecksumError(ContainerError):
    pass


class FormatError(ContainerError):
    """Structurally invalid content behind a valid header and checksum."""


def save(labels: LabelSet, path, correction: CorrectionTable | None = None) -> None:
    """Write a container; `correction` may ride along with additive labels.

    The correction table must come from the same build (matching build id
    and graph hash).  Output bytes are fully determined by the inputs.
    """
    if correction is not None:
        if labels.scheme != "additive":
            raise ValueError("corrections are only persisted with additive labels")
        if correction.label_build_id != labels.build_id:
            raise ValueError("correction table comes from a different build")
        if correction.graph_hash != labels.graph_hash:
            raise ValueError("correction table hashes a different graph")
        tag = (
            _TAG_ADDITIVE_EXACT_CORR
            if correction.kind == "exact"
            else _TAG_ADDITIVE_ONE_CORR
        )
    else:
        tag = _SCHEME_TAGS[labels.scheme]

    flags = _FLAG_FWD if labels.fwd is not None else 0
    n = labels.n

    parts = [
        np.asarray(labels.name, "<u4").tobytes(),
        np.asarray(labels.comp, "<u4").tobytes(),
        np.asarray(labels.offset, "<u1").tobytes(),
    ]
    directory = np.empty((n, 2), "<u8")
    directory[:, 0] = labels.start
    directory[:, 1] = labels.nbits
    parts.append(directory.tobytes())
    if labels.fwd is not None:
        parts.append(np.asarray(labels.fwd, "<u4").tobytes())
    parts.append(np.asarray(labels.words, "<u4").tobytes())
    if correction is not None:
        parts.append(
            _CORR_HEADER.pack(
                correction.half, correction.bits_per_node, len(correction.words)
            )
        )
        parts.append(np.asarray(correction.words, "<u4").tobytes())
    payload = b"".join(parts)

    header = _HEADER.pack(
        MAGIC,
        VERSION,
        tag,
        flags,
        len(payload),
        labels.graph_hash,
        n,
        labels.n_orig,
        labels.param,
        labels.degree_bound,
        labels.radius,
        len(labels.words),
        zlib.crc32(payload),
    )
    Path(path).write_bytes(header + payload)


class _Cursor:
    def __init__(self, data: bytes, base: int):
        self.data = data
        self.pos = base

    def take(self, nbytes: int, what: str) -> bytes:
        end = self.pos + nbytes
        if end > len(self.data):
            raise FormatError(f"{what} extends past the declared payload")
        out = self.data[self.pos:end]
        self.pos = end
        return out

    def array(self, dtype: str, count: int, what: str) -> np.ndarray:
        raw = self.take(count * np.dtype(dtype).itemsize, what)
        return np.frombuffer(raw, dtype).copy()


def load(path):
    """Read a container back.

    Returns the LabelSet, or (LabelSet, CorrectionTable) when the file
    carries a correction block.  Raises BadMagicError,
    VersionMismatchError, TruncationError, ChecksumError, or FormatError.
    """
    data = Path(path).read_bytes()
    if len(data) < len(MAGIC):
        raise TruncationError(f"file has {len(data)} bytes, shorter than the magic")
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not a label container")
    if len(data) < _HEADER.size:
        raise TruncationError(f"file has {len(data)} bytes, header needs {_HEADER.size}")
    (
        _,
        version,
        tag,
        flags,
        payload_bytes,
        graph_hash,
        n,
        n_orig,
        param,
        degree_bound,
        radius,
        arena_words,
        checksum,
    ) = _HEADER.unpack_from(data)
    if version != VERSION:
        raise VersionMismatchError(f"container version {version}, supported {VERSION}")
    expected = _HEADER.size + payload_bytes
    if len(data) < expected:
        raise TruncationError(f"file has {len(data)} bytes, header declares {expected}")
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after the payload")
    if zlib.crc32(data[_HEADER.size :]) != checksum:
        raise ChecksumError("payload checksum mismatch")

    if tag in (_TAG_ADDITIVE_EXACT_CORR, _TAG_ADDITIVE_ONE_CORR):
        scheme = "additive"
    elif tag in _TAG_SCHEMES:
        scheme = _TAG_SCHEMES[tag]
    else:
        raise FormatError(f"unknown scheme tag {tag}")
    if flags & ~_FLAG_FWD:
        raise FormatError(f"unknown flags 0x{flags:x}")

    cur = _Cursor(data, _HEADER.size)
    name = cur.array("<u4", n, "name array").astype(np.int32)
    comp = cur.array("<u4", n, "component array").astype(np.int32)
    offset = cur.array("<u1", n, "offset array").astype(np.int32)
    directory = cur.array("<u8", 2 * n, "directory").reshape(n, 2)
    fwd = None
    if flags & _FLAG_FWD:
        fwd = cur.array("<u4", n_orig, "forward map").astype(np.int64)
    words = cur.array("<u4", arena_words, "label arena").astype(np.uint32)
    labels = LabelSet(
        scheme,
        int(n),
        int(graph_hash),
        int(param),
        int(degree_bound),
        int(radius),
        name,
        comp,
        offset,
        directory[:, 0].astype(np.int64),
        directory[:, 1].astype(np.int64),
        words,
        int(n_orig),
        fwd,
    )

    correction = None
    if tag in (_TAG_ADDITIVE_EXACT_CORR, _TAG_ADDITIVE_ONE_CORR):
        half, bits_per_node, corr_words = _CORR_HEADER.unpack_from(
            cur.take(_CORR_HEADER.size, "correction header")
        )
        if half != n_orig // 2:
            raise FormatError(f"correction window {half} does not fit n={n_orig}")
        cwords = cur.array("<u4", corr_words, "correction arena").astype(np.uint32)
        stride = (bits_per_node + 31) >> 5
        correction = CorrectionTable(
            "exact" if tag == _TAG_ADDITIVE_EXACT_CORR else "one_additive",
            int(n_orig),
            int(graph_hash),
            labels.build_id,
            int(half),
            int(bits_per_node),
            np.arange(n_orig, dtype=np.int64) * (stride << 5),
            cwords,
        )
    if cur.pos != expected:
        raise FormatError(f"{expected - cur.pos} undeclared bytes inside the payload")
    return labels if correction is None else (labels, correction)
