"""Distance labeling for sparse graphs via hub sets with succinct encodings."""

from .bits import (
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
from .graph import (
    UNREACHABLE,
    DistHop,
    Graph,
    format_graph,
    hop_ball,
    load_graph,
    parse_graph,
    sssp_01,
)
from .additive import (
    AdditiveParams,
    CorrectionTable,
    boundary_hub_subset,
    build_additive,
    build_correction,
    decode_additive,
    decode_corrected_batch,
    decode_exact_via_correction,
    decode_one_additive,
    greedy_dominating_set,
    high_degree_set,
    restricted_ball,
)
from .labels import (
    AdditiveLabel,
    ExactLabel,
    ExactParams,
    FullLabel,
    LabelSet,
    build_exact_avg,
    build_exact_bounded,
    build_full_labels,
    choose_offset,
    decode_exact,
    hub_stats,
)
from .labelio import (
    BadMagicError,
    ChecksumError,
    ContainerError,
    FormatError,
    TruncationError,
    VersionMismatchError,
    load,
    save,
)
from .naming import Naming, build_naming, variation
from .oracle import apsp, verify, verify_sample
from .split import SplitResult, split_graph

__version__ = "0.1.0"

__all__ = [
    "AdditiveLabel",
    "AdditiveParams",
    "BadMagicError",
    "BitReader",
    "BitWriter",
    "Bits",
    "ChecksumError",
    "ContainerError",
    "CorrectionTable",
    "DistHop",
    "FormatError",
    "TruncationError",
    "VersionMismatchError",
    "EncodedHubSet",
    "ExactLabel",
    "ExactParams",
    "FullLabel",
    "Graph",
    "LabelSet",
    "MonotoneSeq",
    "Naming",
    "SplitResult",
    "UNREACHABLE",
    "apsp",
    "boundary_hub_subset",
    "build_additive",
    "build_correction",
    "build_exact_avg",
    "build_exact_bounded",
    "build_full_labels",
    "build_naming",
    "choose_offset",
    "decode_additive",
    "decode_corrected_batch",
    "decode_exact",
    "decode_exact_via_correction",
    "decode_one_additive",
    "encode_hub_set",
    "format_graph",
    "gamma_decode",
    "gamma_encode",
    "greedy_dominating_set",
    "high_degree_set",
    "hop_ball",
    "hub_stats",
    "load",
    "load_graph",
    "monotone_encode",
    "parse_graph",
    "save",
    "restricted_ball",
    "split_graph",
    "sssp_01",
    "unzigzag",
    "variation",
    "verify",
    "verify_sample",
    "zigzag",
]
