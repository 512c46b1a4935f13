"""Trapping-set analysis for LDPC codes on bounded-width tree decompositions."""

from trapgraph.tanner import (
    AlistError,
    ScLdpcParams,
    TannerGraph,
    edge_count_parity,
    gamma_odd,
    generate_sc_ldpc,
    parse_alist,
    serialize_alist,
)
from trapgraph.decomp import (
    NiceTreeDecomposition,
    TdFormatError,
    TreeDecomposition,
    heuristic_decomposition,
    make_nice,
    parse_td,
    sc_path_decomposition,
    serialize_td,
    validate,
    width,
)
from trapgraph.dpcore import DPResult, DPTable, min_distance, run_dp
from trapgraph.oracle import (
    TrappingSetRecord,
    WorkLimitExceeded,
    brute_force_enumerate,
    brute_force_spectrum,
)
from trapgraph.witness import extract_witness

__all__ = [
    "AlistError",
    "DPResult",
    "DPTable",
    "NiceTreeDecomposition",
    "ScLdpcParams",
    "TannerGraph",
    "TdFormatError",
    "TrappingSetRecord",
    "TreeDecomposition",
    "WorkLimitExceeded",
    "brute_force_enumerate",
    "brute_force_spectrum",
    "edge_count_parity",
    "extract_witness",
    "gamma_odd",
    "generate_sc_ldpc",
    "heuristic_decomposition",
    "make_nice",
    "min_distance",
    "parse_alist",
    "parse_td",
    "run_dp",
    "sc_path_decomposition",
    "serialize_alist",
    "serialize_td",
    "validate",
    "width",
]
