"""Parallel PageRank engine: sequential, barrier, lock-free and wait-free variants."""

from ._nbpr import (
    CSV_HEADER,
    CsrGraph,
    EdgeList,
    Error,
    IdenticalClasses,
    ParseError,
    RunReport,
    ValidationError,
    build_csr,
    detect_identical,
    l1_norm,
    load_edge_list,
    load_graph,
    max_residual,
    parse_edge_list,
    partition_static,
    rmat_generate,
    rmat_scale_for,
    run,
    run_with_faults,
    save_csr,
    variants,
)

__all__ = [
    "CSV_HEADER",
    "CsrGraph",
    "EdgeList",
    "Error",
    "IdenticalClasses",
    "ParseError",
    "RunReport",
    "ValidationError",
    "build_csr",
    "detect_identical",
    "l1_norm",
    "load_edge_list",
    "load_graph",
    "max_residual",
    "parse_edge_list",
    "partition_static",
    "rmat_generate",
    "rmat_scale_for",
    "run",
    "run_with_faults",
    "save_csr",
    "variants",
]
