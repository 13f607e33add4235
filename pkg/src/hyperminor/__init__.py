"""Directed hypergraphs, their minor operations, and certificates for the
four forbidden minors G1..G4."""
from .core import (Edge, GuardError, Hypergraph, HypergraphError, IsoWitness, ParseError,
                   are_isomorphic, canonical_form, canonical_key, check_valid, check_witness,
                   from_directed_graph, g1, g2, g3, g4, hypergraph, is_undirected, parse,
                   serialize, validate)
from .minor_ops import Operation, Recorder, Trace, apply, parse_trace
from .normalization import is_normal, normality_violations, normalize
from .reduction import is_reduced, reduce
from .classification import (Certificate, Verdict, classify, derive_forbidden_minor, easy_path_to,
                             forbidden_catalog, hgamma4_only_analysis, match_forbidden,
                             verify_certificate)
from .oracle import SearchBudget, enumerate_directed_graphs, enumerate_hypergraphs, minor_search

__all__ = [name for name in dir() if not name.startswith("_")]
