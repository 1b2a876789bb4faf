"""Exact domination tooling and a per-instance checker for the two-thirds
Vizing-type bound on Cartesian products with a claw-free factor."""

from .decomposition import CellDecomposition, chamber, decompose, verify_structural_observations
from .domination import (CheckRecord, DominationResult, PreconditionError, all_minimum_dominating_sets,
                         brute_force_gamma, domination_number, is_dominating_set,
                         min_independent_dominating_set, verify_allan_laskar)
from .graph import (ConfigError, Graph, Graph6ParseError, GraphInputError, ProductIndexMap,
                    cartesian_product, closed_neighborhood, emit_graph6, enumerate_connected_graphs,
                    find_claw, from_edge_list, is_claw_free, is_connected, parse_graph6)
from .harness import BoundReport, CorpusSummary, RunConfig, run_corpus, search_extremal, verify_pair
from .labeling import ProofTrace, run_pipeline

__version__ = "0.1.0"
