"""Dominating-set reconfiguration toolkit.

Builds toroidal benchmark instances with paired minimum dominating sets,
transforms any two dominating sets into one another along a recursive
balanced-separator tree with a certified width bound, and cross-checks
everything against an exact small-instance oracle.
"""

from .errors import (ContractError, InputError, InvariantError, ParseError,
                     ResourceLimitError)
from .exactgap import GapReport, exact_gap, gap_upper_bound_check
from .graph import Graph, cycle_graph, path_graph
from .domset import (gamma_exact, gamma_lower_bound_regular, greedy_dominating,
                     reduce_to_minimal, upper_domination_exhaustive)
from .reconfig import (Move, ReconfigSequence, VerifyReport, lex_path_iter,
                       route_via_minimum, special_set, transform, verify_sequence)
from .septree import (BalancedSeparator, GridCoords, SeparatorTree, build_tree,
                      find_separator)
from .torus import (PairType, TorusInstance, boundary_sets, build_torus,
                    classify_pair, efficiency_lower_bound, first_drop_index,
                    greedy_spread_set, inefficient_vertices, type_counts)

__all__ = [
    "BalancedSeparator", "ContractError", "GapReport", "Graph", "GridCoords",
    "InputError", "InvariantError", "Move", "PairType", "ParseError",
    "ReconfigSequence", "ResourceLimitError", "SeparatorTree", "TorusInstance",
    "VerifyReport", "boundary_sets", "build_torus", "build_tree", "classify_pair",
    "cycle_graph", "efficiency_lower_bound", "exact_gap", "find_separator",
    "first_drop_index", "gamma_exact", "gamma_lower_bound_regular",
    "gap_upper_bound_check", "greedy_dominating", "greedy_spread_set",
    "inefficient_vertices", "lex_path_iter", "path_graph", "reduce_to_minimal",
    "route_via_minimum", "special_set", "transform", "type_counts",
    "upper_domination_exhaustive", "verify_sequence",
]

__version__ = "0.1.0"
