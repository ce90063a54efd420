"""Rainbow substructures in properly edge-colored graphs."""

from ._kernels import BACKEND
from .applications import (
    RelationCertificate,
    additive_dimension,
    bhg_dichotomy,
    convolution_threshold_set,
    doubling_constant,
    is_bhg,
    is_dissociated,
    rainbow_cycle_to_relation,
)
from .constructions import (
    bhg_graph,
    cayley_sum_graph,
    complete_graph_1f,
    convolution_graph,
    doubling_graph,
    hypercube,
    sidon_graph,
)
from .expander import (
    ExpanderViolation,
    check_log_maximal,
    extract_log_maximal,
    falsify_robust_expander,
    min_degree_check,
    optimal_cut_for,
    verify_violation,
)
from .graph import EdgeColoredGraph, average_degree, build_graph, neighborhood, restricted_degree
from .groups import CyclicGroup, F2Group, ProductGroup, TableGroup, parse_group
from .process import (
    ThinningSchedule,
    classify_edge_set,
    make_schedule,
    nested_color_stats,
    red_blue_split,
    restricted_neighborhood,
    run_sprinkling,
    run_thinning,
    sample_nested_colors,
)
from .search import (
    RainbowPath,
    SearchBudget,
    SubdivisionCertificate,
    find_rainbow_cycle,
    find_subdivision,
    rainbow_path,
    rp_set,
    validate_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CyclicGroup",
    "EdgeColoredGraph",
    "ExpanderViolation",
    "F2Group",
    "ProductGroup",
    "RainbowPath",
    "RelationCertificate",
    "SearchBudget",
    "SubdivisionCertificate",
    "TableGroup",
    "ThinningSchedule",
    "additive_dimension",
    "average_degree",
    "bhg_dichotomy",
    "bhg_graph",
    "build_graph",
    "cayley_sum_graph",
    "check_log_maximal",
    "classify_edge_set",
    "complete_graph_1f",
    "convolution_graph",
    "convolution_threshold_set",
    "doubling_constant",
    "doubling_graph",
    "extract_log_maximal",
    "falsify_robust_expander",
    "find_rainbow_cycle",
    "find_subdivision",
    "hypercube",
    "is_bhg",
    "is_dissociated",
    "make_schedule",
    "min_degree_check",
    "neighborhood",
    "nested_color_stats",
    "optimal_cut_for",
    "parse_group",
    "rainbow_cycle_to_relation",
    "rainbow_path",
    "red_blue_split",
    "restricted_degree",
    "restricted_neighborhood",
    "rp_set",
    "run_sprinkling",
    "run_thinning",
    "sample_nested_colors",
    "sidon_graph",
    "validate_certificate",
    "verify_violation",
]
