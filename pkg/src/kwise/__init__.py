"""Exact tooling for maximal k-wise intersecting set families.

Families over a ground set {1..n} are bitmaps over the 2^n subset masks,
so every check here is integer arithmetic and every reported number is
exact.  The package constructs the reference cube families, verifies
k-wise intersection and maximality, searches exhaustively for the
minimum maximal-family size at small n, and audits the counting and
stability arguments that bound those sizes in general.
"""

from .bitops import (
    cube_bits,
    down_close_bits,
    family_full_bitmap,
    full_mask,
    iter_bits,
    mask_complement,
    mask_elements,
    mask_from_elements,
    submasks,
    supercube_bits,
    up_close_bits,
)
from .constructions import (
    Partition,
    balanced_block,
    formula_min_size_bounds,
    janzer_size,
    linked_cubes,
    linked_cubes_size,
    pair_of_cubes,
    pair_of_cubes_size,
    series_of_cubes,
    series_of_cubes_size,
)
from .core import (
    KwiseMode,
    SetFamily,
    addable_sets,
    complement_family,
    complement_within_powerset,
    down_closure,
    hex_digits,
    is_down_closed,
    is_k_wise_intersecting,
    is_maximal_k_wise,
    is_up_closed,
    maximal_closure,
    restrict_minus,
    restrict_plus,
    set_difference_count,
    symmetric_difference_count,
    up_closure,
)
from .disjointness import (
    BipartizationResult,
    DisjointnessGraph,
    PremiseCheck,
    PremiseReport,
    StabilityStats,
    audit_lemma_size_premises,
    build_bipartite,
    build_graph,
    count_edges_touching,
    f_xy,
    min_bipartization,
    stability_stats,
)
from .generator import (
    CorrespondenceResult,
    CoverageResult,
    coverage,
    is_generator,
    verify_maximal_generator_correspondence,
)
from .search import (
    ClaimCountsReport,
    SearchConfig,
    SearchReport,
    audit_claim_counts,
    canonical_form,
    decompose_min_h,
    enumerate_maximal_families,
    enumerate_upsets,
    h_value,
    oracle_min,
    partition_relative_to_cubes,
    product_bound_terms,
    search_min,
)

__version__ = "0.1.0"

__all__ = [
    "BipartizationResult",
    "ClaimCountsReport",
    "CorrespondenceResult",
    "CoverageResult",
    "DisjointnessGraph",
    "KwiseMode",
    "Partition",
    "PremiseCheck",
    "PremiseReport",
    "SearchConfig",
    "SearchReport",
    "SetFamily",
    "StabilityStats",
    "addable_sets",
    "audit_claim_counts",
    "audit_lemma_size_premises",
    "balanced_block",
    "build_bipartite",
    "build_graph",
    "canonical_form",
    "complement_family",
    "complement_within_powerset",
    "count_edges_touching",
    "coverage",
    "cube_bits",
    "decompose_min_h",
    "down_close_bits",
    "down_closure",
    "enumerate_maximal_families",
    "enumerate_upsets",
    "f_xy",
    "family_full_bitmap",
    "formula_min_size_bounds",
    "full_mask",
    "h_value",
    "hex_digits",
    "is_down_closed",
    "is_generator",
    "is_k_wise_intersecting",
    "is_maximal_k_wise",
    "is_up_closed",
    "iter_bits",
    "janzer_size",
    "linked_cubes",
    "linked_cubes_size",
    "mask_complement",
    "mask_elements",
    "mask_from_elements",
    "maximal_closure",
    "min_bipartization",
    "oracle_min",
    "pair_of_cubes",
    "pair_of_cubes_size",
    "partition_relative_to_cubes",
    "product_bound_terms",
    "restrict_minus",
    "restrict_plus",
    "search_min",
    "series_of_cubes",
    "series_of_cubes_size",
    "set_difference_count",
    "submasks",
    "supercube_bits",
    "symmetric_difference_count",
    "up_close_bits",
    "up_closure",
    "verify_maximal_generator_correspondence",
]
