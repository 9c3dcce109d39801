from hpartite_core.search.engine import (
    CERTIFIED_STATUS,
    SearchMode,
    SearchProblem,
    SearchResult,
    pattern_seed,
    search,
)
from hpartite_core.search.optimize import (
    OptimizerSettings,
    WeightOptimizer,
    optimize_weights,
    project_simplex,
)
from hpartite_core.search.patterns import (
    CombinatorialPattern,
    PatternState,
    canonical_key,
    caps_from_degrees,
    clone_to_sizes,
    compatible_automorphisms,
    pattern_family_free,
    pattern_from_key,
    raw_pattern_bits,
)

__all__ = (
    "CERTIFIED_STATUS",
    "CombinatorialPattern",
    "OptimizerSettings",
    "PatternState",
    "SearchMode",
    "SearchProblem",
    "SearchResult",
    "WeightOptimizer",
    "canonical_key",
    "caps_from_degrees",
    "clone_to_sizes",
    "compatible_automorphisms",
    "optimize_weights",
    "pattern_family_free",
    "pattern_from_key",
    "pattern_seed",
    "project_simplex",
    "raw_pattern_bits",
    "search",
)
