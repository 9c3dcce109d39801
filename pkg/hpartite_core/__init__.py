from hpartite_core.constructions import (
    BaseConstruction,
    ConstructionSpec,
    VerificationOutcome,
    get_construction,
    glue_paths,
    verify_all,
)
from hpartite_core.core import (
    Certificate,
    ForbiddenFamily,
    HostGraph,
    PartiteGraph,
    SmallGraph,
    Transversal,
    builtin_host,
    check_family_free,
    density_profile,
    load_partite,
    parse_family,
    validate,
)
from hpartite_core.get_version import get_task_logger, get_version
from hpartite_core.sampler import (
    SampleReport,
    estimate_property,
    exact_property_probability,
    one_dependence_check,
    sample_transversal,
    star_absorption_witness,
)
from hpartite_core.search import (
    CombinatorialPattern,
    SearchMode,
    SearchProblem,
    SearchResult,
    canonical_key,
    optimize_weights,
    pattern_family_free,
    search,
)
from hpartite_core.thresholds import ThresholdId, closed_form, threshold_table, tree_threshold

__all__ = (
    "BaseConstruction",
    "Certificate",
    "CombinatorialPattern",
    "ConstructionSpec",
    "ForbiddenFamily",
    "HostGraph",
    "PartiteGraph",
    "SampleReport",
    "SearchMode",
    "SearchProblem",
    "SearchResult",
    "SmallGraph",
    "ThresholdId",
    "Transversal",
    "VerificationOutcome",
    "builtin_host",
    "canonical_key",
    "check_family_free",
    "closed_form",
    "density_profile",
    "estimate_property",
    "exact_property_probability",
    "get_construction",
    "get_task_logger",
    "get_version",
    "glue_paths",
    "load_partite",
    "one_dependence_check",
    "optimize_weights",
    "threshold_table",
    "parse_family",
    "pattern_family_free",
    "sample_transversal",
    "search",
    "star_absorption_witness",
    "tree_threshold",
    "validate",
    "verify_all",
)
