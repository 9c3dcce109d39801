from hpartite_core.core.certify import (
    Certificate,
    Verdict,
    check_family_free,
    first_violation,
    max_transversal_component,
)
from hpartite_core.core.errors import (
    DomainError,
    EnumerationCapError,
    InvalidPartiteGraphError,
    SearchInfeasibleError,
)
from hpartite_core.core.families import (
    FamilyKind,
    ForbiddenFamily,
    contains_member,
    find_subgraph,
    is_hamiltonian,
    parse_family,
)
from hpartite_core.core.graphs import HostGraph, SmallGraph, builtin_host
from hpartite_core.core.io import (
    dump_partite,
    load_partite,
    loads_partite,
    partite_from_json,
    partite_to_json,
)
from hpartite_core.core.partite import (
    DensityProfile,
    PartiteGraph,
    Transversal,
    ValidationReport,
    Violation,
    blow_up,
    density_profile,
    enumerate_transversals,
    pair_density,
    restrict_host,
    transversal_count,
    transversal_graph,
    transversal_graphs,
    validate,
)

__all__ = (
    "Certificate",
    "DensityProfile",
    "DomainError",
    "EnumerationCapError",
    "FamilyKind",
    "ForbiddenFamily",
    "HostGraph",
    "InvalidPartiteGraphError",
    "PartiteGraph",
    "SearchInfeasibleError",
    "SmallGraph",
    "Transversal",
    "ValidationReport",
    "Verdict",
    "Violation",
    "blow_up",
    "builtin_host",
    "check_family_free",
    "contains_member",
    "density_profile",
    "dump_partite",
    "enumerate_transversals",
    "find_subgraph",
    "first_violation",
    "is_hamiltonian",
    "load_partite",
    "loads_partite",
    "max_transversal_component",
    "pair_density",
    "parse_family",
    "partite_from_json",
    "partite_to_json",
    "restrict_host",
    "transversal_count",
    "transversal_graph",
    "transversal_graphs",
    "validate",
)
