from hpartite_core.sampler.bounds import (
    AbsorptionWitness,
    MatchingBound,
    TreeBound,
    matching_pair_bound,
    spanning_tree_bound,
    star_absorption_witness,
    star_center,
)
from hpartite_core.sampler.dependence import (
    DependenceReport,
    induced_codes,
    one_dependence_check,
    pool_sparse_cells,
)
from hpartite_core.sampler.sampling import (
    BLOCK_SIZE,
    SampleReport,
    block_generator,
    edge_marginals,
    estimate_property,
    exact_property_probability,
    sample_choices,
    sample_transversal,
)

__all__ = (
    "BLOCK_SIZE",
    "AbsorptionWitness",
    "DependenceReport",
    "MatchingBound",
    "SampleReport",
    "TreeBound",
    "block_generator",
    "edge_marginals",
    "estimate_property",
    "exact_property_probability",
    "induced_codes",
    "matching_pair_bound",
    "one_dependence_check",
    "pool_sparse_cells",
    "sample_choices",
    "sample_transversal",
    "spanning_tree_bound",
    "star_absorption_witness",
    "star_center",
)
