from hpartite_core.thresholds.closed_form import (
    THRESHOLD_NAMES,
    ThresholdId,
    certified_pstar,
    closed_form,
    dirac_cubic,
    dirac_pstar,
    hypercube_component,
    leila_alpha,
    palette_component,
    rho_b,
)
from hpartite_core.thresholds.spectral import spectral_radius_squared, tree_threshold
from hpartite_core.thresholds.table import Report, TableRow, threshold_table

__all__ = (
    "THRESHOLD_NAMES",
    "Report",
    "TableRow",
    "ThresholdId",
    "certified_pstar",
    "closed_form",
    "dirac_cubic",
    "dirac_pstar",
    "hypercube_component",
    "leila_alpha",
    "palette_component",
    "threshold_table",
    "rho_b",
    "spectral_radius_squared",
    "tree_threshold",
)
