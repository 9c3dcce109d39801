from __future__ import annotations

from typing import TYPE_CHECKING, Any

from hpartite_core.constructions.base import (
    BaseConstruction,
    ConstructionSpec,
    VerificationOutcome,
)
from hpartite_core.constructions.components import HypercubeLayers, IntersectingPalette
from hpartite_core.constructions.connectivity import Leila, MissingEdge, PendantTriangle, StarLeaf
from hpartite_core.constructions.gluing import glue_paths
from hpartite_core.constructions.hamiltonicity import Parity, RefinedDeadEnd, TwoColour
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from hpartite_core.core.partite import PartiteGraph

__all__ = (
    "CONSTRUCTION_IDS",
    "BaseConstruction",
    "ConstructionSpec",
    "HypercubeLayers",
    "IntersectingPalette",
    "Leila",
    "MissingEdge",
    "Parity",
    "PendantTriangle",
    "RefinedDeadEnd",
    "StarLeaf",
    "TwoColour",
    "VerificationOutcome",
    "build",
    "get_construction",
    "glue_paths",
    "suite",
    "verify",
    "verify_all",
)

shared_logger = get_task_logger(__name__)

CONSTRUCTION_IDS = (
    "star_leaf",
    "leila",
    "missing_edge",
    "two_colour",
    "parity",
    "refined_dead_end",
    "pendant_triangle",
    "intersecting_palette",
    "hypercube_layers",
)


def get_construction(name: str) -> type[BaseConstruction]:
    """Construction class for an id such as ``leila`` or ``two_colour``."""
    shared_logger.debug(f"get_construction() called with name: {name}")
    match name.lower().replace("-", "_"):
        case "star_leaf":
            return StarLeaf
        case "leila":
            return Leila
        case "missing_edge":
            return MissingEdge
        case "two_colour" | "two_color":
            return TwoColour
        case "parity":
            return Parity
        case "refined_dead_end":
            return RefinedDeadEnd
        case "pendant_triangle":
            return PendantTriangle
        case "intersecting_palette":
            return IntersectingPalette
        case "hypercube_layers":
            return HypercubeLayers

    raise ValueError(f"Unsupported construction: {name}")


def make(name: str, **params: Any) -> BaseConstruction:
    return get_construction(name)(**params)


def build(spec: ConstructionSpec) -> PartiteGraph:
    return make(spec.id, **spec.params).build()


def verify(spec: ConstructionSpec, cap: int | None = None) -> VerificationOutcome:
    return make(spec.id, **spec.params).verify(cap)


def suite() -> list[BaseConstruction]:
    """The full verification table, small instances first."""
    items: list[BaseConstruction] = []
    items += [StarLeaf(r) for r in range(4, 9)]
    items += [Leila(r) for r in range(4, 9)]
    items += [MissingEdge(r) for r in range(4, 9)]
    items += [MissingEdge(4, [(2, 3)]), MissingEdge(6, [(2, 3), (4, 5)])]
    items += [TwoColour(r) for r in range(4, 9)]
    items += [Parity(r) for r in range(3, 9)]
    items += [RefinedDeadEnd(r) for r in range(4, 9)]
    items.append(PendantTriangle())
    items += [IntersectingPalette(2, r) for r in range(6, 13)]
    items += [IntersectingPalette(3, r) for r in range(10, 13)]
    items += [HypercubeLayers(d) for d in range(2, 5)]
    return items


def verify_all(cap: int | None = None) -> list[VerificationOutcome]:
    outcomes = [construction.verify(cap) for construction in suite()]
    failed = [o for o in outcomes if not o.passed]
    shared_logger.info(f"verify_all(): {len(outcomes) - len(failed)}/{len(outcomes)} passed")
    return outcomes
