from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from hpartite_core.core.families import ForbiddenFamily, contains_member
from hpartite_core.core.partite import (
    DensityProfile,
    PartiteGraph,
    Transversal,
    density_profile,
    enumerate_transversals,
    transversal_graph,
    transversal_graphs,
)
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from hpartite_core.core.graphs import SmallGraph

shared_logger = get_task_logger(__name__)


class Verdict(enum.Enum):
    FAMILY_FREE = "family-free"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Certificate:
    """Verdict on the transversals of one graph for one family, with the density it was issued at."""

    verdict: Verdict
    witness: Transversal | None
    density: DensityProfile
    family: ForbiddenFamily

    @property
    def family_free(self) -> bool:
        return self.verdict is Verdict.FAMILY_FREE

    def recheck(self, g: PartiteGraph) -> bool:
        """Independently confirm the verdict; the re-enumeration deliberately avoids the fast path."""
        if self.verdict is Verdict.VIOLATED:
            if self.witness is None:
                return False
            return contains_member(transversal_graph(g, self.witness), self.family)
        return not any(
            contains_member(transversal_graph(g, t), self.family) for t in enumerate_transversals(g)
        )

    def to_dict(self, g: PartiteGraph) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else self.witness.to_dict(g),
            "density": self.density.to_dict(),
            "family": self.family.to_dict(),
        }


def first_violation(
    g: PartiteGraph, f: ForbiddenFamily, cap: int | None = None
) -> tuple[Transversal, SmallGraph] | None:
    f.validate_for(g.host)
    for t, s in transversal_graphs(g, cap):
        if contains_member(s, f):
            return t, s
    return None


def check_family_free(g: PartiteGraph, f: ForbiddenFamily, cap: int | None = None) -> Certificate:
    """Exhaustively decide whether every transversal of ``g`` avoids ``f``.

    The witness of a violation is the lexicographically first violating transversal.
    """
    start_time = time.time()
    profile = density_profile(g)
    found = first_violation(g, f, cap)
    elapsed = time.time() - start_time
    if found is None:
        shared_logger.info(
            f"check_family_free(): {g.name or g.host.label()} is {f.describe()}-free "
            f"({elapsed:.3f} seconds)"
        )
        return Certificate(Verdict.FAMILY_FREE, None, profile, f)
    shared_logger.info(
        f"check_family_free(): {g.name or g.host.label()} violates {f.describe()} "
        f"at {list(found[0].choice)} ({elapsed:.3f} seconds)"
    )
    return Certificate(Verdict.VIOLATED, found[0], profile, f)


def max_transversal_component(g: PartiteGraph, cap: int | None = None) -> tuple[int, Transversal]:
    """Largest component order over all transversal graphs, with the first transversal attaining it."""
    best_size = -1
    best: Transversal | None = None
    for t, s in transversal_graphs(g, cap):
        size = s.largest_component_size()
        if size > best_size:
            best_size, best = size, t
            if size == g.host.n:
                break
    if best is None:
        raise RuntimeError("max_transversal_component(): graph has no transversals")
    return best_size, best
