"""Constructions bounding the largest transversal component rather than forbidding spanning trees."""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

from hpartite_core.constructions.base import BaseConstruction, require
from hpartite_core.core.certify import max_transversal_component
from hpartite_core.core.families import ForbiddenFamily
from hpartite_core.core.graphs import complete, hypercube
from hpartite_core.core.partite import PartiteGraph, transversal_graphs
from hpartite_core.get_version import get_task_logger
from hpartite_core.thresholds.closed_form import hypercube_component, palette_component

if TYPE_CHECKING:
    from hpartite_core.core.partite import Transversal

shared_logger = get_task_logger(__name__)


def balanced_blocks(r: int, blocks: int) -> list[int]:
    """Sizes of ``blocks`` consecutive blocks covering ``r``, larger blocks first."""
    q, rem = divmod(r, blocks)
    return [q + 1] * rem + [q] * (blocks - rem)


class IntersectingPalette(BaseConstruction):
    """K_r host. Each part is a copy of a t-subset X of [2t-1] with weight 1/t and equal labels are
    joined; the subsets, taken in lexicographic order, are spread over the parts in balanced blocks.
    """

    construction_id = "intersecting_palette"

    def __init__(self, t: int, r: int) -> None:
        require(t >= 2, f"intersecting_palette needs t >= 2, got t={t}")
        sets = list(itertools.combinations(range(1, 2 * t), t))
        require(
            r >= len(sets),
            f"intersecting_palette needs r >= C({2 * t - 1}, {t}) = {len(sets)}, got r={r}",
        )
        super().__init__(t=t, r=r)
        self.t, self.r = t, r
        self.sets = sets

    def part_sets(self) -> list[tuple[int, ...]]:
        assignment: list[tuple[int, ...]] = []
        for subset, size in zip(self.sets, balanced_blocks(self.r, len(self.sets)), strict=True):
            assignment.extend([subset] * size)
        return assignment

    def build(self) -> PartiteGraph:
        assignment = self.part_sets()
        parts = {x: [(str(a), 1 / self.t) for a in s] for x, s in enumerate(assignment)}
        edges = [
            ((x, str(a)), (y, str(a)))
            for x, y in itertools.combinations(range(self.r), 2)
            for a in set(assignment[x]) & set(assignment[y])
        ]
        return PartiteGraph.build(
            complete(self.r), parts, edges, f"intersecting_palette(t={self.t}, r={self.r})"
        )

    def component_bound(self) -> int:
        return palette_component(self.t, self.r)

    def claimed_density(self) -> float:
        return 1 / self.t**2

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(self.component_bound() + 1)

    def check_claim(self, g: PartiteGraph, cap: int | None) -> tuple[list[str], Transversal | None]:
        size, witness = max_transversal_component(g, cap)
        if size > self.component_bound():
            return [f"component of order {size} exceeds the bound {self.component_bound()}"], witness
        return [], None


def layer(x: int) -> int:
    return x.bit_count()


def layer_span(mask: int) -> int:
    """Number of hypercube layers met by the vertex set ``mask``, counted from lowest to highest."""
    layers = [layer(v) for v in range(mask.bit_length()) if mask >> v & 1]
    return max(layers) - min(layers) + 1


class HypercubeLayers(BaseConstruction):
    """Q_d host. Weight-0 mod 4 vertices are {0}, odd-weight vertices {0,1} with weight 1/2, and
    weight-2 mod 4 vertices {1}; equal labels are joined. Every transversal component sits inside
    three consecutive layers.
    """

    construction_id = "hypercube_layers"

    def __init__(self, d: int) -> None:
        require(d >= 2, f"hypercube_layers needs d >= 2, got d={d}")
        super().__init__(d=d)
        self.d = d

    def build(self) -> PartiteGraph:
        host = hypercube(self.d)
        parts: dict[int, list[tuple[str, float]]] = {}
        for x in range(host.n):
            match layer(x) % 4:
                case 0:
                    parts[x] = [("0", 1.0)]
                case 2:
                    parts[x] = [("1", 1.0)]
                case _:
                    parts[x] = [("0", 0.5), ("1", 0.5)]
        labels = {x: {v for v, _ in parts[x]} for x in parts}
        edges = [((x, a), (y, a)) for x, y in host.edges for a in sorted(labels[x] & labels[y])]
        return PartiteGraph.build(host, parts, edges, f"hypercube_layers(d={self.d})")

    def component_bound(self) -> int:
        return hypercube_component(self.d) - 1

    def claimed_density(self) -> float:
        return 0.5

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(self.component_bound() + 1)

    def check_claim(self, g: PartiteGraph, cap: int | None) -> tuple[list[str], Transversal | None]:
        problems: list[str] = []
        best, witness = 0, None
        for t, s in transversal_graphs(g, cap):
            for mask in s.component_masks():
                if layer_span(mask) > 3:
                    problems.append(f"component {mask:#x} of {list(t.choice)} spans more than 3 layers")
                    return problems, t
                if mask.bit_count() > best:
                    best, witness = mask.bit_count(), t
        if best > self.component_bound():
            problems.append(f"component of order {best} exceeds the bound {self.component_bound()}")
        return problems, witness if problems else None
