"""Constructions without a connected transversal."""

from __future__ import annotations

import math
from typing import Any

from hpartite_core.constructions.base import BaseConstruction, require
from hpartite_core.core.families import ForbiddenFamily
from hpartite_core.core.graphs import complete, complete_minus_matching, pendant_triangle, star
from hpartite_core.core.partite import PartiteGraph
from hpartite_core.get_version import get_task_logger
from hpartite_core.thresholds.closed_form import leila_alpha

shared_logger = get_task_logger(__name__)


class StarLeaf(BaseConstruction):
    """K_{1,r-1} host. The centre part is [r-1] with uniform weight, leaf part i is one vertex
    joined to every centre vertex except i.
    """

    construction_id = "star_leaf"

    def __init__(self, r: int) -> None:
        require(r >= 3, f"star_leaf needs r >= 3, got r={r}")
        super().__init__(r=r)
        self.r = r

    def build(self) -> PartiteGraph:
        r = self.r
        parts: dict[int, list[tuple[str, float]]] = {0: [(str(j), 1 / (r - 1)) for j in range(1, r)]}
        for i in range(1, r):
            parts[i] = [(f"v{i}", 1.0)]
        edges = [((0, str(j)), (i, f"v{i}")) for i in range(1, r) for j in range(1, r) if i != j]
        return PartiteGraph.build(star(r), parts, edges, f"star_leaf(r={r})")

    def claimed_density(self) -> float:
        return (self.r - 2) / (self.r - 1)

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(self.r)


class Leila(BaseConstruction):
    """K_r host with leaf parts {i, r} and the last part [r-1].

    The r-vertices of leaf parts form a clique; vertex i of leaf part i sees every vertex of the last
    part except i. Leaf pairs have density (1-α)^2 and leaf-to-last pairs α(r-2)/(r-1).
    """

    construction_id = "leila"

    def __init__(self, r: int, alpha: float | None = None) -> None:
        require(r >= 3, f"leila needs r >= 3, got r={r}")
        if alpha is None:
            alpha = leila_alpha(r)
        require(0.0 <= alpha <= 1.0, f"leila needs alpha in [0, 1], got alpha={alpha}")
        super().__init__(r=r, alpha=alpha)
        self.r = r
        self.alpha = alpha

    @staticmethod
    def optimal_alpha(r: int) -> float:
        return leila_alpha(r)

    def build(self) -> PartiteGraph:
        r, alpha = self.r, self.alpha
        last = r - 1
        parts: dict[int, list[tuple[str, float]]] = {
            x: [(str(x + 1), alpha), (str(r), 1 - alpha)] for x in range(last)
        }
        parts[last] = [(str(j), 1 / (r - 1)) for j in range(1, r)]
        edges = [((x, str(r)), (y, str(r))) for x in range(last) for y in range(x + 1, last)]
        edges += [
            ((x, str(x + 1)), (last, str(j))) for x in range(last) for j in range(1, r) if j != x + 1
        ]
        return PartiteGraph.build(complete(r), parts, edges, f"leila(r={r}, alpha={alpha:.6g})")

    def claimed_density(self) -> float:
        r, alpha = self.r, self.alpha
        return min((1 - alpha) ** 2, alpha * (r - 2) / (r - 1))

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(self.r)


class MissingEdge(BaseConstruction):
    """K_r minus the edge 01 (and optionally a larger matching): parts 0 and 1 are the singletons
    {1} and {2}, all other parts are {1, 2} with weight 1/2, and equal labels are joined.
    """

    construction_id = "missing_edge"

    def __init__(self, r: int, matching: list[list[int]] | tuple[tuple[int, int], ...] = ()) -> None:
        require(r >= 4, f"missing_edge needs r >= 4, got r={r}")
        extra = tuple(tuple(sorted((int(u), int(v)))) for u, v in matching)
        for u, v in extra:
            require(
                2 <= u < v < r,
                f"missing_edge matching edges must avoid 0 and 1 and lie in 0..{r - 1}, got {u}{v}",
            )
        super().__init__(r=r, matching=[list(e) for e in extra])
        self.r = r
        self.host = complete_minus_matching(r, [(0, 1), *extra])

    def build(self) -> PartiteGraph:
        parts: dict[int, list[tuple[str, float]]] = {0: [("1", 1.0)], 1: [("2", 1.0)]}
        for x in range(2, self.r):
            parts[x] = [("1", 0.5), ("2", 0.5)]
        labels = {x: [v for v, _ in parts[x]] for x in parts}
        edges = [
            ((x, a), (y, a)) for x, y in self.host.edges for a in labels[x] if a in labels[y]
        ]
        return PartiteGraph.build(self.host, parts, edges, f"missing_edge(r={self.r})")

    def claimed_density(self) -> float:
        return 0.5

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(self.r)


class PendantTriangle(BaseConstruction):
    """Triangle {1,2,3} with pendant 0-1, density 4 - 2√3."""

    construction_id = "pendant_triangle"

    def __init__(self, **_: Any) -> None:
        super().__init__()

    def build(self) -> PartiteGraph:
        small = 2 - math.sqrt(3)
        parts = {
            0: [("v0", 1.0)],
            1: [("v2", small), ("v3", small), ("vX", 2 * math.sqrt(3) - 3)],
            2: [("v1", small), ("vY", math.sqrt(3) - 1)],
            3: [("v1", small), ("vY", math.sqrt(3) - 1)],
        }
        edges = [((0, "v0"), (1, "v2")), ((0, "v0"), (1, "v3"))]
        for i in (2, 3):
            edges += [
                ((i, "v1"), (1, f"v{i}")),
                ((i, "v1"), (1, "vX")),
                ((i, "vY"), (1, "vX")),
            ]
        edges.append(((2, "vY"), (3, "vY")))
        return PartiteGraph.build(pendant_triangle(), parts, edges, "pendant_triangle")

    def claimed_density(self) -> float:
        return 4 - 2 * math.sqrt(3)

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.all_trees(4)
