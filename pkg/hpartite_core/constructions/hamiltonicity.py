"""Constructions without a Hamiltonian (or odd-cycle) transversal."""

from __future__ import annotations

from hpartite_core.constructions.base import BaseConstruction, require
from hpartite_core.core.families import ForbiddenFamily
from hpartite_core.core.graphs import complete
from hpartite_core.core.partite import PartiteGraph
from hpartite_core.get_version import get_task_logger
from hpartite_core.thresholds.closed_form import certified_pstar, dirac_pstar

shared_logger = get_task_logger(__name__)


class TwoColour(BaseConstruction):
    """Parts {0,1} with weight 1/2, except part r-2 = {0} and part r-1 = {1}.

    Equal labels are joined, and so is the single pair between the last two parts.
    """

    construction_id = "two_colour"

    def __init__(self, r: int) -> None:
        require(r >= 4, f"two_colour needs r >= 4, got r={r}")
        super().__init__(r=r)
        self.r = r

    def build(self) -> PartiteGraph:
        r = self.r
        parts: dict[int, list[tuple[str, float]]] = {
            x: [("0", 0.5), ("1", 0.5)] for x in range(r - 2)
        }
        parts[r - 2] = [("0", 1.0)]
        parts[r - 1] = [("1", 1.0)]
        edges = []
        for x in range(r):
            for y in range(x + 1, r):
                for a, _ in parts[x]:
                    for b, _ in parts[y]:
                        if a == b or (x, y) == (r - 2, r - 1):
                            edges.append(((x, a), (y, b)))
        return PartiteGraph.build(complete(r), parts, edges, f"two_colour(r={r})")

    def claimed_density(self) -> float:
        return 0.5

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.hamilton_cycle()


class Parity(BaseConstruction):
    """Every part is {0,1} with weight 1/2 and x ~ y iff x + y is odd."""

    construction_id = "parity"

    def __init__(self, r: int) -> None:
        require(r >= 3, f"parity needs r >= 3, got r={r}")
        super().__init__(r=r)
        self.r = r

    def build(self) -> PartiteGraph:
        r = self.r
        parts = {x: [("0", 0.5), ("1", 0.5)] for x in range(r)}
        edges = [
            ((x, a), (y, b))
            for x in range(r)
            for y in range(x + 1, r)
            for a, b in (("0", "1"), ("1", "0"))
        ]
        return PartiteGraph.build(complete(r), parts, edges, f"parity(r={r})")

    def claimed_density(self) -> float:
        return 0.5

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.odd_cycles()


def dead_end_densities(r: int, p1: float, p2: float, p3: float) -> tuple[float, float, float, float]:
    """The four pair-density classes of the refined dead-end graph.

    In order: among the first r-2 parts, first r-2 to part r-2, first r-2 to the last part, part r-2
    to the last part.
    """
    return (
        p1 * p1 + (1 - p1) ** 2,
        p1 * p2,
        (1 - p1) + p1 * (1 - p3) / (r - 2),
        (1 - p2) + p2 * p3,
    )


def certified_triple(r: int) -> tuple[float, float, float]:
    """Weights equalising all four density classes."""
    p = certified_pstar(r)
    level = p * p + (1 - p) ** 2
    return p, level / p, 1 - (r - 2) * (2 * p - 1)


def cubic_triple(r: int) -> tuple[float, float, float]:
    """Weights from the dirac cubic root; the third class then falls below the other three."""
    p = dirac_pstar(r)
    return p, (p * p + (1 - p) ** 2) / p, 1 - (r - 2) * p * (2 * p - 1)


class RefinedDeadEnd(BaseConstruction):
    """K_r host without a Hamiltonian transversal.

    Parts 0..r-3 are {0, r-1} (weights p1, 1-p1), part r-2 is {0, r} (p2, 1-p2) and the last part
    is {1..r-1} with weight p3 on r-1 and (1-p3)/(r-2) elsewhere.

    Edges:

    * among parts 0..r-2: x ~ y iff x = y = 0 or x = y = r-1
    * part i <= r-3 to the last part: x ~ y iff x = r-1 or y = i+1
    * part r-2 to the last part: x ~ y iff (x = 0 and y = r-1) or x = r

    Parameters are explicit ``p1, p2, p3``, an ``epsilon`` (p1 = 1/2+ε, p2 = 1-ε, p3 = 1-(r-1)ε),
    or ``optimum`` set to ``"certified"`` (the default) or ``"cubic"``.
    """

    construction_id = "refined_dead_end"

    def __init__(
        self,
        r: int,
        p1: float | None = None,
        p2: float | None = None,
        p3: float | None = None,
        epsilon: float | None = None,
        optimum: str = "certified",
    ) -> None:
        require(r >= 4, f"refined_dead_end needs r >= 4, got r={r}")
        explicit = (p1, p2, p3)
        if all(p is not None for p in explicit):
            triple = (float(p1), float(p2), float(p3))  # type: ignore[arg-type]
        elif any(p is not None for p in explicit):
            raise ValueError("refined_dead_end needs all of p1, p2, p3 or none of them")
        elif epsilon is not None:
            triple = (0.5 + epsilon, 1 - epsilon, 1 - (r - 1) * epsilon)
        else:
            match optimum:
                case "certified":
                    triple = certified_triple(r)
                case "cubic":
                    triple = cubic_triple(r)
                case _:
                    raise ValueError(f"Unsupported refined_dead_end optimum: {optimum}")
        for name, value in zip(("p1", "p2", "p3"), triple, strict=True):
            require(0.0 < value < 1.0, f"refined_dead_end needs {name} in (0, 1), got {name}={value}")
        super().__init__(r=r, p1=triple[0], p2=triple[1], p3=triple[2])
        self.r = r
        self.p1, self.p2, self.p3 = triple

    def build(self) -> PartiteGraph:
        r, p1, p2, p3 = self.r, self.p1, self.p2, self.p3
        low, mid, last = str(r - 1), str(r), r - 1
        parts: dict[int, list[tuple[str, float]]] = {
            x: [("0", p1), (low, 1 - p1)] for x in range(r - 2)
        }
        parts[r - 2] = [("0", p2), (mid, 1 - p2)]
        parts[last] = [(str(j), (1 - p3) / (r - 2)) for j in range(1, r - 1)] + [(low, p3)]
        edges = []
        for x in range(r - 1):
            for y in range(x + 1, r - 1):
                edges.append(((x, "0"), (y, "0")))
                if y < r - 2:
                    edges.append(((x, low), (y, low)))
        for x in range(r - 2):
            for j in range(1, r):
                if j == x + 1:
                    edges.append(((x, "0"), (last, str(j))))
                edges.append(((x, low), (last, str(j))))
        edges.append(((r - 2, "0"), (last, low)))
        edges += [((r - 2, mid), (last, str(j))) for j in range(1, r)]
        return PartiteGraph.build(
            complete(r), parts, edges, f"refined_dead_end(r={r}, p=({p1:.6g}, {p2:.6g}, {p3:.6g}))"
        )

    def density_classes(self) -> tuple[float, float, float, float]:
        return dead_end_densities(self.r, self.p1, self.p2, self.p3)

    def claimed_density(self) -> float:
        return min(self.density_classes())

    def claimed_family(self) -> ForbiddenFamily:
        return ForbiddenFamily.hamilton_cycle()
