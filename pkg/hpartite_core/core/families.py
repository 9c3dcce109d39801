"""Forbidden families of transversal subgraphs and the containment test."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from hpartite_core.core.graphs import SmallGraph, builtin_host
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from hpartite_core.core.graphs import HostGraph

shared_logger = get_task_logger(__name__)


class FamilyKind(enum.Enum):
    ALL_TREES = "trees"
    HAMILTON_CYCLE = "hamilton"
    ODD_CYCLES = "oddcycles"
    CLIQUE = "clique"
    EXPLICIT = "list"
    PATH = "path"
    CYCLE = "cycle"
    FACTOR = "factor"


@dataclass(frozen=True)
class ForbiddenFamily:
    """A family of forbidden transversal subgraphs.

    ``order`` is t for trees and cliques and the vertex count for paths and cycles. ``graphs`` holds
    the members of an explicit list, or the single factor graph F for ``FACTOR``.
    """

    kind: FamilyKind
    order: int = 0
    graphs: tuple[SmallGraph, ...] = ()
    copies: int = 1

    @classmethod
    def all_trees(cls, t: int) -> ForbiddenFamily:
        if t < 1:
            raise ValueError(f"Tree order must be positive, got {t}")
        return cls(FamilyKind.ALL_TREES, order=t)

    @classmethod
    def hamilton_cycle(cls) -> ForbiddenFamily:
        return cls(FamilyKind.HAMILTON_CYCLE)

    @classmethod
    def odd_cycles(cls) -> ForbiddenFamily:
        return cls(FamilyKind.ODD_CYCLES)

    @classmethod
    def clique(cls, t: int) -> ForbiddenFamily:
        if t < 2:
            raise ValueError(f"Clique order must be at least 2, got {t}")
        return cls(FamilyKind.CLIQUE, order=t)

    @classmethod
    def path(cls, order: int) -> ForbiddenFamily:
        if order < 2:
            raise ValueError(f"Path order must be at least 2, got {order}")
        return cls(FamilyKind.PATH, order=order)

    @classmethod
    def cycle(cls, order: int) -> ForbiddenFamily:
        if order < 3:
            raise ValueError(f"Cycle order must be at least 3, got {order}")
        return cls(FamilyKind.CYCLE, order=order)

    @classmethod
    def explicit(cls, graphs: list[SmallGraph] | tuple[SmallGraph, ...]) -> ForbiddenFamily:
        if not graphs:
            raise ValueError("An explicit family needs at least one member")
        for g in graphs:
            if g.n == 0:
                raise ValueError("Explicit family members must be non-empty graphs")
        return cls(FamilyKind.EXPLICIT, graphs=tuple(graphs))

    @classmethod
    def factor(cls, graph: SmallGraph, copies: int) -> ForbiddenFamily:
        if copies < 1 or graph.n == 0:
            raise ValueError(f"A factor needs a non-empty graph and copies >= 1, got {copies}")
        return cls(FamilyKind.FACTOR, graphs=(graph,), copies=copies)

    def validate_for(self, host: HostGraph) -> None:
        """Reject explicit members larger than the host."""
        for g in self.members_as_graphs():
            if g.n > host.n:
                raise ValueError(
                    f"Family member on {g.n} vertices cannot live on a host of order {host.n}"
                )

    def members_as_graphs(self) -> tuple[SmallGraph, ...]:
        if self.kind is FamilyKind.FACTOR:
            return (disjoint_copies(self.graphs[0], self.copies),)
        return self.graphs

    def describe(self) -> str:
        match self.kind:
            case FamilyKind.ALL_TREES | FamilyKind.CLIQUE | FamilyKind.PATH | FamilyKind.CYCLE:
                return f"{self.kind.value}:{self.order}"
            case FamilyKind.HAMILTON_CYCLE | FamilyKind.ODD_CYCLES:
                return self.kind.value
            case FamilyKind.FACTOR:
                return f"factor:{self.graphs[0].n}v{self.graphs[0].edge_count}e x{self.copies}"
        return f"list[{len(self.graphs)}]"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value, "spec": self.describe()}
        if self.order:
            data["order"] = self.order
        if self.graphs:
            data["graphs"] = [{"n": g.n, "edges": [list(e) for e in g.edges()]} for g in self.graphs]
        if self.kind is FamilyKind.FACTOR:
            data["copies"] = self.copies
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ForbiddenFamily:
        kind = FamilyKind(data["kind"])
        graphs = tuple(SmallGraph.from_edges(g["n"], g["edges"]) for g in data.get("graphs", []))
        return cls(kind, int(data.get("order", 0)), graphs, int(data.get("copies", 1)))


def disjoint_copies(graph: SmallGraph, copies: int) -> SmallGraph:
    edges = [(u + k * graph.n, v + k * graph.n) for k in range(copies) for u, v in graph.edges()]
    return SmallGraph.from_edges(graph.n * copies, edges)


def parse_family(text: str) -> ForbiddenFamily:
    """Parse ``trees:T``, ``hamilton``, ``oddcycles``, ``clique:T``, ``path:L``, ``cycle:L``,
    ``factor:K3x2`` or ``list:file.json``.
    """
    head, _, arg = text.strip().partition(":")
    match head.lower():
        case "trees":
            return ForbiddenFamily.all_trees(int(arg))
        case "hamilton":
            return ForbiddenFamily.hamilton_cycle()
        case "oddcycles":
            return ForbiddenFamily.odd_cycles()
        case "clique":
            return ForbiddenFamily.clique(int(arg))
        case "path":
            return ForbiddenFamily.path(int(arg))
        case "cycle":
            return ForbiddenFamily.cycle(int(arg))
        case "factor":
            name, sep, copies = arg.rpartition("x")
            if not sep:
                raise ValueError(f"Factor family needs the form factor:<graph>x<copies>, got {text}")
            return ForbiddenFamily.factor(builtin_host(name).small_graph, int(copies))
        case "list":
            with Path(arg).open(encoding="utf-8") as f:
                data = json.load(f)
            members = data["graphs"] if isinstance(data, dict) else data
            return ForbiddenFamily.explicit(
                [SmallGraph.from_edges(int(g["n"]), g["edges"]) for g in members]
            )
    raise ValueError(f"Unsupported family: {text}")


def is_hamiltonian(s: SmallGraph) -> bool:
    """Backtracking Hamilton cycle search with pruning on vertices of degree < 2."""
    n = s.n
    if n < 3 or any(d < 2 for d in s.degrees()) or not s.is_connected():
        return False
    full = (1 << n) - 1
    rows = s.rows

    def extend(v: int, visited: int) -> bool:
        if visited == full:
            return bool(rows[v] & 1)
        unvisited = full & ~visited
        # every unvisited vertex still needs two usable neighbours
        usable = unvisited | 1 | 1 << v
        pending = unvisited
        while pending:
            u = (pending & -pending).bit_length() - 1
            pending &= pending - 1
            if (rows[u] & usable & ~(1 << u)).bit_count() < 2:
                return False
        candidates = rows[v] & unvisited
        while candidates:
            u = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            if extend(u, visited | 1 << u):
                return True
        return False

    return extend(0, 1)


def find_subgraph(pattern: SmallGraph, target: SmallGraph) -> dict[int, int] | None:
    """Backtracking subgraph monomorphism with degree-sequence pruning.

    Returns a map from pattern vertices to target vertices, or ``None``.
    """
    if pattern.n > target.n or pattern.edge_count > target.edge_count:
        return None
    pattern_degrees = pattern.degrees()
    target_degrees = target.degrees()
    for a, b in zip(
        sorted(pattern_degrees, reverse=True), sorted(target_degrees, reverse=True), strict=False
    ):
        if a > b:
            return None

    order: list[int] = []
    placed = 0
    while len(order) < pattern.n:
        best = max(
            (v for v in range(pattern.n) if not placed >> v & 1),
            key=lambda v: ((pattern.rows[v] & placed).bit_count(), pattern_degrees[v], -v),
        )
        order.append(best)
        placed |= 1 << best

    degree_ok = [
        sum(1 << t for t in range(target.n) if target_degrees[t] >= pattern_degrees[p])
        for p in range(pattern.n)
    ]
    mapping: dict[int, int] = {}

    def assign(depth: int, used: int) -> bool:
        if depth == pattern.n:
            return True
        p = order[depth]
        candidates = degree_ok[p] & ~used
        for q, image in mapping.items():
            if pattern.rows[p] >> q & 1:
                candidates &= target.rows[image]
        while candidates:
            t = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            mapping[p] = t
            if assign(depth + 1, used | 1 << t):
                return True
            del mapping[p]
        return False

    return dict(mapping) if assign(0, 0) else None


def contains_member(s: SmallGraph, f: ForbiddenFamily) -> bool:
    """True iff ``s`` contains a member of ``f`` as a (not necessarily induced) subgraph."""
    match f.kind:
        case FamilyKind.ALL_TREES:
            return s.largest_component_size() >= f.order
        case FamilyKind.HAMILTON_CYCLE:
            return is_hamiltonian(s)
        case FamilyKind.ODD_CYCLES:
            return not s.is_bipartite()
        case FamilyKind.CLIQUE:
            pattern = SmallGraph.from_edges(
                f.order, ((u, v) for u in range(f.order) for v in range(u + 1, f.order))
            )
            return find_subgraph(pattern, s) is not None
        case FamilyKind.PATH:
            if s.largest_component_size() < f.order:
                return False
            pattern = SmallGraph.from_edges(f.order, ((i, i + 1) for i in range(f.order - 1)))
            return find_subgraph(pattern, s) is not None
        case FamilyKind.CYCLE:
            pattern = SmallGraph.from_edges(f.order, ((i, (i + 1) % f.order) for i in range(f.order)))
            return find_subgraph(pattern, s) is not None
        case FamilyKind.EXPLICIT | FamilyKind.FACTOR:
            return any(find_subgraph(g, s) is not None for g in f.members_as_graphs())
    raise ValueError(f"Unsupported family kind: {f.kind}")
