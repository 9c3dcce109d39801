"""Host graphs and the small bitset graphs that transversals induce on them."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import networkx as nx

from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence

shared_logger = get_task_logger(__name__)

MAX_SMALL_GRAPH_ORDER = 64

Edge = tuple[int, int]


def normalise_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SmallGraph:
    """Graph on at most 64 vertices stored as one adjacency bit row per vertex."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n > MAX_SMALL_GRAPH_ORDER:
            raise ValueError(
                f"SmallGraph supports at most {MAX_SMALL_GRAPH_ORDER} vertices, got {self.n}"
            )
        if len(self.rows) != self.n:
            raise ValueError(f"SmallGraph expects {self.n} rows, got {len(self.rows)}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> SmallGraph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> SmallGraph:
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges))

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.rows[u] >> v & 1]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def component_masks(self) -> Iterator[int]:
        remaining = (1 << self.n) - 1
        while remaining:
            component = remaining & -remaining
            frontier = component
            while frontier:
                v = frontier.bit_length() - 1
                frontier &= ~(1 << v)
                new = self.rows[v] & ~component
                component |= new
                frontier |= new
            yield component
            remaining &= ~component

    def largest_component(self) -> int:
        """Bit mask of a largest component (the one found first on ties)."""
        best = 0
        for mask in self.component_masks():
            if mask.bit_count() > best.bit_count():
                best = mask
        return best

    def largest_component_size(self) -> int:
        return self.largest_component().bit_count()

    def is_connected(self) -> bool:
        return self.n <= 1 or self.largest_component_size() == self.n

    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        for start in range(self.n):
            if colour[start] != -1:
                continue
            colour[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                row = self.rows[u]
                while row:
                    v = (row & -row).bit_length() - 1
                    row &= row - 1
                    if colour[v] == -1:
                        colour[v] = 1 - colour[u]
                        stack.append(v)
                    elif colour[v] == colour[u]:
                        return False
        return True

    def induced_key(self, vertices: Sequence[int]) -> int:
        """Adjacency bits of the induced subgraph on ``vertices`` under the given labelling."""
        key = 0
        bit = 0
        for i, u in enumerate(vertices):
            for v in vertices[i + 1 :]:
                if self.rows[u] >> v & 1:
                    key |= 1 << bit
                bit += 1
        return key

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph


@dataclass(frozen=True)
class HostGraph:
    """The host H: vertices ``0..n-1`` and a set of unordered edges."""

    n: int
    edges: tuple[Edge, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"A host graph needs at least one vertex, got n={self.n}")
        cleaned: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"Host graph {self.name or ''} has a self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"Host edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            cleaned.add(normalise_edge(u, v))
        object.__setattr__(self, "edges", tuple(sorted(cleaned)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], name: str = "") -> HostGraph:
        return cls(n, tuple((int(u), int(v)) for u, v in edges), name)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, name: str = "") -> HostGraph:
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges), name)

    @cached_property
    def small_graph(self) -> SmallGraph:
        return SmallGraph.from_edges(self.n, self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return normalise_edge(u, v) in self.edge_set

    def neighbours(self, x: int) -> list[int]:
        row = self.small_graph.rows[x]
        return [v for v in range(self.n) if row >> v & 1]

    def degree(self, x: int) -> int:
        return self.small_graph.degree(x)

    @property
    def is_connected(self) -> bool:
        return self.small_graph.is_connected()

    def label(self) -> str:
        return self.name or f"H(n={self.n}, m={len(self.edges)})"

    def to_networkx(self) -> nx.Graph:
        graph = self.small_graph.to_networkx()
        graph.graph["name"] = self.name
        return graph

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """All vertex permutations ``sigma`` (``sigma[x]`` is the image of ``x``) preserving the edges."""
        graph = self.to_networkx()
        matcher = nx.algorithms.isomorphism.GraphMatcher(graph, graph)
        perms = {
            tuple(mapping[x] for x in range(self.n)) for mapping in matcher.isomorphisms_iter()
        }
        shared_logger.debug(f"HostGraph.automorphisms(): {len(perms)} for {self.label()}")
        return tuple(sorted(perms))

    def to_dict(self) -> dict[str, object]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def complete(r: int) -> HostGraph:
    return HostGraph.from_edges(r, itertools.combinations(range(r), 2), f"K{r}")


def complete_minus_matching(r: int, matching: Iterable[Sequence[int]]) -> HostGraph:
    removed = {normalise_edge(u, v) for u, v in matching}
    used = [v for e in removed for v in e]
    if len(used) != len(set(used)):
        raise ValueError(f"Removed edges {sorted(removed)} do not form a matching")
    edges = [e for e in itertools.combinations(range(r), 2) if e not in removed]
    name = f"K{r}-e" if len(removed) == 1 else f"K{r}-M{len(removed)}"
    return HostGraph.from_edges(r, edges, name)


def path(r: int) -> HostGraph:
    return HostGraph.from_edges(r, ((i, i + 1) for i in range(r - 1)), f"P{r}")


def cycle(r: int) -> HostGraph:
    if r < 3:
        raise ValueError(f"A cycle needs at least 3 vertices, got {r}")
    return HostGraph.from_edges(r, ((i, (i + 1) % r) for i in range(r)), f"C{r}")


def star(r: int) -> HostGraph:
    """K_{1,r-1} with centre 0."""
    return HostGraph.from_edges(r, ((0, i) for i in range(1, r)), f"star:{r}")


def ladder(r: int) -> HostGraph:
    if r < 4 or r % 2:
        raise ValueError(f"A ladder needs an even number of vertices >= 4, got {r}")
    half = r // 2
    edges = [(i, i + 1) for i in range(half - 1)]
    edges += [(half + i, half + i + 1) for i in range(half - 1)]
    edges += [(i, half + i) for i in range(half)]
    return HostGraph.from_edges(r, edges, f"ladder:{r}")


def hypercube(d: int) -> HostGraph:
    """Q_d on the integers ``0..2**d-1``; two vertices are adjacent when they differ in one bit."""
    n = 1 << d
    edges = [(x, x | 1 << b) for x in range(n) for b in range(d) if not x >> b & 1]
    return HostGraph.from_edges(n, edges, f"Q{d}")


def pendant_triangle() -> HostGraph:
    """K4 - P3: the triangle {1,2,3} plus the pendant edge 0-1."""
    return HostGraph.from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)], "K4-P3")


_BUILTIN = re.compile(
    r"^(?:(?P<k>K(?P<kr>\d+))(?P<minus>-e)?|(?P<kp>K4-P3)|C(?P<c>\d+)|P(?P<p>\d+)|Q(?P<q>\d+)"
    r"|star:(?P<star>\d+)|ladder:(?P<ladder>\d+))$"
)


def builtin_host(name: str) -> HostGraph:
    """Resolve names such as ``K4``, ``K5-e``, ``K4-P3``, ``C5``, ``P3``, ``Q3``, ``star:5``, ``ladder:6``."""
    key = name.removeprefix("builtin:")
    match = _BUILTIN.match(key)
    if match is None:
        raise ValueError(f"Unsupported builtin host: {name}")
    if match["kp"]:
        return pendant_triangle()
    if match["k"]:
        r = int(match["kr"])
        if r < 2:
            raise ValueError(f"Unsupported builtin host: {name}")
        return complete_minus_matching(r, [(0, 1)]) if match["minus"] else complete(r)
    if match["c"]:
        return cycle(int(match["c"]))
    if match["p"]:
        return path(int(match["p"]))
    if match["q"]:
        return hypercube(int(match["q"]))
    if match["star"]:
        return star(int(match["star"]))
    return ladder(int(match["ladder"]))
