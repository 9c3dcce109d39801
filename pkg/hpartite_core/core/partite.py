"""Weighted H-partite graphs, their density profiles and transversals."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any

import numpy as np

from hpartite_core import config
from hpartite_core.core.errors import EnumerationCapError, InvalidPartiteGraphError
from hpartite_core.core.graphs import Edge, HostGraph, SmallGraph, normalise_edge
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping, Sequence

    from numpy.typing import NDArray

shared_logger = get_task_logger(__name__)

VertexRef = tuple[int, str]


@dataclass(frozen=True)
class PartiteGraph:
    """A weighted H-partite graph.

    Part ``x`` is the sequence of vertex ids ``parts[x]`` with weights ``weights[x]``. Edges are
    stored per host pair ``(x, y)`` with ``x < y`` as a set of within-part index pairs ``(i, j)``,
    meaning ``parts[x][i]`` is joined to ``parts[y][j]``. Nothing is checked on construction so that
    :func:`validate` can report on malformed input.
    """

    host: HostGraph
    parts: tuple[tuple[str, ...], ...]
    weights: tuple[tuple[float, ...], ...]
    edges: dict[Edge, frozenset[tuple[int, int]]] = field(default_factory=dict)
    name: str = field(default="", compare=False)

    @classmethod
    def build(
        cls,
        host: HostGraph,
        parts: Mapping[int, Sequence[tuple[str, float]]],
        edges: Iterable[tuple[VertexRef, VertexRef]],
        name: str = "",
    ) -> PartiteGraph:
        """Build from labelled vertices ``(id, weight)`` and labelled edges ``((x, id), (y, id))``."""
        ids = tuple(tuple(str(v) for v, _ in parts.get(x, ())) for x in range(host.n))
        weights = tuple(tuple(float(w) for _, w in parts.get(x, ())) for x in range(host.n))
        index: list[dict[str, int]] = []
        for x, part in enumerate(ids):
            lookup = {v: i for i, v in enumerate(part)}
            if len(lookup) != len(part):
                raise ValueError(f"Part {x} has duplicate vertex ids: {list(part)}")
            index.append(lookup)
        collected: dict[Edge, set[tuple[int, int]]] = {}
        for (x, u), (y, v) in edges:
            if x == y:
                raise ValueError(f"Edge ({x},{u})-({y},{v}) joins two vertices of one part")
            for part, label in ((x, u), (y, v)):
                if not 0 <= part < host.n or str(label) not in index[part]:
                    raise ValueError(f"Edge endpoint ({part}, {label!r}) is not a vertex")
            i, j = index[x][str(u)], index[y][str(v)]
            key = (x, y)
            pair = (i, j)
            if x > y:
                key, pair = (y, x), (j, i)
            collected.setdefault(key, set()).add(pair)
        return cls(host, ids, weights, {k: frozenset(v) for k, v in collected.items()}, name)

    @classmethod
    def from_matrices(
        cls,
        host: HostGraph,
        weights: Sequence[Sequence[float]],
        matrices: Mapping[Edge, NDArray[Any]],
        ids: Sequence[Sequence[str]] | None = None,
        name: str = "",
    ) -> PartiteGraph:
        """Build from one 0/1 biadjacency matrix per host edge ``(x, y)``, ``x < y``."""
        if ids is None:
            ids = [[str(i) for i in range(len(w))] for w in weights]
        edges = {
            normalise_edge(*key): frozenset(
                (int(i), int(j)) for i, j in zip(*np.nonzero(np.asarray(m)), strict=True)
            )
            for key, m in matrices.items()
        }
        return cls(
            host,
            tuple(tuple(p) for p in ids),
            tuple(tuple(float(v) for v in w) for w in weights),
            {k: v for k, v in edges.items() if v},
            name,
        )

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @cached_property
    def weight_arrays(self) -> tuple[NDArray[np.float64], ...]:
        return tuple(np.asarray(w, dtype=np.float64) for w in self.weights)

    def biadjacency(self, x: int, y: int) -> NDArray[np.float64]:
        """0/1 matrix of shape ``(|V_x|, |V_y|)``."""
        key = normalise_edge(x, y)
        matrix = np.zeros((len(self.parts[key[0]]), len(self.parts[key[1]])))
        for i, j in self.edges.get(key, ()):
            matrix[i, j] = 1.0
        return matrix if key == (x, y) else matrix.T

    def vertex_ref(self, x: int, i: int) -> VertexRef:
        return (x, self.parts[x][i])

    def with_weights(self, weights: Sequence[Sequence[float]]) -> PartiteGraph:
        return PartiteGraph(
            self.host,
            self.parts,
            tuple(tuple(float(v) for v in w) for w in weights),
            self.edges,
            self.name,
        )

    def edge_count(self) -> int:
        return sum(len(v) for v in self.edges.values())

    @cached_property
    def _back_tables(self) -> tuple[tuple[tuple[tuple[int, int], ...], ...], ...]:
        # for part x and choice i: (y, mask of choices of y joined to i) for every host neighbour y < x
        tables = []
        for x in range(self.host.n):
            per_choice = []
            for i in range(len(self.parts[x])):
                entries = []
                for y in range(x):
                    if not self.host.has_edge(y, x):
                        continue
                    mask = 0
                    for a, b in self.edges.get((y, x), ()):
                        if b == i:
                            mask |= 1 << a
                    entries.append((y, mask))
                per_choice.append(tuple(entries))
            tables.append(tuple(per_choice))
        return tuple(tables)


@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.kind} at {v.location}: {v.message}" for v in self.violations)

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.ok,
            "violations": [
                {"kind": v.kind, "location": v.location, "message": v.message}
                for v in self.violations
            ],
        }


def validate(g: PartiteGraph) -> ValidationReport:
    """Report every violation of the H-partite graph conditions; never raises."""
    found: list[Violation] = []
    n = g.host.n
    if len(g.parts) != n or len(g.weights) != n:
        found.append(
            Violation(
                "shape",
                "parts",
                f"expected {n} parts and weight vectors, got {len(g.parts)} and {len(g.weights)}",
            )
        )
    for x in range(min(n, len(g.parts), len(g.weights))):
        part, weights = g.parts[x], g.weights[x]
        if not part:
            found.append(Violation("empty-part", f"part {x}", "part has no vertices"))
            continue
        if len(weights) != len(part):
            found.append(
                Violation("shape", f"part {x}", f"{len(part)} vertices but {len(weights)} weights")
            )
            continue
        for v, w in zip(part, weights, strict=True):
            if not math.isfinite(w) or w < 0.0 or w > 1.0:
                found.append(Violation("weight-range", f"vertex ({x}, {v})", f"weight {w} not in [0,1]"))
        total = math.fsum(weights)
        if abs(total - 1.0) > config.WEIGHT_SUM_TOLERANCE:
            found.append(Violation("weight-sum", f"part {x}", f"weights sum to {total!r}, not 1"))
    for (x, y), pairs in sorted(g.edges.items()):
        if not (0 <= x < y < len(g.parts)):
            found.append(Violation("bad-index", f"pair {x}-{y}", "edge key must satisfy x < y < n"))
            continue
        stray = not g.host.has_edge(x, y)
        for i, j in sorted(pairs):
            if not (0 <= i < len(g.parts[x]) and 0 <= j < len(g.parts[y])):
                found.append(Violation("bad-index", f"edge {x}:{i}-{y}:{j}", "vertex index out of range"))
            elif stray:
                found.append(
                    Violation(
                        "stray-edge",
                        f"edge ({x}, {g.parts[x][i]})-({y}, {g.parts[y][j]})",
                        f"host vertices {x} and {y} are not adjacent",
                    )
                )
    return ValidationReport(tuple(found))


def require_valid(g: PartiteGraph) -> None:
    report = validate(g)
    if not report.ok:
        shared_logger.error(f"require_valid(): {report.summary()}")
        raise InvalidPartiteGraphError(report)


@dataclass(frozen=True)
class DensityProfile:
    """Pair densities α_xy for every host edge and their minimum d_H(G).

    A host without edges has minimum 1 (the empty minimum).
    """

    values: dict[Edge, float]
    minimum: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "values": {f"{x}-{y}": v for (x, y), v in sorted(self.values.items())},
            "minimum": self.minimum,
        }


def pair_density(g: PartiteGraph, x: int, y: int) -> float:
    value = float(g.weight_arrays[x] @ g.biadjacency(x, y) @ g.weight_arrays[y])
    return min(1.0, max(0.0, value))


def density_profile(g: PartiteGraph) -> DensityProfile:
    require_valid(g)
    values = {(x, y): pair_density(g, x, y) for x, y in g.host.edges}
    return DensityProfile(values, min(values.values(), default=1.0))


def restrict_host(g: PartiteGraph, host: HostGraph) -> PartiteGraph:
    """Drop the edges of host pairs missing from ``host``, a spanning subgraph of ``g.host``."""
    if host.n != g.host.n or not host.edge_set <= g.host.edge_set:
        raise ValueError(f"{host.label()} is not a spanning subgraph of {g.host.label()}")
    edges = {k: v for k, v in g.edges.items() if k in host.edge_set}
    return PartiteGraph(host, g.parts, g.weights, edges, f"{g.name}|{host.label()}")


@dataclass(frozen=True)
class Transversal:
    """One within-part index per host vertex."""

    choice: tuple[int, ...]

    def labels(self, g: PartiteGraph) -> tuple[str, ...]:
        return tuple(g.parts[x][i] for x, i in enumerate(self.choice))

    def weight(self, g: PartiteGraph) -> float:
        return math.prod(g.weights[x][i] for x, i in enumerate(self.choice))

    def to_dict(self, g: PartiteGraph) -> dict[str, Any]:
        return {"choice": list(self.choice), "labels": list(self.labels(g))}


def transversal_count(g: PartiteGraph) -> int:
    return math.prod(g.sizes)


def _check_cap(g: PartiteGraph, cap: int | None) -> int:
    limit = config.enumeration_cap() if cap is None else cap
    total = transversal_count(g)
    if total > limit:
        shared_logger.error(f"_check_cap(): {total} transversals exceed cap {limit}")
        raise EnumerationCapError(total, limit)
    return total


def enumerate_transversals(
    g: PartiteGraph, cap: int | None = None, start: int = 0, stop: int | None = None
) -> Iterator[Transversal]:
    """Yield transversals in lexicographic order of choices, optionally a slice of that order.

    ``start``/``stop`` index the lexicographic sequence, so parallel callers can partition it.
    """
    require_valid(g)
    total = _check_cap(g, cap)
    stop = total if stop is None else min(stop, total)
    product = itertools.product(*(range(s) for s in g.sizes))
    for choice in itertools.islice(product, start, stop):
        yield Transversal(choice)


def transversal_graph(g: PartiteGraph, t: Transversal) -> SmallGraph:
    """The spanning subgraph of the host formed by the host edges whose chosen ends are joined."""
    edges = [(x, y) for x, y in g.host.edges if (t.choice[x], t.choice[y]) in g.edges.get((x, y), ())]
    return SmallGraph.from_edges(g.host.n, edges)


def transversal_graphs(
    g: PartiteGraph, cap: int | None = None, start: int = 0, stop: int | None = None
) -> Iterator[tuple[Transversal, SmallGraph]]:
    """Same order as :func:`enumerate_transversals`, paired with each transversal graph.

    Bit rows are rebuilt only from the first changed part onwards.
    """
    require_valid(g)
    total = _check_cap(g, cap)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    n, sizes, tables = g.host.n, g.sizes, g._back_tables
    digits = [0] * n
    rest = start
    for x in reversed(range(n)):
        rest, digits[x] = divmod(rest, sizes[x])
    rows_at: list[list[int]] = [[0] * n for _ in range(n + 1)]

    def refill(first: int) -> None:
        for x in range(first, n):
            rows = rows_at[x].copy()
            back = 0
            for y, mask in tables[x][digits[x]]:
                if mask >> digits[y] & 1:
                    back |= 1 << y
                    rows[y] |= 1 << x
            rows[x] = back
            rows_at[x + 1] = rows

    refill(0)
    for _ in range(start, stop):
        yield Transversal(tuple(digits)), SmallGraph(n, tuple(rows_at[n]))
        p = n - 1
        while p >= 0:
            digits[p] += 1
            if digits[p] < sizes[p]:
                break
            digits[p] = 0
            p -= 1
        if p < 0:
            return
        refill(p)


def blow_up(g: PartiteGraph, n_copies: int) -> PartiteGraph:
    """Replace each vertex v by ``N*w(v)`` clones of weight ``1/N``; zero-weight vertices vanish."""
    require_valid(g)
    if n_copies < 1:
        raise ValueError(f"Blow-up factor must be a positive integer, got {n_copies}")
    ids: list[list[str]] = []
    origin: list[list[int]] = []
    for x, (part, weights) in enumerate(zip(g.parts, g.weights, strict=True)):
        new_ids: list[str] = []
        new_origin: list[int] = []
        for i, (v, w) in enumerate(zip(part, weights, strict=True)):
            k = round(n_copies * w)
            if abs(n_copies * w - k) > 1e-9:
                shared_logger.error(f"blow_up(): N*w = {n_copies * w} for vertex ({x}, {v})")
                raise ValueError(
                    f"N*w(v) = {n_copies * w!r} is not an integer for vertex ({x}, {v})"
                )
            copies = [v] if k == 1 and n_copies == 1 else [f"{v}.{c}" for c in range(k)]
            new_ids.extend(copies)
            new_origin.extend([i] * k)
        ids.append(new_ids)
        origin.append(new_origin)
    edges: dict[Edge, frozenset[tuple[int, int]]] = {}
    for (x, y), pairs in g.edges.items():
        blown = frozenset(
            (a, b)
            for a, i in enumerate(origin[x])
            for b, j in enumerate(origin[y])
            if (i, j) in pairs
        )
        if blown:
            edges[(x, y)] = blown
    weights = tuple(tuple(1.0 / n_copies for _ in part) for part in ids)
    return PartiteGraph(g.host, tuple(tuple(p) for p in ids), weights, edges, f"{g.name}*{n_copies}")
