"""Weight-free skeletons of H-partite graphs and their symmetry reduction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from hpartite_core.core.certify import first_violation
from hpartite_core.core.families import contains_member
from hpartite_core.core.graphs import HostGraph, SmallGraph
from hpartite_core.core.partite import PartiteGraph
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from hpartite_core.core.families import ForbiddenFamily

shared_logger = get_task_logger(__name__)

BitRef = tuple[int, int, int]


@dataclass(frozen=True)
class CombinatorialPattern:
    """Part sizes plus one biadjacency matrix per host edge, in ``host.edges`` order.

    Matrix ``k`` for host edge ``(x, y)`` is stored as ``part_sizes[x]`` row masks over ``V_y``.
    """

    host: HostGraph
    part_sizes: tuple[int, ...]
    biadjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.part_sizes) != self.host.n or min(self.part_sizes, default=1) < 1:
            raise ValueError(f"Pattern needs a positive size for each of {self.host.n} parts")
        if len(self.biadjacency) != len(self.host.edges):
            raise ValueError("Pattern needs one biadjacency matrix per host edge")
        for (x, y), rows in zip(self.host.edges, self.biadjacency, strict=True):
            if len(rows) != self.part_sizes[x] or any(r >> self.part_sizes[y] for r in rows):
                raise ValueError(f"Biadjacency for host edge {x}{y} does not match the part sizes")

    @classmethod
    def empty(cls, host: HostGraph, sizes: Sequence[int]) -> CombinatorialPattern:
        return cls(host, tuple(sizes), tuple((0,) * sizes[x] for x, _ in host.edges))

    @classmethod
    def from_graph(cls, g: PartiteGraph) -> CombinatorialPattern:
        blocks = []
        for x, y in g.host.edges:
            rows = [0] * len(g.parts[x])
            for i, j in g.edges.get((x, y), ()):
                rows[i] |= 1 << j
            blocks.append(tuple(rows))
        return cls(g.host, g.sizes, tuple(blocks))

    def matrix(self, k: int) -> NDArray[np.float64]:
        x, y = self.host.edges[k]
        out = np.zeros((self.part_sizes[x], self.part_sizes[y]))
        for i, row in enumerate(self.biadjacency[k]):
            for j in range(self.part_sizes[y]):
                if row >> j & 1:
                    out[i, j] = 1.0
        return out

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for rows in self.biadjacency for row in rows)

    def to_graph(
        self, weights: Sequence[Sequence[float]] | None = None, name: str = ""
    ) -> PartiteGraph:
        if weights is None:
            weights = [[1.0 / s] * s for s in self.part_sizes]
        matrices = {edge: self.matrix(k) for k, edge in enumerate(self.host.edges)}
        return PartiteGraph.from_matrices(self.host, weights, matrices, name=name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "part_sizes": list(self.part_sizes),
            "biadjacency": {
                f"{x}-{y}": [[row >> j & 1 for j in range(self.part_sizes[y])] for row in rows]
                for (x, y), rows in zip(self.host.edges, self.biadjacency, strict=True)
            },
        }

    @classmethod
    def from_dict(cls, host: HostGraph, data: dict[str, Any]) -> CombinatorialPattern:
        blocks = []
        for x, y in host.edges:
            matrix = data["biadjacency"].get(f"{x}-{y}", [])
            blocks.append(tuple(sum(int(b) << j for j, b in enumerate(row)) for row in matrix))
        return cls(host, tuple(int(s) for s in data["part_sizes"]), tuple(blocks))


def bit_layout(host: HostGraph, sizes: Sequence[int]) -> list[BitRef]:
    return [
        (k, i, j)
        for k, (x, y) in enumerate(host.edges)
        for i in range(sizes[x])
        for j in range(sizes[y])
    ]


def raw_pattern_bits(host: HostGraph, sizes: Sequence[int]) -> int:
    return sum(sizes[x] * sizes[y] for x, y in host.edges)


def caps_from_degrees(host: HostGraph) -> tuple[int, ...]:
    """Part-size caps given by host degrees (at least 1)."""
    return tuple(max(1, host.degree(x)) for x in range(host.n))


def pattern_family_free(
    p: CombinatorialPattern, f: ForbiddenFamily, cap: int | None = None
) -> bool:
    """Whether every transversal of the skeleton avoids ``f``; weights play no part."""
    return first_violation(p.to_graph(), f, cap) is None


class PatternState:
    """Mutable biadjacency under construction, with an incremental family test for single bits."""

    def __init__(self, host: HostGraph, sizes: Sequence[int], family: ForbiddenFamily) -> None:
        self.host = host
        self.sizes = tuple(sizes)
        self.family = family
        self.rows = [[0] * self.sizes[x] for x, _ in host.edges]
        self.layout = bit_layout(host, self.sizes)
        self._others = [
            [z for z in range(host.n) if z not in (x, y)] for x, y in host.edges
        ]

    def is_set(self, bit: BitRef) -> bool:
        k, i, j = bit
        return bool(self.rows[k][i] >> j & 1)

    def set(self, bit: BitRef) -> None:
        k, i, j = bit
        self.rows[k][i] |= 1 << j

    def clear(self, bit: BitRef) -> None:
        k, i, j = bit
        self.rows[k][i] &= ~(1 << j)

    def transversal_graph(self, choice: Sequence[int]) -> SmallGraph:
        n = self.host.n
        rows = [0] * n
        for k, (x, y) in enumerate(self.host.edges):
            if self.rows[k][choice[x]] >> choice[y] & 1:
                rows[x] |= 1 << y
                rows[y] |= 1 << x
        return SmallGraph(n, tuple(rows))

    def can_add(self, bit: BitRef) -> bool:
        """True if setting ``bit`` keeps every transversal through it family-free."""
        if self.is_set(bit):
            return True
        k, i, j = bit
        x, y = self.host.edges[k]
        others = self._others[k]
        self.set(bit)
        choice = [0] * self.host.n
        choice[x], choice[y] = i, j
        try:
            for rest in itertools.product(*(range(self.sizes[z]) for z in others)):
                for z, c in zip(others, rest, strict=True):
                    choice[z] = c
                if contains_member(self.transversal_graph(choice), self.family):
                    return False
            return True
        finally:
            self.clear(bit)

    def is_maximal(self) -> bool:
        return all(self.is_set(bit) or not self.can_add(bit) for bit in self.layout)

    def freeze(self) -> CombinatorialPattern:
        return CombinatorialPattern(self.host, self.sizes, tuple(tuple(r) for r in self.rows))

    @classmethod
    def from_pattern(cls, p: CombinatorialPattern, family: ForbiddenFamily) -> PatternState:
        state = cls(p.host, p.part_sizes, family)
        state.rows = [list(rows) for rows in p.biadjacency]
        return state


def compatible_automorphisms(
    p: CombinatorialPattern, caps: Sequence[int] | None = None
) -> list[tuple[int, ...]]:
    """Host automorphisms that map every part onto a part with the same cap.

    Without explicit caps the part sizes act as caps.
    """
    caps = p.part_sizes if caps is None else tuple(caps)
    return [
        sigma
        for sigma in p.host.automorphisms
        if all(caps[sigma[x]] == caps[x] for x in range(p.host.n))
    ]


def _colex_edges(host: HostGraph) -> list[tuple[int, int]]:
    return sorted(host.edges, key=lambda e: (e[1], e[0]))


def _min_serial(
    host: HostGraph,
    sizes: Sequence[int],
    bits: dict[tuple[int, int], list[list[int]]],
    best: list[int] | None,
) -> list[int] | None:
    """Lexicographically least serialisation over within-part permutations, by branch and bound.

    Host edges are serialised in colex order so that fixing the permutations of parts ``0..v``
    fixes a prefix of the output.
    """
    n = host.n
    by_max: list[list[int]] = [[] for _ in range(n)]
    for a, b in _colex_edges(host):
        by_max[b].append(a)
    perms = [list(itertools.permutations(range(s))) for s in sizes]
    chosen: list[tuple[int, ...]] = [() for _ in range(n)]
    champion = [best]

    def descend(v: int, prefix: list[int]) -> None:
        if v == n:
            if champion[0] is None or prefix < champion[0]:
                champion[0] = prefix
            return
        for perm in perms[v]:
            chosen[v] = perm
            segment = []
            for a in by_max[v]:
                matrix = bits[(a, v)]
                for i in chosen[a]:
                    row = matrix[i]
                    segment.extend(row[j] for j in perm)
            extended = prefix + segment
            incumbent = champion[0]
            if incumbent is not None and extended > incumbent[: len(extended)]:
                continue
            descend(v + 1, extended)

    descend(0, [])
    return champion[0]


def canonical_key(
    p: CombinatorialPattern,
    host_automorphisms: Sequence[Sequence[int]] | None = None,
    caps: Sequence[int] | None = None,
) -> bytes:
    """Equal keys for patterns related by cap-respecting host automorphisms and part permutations.

    The key is the least (part sizes, serialised biadjacency) pair over that group, with the sizes
    taken in the relabelled frame.
    """
    if host_automorphisms is None:
        host_automorphisms = compatible_automorphisms(p, caps)
    index = {edge: k for k, edge in enumerate(p.host.edges)}
    best_sizes: list[int] | None = None
    best: list[int] | None = None
    for sigma in host_automorphisms:
        inverse = [0] * p.host.n
        for x, image in enumerate(sigma):
            inverse[image] = x
        sizes = [p.part_sizes[inverse[v]] for v in range(p.host.n)]
        if best_sizes is not None and sizes > best_sizes:
            continue
        bits: dict[tuple[int, int], list[list[int]]] = {}
        for a, b in p.host.edges:
            x, y = inverse[a], inverse[b]
            if x < y:
                rows = p.biadjacency[index[(x, y)]]
                bits[(a, b)] = [[row >> j & 1 for j in range(sizes[b])] for row in rows]
            else:
                rows = p.biadjacency[index[(y, x)]]
                bits[(a, b)] = [
                    [rows[j] >> i & 1 for j in range(sizes[b])] for i in range(sizes[a])
                ]
        incumbent = best if sizes == best_sizes else None
        serial = _min_serial(p.host, sizes, bits, incumbent)
        if serial is not None and serial is not incumbent:
            best_sizes, best = sizes, serial
    if best_sizes is None or best is None:
        raise ValueError("canonical_key(): no automorphism given, the identity is always one")
    return bytes(best_sizes) + bytes(best)


def pattern_from_key(host: HostGraph, key: bytes) -> CombinatorialPattern:
    """Inverse of the serialisation used by :func:`canonical_key`."""
    sizes = tuple(key[: host.n])
    stream = iter(key[host.n :])
    blocks: dict[tuple[int, int], tuple[int, ...]] = {}
    for a, b in _colex_edges(host):
        rows = []
        for _ in range(sizes[a]):
            rows.append(sum(next(stream) << j for j in range(sizes[b])))
        blocks[(a, b)] = tuple(rows)
    return CombinatorialPattern(host, sizes, tuple(blocks[e] for e in host.edges))


def clone_to_sizes(p: CombinatorialPattern, sizes: Sequence[int]) -> CombinatorialPattern:
    """Grow each part to ``sizes[x]`` by cloning its first vertex.

    Clones share their original's neighbourhood, so every new transversal graph already occurs and
    family-freeness is unchanged.
    """
    if any(s < have for s, have in zip(sizes, p.part_sizes, strict=True)):
        raise ValueError(f"Cannot shrink pattern {p.part_sizes} to {tuple(sizes)}")
    origin = [
        list(range(have)) + [0] * (s - have)
        for s, have in zip(sizes, p.part_sizes, strict=True)
    ]
    blocks = []
    for (x, y), rows in zip(p.host.edges, p.biadjacency, strict=True):
        blocks.append(
            tuple(
                sum((rows[i] >> j & 1) << b for b, j in enumerate(origin[y]))
                for i in origin[x]
            )
        )
    return CombinatorialPattern(p.host, tuple(sizes), tuple(blocks))
