from __future__ import annotations

import math

from hpartite_core.core.graphs import Edge, cycle, normalise_edge
from hpartite_core.core.partite import PartiteGraph, require_valid
from hpartite_core.get_version import get_task_logger

shared_logger = get_task_logger(__name__)


def path_order(g: PartiteGraph) -> int:
    """Order of the path hosting ``g``; the host must be 0-1-...-(k-1)."""
    host = g.host
    if host.edges != tuple((i, i + 1) for i in range(host.n - 1)):
        raise ValueError(f"{host.label()} is not a path host 0-1-...-{host.n - 1}")
    return host.n


def _same_part(g1: PartiteGraph, x1: int, g2: PartiteGraph, x2: int, tol: float = 1e-9) -> bool:
    w1, w2 = g1.weights[x1], g2.weights[x2]
    return len(w1) == len(w2) and all(math.isclose(a, b, abs_tol=tol) for a, b in zip(w1, w2, strict=True))


def glue_paths(g1: PartiteGraph, g2: PartiteGraph) -> PartiteGraph:
    """Close two path-hosted graphs into one cycle-hosted graph.

    The first part of ``g1`` is identified with the first part of ``g2`` and the last with the last,
    vertex by vertex in within-part order; ids and weights of shared parts come from ``g1``. Cycle
    vertices ``0..k1-1`` carry ``g1``, the interior of ``g2`` is laid out backwards after them.
    """
    require_valid(g1)
    require_valid(g2)
    k1, k2 = path_order(g1), path_order(g2)
    r = k1 + k2 - 2
    if r < 4:
        raise ValueError(f"Glued cycle would have {r} vertices; need at least 4")
    for a, b in ((0, 0), (k1 - 1, k2 - 1)):
        if not _same_part(g1, a, g2, b):
            shared_logger.error(f"glue_paths(): endpoint parts {a} and {b} differ")
            raise ValueError(
                f"Endpoint part {a} of the first graph and part {b} of the second differ in size "
                "or weights"
            )

    def image(j: int) -> int:
        if j == 0:
            return 0
        if j == k2 - 1:
            return k1 - 1
        return k1 + (k2 - 2 - j)

    parts = list(g1.parts)
    weights = list(g1.weights)
    for j in range(k2 - 2, 0, -1):
        parts.append(g2.parts[j])
        weights.append(g2.weights[j])

    edges: dict[Edge, set[tuple[int, int]]] = {k: set(v) for k, v in g1.edges.items()}
    for (x, y), pairs in g2.edges.items():
        key = normalise_edge(image(x), image(y))
        flipped = key != (image(x), image(y))
        edges.setdefault(key, set()).update((j, i) if flipped else (i, j) for i, j in pairs)

    glued = PartiteGraph(
        cycle(r),
        tuple(parts),
        tuple(weights),
        {k: frozenset(v) for k, v in edges.items() if v},
        f"glue({g1.name or 'P' + str(k1)}, {g2.name or 'P' + str(k2)})",
    )
    require_valid(glued)
    shared_logger.info(f"glue_paths(): glued P{k1} and P{k2} into C{r}")
    return glued
