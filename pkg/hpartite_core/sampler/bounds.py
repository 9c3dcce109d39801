"""Witnesses and probability bounds that follow from the independence of disjoint parts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import networkx as nx

from hpartite_core import config
from hpartite_core.core.errors import DomainError
from hpartite_core.core.families import ForbiddenFamily
from hpartite_core.core.partite import density_profile, pair_density, require_valid
from hpartite_core.get_version import get_task_logger
from hpartite_core.sampler.sampling import exact_property_probability

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from hpartite_core.core.graphs import Edge, HostGraph
    from hpartite_core.core.partite import PartiteGraph

shared_logger = get_task_logger(__name__)


@dataclass(frozen=True)
class AbsorptionWitness:
    vertex: int
    label: str
    missed: tuple[int, ...]
    bound: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertex": self.vertex,
            "label": self.label,
            "missed": list(self.missed),
            "bound": self.bound,
        }


def star_center(host: HostGraph) -> int:
    """Centre of a star host ``K_{1,N}``; raises for any other host."""
    n = host.n
    if n >= 2 and len(host.edges) == n - 1:
        for x in range(n):
            if host.degree(x) == n - 1:
                return x
    raise DomainError(f"{host.label()} is not a star K_1,N")


def star_absorption_witness(g: PartiteGraph, a: Iterable[int], p: float) -> AbsorptionWitness:
    """A vertex of ``a`` (indices into the centre part) with a neighbour in all but at most
    ``floor((1-p)/w(a) * N)`` leaf parts.

    Requires ``p > 1/2``, density at least ``p`` and ``w(a) > 1-p``. Centre vertices are tried by
    decreasing weight and the first that qualifies is returned.
    """
    require_valid(g)
    tol = config.tolerance()
    center = star_center(g.host)
    chosen = sorted(set(a))
    if not chosen or not all(0 <= i < len(g.parts[center]) for i in chosen):
        raise DomainError(f"A must be a non-empty set of centre part indices, got {chosen}")
    if not p > 0.5:
        raise DomainError(f"Star absorption needs p > 1/2, got p={p}")
    minimum = density_profile(g).minimum
    if minimum < p - tol:
        raise DomainError(f"Graph density {minimum} is below p={p}")
    alpha = math.fsum(g.weights[center][i] for i in chosen)
    if alpha <= 1.0 - p:
        raise DomainError(f"w(A)={alpha} must exceed 1-p={1.0 - p}")
    leaves = [y for y in range(g.host.n) if y != center]
    bound = math.floor((1.0 - p) / alpha * len(leaves) + tol)
    for i in sorted(chosen, key=lambda i: (-g.weights[center][i], i)):
        missed = tuple(
            y for y in leaves if not g.biadjacency(center, y)[i].any()
        )
        if len(missed) <= bound:
            shared_logger.debug(
                f"star_absorption_witness(): vertex {g.parts[center][i]} misses {len(missed)} "
                f"of {len(leaves)} leaf parts (bound {bound})"
            )
            return AbsorptionWitness(i, g.parts[center][i], missed, bound)
    shared_logger.error(f"star_absorption_witness(): no vertex of A meets the bound {bound}")
    raise RuntimeError("star_absorption_witness(): no witness although the preconditions hold")


@dataclass(frozen=True)
class TreeBound:
    tree: tuple[Edge, ...]
    expected_edges: float
    threshold: int

    @property
    def forces_connected(self) -> bool:
        """More than ``r-2`` tree edges expected means some transversal keeps all of them."""
        return self.expected_edges > self.threshold + config.tolerance()

    def to_dict(self) -> dict[str, Any]:
        return {
            "tree": [list(e) for e in self.tree],
            "expected_edges": self.expected_edges,
            "threshold": self.threshold,
            "forces_connected": self.forces_connected,
        }


def spanning_tree_bound(g: PartiteGraph, tree_edges: Sequence[Edge] | None = None) -> TreeBound:
    """Expected number of edges of a spanning tree ``T`` of the host present in a random transversal.

    Without ``tree_edges`` the tree maximising the sum of pair densities is used.
    """
    require_valid(g)
    host = g.host.to_networkx()
    for x, y in g.host.edges:
        host.edges[x, y]["alpha"] = pair_density(g, x, y)
    if tree_edges is None:
        if not g.host.is_connected:
            raise DomainError(f"{g.host.label()} has no spanning tree")
        tree = nx.maximum_spanning_tree(host, weight="alpha")
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in tree.edges))
    else:
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in tree_edges))
        candidate = nx.Graph(edges)
        candidate.add_nodes_from(range(g.host.n))
        if not all(g.host.has_edge(u, v) for u, v in edges) or not nx.is_tree(candidate):
            raise DomainError(f"{list(edges)} is not a spanning tree of {g.host.label()}")
    expected = math.fsum(host.edges[u, v]["alpha"] for u, v in edges)
    return TreeBound(edges, expected, g.host.n - 2)


@dataclass(frozen=True)
class MatchingBound:
    density: float
    lower: float
    exact: float

    @property
    def holds(self) -> bool:
        return self.exact >= self.lower - config.tolerance()

    def to_dict(self) -> dict[str, Any]:
        return {"density": self.density, "lower": self.lower, "exact": self.exact, "holds": self.holds}


def matching_pair_bound(g: PartiteGraph) -> MatchingBound:
    """For a K4-partite graph of density ``p``: a Hamiltonian transversal appears with probability at
    least ``(3p^2-1)/2``.

    The three perfect matchings of K4 each survive with probability at least ``p^2`` and any two
    of them form a 4-cycle, so Markov's inequality gives the bound. It is compared with the exact
    probability.
    """
    if g.host.n != 4 or len(g.host.edges) != 6:
        raise DomainError(f"matching_pair_bound needs host K4, got {g.host.label()}")
    p = density_profile(g).minimum
    lower = (3.0 * p * p - 1.0) / 2.0
    exact = exact_property_probability(g, ForbiddenFamily.hamilton_cycle())
    bound = MatchingBound(p, lower, exact)
    if not bound.holds:
        shared_logger.error(f"matching_pair_bound(): exact {exact} below the bound {lower}")
    return bound
