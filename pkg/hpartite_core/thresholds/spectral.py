from __future__ import annotations

import numpy as np

from hpartite_core.core.errors import DomainError
from hpartite_core.core.graphs import SmallGraph
from hpartite_core.get_version import get_task_logger

shared_logger = get_task_logger(__name__)


def spectral_radius_squared(
    s: SmallGraph, tol: float = 1e-12, max_iterations: int = 1_000_000
) -> float:
    """Largest eigenvalue of A^2 by power iteration with a Rayleigh quotient stopping test.

    Bipartite adjacency matrices have a symmetric spectrum, so iterating on A itself oscillates
    between the +λ and -λ eigenvectors; A^2 has λ^2 as a simple dominant value on each side.
    """
    adjacency = np.zeros((s.n, s.n))
    for u, v in s.edges():
        adjacency[u, v] = adjacency[v, u] = 1.0
    square = adjacency @ adjacency
    x = np.full(s.n, 1.0 / np.sqrt(s.n))
    previous = 0.0
    for iteration in range(max_iterations):
        y = square @ x
        rayleigh = float(x @ y)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        x = y / norm
        if abs(rayleigh - previous) <= tol * max(1.0, rayleigh):
            shared_logger.debug(
                f"spectral_radius_squared(): converged after {iteration + 1} iterations"
            )
            return rayleigh
        previous = rayleigh
    shared_logger.warning(f"spectral_radius_squared(): no convergence in {max_iterations} steps")
    return previous


def tree_threshold(t: SmallGraph) -> float:
    """1 - 1/λ^2 where λ is the spectral radius of the tree's adjacency matrix."""
    if t.n < 2 or t.edge_count != t.n - 1 or not t.is_connected():
        raise DomainError(
            f"tree_threshold needs a tree on at least 2 vertices, got {t.n} vertices "
            f"and {t.edge_count} edges"
        )
    return 1.0 - 1.0 / spectral_radius_squared(t)
