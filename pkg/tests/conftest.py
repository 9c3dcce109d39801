from __future__ import annotations

import json
from typing import TYPE_CHECKING

import numpy as np
import pytest

from hpartite_core.constructions import Leila, MissingEdge, Parity, TwoColour
from hpartite_core.core import HostGraph, PartiteGraph
from hpartite_core.core.io import partite_to_json

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def parity5() -> PartiteGraph:
    return Parity(5).build()


@pytest.fixture
def two_colour4() -> PartiteGraph:
    return TwoColour(4).build()


@pytest.fixture
def leila4() -> PartiteGraph:
    return Leila(4).build()


@pytest.fixture
def missing_edge4() -> PartiteGraph:
    return MissingEdge(4).build()


@pytest.fixture
def graph_file(tmp_path: Path) -> Callable[[PartiteGraph, str], Path]:
    """Write a graph as JSON under ``tmp_path`` and return the path."""

    def write(g: PartiteGraph, name: str = "graph.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(partite_to_json(g)), encoding="utf-8")
        return path

    return write


def random_partite(
    rng: np.random.Generator, host: HostGraph, max_size: int = 3, edge_p: float = 0.5
) -> PartiteGraph:
    """Random valid graph on ``host`` with Dirichlet weights and independent edges."""
    sizes = [int(rng.integers(1, max_size + 1)) for _ in range(host.n)]
    weights = [rng.dirichlet(np.ones(s)) for s in sizes]
    weights = [tuple(float(v) for v in w / w.sum()) for w in weights]
    matrices = {
        (x, y): (rng.random((sizes[x], sizes[y])) < edge_p).astype(float) for x, y in host.edges
    }
    return PartiteGraph.from_matrices(host, weights, matrices)


def random_small_graph_edges(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
