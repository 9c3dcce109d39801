"""Random transversals and Monte Carlo estimates of transversal properties.

Draws come from counter-based Philox streams keyed by ``(seed, block, part)``, where a block is a
fixed range of sample indices. Any split of the sample range into blocks therefore produces the same
draws, whichever worker computes them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import TYPE_CHECKING, Any

import numpy as np

from hpartite_core import config
from hpartite_core.core.families import contains_member
from hpartite_core.core.partite import (
    Transversal,
    pair_density,
    require_valid,
    transversal_graph,
    transversal_graphs,
)
from hpartite_core.get_version import get_task_logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from hpartite_core.core.families import ForbiddenFamily
    from hpartite_core.core.graphs import Edge
    from hpartite_core.core.partite import PartiteGraph

shared_logger = get_task_logger(__name__)

BLOCK_SIZE = 4096
MIN_SAMPLES = 100


@dataclass(frozen=True)
class SampleReport:
    estimate: float
    half_width: float
    n: int
    seed: int
    hits: int

    @classmethod
    def from_counts(cls, hits: int, n: int, seed: int) -> SampleReport:
        estimate = hits / n
        half_width = 1.96 * math.sqrt(estimate * (1.0 - estimate) / n)
        return cls(estimate, half_width, n, seed, hits)

    def to_dict(self) -> dict[str, Any]:
        return {
            "estimate": self.estimate,
            "half_width": self.half_width,
            "n": self.n,
            "seed": self.seed,
            "hits": self.hits,
        }


def block_generator(seed: int, block: int, part: int) -> np.random.Generator:
    """The stream for one part within one block of sample indices."""
    key = np.random.SeedSequence([seed % 2**64, block, part])
    return np.random.Generator(np.random.Philox(key))


def sample_transversal(g: PartiteGraph, rng: np.random.Generator) -> Transversal:
    """One random transversal: part by part, vertex ``u`` is picked with probability ``w(u)``."""
    require_valid(g)
    choice = []
    for weights in g.weight_arrays:
        cumulative = np.cumsum(weights)
        index = int(np.searchsorted(cumulative, rng.random(), side="right"))
        choice.append(min(index, len(weights) - 1))
    return Transversal(tuple(choice))


def _draw_block(g: PartiteGraph, seed: int, block: int, count: int) -> NDArray[np.int64]:
    out = np.empty((count, g.host.n), dtype=np.int64)
    for x, weights in enumerate(g.weight_arrays):
        u = block_generator(seed, block, x).random(BLOCK_SIZE)[:count]
        picks = np.searchsorted(np.cumsum(weights), u, side="right")
        out[:, x] = np.minimum(picks, len(weights) - 1)
    return out


def sample_choices(g: PartiteGraph, n: int, seed: int, start: int = 0) -> NDArray[np.int64]:
    """Choices for samples ``start .. start+n-1`` as an ``(n, |V(H)|)`` array.

    ``start`` must be a multiple of :data:`BLOCK_SIZE`.
    """
    require_valid(g)
    if start % BLOCK_SIZE:
        raise ValueError(f"Sample ranges start on a block boundary, got start={start}")
    blocks = []
    first = start // BLOCK_SIZE
    remaining = n
    block = first
    while remaining > 0:
        count = min(BLOCK_SIZE, remaining)
        blocks.append(_draw_block(g, seed, block, count))
        remaining -= count
        block += 1
    if not blocks:
        return np.empty((0, g.host.n), dtype=np.int64)
    return np.concatenate(blocks)


def exact_property_probability(
    g: PartiteGraph, f: ForbiddenFamily, cap: int | None = None
) -> float:
    """Probability that a random transversal contains a member of ``f``, by full enumeration."""
    start_time = time.time()
    f.validate_for(g.host)
    terms = [t.weight(g) for t, s in transversal_graphs(g, cap) if contains_member(s, f)]
    probability = min(1.0, max(0.0, math.fsum(terms)))
    shared_logger.info(
        f"exact_property_probability(): {f.describe()} on {g.name or g.host.label()} = "
        f"{probability:.12g} ({time.time() - start_time:.3f} seconds)"
    )
    return probability


def _count_hits(task: tuple[PartiteGraph, ForbiddenFamily, int, int, int]) -> int:
    g, f, seed, start, count = task
    verdicts: dict[tuple[int, ...], bool] = {}
    hits = 0
    for row in sample_choices(g, count, seed, start):
        choice = tuple(int(c) for c in row)
        if choice not in verdicts:
            verdicts[choice] = contains_member(transversal_graph(g, Transversal(choice)), f)
        hits += verdicts[choice]
    return hits


def estimate_property(
    g: PartiteGraph, f: ForbiddenFamily, n: int, seed: int, jobs: int | None = None
) -> SampleReport:
    """Monte Carlo estimate of :func:`exact_property_probability` from ``n`` random transversals."""
    if n < MIN_SAMPLES:
        raise ValueError(f"Monte Carlo estimates need n >= {MIN_SAMPLES}, got {n}")
    require_valid(g)
    f.validate_for(g.host)
    start_time = time.time()
    jobs = config.default_jobs() if jobs is None else max(1, jobs)
    tasks = []
    for start in range(0, n, BLOCK_SIZE * 4):
        tasks.append((g, f, seed, start, min(BLOCK_SIZE * 4, n - start)))
    if jobs <= 1 or len(tasks) <= 1:
        hits = sum(_count_hits(task) for task in tasks)
    else:
        with Pool(processes=min(jobs, len(tasks))) as pool:
            hits = sum(pool.map(_count_hits, tasks))
    report = SampleReport.from_counts(hits, n, seed)
    shared_logger.info(
        f"estimate_property(): {f.describe()} {report.estimate:.6f} +/- {report.half_width:.6f} "
        f"over {n} samples ({time.time() - start_time:.3f} seconds)"
    )
    return report


def edge_marginals(g: PartiteGraph, n: int, seed: int) -> dict[Edge, tuple[float, float]]:
    """Per host edge: how often the two chosen vertices were joined, next to the exact ``α``."""
    choices = sample_choices(g, n, seed)
    out: dict[Edge, tuple[float, float]] = {}
    for x, y in g.host.edges:
        joined = g.biadjacency(x, y)[choices[:, x], choices[:, y]]
        out[(x, y)] = (float(joined.mean()) if n else 0.0, pair_density(g, x, y))
    return out
