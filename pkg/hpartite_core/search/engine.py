"""Pattern search for the largest density a family-free H-partite graph can reach.

Exhaustive mode walks every edge-maximal family-free pattern with all parts at their caps. Smaller
parts are covered by cloning a vertex, and adding an edge never lowers a pair density, so nothing
better hides among the patterns that are skipped. Stochastic mode grows random maximal patterns and
improves them by removing and re-adding edges.
"""

from __future__ import annotations

import enum
import hashlib
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import TYPE_CHECKING, Any

import numpy as np

from hpartite_core import config
from hpartite_core.core.certify import check_family_free
from hpartite_core.core.errors import SearchInfeasibleError
from hpartite_core.core.families import ForbiddenFamily
from hpartite_core.core.io import host_from_json, partite_to_json
from hpartite_core.core.partite import density_profile
from hpartite_core.get_version import get_task_logger
from hpartite_core.search.optimize import OptimizerSettings, WeightOptimizer
from hpartite_core.search.patterns import (
    CombinatorialPattern,
    PatternState,
    caps_from_degrees,
    canonical_key,
    clone_to_sizes,
    compatible_automorphisms,
    pattern_family_free,
    pattern_from_key,
    raw_pattern_bits,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from hpartite_core.core.certify import Certificate
    from hpartite_core.core.graphs import HostGraph
    from hpartite_core.core.partite import PartiteGraph

shared_logger = get_task_logger(__name__)

CERTIFIED_STATUS = "certified lower bound on pi_H(F); upper-bound status heuristic"

# patterns whose gradient phase ends this far below the leader are not polished
SCREEN_MARGIN = 0.01

QUICK_SETTINGS = OptimizerSettings(
    starts=8, steps_per_beta=20, polished_starts=1, polish_rounds=10, refine_rounds=0
)

Weights = tuple[tuple[float, ...], ...]


class SearchMode(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class SearchProblem:
    """What to search.

    ``budget`` bounds the raw pattern space ``2**bits`` in exhaustive mode and is the number of
    hill-climbing moves per restart in stochastic mode.
    """

    host: HostGraph
    family: ForbiddenFamily
    caps: tuple[int, ...] | None = None
    mode: SearchMode = SearchMode.EXHAUSTIVE
    restarts: int = 32
    budget: int | None = None
    seed: int = 0
    jobs: int | None = None
    dedupe: bool = True
    include_constructions: bool = True
    settings: OptimizerSettings = field(default_factory=OptimizerSettings)

    def resolved_caps(self) -> tuple[int, ...]:
        return caps_from_degrees(self.host) if self.caps is None else tuple(self.caps)

    def check(self) -> tuple[int, ...]:
        caps = self.resolved_caps()
        if len(caps) != self.host.n:
            raise ValueError(f"Expected {self.host.n} caps, got {len(caps)}")
        if min(caps, default=1) < 1:
            raise ValueError(f"Caps must be at least 1, got {caps}")
        self.family.validate_for(self.host)
        degree_caps = caps_from_degrees(self.host)
        above = [x for x in range(self.host.n) if caps[x] > degree_caps[x]]
        if above:
            shared_logger.warning(
                f"SearchProblem.check(): caps exceed host degree at {above}; "
                f"the degree bound on extremal part sizes no longer matches the caps used"
            )
        return caps


@dataclass(frozen=True)
class SearchResult:
    best_density: float
    best_pattern: CombinatorialPattern
    best_weights: Weights
    certificate: Certificate
    patterns_examined: int
    patterns_family_free: int
    mode: SearchMode = SearchMode.EXHAUSTIVE
    seed: int = 0
    status: str = CERTIFIED_STATUS

    def graph(self, name: str = "") -> PartiteGraph:
        """The weighted graph the result describes."""
        return self.best_pattern.to_graph(self.best_weights, name=name)

    def to_dict(self) -> dict[str, Any]:
        g = self.graph()
        return {
            "mode": self.mode.value,
            "seed": self.seed,
            "status": self.status,
            "best_density": self.best_density,
            "host": self.best_pattern.host.to_dict(),
            "family": self.certificate.family.to_dict(),
            "pattern": self.best_pattern.to_dict(),
            "weights": [list(w) for w in self.best_weights],
            "graph": partite_to_json(g),
            "certificate": self.certificate.to_dict(g),
            "patterns_examined": self.patterns_examined,
            "patterns_family_free": self.patterns_family_free,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SearchResult:
        """Rebuild a result; the certificate is recomputed rather than trusted."""
        host = host_from_json(data["host"])
        family = ForbiddenFamily.from_dict(data["family"])
        pattern = CombinatorialPattern.from_dict(host, data["pattern"])
        weights = tuple(tuple(float(v) for v in w) for w in data["weights"])
        certificate = check_family_free(pattern.to_graph(weights), family)
        return cls(
            best_density=certificate.density.minimum,
            best_pattern=pattern,
            best_weights=weights,
            certificate=certificate,
            patterns_examined=int(data.get("patterns_examined", 0)),
            patterns_family_free=int(data.get("patterns_family_free", 0)),
            mode=SearchMode(data.get("mode", "exhaustive")),
            seed=int(data.get("seed", 0)),
            status=str(data.get("status", CERTIFIED_STATUS)),
        )


@dataclass(frozen=True)
class _Candidate:
    density: float
    key: bytes
    pattern: CombinatorialPattern
    weights: Weights


def pattern_seed(seed: int, key: bytes) -> int:
    """Optimizer seed for one pattern class, independent of where it was found."""
    digest = hashlib.sha256(str(seed).encode() + b":" + key).digest()
    return int.from_bytes(digest[:8], "little")


def _map(func: Callable[[Any], Any], tasks: Sequence[Any], jobs: int) -> list[Any]:
    if jobs <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with Pool(processes=min(jobs, len(tasks))) as pool:
        return pool.map(func, tasks)


# exhaustive mode


def _maximal_patterns(
    state: PatternState, depth: int, stop: int, counter: list[int]
) -> Iterator[CombinatorialPattern | tuple[int, ...]]:
    """Depth-first over the bits ``layout[depth:stop]``, trying each bit set before unset.

    With ``stop`` short of the layout the set-bit prefixes are yielded instead of patterns.
    """
    layout = state.layout
    if depth == stop:
        if stop < len(layout):
            yield tuple(k for k in range(stop) if state.is_set(layout[k]))
        elif state.is_maximal():
            yield state.freeze()
        return
    bit = layout[depth]
    counter[0] += 1
    if state.can_add(bit):
        state.set(bit)
        yield from _maximal_patterns(state, depth + 1, stop, counter)
        state.clear(bit)
    yield from _maximal_patterns(state, depth + 1, stop, counter)


def _explore_prefix(
    task: tuple[HostGraph, tuple[int, ...], ForbiddenFamily, int, tuple[int, ...], bool],
) -> tuple[list[tuple[bytes, CombinatorialPattern]], int]:
    host, sizes, family, depth, prefix, dedupe = task
    state = PatternState(host, sizes, family)
    for k in prefix:
        state.set(state.layout[k])
    automorphisms = compatible_automorphisms(state.freeze())
    counter = [0]
    found: list[tuple[bytes, CombinatorialPattern]] = []
    seen: set[bytes] = set()
    for p in _maximal_patterns(state, depth, len(state.layout), counter):
        assert isinstance(p, CombinatorialPattern)
        key = canonical_key(p, automorphisms)
        if dedupe and key in seen:
            continue
        seen.add(key)
        found.append((key, p))
    return found, counter[0]


def _prefix_depth(bits: int, jobs: int) -> int:
    if jobs <= 1:
        return 0
    return min(bits, max(1, (8 * jobs - 1).bit_length()))


def _exhaustive_patterns(
    problem: SearchProblem, caps: tuple[int, ...], jobs: int
) -> tuple[list[tuple[bytes, CombinatorialPattern]], int]:
    bits = raw_pattern_bits(problem.host, caps)
    budget = config.search_budget() if problem.budget is None else problem.budget
    if bits >= 63 or 2**bits > budget:
        shared_logger.error(
            f"search(): pattern space 2**{bits} exceeds the exhaustive budget {budget}"
        )
        raise SearchInfeasibleError(
            f"Exhaustive search over 2**{bits} patterns exceeds the budget {budget}; "
            f"use stochastic mode or smaller caps"
        )
    depth = _prefix_depth(bits, jobs)
    state = PatternState(problem.host, caps, problem.family)
    counter = [0]
    prefixes = [()] if depth == 0 else [
        prefix
        for prefix in _maximal_patterns(state, 0, depth, counter)
        if isinstance(prefix, tuple)
    ]
    tasks = [
        (problem.host, caps, problem.family, depth, prefix, problem.dedupe) for prefix in prefixes
    ]
    shared_logger.info(f"search(): {2**bits} raw patterns, {len(tasks)} prefix task(s)")
    found: list[tuple[bytes, CombinatorialPattern]] = []
    examined = counter[0]
    seen: set[bytes] = set()
    for patterns, count in _map(_explore_prefix, tasks, jobs):
        examined += count
        for key, p in patterns:
            if problem.dedupe and key in seen:
                continue
            seen.add(key)
            found.append((key, p))
    return found, examined


# stochastic mode


def _greedy_fill(state: PatternState, rng: np.random.Generator) -> int:
    tried = 0
    for index in rng.permutation(len(state.layout)):
        bit = state.layout[int(index)]
        if not state.is_set(bit):
            tried += 1
            if state.can_add(bit):
                state.set(bit)
    return tried


def _quick_density(p: CombinatorialPattern, key: bytes, seed: int) -> float:
    optimizer = WeightOptimizer(pattern_from_key(p.host, key), QUICK_SETTINGS)
    return optimizer.run(pattern_seed(seed, key))[1]


def _stochastic_restart(
    task: tuple[
        HostGraph, tuple[int, ...], ForbiddenFamily, int, int, int, CombinatorialPattern | None
    ],
) -> tuple[dict[bytes, float], int]:
    host, sizes, family, seed, restart, moves, warm = task
    rng = np.random.default_rng([seed % 2**64, restart])
    state = (
        PatternState(host, sizes, family)
        if warm is None
        else PatternState.from_pattern(warm, family)
    )
    examined = _greedy_fill(state, rng)
    automorphisms = compatible_automorphisms(state.freeze())
    current = state.freeze()
    key = canonical_key(current, automorphisms)
    seen = {key: _quick_density(current, key, seed)}
    value = seen[key]
    for _ in range(moves):
        on = [bit for bit in state.layout if state.is_set(bit)]
        if not on:
            break
        saved = [row.copy() for row in state.rows]
        for index in rng.choice(len(on), size=min(len(on), int(rng.integers(1, 3))), replace=False):
            state.clear(on[int(index)])
        examined += _greedy_fill(state, rng)
        proposal = state.freeze()
        key = canonical_key(proposal, automorphisms)
        if key not in seen:
            seen[key] = _quick_density(proposal, key, seed)
        if seen[key] >= value - 1e-12:
            value = seen[key]
        else:
            state.rows = saved
    return seen, examined


def _warm_starts(problem: SearchProblem, caps: tuple[int, ...]) -> list[CombinatorialPattern]:
    """Skeletons of known constructions on the same host that fit the caps and avoid the family."""
    from hpartite_core.constructions import suite

    warm = []
    for construction in suite():
        if construction.params.get("r", problem.host.n) != problem.host.n:
            continue
        try:
            g = construction.build()
        except ValueError:
            continue
        if g.host.edge_set != problem.host.edge_set or g.host.n != problem.host.n:
            continue
        if any(s > c for s, c in zip(g.sizes, caps, strict=True)):
            continue
        p = clone_to_sizes(CombinatorialPattern.from_graph(g), caps)
        if pattern_family_free(p, problem.family):
            shared_logger.info(f"search(): warm start from {construction.construction_id}")
            warm.append(p)
    return warm


def _stochastic_patterns(
    problem: SearchProblem, caps: tuple[int, ...], jobs: int
) -> tuple[list[tuple[bytes, CombinatorialPattern]], int]:
    moves = 16 if problem.budget is None else problem.budget
    warm: list[CombinatorialPattern | None] = [None] * max(1, problem.restarts)
    if problem.include_constructions:
        warm += _warm_starts(problem, caps)
    tasks = [
        (problem.host, caps, problem.family, problem.seed, restart, moves, start)
        for restart, start in enumerate(warm)
    ]
    merged: dict[bytes, float] = {}
    examined = 0
    for seen, count in _map(_stochastic_restart, tasks, jobs):
        examined += count
        merged.update(seen)
    leader = max(merged.values())
    shortlist = sorted(key for key, value in merged.items() if value >= leader - SCREEN_MARGIN)
    shared_logger.info(
        f"search(): {len(merged)} distinct patterns proposed, {len(shortlist)} shortlisted"
    )
    return [(key, pattern_from_key(problem.host, key)) for key in shortlist], examined


# optimisation and selection


def _ascent_value(task: tuple[CombinatorialPattern, bytes, int, OptimizerSettings]) -> float:
    p, key, seed, settings = task
    optimizer = WeightOptimizer(p, settings)
    _, values = optimizer.ascend(np.random.default_rng(pattern_seed(seed, key)))
    return float(values.max())


def _optimise(task: tuple[CombinatorialPattern, bytes, int, OptimizerSettings]) -> _Candidate:
    p, key, seed, settings = task
    weights, density = WeightOptimizer(p, settings).run(pattern_seed(seed, key))
    return _Candidate(density, key, p, weights)


def _select(candidates: list[_Candidate]) -> _Candidate:
    """Highest density; near-ties go to the smallest canonical key."""
    top = max(c.density for c in candidates)
    tied = [c for c in candidates if c.density >= top - config.tolerance()]
    return min(tied, key=lambda c: c.key)


def search(problem: SearchProblem) -> SearchResult:
    """Best density over family-free patterns within the caps, with a re-verified certificate."""
    start_time = time.time()
    caps = problem.check()
    jobs = config.default_jobs() if problem.jobs is None else max(1, problem.jobs)
    shared_logger.info(
        f"search(): {problem.mode.value} on {problem.host.label()} avoiding "
        f"{problem.family.describe()} with caps {caps}"
    )
    if problem.mode is SearchMode.EXHAUSTIVE:
        found, examined = _exhaustive_patterns(problem, caps, jobs)
    else:
        found, examined = _stochastic_patterns(problem, caps, jobs)
    if not found:
        shared_logger.error("search(): no family-free pattern within the caps")
        raise SearchInfeasibleError(
            f"No pattern within caps {caps} avoids {problem.family.describe()}"
        )
    distinct = len({key for key, _ in found})
    shared_logger.info(f"search(): {len(found)} maximal family-free patterns, {distinct} distinct")

    # optimise on canonical representatives so duplicates land on identical numbers
    tasks = [
        (pattern_from_key(problem.host, key), key, problem.seed, problem.settings)
        for key, _ in found
    ]
    values = _map(_ascent_value, tasks, jobs)
    leader = max(values)
    survivors = [
        task for task, value in zip(tasks, values, strict=True) if value >= leader - SCREEN_MARGIN
    ]
    candidates: list[_Candidate] = _map(_optimise, survivors, jobs)
    best = _select(candidates)

    g = best.pattern.to_graph(best.weights)
    certificate = check_family_free(g, problem.family)
    if not certificate.family_free:
        shared_logger.error(f"search(): best pattern violates {problem.family.describe()}")
        raise RuntimeError("search(): re-verification found a violating transversal")
    density = density_profile(g).minimum
    if abs(density - best.density) > config.tolerance():
        shared_logger.warning(
            f"search(): recomputed density {density!r} differs from optimizer value "
            f"{best.density!r}"
        )
    shared_logger.info(
        f"search(): best density {density:.12g} from {len(survivors)} polished pattern(s) "
        f"({time.time() - start_time:.3f} seconds)"
    )
    return SearchResult(
        best_density=density,
        best_pattern=best.pattern,
        best_weights=best.weights,
        certificate=certificate,
        patterns_examined=examined,
        patterns_family_free=distinct,
        mode=problem.mode,
        seed=problem.seed,
    )
