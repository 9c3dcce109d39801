from __future__ import annotations

import json
import math

import numpy as np
import pytest

from hpartite_core.constructions import Leila, PendantTriangle
from hpartite_core.core import (
    ForbiddenFamily,
    SearchInfeasibleError,
    builtin_host,
    check_family_free,
    density_profile,
)
from hpartite_core.core.graphs import complete
from hpartite_core.search import (
    CERTIFIED_STATUS,
    CombinatorialPattern,
    OptimizerSettings,
    PatternState,
    SearchMode,
    SearchProblem,
    SearchResult,
    canonical_key,
    clone_to_sizes,
    optimize_weights,
    pattern_family_free,
    pattern_from_key,
    project_simplex,
    search,
)
from hpartite_core.search.optimize import WEIGHT_FLOOR, WeightOptimizer, _renormalise


def random_pattern(rng: np.random.Generator, host, sizes, p: float = 0.5) -> CombinatorialPattern:
    blocks = []
    for x, y in host.edges:
        blocks.append(
            tuple(
                sum(1 << j for j in range(sizes[y]) if rng.random() < p) for _ in range(sizes[x])
            )
        )
    return CombinatorialPattern(host, tuple(sizes), tuple(blocks))


def relabel(p: CombinatorialPattern, sigma, perms) -> CombinatorialPattern:
    """Move part ``x`` to ``sigma[x]`` and vertex ``i`` of it to ``perms[x][i]``."""
    host = p.host
    sizes = [0] * host.n
    for x in range(host.n):
        sizes[sigma[x]] = p.part_sizes[x]
    pairs: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for (x, y), rows in zip(host.edges, p.biadjacency):
        for i, row in enumerate(rows):
            for j in range(p.part_sizes[y]):
                if row >> j & 1:
                    a, ia, b, jb = sigma[x], perms[x][i], sigma[y], perms[y][j]
                    if a > b:
                        a, ia, b, jb = b, jb, a, ia
                    pairs.setdefault((a, b), set()).add((ia, jb))
    blocks = []
    for a, b in host.edges:
        rows = [0] * sizes[a]
        for ia, jb in pairs.get((a, b), ()):
            rows[ia] |= 1 << jb
        blocks.append(tuple(rows))
    return CombinatorialPattern(host, tuple(sizes), tuple(blocks))


def test_project_simplex() -> None:
    v = np.array([[0.2, 0.3, 0.5], [2.0, 0.0, 0.0], [-1.0, 0.5, 0.7]])
    projected = project_simplex(v)
    assert projected.sum(axis=1) == pytest.approx([1.0, 1.0, 1.0])
    assert (projected >= 0).all()
    assert projected[0] == pytest.approx([0.2, 0.3, 0.5])
    assert projected[1] == pytest.approx([1.0, 0.0, 0.0])
    assert projected[2] == pytest.approx([0.0, 0.4, 0.6])


def test_pattern_dict_round_trip() -> None:
    p = CombinatorialPattern.from_graph(Leila(4).build())
    assert p.part_sizes == (2, 2, 2, 3)
    assert CombinatorialPattern.from_dict(p.host, json.loads(json.dumps(p.to_dict()))) == p
    assert p.edge_count == Leila(4).build().edge_count()


def test_pattern_rejects_bad_shapes() -> None:
    host = builtin_host("K2")
    with pytest.raises(ValueError, match="positive size"):
        CombinatorialPattern(host, (0, 1), ((),))
    with pytest.raises(ValueError, match="does not match"):
        CombinatorialPattern(host, (1, 1), ((0b10,),))


def test_pattern_family_free_examples() -> None:
    leila = CombinatorialPattern.from_graph(Leila(4).build())
    assert pattern_family_free(leila, ForbiddenFamily.all_trees(4))
    host = builtin_host("C5")
    full = CombinatorialPattern(host, (1,) * 5, ((1,),) * 5)
    assert not pattern_family_free(full, ForbiddenFamily.all_trees(5))
    empty = CombinatorialPattern.empty(complete(4), (2, 2, 2, 2))
    assert pattern_family_free(empty, ForbiddenFamily.all_trees(2))


def test_freeness_does_not_depend_on_weights() -> None:
    rng = np.random.default_rng(3)
    host = builtin_host("K4-P3")
    family = ForbiddenFamily.all_trees(4)
    for _ in range(200):
        p = random_pattern(rng, host, (2, 2, 2, 2), 0.4)
        expected = pattern_family_free(p, family)
        for _ in range(10):
            weights = [rng.dirichlet(np.ones(s)) for s in p.part_sizes]
            weights = [w / w.sum() for w in weights]
            assert check_family_free(p.to_graph(weights), family).family_free == expected


def test_canonical_key_under_host_automorphism() -> None:
    rng = np.random.default_rng(5)
    for name in ("K4-P3", "C5", "K4"):
        host = builtin_host(name)
        for _ in range(10):
            p = random_pattern(rng, host, (2,) * host.n)
            for sigma in host.automorphisms:
                q = relabel(p, sigma, [(0, 1)] * host.n)
                assert canonical_key(q) == canonical_key(p)


def test_canonical_key_moves_parts_of_different_sizes() -> None:
    rng = np.random.default_rng(23)
    host = builtin_host("K3")
    caps = (2, 2, 2)
    for _ in range(20):
        p = random_pattern(rng, host, (1, 2, 2))
        q = relabel(p, (1, 0, 2), [(0, 1)] * host.n)
        assert q.part_sizes == (2, 1, 2)
        key = canonical_key(p, caps=caps)
        assert canonical_key(q, caps=caps) == key
        representative = pattern_from_key(host, key)
        assert sorted(representative.part_sizes) == [1, 2, 2]
        assert representative.edge_count == p.edge_count
        assert canonical_key(representative, caps=caps) == key


def test_canonical_key_under_part_permutation() -> None:
    rng = np.random.default_rng(9)
    host = builtin_host("K3")
    identity = tuple(range(host.n))
    for _ in range(20):
        p = random_pattern(rng, host, (2, 3, 2))
        q = relabel(p, identity, [(1, 0), (2, 0, 1), (0, 1)])
        assert canonical_key(q) == canonical_key(p)


def test_canonical_key_separates_edge_counts() -> None:
    host = builtin_host("K3")
    p = CombinatorialPattern(host, (2, 2, 2), ((1, 0), (0, 0), (0, 0)))
    q = CombinatorialPattern(host, (2, 2, 2), ((1, 0), (2, 0), (0, 0)))
    assert canonical_key(p) != canonical_key(q)


def test_key_round_trip() -> None:
    rng = np.random.default_rng(17)
    host = builtin_host("K4-P3")
    for _ in range(20):
        p = random_pattern(rng, host, (1, 3, 2, 2))
        key = canonical_key(p)
        representative = pattern_from_key(host, key)
        assert canonical_key(representative) == key
        assert representative.edge_count == p.edge_count


def test_clone_to_sizes_keeps_freeness() -> None:
    p = CombinatorialPattern.from_graph(Leila(4).build())
    grown = clone_to_sizes(p, (3, 3, 3, 3))
    assert grown.part_sizes == (3, 3, 3, 3)
    assert pattern_family_free(grown, ForbiddenFamily.all_trees(4))
    with pytest.raises(ValueError, match="Cannot shrink"):
        clone_to_sizes(p, (1, 2, 2, 3))


def test_pattern_state_growth_stays_free() -> None:
    rng = np.random.default_rng(21)
    family = ForbiddenFamily.clique(3)
    for _ in range(10):
        state = PatternState(complete(3), (2, 2, 2), family)
        for index in rng.permutation(len(state.layout)):
            bit = state.layout[int(index)]
            if state.can_add(bit):
                state.set(bit)
        assert state.is_maximal()
        assert pattern_family_free(state.freeze(), family)


def test_optimizer_recovers_leila() -> None:
    p = CombinatorialPattern.from_graph(Leila(4).build())
    _, density = optimize_weights(p, seed=1)
    assert density == pytest.approx((8 - 2 * math.sqrt(7)) / 9, abs=1e-7)


def test_optimizer_on_complete_pattern() -> None:
    host = complete(3)
    p = CombinatorialPattern(host, (2, 2, 2), ((0b11, 0b11),) * 3)
    _, density = optimize_weights(p)
    assert density == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(8))
def test_optimizer_recovers_pendant_triangle(seed: int) -> None:
    p = CombinatorialPattern.from_graph(PendantTriangle().build())
    weights, density = optimize_weights(p, seed=seed)
    assert density == pytest.approx(4 - 2 * math.sqrt(3), abs=1e-7)
    assert density_profile(p.to_graph(weights)).minimum == pytest.approx(density, abs=1e-12)


def test_joint_refinement_never_loses_ground() -> None:
    rng = np.random.default_rng(31)
    host = builtin_host("K4-P3")
    for _ in range(10):
        p = random_pattern(rng, host, (2, 2, 2, 2), 0.7)
        optimizer = WeightOptimizer(p)
        start = [rng.dirichlet(np.ones(s)) for s in p.part_sizes]
        refined = optimizer.refine(start)
        assert optimizer.minimum(refined) >= optimizer.minimum(start) - 1e-15
        for w in refined:
            assert w.sum() == pytest.approx(1.0, abs=1e-12)
            assert (w >= 0).all()


def test_renormalise_floors_a_vanished_part() -> None:
    w = _renormalise(np.array([-0.2, -0.1, -0.5]))
    assert w.tolist() == [0.0, 1.0, 0.0]
    assert _renormalise(np.zeros(3)).tolist() == [1.0, 0.0, 0.0]
    assert WEIGHT_FLOOR == 1e-12
    assert _renormalise(np.array([0.5, -0.1, 1.5])).tolist() == [0.25, 0.0, 0.75]


def test_optimizer_is_sound() -> None:
    rng = np.random.default_rng(23)
    host = builtin_host("C5")
    settings = OptimizerSettings(starts=8, steps_per_beta=20)
    for seed in range(10):
        p = random_pattern(rng, host, (2, 2, 2, 2, 2), 0.6)
        weights, density = optimize_weights(p, seed=seed, settings=settings)
        for w in weights:
            assert math.fsum(w) == pytest.approx(1.0, abs=1e-9)
            assert min(w) >= 0.0
        assert density_profile(p.to_graph(weights)).minimum >= density - 1e-9


def triangle_problem(**kwargs) -> SearchProblem:
    return SearchProblem(complete(3), ForbiddenFamily.clique(3), caps=(2, 2, 2), jobs=1, **kwargs)


def test_search_triangle_free_golden_ratio() -> None:
    result = search(triangle_problem())
    assert 0.617 <= result.best_density <= 0.619
    assert result.certificate.family_free
    assert result.status == CERTIFIED_STATUS
    assert result.patterns_examined >= result.patterns_family_free > 0
    assert density_profile(result.graph()).minimum == pytest.approx(result.best_density)


def test_search_without_dedupe_agrees() -> None:
    deduped = search(triangle_problem())
    plain = search(triangle_problem(dedupe=False))
    assert plain.best_density == pytest.approx(deduped.best_density, abs=1e-9)
    assert plain.best_pattern == deduped.best_pattern


def test_search_is_independent_of_jobs() -> None:
    serial = search(triangle_problem())
    parallel = search(SearchProblem(complete(3), ForbiddenFamily.clique(3), caps=(2, 2, 2), jobs=2))
    assert parallel.best_density == serial.best_density
    assert parallel.best_pattern == serial.best_pattern
    assert parallel.best_weights == serial.best_weights


def test_search_path_host() -> None:
    problem = SearchProblem(builtin_host("P3"), ForbiddenFamily.all_trees(3), caps=(2, 2, 2), jobs=1)
    result = search(problem)
    assert result.best_density == pytest.approx(0.5, abs=1e-3)


def test_search_budget_refusal() -> None:
    problem = SearchProblem(complete(4), ForbiddenFamily.all_trees(4), caps=(3, 3, 3, 3), budget=1000)
    with pytest.raises(SearchInfeasibleError, match="stochastic"):
        search(problem)


def test_search_rejects_wrong_caps() -> None:
    with pytest.raises(ValueError, match="Expected 3 caps"):
        search(SearchProblem(complete(3), ForbiddenFamily.clique(3), caps=(2, 2)))


def test_search_result_round_trip() -> None:
    problem = SearchProblem(builtin_host("P3"), ForbiddenFamily.all_trees(3), caps=(2, 2, 2), jobs=1)
    result = search(problem)
    data = json.loads(json.dumps(result.to_dict()))
    assert data["certificate"]["verdict"] == "family-free"
    restored = SearchResult.from_dict(data)
    assert restored.best_density == pytest.approx(result.best_density)
    assert restored.best_pattern == result.best_pattern
    assert restored.certificate.family_free
    assert restored.mode is SearchMode.EXHAUSTIVE


@pytest.mark.slow
def test_search_five_cycle() -> None:
    problem = SearchProblem(builtin_host("C5"), ForbiddenFamily.all_trees(5), caps=(2,) * 5)
    assert 0.499 <= search(problem).best_density <= 0.501


@pytest.mark.slow
def test_search_pendant_triangle_host() -> None:
    problem = SearchProblem(builtin_host("K4-P3"), ForbiddenFamily.all_trees(4))
    assert 0.534 <= search(problem).best_density <= 0.537


@pytest.mark.slow
def test_stochastic_search_matches_leila() -> None:
    problem = SearchProblem(
        complete(4),
        ForbiddenFamily.all_trees(4),
        caps=(3, 3, 3, 3),
        mode=SearchMode.STOCHASTIC,
        restarts=8,
        seed=2024,
    )
    result = search(problem)
    assert result.best_density >= 0.3008
    assert result.certificate.family_free


@pytest.mark.slow
def test_search_is_monotone_in_host_edges() -> None:
    family = ForbiddenFamily.all_trees(4)
    c4 = builtin_host("C4")
    values = [
        search(SearchProblem(host, family, caps=(2, 2, 2, 2))).best_density
        for host in (c4, builtin_host("K4-e"), complete(4))
    ]
    assert values[0] >= values[1] - 1e-6
    assert values[1] >= values[2] - 1e-6
