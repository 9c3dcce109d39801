from __future__ import annotations

import numpy as np
import pytest

from hpartite_core.constructions import Leila, MissingEdge, Parity, RefinedDeadEnd, StarLeaf, suite
from hpartite_core.core import (
    DomainError,
    ForbiddenFamily,
    PartiteGraph,
    builtin_host,
    transversal_count,
)
from hpartite_core.core.graphs import complete, star
from hpartite_core.sampler import (
    BLOCK_SIZE,
    edge_marginals,
    estimate_property,
    exact_property_probability,
    matching_pair_bound,
    one_dependence_check,
    sample_choices,
    sample_transversal,
    spanning_tree_bound,
    star_absorption_witness,
)
from hpartite_core.sampler.dependence import pool_sparse_cells


def singleton_complete(r: int) -> PartiteGraph:
    host = complete(r)
    return PartiteGraph.build(
        host, {x: [("v", 1.0)] for x in range(r)}, [((x, "v"), (y, "v")) for x, y in host.edges]
    )


def test_zero_weight_vertex_is_never_drawn() -> None:
    g = PartiteGraph.build(builtin_host("K2"), {0: [("a", 1.0), ("b", 0.0)], 1: [("c", 1.0)]}, [])
    rng = np.random.default_rng(0)
    assert all(sample_transversal(g, rng).choice == (0, 0) for _ in range(200))
    assert (sample_choices(g, 5000, seed=1)[:, 0] == 0).all()


def test_sampling_is_deterministic(parity5: PartiteGraph) -> None:
    first = sample_choices(parity5, 3 * BLOCK_SIZE, seed=42)
    assert np.array_equal(first, sample_choices(parity5, 3 * BLOCK_SIZE, seed=42))
    assert not np.array_equal(first, sample_choices(parity5, 3 * BLOCK_SIZE, seed=43))
    assert np.array_equal(first[BLOCK_SIZE:], sample_choices(parity5, 2 * BLOCK_SIZE, 42, BLOCK_SIZE))
    assert np.array_equal(first[:10], sample_choices(parity5, 10, seed=42))
    with pytest.raises(ValueError, match="block boundary"):
        sample_choices(parity5, 10, seed=42, start=7)


def test_uniform_frequencies(parity5: PartiteGraph) -> None:
    choices = sample_choices(parity5, 100_000, seed=7)
    assert np.abs(choices.mean(axis=0) - 0.5).max() < 0.01


def test_leila_frequencies(leila4: PartiteGraph) -> None:
    choices = sample_choices(leila4, 100_000, seed=8)
    expected = 1 - Leila.optimal_alpha(4)
    assert expected == pytest.approx(0.5486, abs=1e-4)
    for x in range(3):
        assert abs(choices[:, x].mean() - expected) < 0.01


def test_exact_probabilities(parity5: PartiteGraph, two_colour4: PartiteGraph) -> None:
    assert exact_property_probability(parity5, ForbiddenFamily.odd_cycles()) == 0.0
    assert exact_property_probability(singleton_complete(5), ForbiddenFamily.all_trees(5)) == 1.0
    assert exact_property_probability(two_colour4, ForbiddenFamily.hamilton_cycle()) == 0.0
    assert exact_property_probability(two_colour4, ForbiddenFamily.all_trees(4)) == pytest.approx(1.0)
    assert exact_property_probability(two_colour4, ForbiddenFamily.odd_cycles()) == pytest.approx(0.5)


def test_estimates_of_absent_properties() -> None:
    report = estimate_property(Parity(7).build(), ForbiddenFamily.odd_cycles(), 10_000, seed=3, jobs=1)
    assert report.estimate == 0.0
    assert report.half_width == 0.0
    dead_end = RefinedDeadEnd(4).build()
    assert estimate_property(dead_end, ForbiddenFamily.hamilton_cycle(), 10_000, 3, jobs=1).hits == 0
    full = estimate_property(singleton_complete(4), ForbiddenFamily.all_trees(4), 1000, 3, jobs=1)
    assert full.estimate == 1.0


def test_estimate_agrees_with_exact(two_colour4: PartiteGraph) -> None:
    family = ForbiddenFamily.odd_cycles()
    report = estimate_property(two_colour4, family, 20_000, seed=11, jobs=1)
    exact = exact_property_probability(two_colour4, family)
    assert abs(report.estimate - exact) <= 3 * report.half_width
    assert report.half_width == pytest.approx(
        1.96 * np.sqrt(report.estimate * (1 - report.estimate) / 20_000)
    )


def monte_carlo_cases() -> list[tuple[str, PartiteGraph, ForbiddenFamily, float]]:
    """Suite graphs with at most 1e5 transversals, each with every family that applies to its host.

    Probabilities strictly between 0 and 1 are kept only when the normal interval is reliable at
    n = 2000 (at least 20 expected hits and misses).
    """
    cases = []
    for construction in suite():
        g = construction.build()
        if transversal_count(g) > 100_000:
            continue
        families = {
            f.describe(): f
            for f in (
                construction.claimed_family(),
                ForbiddenFamily.all_trees(g.host.n),
                ForbiddenFamily.hamilton_cycle(),
                ForbiddenFamily.odd_cycles(),
            )
        }
        for f in families.values():
            p = exact_property_probability(g, f)
            label = f"{construction.construction_id}{construction.params}"
            if min(p, 1.0 - p) < 1e-9:
                cases.append((label, g, f, float(round(p))))
            elif min(p, 1.0 - p) * 2000 >= 20:
                cases.append((label, g, f, p))
    return cases


@pytest.mark.slow
def test_monte_carlo_agrees_with_exact_over_seeds() -> None:
    cases = monte_carlo_cases()
    assert cases
    for label, g, f, exact in cases:
        passed = 0
        for seed in range(100):
            report = estimate_property(g, f, 2000, seed, jobs=1)
            passed += abs(report.estimate - exact) <= 3 * report.half_width + 1e-12
        assert passed >= 99, f"{label} {f.describe()}: {passed}/100 seeds"

def test_estimate_does_not_depend_on_jobs(two_colour4: PartiteGraph) -> None:
    family = ForbiddenFamily.odd_cycles()
    serial = estimate_property(two_colour4, family, 40_000, seed=5, jobs=1)
    parallel = estimate_property(two_colour4, family, 40_000, seed=5, jobs=3)
    assert serial == parallel
    assert serial.to_dict() == parallel.to_dict()


def test_estimate_needs_enough_samples(parity5: PartiteGraph) -> None:
    with pytest.raises(ValueError, match="n >= 100"):
        estimate_property(parity5, ForbiddenFamily.odd_cycles(), 99, seed=0)


def test_edge_marginals_converge(leila4: PartiteGraph) -> None:
    for empirical, alpha in edge_marginals(leila4, 40_000, seed=13).values():
        assert abs(empirical - alpha) < 0.02


def test_one_dependence_not_rejected() -> None:
    report = one_dependence_check(Parity(6).build(), [0, 1], [2, 3], 20_000, seed=17)
    assert report.conclusive
    assert not report.rejected
    assert report.dof >= 1
    assert report.table_shape == (2, 2)


def test_single_vertex_sides_are_inconclusive(parity5: PartiteGraph) -> None:
    report = one_dependence_check(parity5, [0], [1], 1000, seed=1)
    assert not report.conclusive
    assert not report.rejected
    assert report.p_value == 1.0
    assert report.to_dict()["dof"] == 0


def test_one_dependence_rejects_bad_sets(parity5: PartiteGraph) -> None:
    with pytest.raises(ValueError, match="disjoint"):
        one_dependence_check(parity5, [0, 1], [1, 2], 1000, seed=1)
    with pytest.raises(ValueError, match="not a host vertex"):
        one_dependence_check(parity5, [0], [9], 1000, seed=1)


def test_pool_sparse_cells() -> None:
    table, merges = pool_sparse_cells(np.array([[100, 1], [100, 2]]))
    assert merges == 1
    assert table.tolist() == [[101], [102]]
    untouched, none = pool_sparse_cells(np.array([[50, 50], [50, 50]]))
    assert none == 0
    assert untouched.shape == (2, 2)


def absorption_instance(rng: np.random.Generator, leaves: int = 10) -> PartiteGraph:
    host = star(leaves + 1)
    parts = {0: [(f"c{i}", 0.25) for i in range(4)]}
    edges = []
    for y in range(1, leaves + 1):
        parts[y] = [("u", 1.0)]
        for i in rng.choice(4, size=3, replace=False):
            edges.append(((0, f"c{int(i)}"), (y, "u")))
    return PartiteGraph.build(host, parts, edges)


def test_star_absorption_witness() -> None:
    rng = np.random.default_rng(29)
    for _ in range(25):
        g = absorption_instance(rng)
        witness = star_absorption_witness(g, [0, 1], 0.6)
        assert witness.bound == 8
        assert len(witness.missed) <= 8
        for y in range(1, 11):
            joined = g.biadjacency(0, y)[witness.vertex].any()
            assert joined == (y not in witness.missed)


def test_star_absorption_full_centre() -> None:
    g = StarLeaf(5).build()
    full = PartiteGraph.build(
        g.host,
        {0: [(v, w) for v, w in zip(g.parts[0], g.weights[0])], **{y: [("u", 1.0)] for y in range(1, 5)}},
        [((0, v), (y, "u")) for v in g.parts[0] for y in range(1, 5)],
    )
    witness = star_absorption_witness(full, range(4), 0.9)
    assert witness.missed == ()
    assert witness.vertex == 0


def test_star_absorption_preconditions() -> None:
    g = absorption_instance(np.random.default_rng(31))
    with pytest.raises(DomainError, match="must exceed"):
        star_absorption_witness(g, [0], 0.6)
    with pytest.raises(DomainError, match="p > 1/2"):
        star_absorption_witness(g, [0, 1, 2], 0.5)
    with pytest.raises(DomainError, match="below"):
        star_absorption_witness(g, [0, 1], 0.8)
    with pytest.raises(DomainError, match="not a star"):
        star_absorption_witness(Parity(4).build(), [0], 0.6)


def test_spanning_tree_bound() -> None:
    assert spanning_tree_bound(singleton_complete(4)).forces_connected
    no_tree = spanning_tree_bound(MissingEdge(5).build())
    assert no_tree.expected_edges == pytest.approx(2.0)
    assert not no_tree.forces_connected
    tight = spanning_tree_bound(StarLeaf(6).build())
    assert tight.expected_edges == pytest.approx(4.0)
    assert not tight.forces_connected
    given = spanning_tree_bound(singleton_complete(4), [(0, 1), (1, 2), (2, 3)])
    assert given.tree == ((0, 1), (1, 2), (2, 3))
    with pytest.raises(DomainError, match="not a spanning tree"):
        spanning_tree_bound(singleton_complete(4), [(0, 1), (1, 2), (0, 2)])


def test_matching_pair_bound() -> None:
    parity = matching_pair_bound(Parity(4).build())
    assert parity.density == pytest.approx(0.5)
    assert parity.exact == pytest.approx(6 / 16)
    assert parity.holds
    full = matching_pair_bound(singleton_complete(4))
    assert full.lower == pytest.approx(1.0)
    assert full.exact == 1.0
    with pytest.raises(DomainError, match="needs host K4"):
        matching_pair_bound(MissingEdge(4).build())
