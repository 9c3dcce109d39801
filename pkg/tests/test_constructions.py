from __future__ import annotations

import math

import numpy as np
import pytest

from hpartite_core.constructions import (
    CONSTRUCTION_IDS,
    HypercubeLayers,
    IntersectingPalette,
    Leila,
    MissingEdge,
    Parity,
    PendantTriangle,
    RefinedDeadEnd,
    StarLeaf,
    TwoColour,
    build,
    get_construction,
    glue_paths,
    make,
    suite,
    verify,
)
from hpartite_core.constructions.hamiltonicity import dead_end_densities
from hpartite_core.core import (
    DomainError,
    ForbiddenFamily,
    PartiteGraph,
    builtin_host,
    check_family_free,
    density_profile,
    max_transversal_component,
    transversal_count,
    transversal_graphs,
)
from hpartite_core.thresholds import ThresholdId, certified_pstar, closed_form


def small_suite() -> list:
    return [c for c in suite() if transversal_count(c.build()) <= 4096]


@pytest.mark.parametrize("construction", small_suite(), ids=lambda c: c.spec().id + str(c.params))
def test_small_constructions_verify(construction) -> None:
    outcome = construction.verify()
    assert outcome.passed, outcome.diagnostics
    assert outcome.density == pytest.approx(construction.claimed_density(), abs=1e-9)


@pytest.mark.slow
def test_whole_suite_verifies() -> None:
    failed = [c.spec().id for c in suite() if not c.verify().passed]
    assert failed == []


def test_registry_round_trip() -> None:
    for name in CONSTRUCTION_IDS:
        assert get_construction(name).construction_id == name
    assert get_construction("two-color") is TwoColour
    with pytest.raises(ValueError, match="Unsupported construction"):
        get_construction("petersen")
    spec = make("leila", r=5).spec()
    assert density_profile(build(spec)).minimum == pytest.approx(spec.claimed_density)
    assert verify(spec).passed


def test_leila_optimum_matches_rho_b() -> None:
    g = Leila(4).build()
    assert density_profile(g).minimum == pytest.approx((8 - 2 * math.sqrt(7)) / 9, abs=1e-12)
    assert Leila.optimal_alpha(4) == pytest.approx(0.45142, abs=1e-5)
    for r in range(3, 12):
        assert Leila(r).claimed_density() == pytest.approx(closed_form(ThresholdId("rho_b", r=r)))


@pytest.mark.parametrize("r", range(3, 11))
def test_leila_density_formula(r: int) -> None:
    for step in range(101):
        alpha = step / 100
        profile = density_profile(Leila(r, alpha).build())
        for (x, y), value in profile.values.items():
            expected = alpha * (r - 2) / (r - 1) if y == r - 1 else (1 - alpha) ** 2
            assert value == pytest.approx(expected, abs=1e-12), (alpha, x, y)
        assert profile.minimum == pytest.approx(
            min((1 - alpha) ** 2, alpha * (r - 2) / (r - 1)), abs=1e-12
        )


def test_star_leaf_density() -> None:
    outcome = StarLeaf(4).verify()
    assert outcome.passed
    assert outcome.density == pytest.approx(2 / 3)


def test_pendant_triangle_density() -> None:
    outcome = PendantTriangle().verify()
    assert outcome.passed
    assert outcome.density == pytest.approx(4 - 2 * math.sqrt(3), abs=1e-12)
    assert outcome.density == pytest.approx(0.5359, abs=1e-4)


def test_two_colour_density_and_freeness() -> None:
    outcome = TwoColour(5).verify()
    assert outcome.passed
    assert outcome.density == pytest.approx(0.5)


def test_two_colour_has_a_connected_transversal(two_colour4: PartiteGraph) -> None:
    certificate = check_family_free(two_colour4, ForbiddenFamily.all_trees(4))
    assert not certificate.family_free
    assert certificate.witness.labels(two_colour4) == ("0", "0", "0", "1")


@pytest.mark.parametrize("r", range(3, 13))
def test_parity_transversals_are_bipartite(r: int) -> None:
    g = Parity(r).build()
    assert density_profile(g).minimum == pytest.approx(Parity(r).claimed_density(), abs=1e-12)
    for _, s in transversal_graphs(g):
        assert s.is_bipartite()


def test_missing_edge_matching_variant() -> None:
    construction = MissingEdge(6, [(2, 3), (4, 5)])
    assert construction.verify().passed
    assert not construction.build().host.has_edge(4, 5)
    with pytest.raises(DomainError, match="avoid 0 and 1"):
        MissingEdge(5, [(1, 2)])


def test_refined_dead_end_classes() -> None:
    for r in range(4, 9):
        construction = RefinedDeadEnd(r)
        classes = construction.density_classes()
        level = certified_pstar(r) ** 2 + (1 - certified_pstar(r)) ** 2
        assert classes == pytest.approx((level,) * 4, abs=1e-12)
        assert construction.claimed_density() == pytest.approx(
            closed_form(ThresholdId("dirac_certified", r=r))
        )
    assert RefinedDeadEnd(4).claimed_density() == pytest.approx(0.5376, abs=1e-4)


def test_refined_dead_end_profile_matches_classes() -> None:
    construction = RefinedDeadEnd(5, epsilon=0.05)
    r, p1, p2, p3 = 5, construction.p1, construction.p2, construction.p3
    assert (p1, p2, p3) == pytest.approx((0.55, 0.95, 0.8))
    among, to_special, to_last, special_last = dead_end_densities(r, p1, p2, p3)
    profile = density_profile(construction.build())
    for (x, y), value in profile.values.items():
        if y < r - 2:
            expected = among
        elif y == r - 2:
            expected = to_special
        elif x < r - 2:
            expected = to_last
        else:
            expected = special_last
        assert value == pytest.approx(expected, abs=1e-12), (x, y)
    assert check_family_free(construction.build(), ForbiddenFamily.hamilton_cycle()).family_free


@pytest.mark.parametrize("r", range(4, 9))
def test_refined_dead_end_profile_over_random_weights(r: int) -> None:
    rng = np.random.default_rng(r)
    for _ in range(100):
        p1, p2, p3 = (float(p) for p in rng.uniform(0.01, 0.99, size=3))
        classes = dead_end_densities(r, p1, p2, p3)
        assert classes == pytest.approx(
            (
                p1**2 + (1 - p1) ** 2,
                p1 * p2,
                (1 - p1) + p1 * (1 - p3) / (r - 2),
                (1 - p2) + p2 * p3,
            ),
            abs=1e-12,
        )
        among, to_special, to_last, special_last = classes
        profile = density_profile(RefinedDeadEnd(r, p1, p2, p3).build())
        for (x, y), value in profile.values.items():
            if y < r - 2:
                expected = among
            elif y == r - 2:
                expected = to_special
            elif x < r - 2:
                expected = to_last
            else:
                expected = special_last
            assert value == pytest.approx(expected, abs=1e-12), (p1, p2, p3, x, y)


def test_refined_dead_end_cubic_optimum() -> None:
    construction = RefinedDeadEnd(4, optimum="cubic")
    classes = construction.density_classes()
    dirac = closed_form(ThresholdId("dirac_lower", r=4))
    assert classes[0] == pytest.approx(dirac)
    assert classes[1] == pytest.approx(dirac)
    assert classes[2] < dirac
    assert construction.verify().passed


def test_palette_components() -> None:
    construction = IntersectingPalette(2, 6)
    g = construction.build()
    assert density_profile(g).minimum == pytest.approx(0.25)
    size, _ = max_transversal_component(g)
    assert size <= 4 == construction.component_bound()
    assert construction.verify().passed


def test_hypercube_layers() -> None:
    construction = HypercubeLayers(3)
    assert construction.verify().passed
    assert density_profile(construction.build()).minimum == pytest.approx(0.5)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: StarLeaf(2),
        lambda: Leila(4, alpha=1.5),
        lambda: MissingEdge(3),
        lambda: TwoColour(3),
        lambda: Parity(2),
        lambda: RefinedDeadEnd(3),
        lambda: RefinedDeadEnd(4, epsilon=0.5),
        lambda: IntersectingPalette(2, 2),
        lambda: IntersectingPalette(1, 6),
        lambda: HypercubeLayers(1),
    ],
)
def test_out_of_domain_parameters(factory) -> None:
    with pytest.raises(DomainError):
        factory()


def test_refined_dead_end_needs_whole_triple() -> None:
    with pytest.raises(ValueError, match="all of p1, p2, p3"):
        RefinedDeadEnd(4, p1=0.6)


def path_graph_without_p3() -> PartiteGraph:
    host = builtin_host("P3")
    parts = {0: [("a", 1.0)], 1: [("b", 0.5), ("c", 0.5)], 2: [("d", 1.0)]}
    edges = [((0, "a"), (1, "b")), ((1, "c"), (2, "d"))]
    return PartiteGraph.build(host, parts, edges, "split")


def complete_path() -> PartiteGraph:
    host = builtin_host("P3")
    parts = {x: [("s", 1.0)] for x in range(3)}
    return PartiteGraph.build(host, parts, [((0, "s"), (1, "s")), ((1, "s"), (2, "s"))])


def test_glue_without_connected_transversal() -> None:
    g = path_graph_without_p3()
    assert check_family_free(g, ForbiddenFamily.path(3)).family_free
    glued = glue_paths(g, g)
    assert glued.host.edges == builtin_host("C4").edges
    assert check_family_free(glued, ForbiddenFamily.all_trees(4)).family_free


def test_glue_with_complete_second_path() -> None:
    g1 = path_graph_without_p3()
    glued = glue_paths(g1, complete_path())
    for _, s in transversal_graphs(glued):
        assert s.has_edge(0, 3)
        assert s.has_edge(2, 3)
        assert s.is_connected()


def test_glue_rejects_mismatched_endpoints() -> None:
    other = PartiteGraph.build(
        builtin_host("P3"),
        {0: [("a", 0.5), ("e", 0.5)], 1: [("s", 1.0)], 2: [("d", 1.0)]},
        [],
    )
    with pytest.raises(ValueError, match="Endpoint part"):
        glue_paths(path_graph_without_p3(), other)
    with pytest.raises(ValueError, match="not a path host"):
        glue_paths(path_graph_without_p3(), Parity(3).build())
