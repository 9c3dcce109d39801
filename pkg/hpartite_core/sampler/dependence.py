"""Chi-square test that induced graphs on disjoint host vertex sets are independent."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.stats import chi2_contingency

from hpartite_core.get_version import get_task_logger
from hpartite_core.sampler.sampling import sample_choices

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from hpartite_core.core.partite import PartiteGraph

shared_logger = get_task_logger(__name__)

MIN_EXPECTED = 5.0
DEFAULT_ALPHA = 0.01


@dataclass(frozen=True)
class DependenceReport:
    a: tuple[int, ...]
    b: tuple[int, ...]
    n: int
    seed: int
    statistic: float
    dof: int
    p_value: float
    conclusive: bool
    rejected: bool
    pooled: int
    table_shape: tuple[int, int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "A": list(self.a),
            "B": list(self.b),
            "n": self.n,
            "seed": self.seed,
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "conclusive": self.conclusive,
            "rejected": self.rejected,
            "pooled": self.pooled,
            "table_shape": list(self.table_shape),
        }


def induced_codes(g: PartiteGraph, choices: NDArray[np.int64], vertices: Sequence[int]) -> NDArray[np.int64]:
    """Integer code of the labelled induced graph on ``vertices`` for every sampled transversal.

    Bit ``k`` of a code is host edge ``k`` inside ``vertices``, in host edge order.
    """
    inside = set(vertices)
    codes = np.zeros(len(choices), dtype=np.int64)
    k = 0
    for x, y in g.host.edges:
        if x in inside and y in inside:
            joined = g.biadjacency(x, y)[choices[:, x], choices[:, y]].astype(np.int64)
            codes |= joined << k
            k += 1
    return codes


def pool_sparse_cells(table: NDArray[np.int64]) -> tuple[NDArray[np.int64], int]:
    """Merge the rarest row or column into its nearest neighbour by count until every expected
    count reaches :data:`MIN_EXPECTED` or a side has fewer than two categories."""
    merges = 0
    total = table.sum()
    while table.shape[0] >= 2 and table.shape[1] >= 2:
        rows, cols = table.sum(axis=1), table.sum(axis=0)
        if np.outer(rows, cols).min() / total >= MIN_EXPECTED:
            break
        if rows.min() <= cols.min():
            order = np.argsort(rows, kind="stable")
            keep, drop = order[1], order[0]
            table[keep] += table[drop]
            table = np.delete(table, drop, axis=0)
        else:
            order = np.argsort(cols, kind="stable")
            keep, drop = order[1], order[0]
            table[:, keep] += table[:, drop]
            table = np.delete(table, drop, axis=1)
        merges += 1
    return table, merges


def one_dependence_check(
    g: PartiteGraph,
    a: Sequence[int],
    b: Sequence[int],
    n: int,
    seed: int,
    alpha: float = DEFAULT_ALPHA,
) -> DependenceReport:
    """Tabulate (induced graph on ``a``, induced graph on ``b``) over ``n`` random transversals and
    test the joint distribution against the product of its marginals."""
    a, b = tuple(sorted(set(a))), tuple(sorted(set(b)))
    if set(a) & set(b):
        raise ValueError(f"A and B must be disjoint, both contain {sorted(set(a) & set(b))}")
    for x in (*a, *b):
        if not 0 <= x < g.host.n:
            raise ValueError(f"{x} is not a host vertex of {g.host.label()}")
    if n < 1:
        raise ValueError(f"Need at least one sample, got n={n}")
    start_time = time.time()
    choices = sample_choices(g, n, seed)
    _, rows = np.unique(induced_codes(g, choices, a), return_inverse=True)
    _, cols = np.unique(induced_codes(g, choices, b), return_inverse=True)
    table = np.zeros((rows.max() + 1, cols.max() + 1), dtype=np.int64)
    np.add.at(table, (rows.ravel(), cols.ravel()), 1)
    shape = (int(table.shape[0]), int(table.shape[1]))
    table, merges = pool_sparse_cells(table)
    if merges:
        shared_logger.warning(
            f"one_dependence_check(): pooled {merges} sparse categories, table {shape} -> "
            f"{table.shape}"
        )
    if table.shape[0] < 2 or table.shape[1] < 2:
        shared_logger.warning(
            f"one_dependence_check(): fewer than two categories on a side for A={list(a)}, "
            f"B={list(b)}; inconclusive"
        )
        return DependenceReport(a, b, n, seed, 0.0, 0, 1.0, False, False, merges, shape)
    statistic, p_value, dof, _ = chi2_contingency(table, correction=False)
    report = DependenceReport(
        a,
        b,
        n,
        seed,
        float(statistic),
        int(dof),
        float(p_value),
        True,
        bool(p_value < alpha),
        merges,
        shape,
    )
    shared_logger.info(
        f"one_dependence_check(): chi2={report.statistic:.4f}, dof={report.dof}, "
        f"p={report.p_value:.4g} ({time.time() - start_time:.3f} seconds)"
    )
    return report
