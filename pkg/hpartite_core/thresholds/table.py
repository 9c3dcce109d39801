"""Reproduction of the connected-transversal threshold summary for small hosts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from hpartite_core.core.graphs import HostGraph, path, star
from hpartite_core.core.partite import density_profile, restrict_host
from hpartite_core.get_version import get_task_logger
from hpartite_core.thresholds.closed_form import ThresholdId, closed_form
from hpartite_core.thresholds.spectral import tree_threshold

shared_logger = get_task_logger(__name__)


@dataclass(frozen=True)
class TableRow:
    host: str
    relation: str
    algebraic: str
    value: float
    printed: str
    source: str
    construction: str | None = None
    construction_density: float | None = None
    conjectural: bool = False

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Report:
    rows: tuple[TableRow, ...]

    def render_text(self) -> str:
        header = ("host", "", "form", "value", "construction", "verified density")
        lines = [
            (
                row.host,
                row.relation,
                row.algebraic,
                f"{row.value:.15g}",
                row.construction or "-",
                "-" if row.construction_density is None else f"{row.construction_density:.15g}",
            )
            for row in self.rows
        ]
        widths = [max(len(str(c)) for c in col) for col in zip(header, *lines, strict=True)]
        out = [
            "  ".join(str(c).ljust(w) for c, w in zip(line, widths, strict=True)).rstrip()
            for line in (header, *lines)
        ]
        out.append("K4 bounds are not known to be tight; the threshold is conjectured to be the lower one.")
        return "\n".join(out)

    def render_machine(self) -> str:
        return "\n".join(
            "\t".join(
                [
                    "ROW",
                    row.host,
                    row.relation,
                    f"{row.value:.15g}",
                    "-" if row.construction_density is None else f"{row.construction_density:.15g}",
                    "conjectural" if row.conjectural else "exact",
                ]
            )
            for row in self.rows
        )

    def to_dict(self) -> dict[str, Any]:
        return {"rows": [row.to_dict() for row in self.rows]}


def _c5_host() -> HostGraph:
    # the 5-cycle 0-2-1-3-4-0 avoids the pair 01 missing from K5-e
    return HostGraph.from_edges(5, [(0, 2), (1, 2), (1, 3), (3, 4), (0, 4)], "C5")


def _c4_host() -> HostGraph:
    return HostGraph.from_edges(4, [(0, 2), (1, 2), (1, 3), (0, 3)], "C4")


def threshold_table(with_constructions: bool = True) -> Report:
    """All rows, each with its formula value and, where a construction exists, its verified density."""
    from hpartite_core.constructions import Leila, MissingEdge, PendantTriangle, StarLeaf

    def certified(construction: Any, host: HostGraph | None = None) -> float | None:
        if not with_constructions:
            return None
        outcome = construction.verify()
        if not outcome.passed:
            shared_logger.error(f"threshold_table(): {construction.construction_id} failed verification")
            return None
        if host is None:
            return float(outcome.density)
        return density_profile(restrict_host(construction.build(), host)).minimum

    rows = (
        TableRow(
            "K4", ">=", "(8-2√7)/9", closed_form(ThresholdId("rho_b", r=4)), "0.3009",
            "leila lower bound", "leila(r=4)", certified(Leila(4)), conjectural=True,
        ),
        TableRow(
            "K4", "<=", "2-2√(2/3)", closed_form(ThresholdId("conn_upper_k4")), "0.36701",
            "upper bound", conjectural=True,
        ),
        TableRow(
            "K4-e", "=", "1/2", 0.5, "1/2", "missing edge", "missing_edge(r=4)",
            certified(MissingEdge(4)),
        ),
        TableRow(
            "C4", "=", "1/2", 0.5, "1/2", "missing matching", "missing_edge(r=4, 23) on C4",
            certified(MissingEdge(4, [(2, 3)]), _c4_host()),
        ),
        TableRow(
            "K4-P3", "=", "4-2√3", closed_form(ThresholdId("k4mp3")), "0.5358",
            "pendant triangle", "pendant_triangle", certified(PendantTriangle()),
        ),
        TableRow(
            "P4", "=", "(-1+√5)/2", tree_threshold(path(4).small_graph), "0.6180",
            "spectral tree threshold",
        ),
        TableRow(
            "K1,3", "=", "2/3", tree_threshold(star(4).small_graph), "2/3",
            "spectral tree threshold", "star_leaf(r=4)", certified(StarLeaf(4)),
        ),
        TableRow(
            "C5", "=", "1/2", closed_form(ThresholdId("c5_conn")), "1/2",
            "missing edge restricted to C5", "missing_edge(r=5) on C5",
            certified(MissingEdge(5), _c5_host()),
        ),
    )
    return Report(rows)
