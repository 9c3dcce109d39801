"""JSON interchange for partite graphs.

The layout is::

    {"host": {"n": 4, "edges": [[0, 1], [0, 2]]},
     "parts": {"0": [{"id": "a", "w": 0.5}, {"id": "b", "w": 0.5}], ...},
     "edges": [[["0", "a"], ["1", "c"]], ...]}

Numbers are read as decimals and converted to floats once, after parsing.
"""

from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path
from typing import Any

from hpartite_core.core.errors import InvalidPartiteGraphError
from hpartite_core.core.graphs import HostGraph
from hpartite_core.core.partite import PartiteGraph, validate
from hpartite_core.get_version import get_task_logger

shared_logger = get_task_logger(__name__)


def host_from_json(data: dict[str, Any]) -> HostGraph:
    return HostGraph.from_edges(int(data["n"]), data.get("edges", []), str(data.get("name", "")))


def partite_from_json(data: dict[str, Any], check: bool = True) -> PartiteGraph:
    """Build a :class:`PartiteGraph` from parsed JSON.

    With ``check`` set, a graph failing validation raises :class:`InvalidPartiteGraphError`.
    """
    try:
        host = host_from_json(data["host"])
        parts = {
            int(x): [(str(v["id"]), float(Decimal(str(v["w"])))) for v in vertices]
            for x, vertices in data["parts"].items()
        }
        edges = [((int(a[0]), str(a[1])), (int(b[0]), str(b[1]))) for a, b in data.get("edges", [])]
    except (KeyError, TypeError, IndexError) as e:
        shared_logger.error(f"partite_from_json(): malformed graph document: {e!r}")
        raise ValueError(f"Malformed partite graph document: {e!r}") from e
    for x in parts:
        if not 0 <= x < host.n:
            raise ValueError(f"Part key {x} is not a host vertex of {host.label()}")
    g = PartiteGraph.build(host, parts, edges, str(data.get("name", "")))
    if check:
        report = validate(g)
        if not report.ok:
            shared_logger.error(f"partite_from_json(): {report.summary()}")
            raise InvalidPartiteGraphError(report)
    return g


def partite_to_json(g: PartiteGraph) -> dict[str, Any]:
    data: dict[str, Any] = {
        "host": g.host.to_dict(),
        "parts": {
            str(x): [{"id": v, "w": w} for v, w in zip(part, weights, strict=True)]
            for x, (part, weights) in enumerate(zip(g.parts, g.weights, strict=True))
        },
        "edges": [
            [[str(x), g.parts[x][i]], [str(y), g.parts[y][j]]]
            for (x, y), pairs in sorted(g.edges.items())
            for i, j in sorted(pairs)
        ],
    }
    if g.host.name:
        data["host"]["name"] = g.host.name
    if g.name:
        data["name"] = g.name
    return data


def loads_partite(text: str, check: bool = True) -> PartiteGraph:
    return partite_from_json(json.loads(text, parse_float=Decimal, parse_int=int), check)


def load_partite(path: str | Path, check: bool = True) -> PartiteGraph:
    with Path(path).open(encoding="utf-8") as f:
        return loads_partite(f.read(), check)


def dump_partite(g: PartiteGraph, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(partite_to_json(g), f, indent=2)
        f.write("\n")
