"""Command line entry point: ``hpartite <verb> [options]``.

Exit codes: 0 when the command succeeds or the checked property holds, 1 when the property is
violated (the witness is printed as JSON), 2 for bad input or an unmet precondition. Human readable
text goes to stdout, logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from decimal import Decimal
from pathlib import Path
from typing import TYPE_CHECKING, Any

from hpartite_core.constructions import get_construction, glue_paths, verify_all
from hpartite_core.core.certify import check_family_free
from hpartite_core.core.families import parse_family
from hpartite_core.core.graphs import builtin_host
from hpartite_core.core.io import host_from_json, partite_from_json, partite_to_json
from hpartite_core.core.partite import blow_up, density_profile, validate
from hpartite_core.get_version import get_task_logger, get_version
from hpartite_core.sampler import estimate_property, exact_property_probability, one_dependence_check
from hpartite_core.search import SearchMode, SearchProblem, search
from hpartite_core.thresholds import ThresholdId, closed_form, threshold_table, tree_threshold

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hpartite_core.core.graphs import HostGraph
    from hpartite_core.core.partite import PartiteGraph

shared_logger = get_task_logger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2


def fmt(value: float) -> str:
    return f"{value:.15g}"


def _read_json(path: str) -> Any:
    with Path(path).open(encoding="utf-8") as f:
        return json.loads(f.read(), parse_float=Decimal)


def load_graph(path: str, check: bool = True) -> PartiteGraph:
    """Read a graph document; a search result is accepted too and its embedded graph is used."""
    data = _read_json(path)
    if isinstance(data, dict) and "graph" in data and "parts" not in data:
        data = data["graph"]
    return partite_from_json(data, check)


def load_host(spec: str) -> HostGraph:
    """A ``builtin:NAME`` (or bare builtin name) or a JSON file holding a host or a whole graph."""
    if spec.startswith("builtin:") or not Path(spec).exists():
        return builtin_host(spec)
    data = _read_json(spec)
    return host_from_json(data.get("host", data))


def parse_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def parse_matching(text: str) -> list[tuple[int, int]]:
    pairs = []
    for item in text.split(","):
        u, sep, v = item.strip().partition("-")
        if not sep:
            raise ValueError(f"Matching edges are written u-v, got {item!r}")
        pairs.append((int(u), int(v)))
    return pairs


class Output:
    """Routes text to stdout and JSON to ``--out``; with ``--quiet`` only JSON is produced.

    Text mode opens with one ``# hpartite`` header line carrying the run metadata.
    """

    def __init__(self, args: argparse.Namespace, argv: Sequence[str]) -> None:
        self.quiet = args.quiet
        self.out = args.out
        self.run = {"version": get_version(), "seed": getattr(args, "seed", None), "argv": list(argv)}
        self._header_done = False

    def header(self) -> str:
        seed = "-" if self.run["seed"] is None else self.run["seed"]
        return f"# hpartite {self.run['version'] or 'unknown'} seed={seed} argv={json.dumps(self.run['argv'])}"

    def text(self, line: str = "") -> None:
        if self.quiet:
            return
        if not self._header_done:
            print(self.header())
            self._header_done = True
        print(line)

    def json(self, payload: dict[str, Any]) -> None:
        document = {**payload, "run": self.run}
        rendered = json.dumps(document, indent=2)
        if self.out:
            with Path(self.out).open("w", encoding="utf-8") as f:
                f.write(rendered + "\n")
        elif self.quiet:
            print(rendered)

    def witness(self, payload: dict[str, Any]) -> None:
        if self.quiet and not self.out:
            return
        print(json.dumps({**payload, "run": self.run}, indent=2))


def _construction_params(args: argparse.Namespace) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for name in ("r", "t", "d", "alpha", "p1", "p2", "p3", "epsilon", "optimum"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if getattr(args, "matching", None):
        params["matching"] = parse_matching(args.matching)
    return params


def _make_construction(args: argparse.Namespace) -> Any:
    if not args.id:
        raise ValueError("A construction --id is required")
    cls = get_construction(args.id)
    params = _construction_params(args)
    try:
        return cls(**params)
    except TypeError as e:
        raise ValueError(f"Bad parameters {params} for {args.id}: {e}") from e


# verbs


def cmd_validate(args: argparse.Namespace, out: Output) -> int:
    report = validate(load_graph(args.graph, check=False))
    out.json(report.to_dict())
    if report.ok:
        out.text("valid")
        return EXIT_OK
    out.witness(report.to_dict())
    return EXIT_VIOLATED


def cmd_density(args: argparse.Namespace, out: Output) -> int:
    profile = density_profile(load_graph(args.graph))
    for (x, y), value in sorted(profile.values.items()):
        out.text(f"{x}-{y}\t{fmt(value)}")
    out.text(f"minimum\t{fmt(profile.minimum)}")
    out.json(profile.to_dict())
    return EXIT_OK


def cmd_check(args: argparse.Namespace, out: Output) -> int:
    g = load_graph(args.graph)
    certificate = check_family_free(g, parse_family(args.family), args.cap)
    out.json(certificate.to_dict(g))
    if certificate.family_free:
        out.text(f"{certificate.family.describe()}-free at density {fmt(certificate.density.minimum)}")
        return EXIT_OK
    out.witness(certificate.to_dict(g))
    return EXIT_VIOLATED


def cmd_verify_construction(args: argparse.Namespace, out: Output) -> int:
    if args.all:
        outcomes = verify_all(args.cap)
    elif args.id:
        outcomes = [_make_construction(args).verify(args.cap)]
    else:
        raise ValueError("verify-construction needs --id or --all")
    for outcome in outcomes:
        density = "-" if outcome.density is None else fmt(outcome.density)
        out.text(
            f"{'PASS' if outcome.passed else 'FAIL'}\t{outcome.spec.id}\t{outcome.spec.params}\t{density}"
        )
        for line in outcome.diagnostics:
            out.text(f"  {line}")
    out.json({"outcomes": [o.to_dict() for o in outcomes]})
    failed = [o for o in outcomes if not o.passed]
    for outcome in failed:
        out.witness(outcome.to_dict())
    return EXIT_VIOLATED if failed else EXIT_OK


def cmd_thresholds(args: argparse.Namespace, out: Output) -> int:
    if args.tree:
        value = tree_threshold(load_host(args.tree).small_graph)
        label = f"tree_threshold({args.tree})"
    elif args.id:
        tid = ThresholdId(args.id, args.r, args.t, args.d)
        value = closed_form(tid)
        label = tid.describe()
    else:
        raise ValueError("thresholds needs --id or --tree")
    out.text(fmt(value))
    out.json({"threshold": label, "value": value})
    return EXIT_OK


def cmd_report_table(args: argparse.Namespace, out: Output) -> int:
    report = threshold_table(with_constructions=not args.no_constructions)
    out.text(report.render_text())
    out.text()
    out.text(report.render_machine())
    out.json(report.to_dict())
    return EXIT_OK


def cmd_search(args: argparse.Namespace, out: Output) -> int:
    problem = SearchProblem(
        host=load_host(args.host),
        family=parse_family(args.family),
        caps=tuple(parse_ints(args.caps)) if args.caps else None,
        mode=SearchMode(args.mode),
        restarts=args.restarts,
        budget=args.budget,
        seed=args.seed,
        jobs=args.jobs,
        dedupe=not args.no_dedupe,
        include_constructions=not args.no_warm_start,
    )
    result = search(problem)
    out.text(f"best density\t{fmt(result.best_density)}")
    out.text(f"part sizes\t{list(result.best_pattern.part_sizes)}")
    out.text(f"patterns examined\t{result.patterns_examined}")
    out.text(f"family-free classes\t{result.patterns_family_free}")
    out.text(f"status\t{result.status}")
    out.json(result.to_dict())
    return EXIT_OK


def cmd_sample(args: argparse.Namespace, out: Output) -> int:
    report = estimate_property(load_graph(args.graph), parse_family(args.family), args.n, args.seed, args.jobs)
    out.text(f"estimate\t{fmt(report.estimate)}")
    out.text(f"half_width\t{fmt(report.half_width)}")
    out.text(f"n\t{report.n}")
    out.json(report.to_dict())
    return EXIT_OK


def cmd_exact(args: argparse.Namespace, out: Output) -> int:
    g = load_graph(args.graph)
    family = parse_family(args.family)
    probability = exact_property_probability(g, family, args.cap)
    out.text(fmt(probability))
    out.json({"family": family.to_dict(), "probability": probability})
    return EXIT_OK


def cmd_depcheck(args: argparse.Namespace, out: Output) -> int:
    report = one_dependence_check(
        load_graph(args.graph), parse_ints(args.A), parse_ints(args.B), args.n, args.seed
    )
    if report.conclusive:
        out.text(f"chi2\t{fmt(report.statistic)}")
        out.text(f"dof\t{report.dof}")
        out.text(f"p_value\t{fmt(report.p_value)}")
        out.text("independence rejected" if report.rejected else "independence not rejected")
    else:
        out.text("inconclusive")
    out.json(report.to_dict())
    if report.rejected:
        out.witness(report.to_dict())
        return EXIT_VIOLATED
    return EXIT_OK


def _emit_graph(g: PartiteGraph, out: Output) -> int:
    """Graph JSON to ``--out`` with a one-line summary, or straight to stdout without ``--out``."""
    document = partite_to_json(g)
    if out.out:
        out.text(f"{g.name or g.host.label()}: density {fmt(density_profile(g).minimum)}")
        out.json(document)
    else:
        print(json.dumps({**document, "run": out.run}, indent=2))
    return EXIT_OK


def cmd_construct(args: argparse.Namespace, out: Output) -> int:
    return _emit_graph(_make_construction(args).build(), out)


def cmd_glue(args: argparse.Namespace, out: Output) -> int:
    return _emit_graph(glue_paths(load_graph(args.g1), load_graph(args.g2)), out)


def cmd_blow_up(args: argparse.Namespace, out: Output) -> int:
    return _emit_graph(blow_up(load_graph(args.graph), args.N), out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: cores)")
    common.add_argument("--quiet", action="store_true", help="no text output, JSON only")
    common.add_argument("--log-level", default="WARNING", help="logging level for stderr")
    common.add_argument("--cap", type=int, default=None, help="transversal enumeration cap")
    common.add_argument("--out", default=None, help="write the JSON result to this file")

    parser = argparse.ArgumentParser(prog="hpartite", description="Weighted H-partite graph toolkit")
    parser.add_argument("--version", action="version", version=get_version() or "unknown")
    verbs = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, handler: Any, help_text: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    def construction_flags(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--id")
        sub.add_argument("--r", type=int)
        sub.add_argument("--t", type=int)
        sub.add_argument("--d", type=int)
        sub.add_argument("--alpha", type=float)
        sub.add_argument("--p1", type=float)
        sub.add_argument("--p2", type=float)
        sub.add_argument("--p3", type=float)
        sub.add_argument("--epsilon", type=float)
        sub.add_argument("--optimum", choices=("certified", "cubic"))
        sub.add_argument("--matching", help="extra missing edges, e.g. 2-3,4-5")

    sub = verb("validate", cmd_validate, "check a graph document")
    sub.add_argument("--graph", required=True)

    sub = verb("density", cmd_density, "print the pair densities")
    sub.add_argument("--graph", required=True)

    sub = verb("check", cmd_check, "decide family-freeness of every transversal")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--family", required=True)

    sub = verb("construct", cmd_construct, "build a named construction")
    construction_flags(sub)

    sub = verb("verify-construction", cmd_verify_construction, "verify constructions")
    construction_flags(sub)
    sub.add_argument("--all", action="store_true", help="run the whole verification suite")

    sub = verb("thresholds", cmd_thresholds, "evaluate a closed-form threshold")
    sub.add_argument("--id")
    sub.add_argument("--r", type=int)
    sub.add_argument("--t", type=int)
    sub.add_argument("--d", type=int)
    sub.add_argument("--tree", help="host name or file of a tree for its spectral threshold")

    sub = verb("report-table", cmd_report_table, "reproduce the table of known thresholds")
    sub.add_argument("--no-constructions", action="store_true")

    sub = verb("search", cmd_search, "search for the densest family-free pattern")
    sub.add_argument("--host", required=True)
    sub.add_argument("--family", required=True)
    sub.add_argument("--caps")
    sub.add_argument("--mode", choices=[m.value for m in SearchMode], default="exhaustive")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget", type=int)
    sub.add_argument("--restarts", type=int, default=32)
    sub.add_argument("--no-dedupe", action="store_true")
    sub.add_argument("--no-warm-start", action="store_true")

    sub = verb("sample", cmd_sample, "Monte Carlo estimate of a transversal property")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--family", required=True)
    sub.add_argument("--n", type=int, default=100000)
    sub.add_argument("--seed", type=int, default=0)

    sub = verb("exact", cmd_exact, "exact probability of a transversal property")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--family", required=True)

    sub = verb("depcheck", cmd_depcheck, "chi-square check of independence between vertex sets")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--A", required=True)
    sub.add_argument("--B", required=True)
    sub.add_argument("--n", type=int, default=100000)
    sub.add_argument("--seed", type=int, default=0)

    sub = verb("glue", cmd_glue, "glue two path-hosted graphs into a cycle-hosted one")
    sub.add_argument("--g1", required=True)
    sub.add_argument("--g2", required=True)

    sub = verb("blow-up", cmd_blow_up, "replace every vertex by N*w(v) clones")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--N", type=int, required=True)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    level = "WARNING" if args.quiet else args.log_level.upper()
    try:
        logging.basicConfig(
            level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
        )
        out = Output(args, argv)
        return int(args.handler(args, out))
    except json.JSONDecodeError as e:
        shared_logger.error(f"main(): malformed JSON: {e.msg} at line {e.lineno} column {e.colno}")
        print(f"error: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as e:
        shared_logger.error(f"main(): {args.verb} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
