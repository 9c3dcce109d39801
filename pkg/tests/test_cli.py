from __future__ import annotations

import json

import pytest

from hpartite_core.cli import main
from hpartite_core.constructions import Leila, MissingEdge


HEADER = "# hpartite "


def run(capsys, *argv: str) -> tuple[int, str, str]:
    """Exit code, stdout without the text-mode header line, and stderr."""
    code = main(list(argv))
    captured = capsys.readouterr()
    out = captured.out
    if out.startswith(HEADER):
        out = out.split("\n", 1)[1]
    return code, out, captured.err


def test_construct_then_validate(capsys, tmp_path) -> None:
    code, out, _ = run(capsys, "construct", "--id", "leila", "--r", "4")
    assert code == 0
    document = json.loads(out)
    assert document["host"]["n"] == 4
    path = tmp_path / "leila.json"
    path.write_text(out)
    code, out, _ = run(capsys, "validate", "--graph", str(path))
    assert code == 0
    assert out.strip() == "valid"
    code, out, _ = run(capsys, "density", "--graph", str(path))
    assert code == 0
    assert out.splitlines()[-1].startswith("minimum\t0.30094415309")


def test_validate_reports_violations(capsys, tmp_path) -> None:
    doc = {
        "host": {"n": 2, "edges": [[0, 1]]},
        "parts": {"0": [{"id": "a", "w": 0.9}], "1": [{"id": "b", "w": 1.0}]},
        "edges": [],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", "--graph", str(path))
    assert code == 1
    assert json.loads(out)["violations"][0]["kind"] == "weight-sum"


def test_check_exit_codes(capsys, graph_file, parity5, two_colour4) -> None:
    code, out, _ = run(capsys, "check", "--graph", str(graph_file(parity5)), "--family", "oddcycles")
    assert code == 0
    assert out.startswith("oddcycles-free")
    path = graph_file(two_colour4, "two_colour.json")
    code, out, _ = run(capsys, "check", "--graph", str(path), "--family", "trees:4")
    assert code == 1
    assert json.loads(out)["witness"]["choice"] == [0, 0, 0, 0]
    code, _, _ = run(capsys, "check", "--graph", str(path), "--family", "hamilton")
    assert code == 0


def test_check_respects_cap(capsys, graph_file, parity5) -> None:
    path = graph_file(parity5)
    code, _, err = run(capsys, "check", "--graph", str(path), "--family", "oddcycles", "--cap", "8")
    assert code == 2
    assert "32 transversals" in err


def test_thresholds(capsys) -> None:
    code, out, _ = run(capsys, "thresholds", "--id", "rho_b", "--r", "4")
    assert code == 0
    assert out.strip() == "0.300944153096758"
    code, out, _ = run(capsys, "thresholds", "--tree", "star:4")
    assert code == 0
    assert float(out) == pytest.approx(2 / 3)
    code, _, err = run(capsys, "thresholds", "--id", "dirac_lower", "--r", "3")
    assert code == 2
    assert "r >= 4" in err


def test_verify_construction(capsys) -> None:
    code, out, _ = run(capsys, "verify-construction", "--id", "missing_edge", "--r", "4", "--matching", "2-3")
    assert code == 0
    assert out.startswith("PASS\tmissing_edge")
    code, _, err = run(capsys, "verify-construction", "--id", "leila", "--r", "2")
    assert code == 2
    assert "r >= 3" in err
    code, _, err = run(capsys, "construct", "--id", "petersen")
    assert code == 2
    assert "Unsupported construction" in err


def test_report_table_machine_rows(capsys) -> None:
    code, out, _ = run(capsys, "report-table", "--no-constructions")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines() if line.startswith("ROW\t")]
    assert ["K4-P3", "="] == rows[4][1:3]
    assert float(rows[4][3]) == pytest.approx(0.5358983848)


def test_malformed_json(capsys, tmp_path) -> None:
    path = tmp_path / "broken.json"
    path.write_text('{"host": {"n": 2,\n "edges": [}')
    code, _, err = run(capsys, "density", "--graph", str(path))
    assert code == 2
    assert "line 2" in err


def test_missing_file(capsys, tmp_path) -> None:
    code, _, err = run(capsys, "density", "--graph", str(tmp_path / "absent.json"))
    assert code == 2
    assert "error:" in err


def test_quiet_output_is_deterministic(capsys, graph_file, two_colour4) -> None:
    path = str(graph_file(two_colour4))
    argv = ("sample", "--graph", path, "--family", "oddcycles", "--n", "5000", "--seed", "9", "--jobs", "1", "--quiet")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    document = json.loads(first[1])
    assert document["n"] == 5000
    assert document["run"]["seed"] == 9


def test_exact_and_depcheck(capsys, graph_file, two_colour4, parity5) -> None:
    code, out, _ = run(capsys, "exact", "--graph", str(graph_file(two_colour4)), "--family", "oddcycles")
    assert code == 0
    assert float(out) == pytest.approx(0.5)
    path = str(graph_file(parity5, "parity.json"))
    code, out, _ = run(capsys, "depcheck", "--graph", path, "--A", "0", "--B", "1", "--n", "500")
    assert code == 0
    assert out.strip() == "inconclusive"


def test_search_result_feeds_check(capsys, tmp_path) -> None:
    result = tmp_path / "result.json"
    code, out, _ = run(
        capsys,
        "search", "--host", "builtin:P3", "--family", "trees:3", "--caps", "2,2,2",
        "--jobs", "1", "--out", str(result),
    )
    assert code == 0
    label, value = out.splitlines()[0].split("\t")
    assert label == "best density"
    assert float(value) == pytest.approx(0.5, abs=1e-3)
    document = json.loads(result.read_text())
    assert document["certificate"]["verdict"] == "family-free"
    assert document["status"].startswith("certified lower bound")
    code, _, _ = run(capsys, "check", "--graph", str(result), "--family", "trees:3")
    assert code == 0


def test_blow_up_and_glue(capsys, graph_file, tmp_path) -> None:
    path = str(graph_file(Leila(4, alpha=0.5).build()))
    code, out, _ = run(capsys, "blow-up", "--graph", path, "--N", "6")
    assert code == 0
    assert len(json.loads(out)["parts"]["3"]) == 6
    code, _, err = run(capsys, "blow-up", "--graph", path, "--N", "4")
    assert code == 2
    assert "not an integer" in err
    code, _, err = run(capsys, "glue", "--g1", path, "--g2", str(graph_file(MissingEdge(4).build(), "m.json")))
    assert code == 2
    assert "not a path host" in err


def test_text_mode_header(capsys, graph_file, two_colour4) -> None:
    path = str(graph_file(two_colour4))
    argv = ["sample", "--graph", path, "--family", "oddcycles", "--n", "2000", "--seed", "5", "--jobs", "1"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith(HEADER)
    assert "seed=5" in lines[0]
    assert json.loads(lines[0].split("argv=", 1)[1]) == argv
    assert lines[1].startswith("estimate\t")
    assert sum(line.startswith(HEADER) for line in lines) == 1


def test_header_absent_from_quiet_and_graph_output(capsys) -> None:
    code, out, _ = run(capsys, "construct", "--id", "two_colour", "--r", "4")
    assert code == 0
    assert json.loads(out)["run"]["argv"] == ["construct", "--id", "two_colour", "--r", "4"]
    assert main(["thresholds", "--id", "rho_b", "--r", "4", "--quiet"]) == 0
    assert not capsys.readouterr().out.startswith(HEADER)


def test_verify_construction_quiet_output_is_byte_identical(capsys) -> None:
    argv = ("verify-construction", "--id", "leila", "--r", "4", "--quiet")
    outputs = {run(capsys, *argv)[1] for _ in range(3)}
    assert len(outputs) == 1
    document = json.loads(outputs.pop())
    assert document["outcomes"][0]["passed"]
    assert "seconds" not in document["outcomes"][0]
