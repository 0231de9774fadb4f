from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from twistgraph.cli import run

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def _run(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()]


def test_iso_graph_a():
    code, recs = _run("iso", str(INSTANCES / "graph_A.json"))
    assert code == 0
    (mm,) = [r for r in recs if r["check"] == "iso.matrix_model"]
    assert mm["detail"] == {"cuntz_pimsner": "2x2", "groupoid": ["2x2"]}


def test_twist_verify_corrupted():
    code, recs = _run("twist-verify", str(INSTANCES / "corrupted_cocycle.json"))
    assert code == 1
    (triple,) = [r for r in recs if r["check"] == "cocycle.triple"]
    assert triple["status"] == "fail" and len(triple["counterexample"]) == 4


def test_classify_empty():
    code, recs = _run("classify", str(INSTANCES / "empty.json"))
    assert code == 0
    d = recs[0]["detail"]
    assert d["rg"] == d["sg"] == d["sce"] == d["sources"] == []


@pytest.mark.parametrize("command", ["classify", "boundary", "groupoid", "twist-verify", "relations", "iso", "factor"])
@pytest.mark.parametrize("name", ["graph_A", "system", "factor_chain"])
def test_commands_pass(command, name):
    code, recs = _run(command, str(INSTANCES / f"{name}.json"))
    assert code == 0, [r for r in recs if r["status"] != "pass"]
    assert all(list(r) == ["check", "instance", "status", "counterexample", "detail"] for r in recs)


def test_cyclic_graph_commands():
    path = str(INSTANCES / "two_loop.json")
    assert _run("relations", path)[0] == 0
    assert _run("iso", path)[0] == 0
    code, recs = _run("twist-verify", path)
    assert code == 3 and recs[-1]["check"] == "bound"


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"graph": 3}')
    code, recs = _run("classify", str(bad))
    assert code == 2 and recs[0]["status"] == "error"


def test_output_is_deterministic():
    outs = set()
    for _ in range(2):
        buf = io.StringIO()
        run(["twist-verify", str(INSTANCES / "system.json")], buf)
        outs.add(buf.getvalue())
    assert len(outs) == 1


def test_corpus_small():
    code, recs = _run("corpus", "--seed", "1", "--count", "3")
    assert code == 0 and len(recs) > 177


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistgraph.cli", "classify", str(INSTANCES / "graph_A.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["detail"]["rg"] == ["v"]
