"""Runs the command line tool over the bundled instances and shows the records.

Each command prints one JSON line per check and exits 0 (all pass), 1 (a
check failed), 2 (unreadable instance) or 3 (a search bound was exceeded).
"""

from __future__ import annotations

import io
import json
from pathlib import Path

from twistgraph.cli import run

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

for argv in (
    ["classify", "empty.json"],
    ["iso", "graph_A.json"],
    ["twist-verify", "corrupted_cocycle.json"],
    ["factor", "factor_chain.json"],
    ["relations", "two_loop.json", "--bound", "2"],
):
    argv = [argv[0], str(INSTANCES / argv[1]), *argv[2:]]
    buf = io.StringIO()
    code = run(argv, buf)
    print(f"$ twistgraph {argv[0]} {Path(argv[1]).name} {' '.join(argv[2:])}".rstrip() + f"   -> exit {code}")
    for line in buf.getvalue().splitlines():
        rec = json.loads(line)
        extra = f"  counterexample {rec['counterexample']}" if rec["counterexample"] is not None else ""
        print(f"    {rec['status']:5} {rec['check']}{extra}")
