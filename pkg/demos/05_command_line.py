"""
The command-line tool
=====================

The same solver is available as ``fairpart``. This script drives it
in-process: one partition with an SVG drawing, then a small ensemble of
random polygons with a summary of how they went.
"""

import json
import tempfile
from pathlib import Path

from fairpart.cli import main

work = Path(tempfile.mkdtemp())
(work / "square.json").write_text(json.dumps({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}))

rc = main(["partition", "--n", "4", "--in", str(work / "square.json"),
           "--out", str(work / "square4.json"), "--svg", str(work / "square4.svg")])
print("partition exit code", rc)
print("perimeters", json.loads((work / "square4.json").read_text())["report"]["perimeters"])

rc = main(["ensemble", "--count", "10", "--vertices", "3..8", "--n", "4", "--seed", "1",
           "--out", str(work / "ensemble.json")])
report = json.loads((work / "ensemble.json").read_text())
print("ensemble exit code", rc, "success rate", report["aggregates"]["success_rate"])
print("outputs in", work)
