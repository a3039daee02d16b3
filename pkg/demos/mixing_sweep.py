"""
AUC as community structure fades
================================

Runs the mixing-parameter grid through the same code path as ``mxdisc
sweep`` and prints a small table.  Larger mu means more edges leave their
planted community, so detection gets harder.
"""

import json
import sys
import tempfile
from pathlib import Path

from mxdisc.cli import run_sweep

config = json.loads((Path(__file__).parent / "configs" / "sweep_mu.json").read_text())
if "--quick" in sys.argv:
    config["experiments"][0]["repetitions"] = 2

with tempfile.TemporaryDirectory() as tmp:
    run_sweep(config, Path(tmp))
    print((Path(tmp) / "table.csv").read_text())
