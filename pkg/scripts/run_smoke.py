"""Run the three-problem smoke configuration and print the per-solver summary."""

import sys
from pathlib import Path

from fdsurrogate.cli import main

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/smoke"
    sys.exit(main(["run", "--config", str(ROOT / "configs" / "smoke.cfg"), "--out", out, "-v"]))
