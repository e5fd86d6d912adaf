"""Full problems x solvers grid at 100 simplex gradients; artifacts go to ``results/full``."""

import argparse
import sys
import time
from pathlib import Path

from fdsurrogate.cli import main

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/full")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    t0 = time.perf_counter()
    code = main(["run", "--config", str(ROOT / "configs" / "full.cfg"), "--out", args.out,
                 "--workers", str(args.workers), "-v"])
    print(f"wall time {time.perf_counter() - t0:.0f} s")
    sys.exit(code)
