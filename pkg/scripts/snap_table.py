"""Solve the downloaded SNAP graphs and compare with the published optima.

Run scripts/fetch_snap.sh first.  Prints kernel sizes, the cover size and
whether it matches the reference value.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from ecckit.cli_io import parse_edge_list, reduce_only
from ecckit.pipeline import PipelineConfig, solve_ecc
from ecckit.vcc_solve import SolveBudget

REFERENCE = {
    "ca-GrQc": 3737,
    "ca-HepTh": 9190,
    "p2p-Gnutella08": 19000,
    "p2p-Gnutella09": 24117,
    "p2p-Gnutella25": 53367,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default=os.environ.get("ECCKIT_DATA", "data"))
    ap.add_argument("--budget-s", type=float, default=120.0)
    args = ap.parse_args(argv)
    data = Path(args.data)
    print(f"{'graph':>16} {'n':>7} {'m':>7} {'gramm':>6} {'vcc':>5} {'theta_E':>8} {'ref':>7} {'status':>9} {'time':>7}")
    for name, ref in REFERENCE.items():
        path = next((p for p in (data / f"{name}.txt.gz", data / f"{name}.txt") if p.exists()), None)
        if path is None:
            print(f"{name:>16}  missing, run scripts/fetch_snap.sh")
            continue
        g = parse_edge_list(path)
        gramm = reduce_only(g, PipelineConfig.gramm())["ecc_kernel"]
        t = time.perf_counter()
        res = solve_ecc(g, PipelineConfig(), SolveBudget(time_s=args.budget_s))
        dt = time.perf_counter() - t
        mark = "ok" if res.size == ref else "DIFF"
        print(f"{name:>16} {g.n:>7} {g.m:>7} {gramm:>6} {res.stats['vcc_kernel']:>5} {res.size:>8} "
              f"{ref:>7} {res.status:>9} {dt:>6.1f}s {mark}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
