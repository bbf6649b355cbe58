"""Kernel sizes and solve times on G(n, p) graphs, averaged over seeds.

    python3 scripts/er_table.py                      # small rows, nominal p
    python3 scripts/er_table.py --paper-density      # halve p to match reported m
    python3 scripts/er_table.py --rows 64:0.2 128:0.15 --seeds 10 --budget-s 30
"""

import argparse
import sys

from ecckit.cli_io import rows_to_csv, run_bench

DEFAULT_ROWS = ["64:0.15", "64:0.2", "128:0.1", "128:0.15", "256:0.075", "256:0.1",
                "512:0.05", "512:0.065"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--rows", nargs="+", default=DEFAULT_ROWS, help="n:p pairs")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--budget-s", type=float, default=10.0)
    ap.add_argument("--paper-density", action="store_true")
    ap.add_argument("--configs", nargs="+", default=["gramm-only", "full"])
    ap.add_argument("--no-solve", action="store_true", help="report kernels only")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--csv", default=None, help="also write every row to this CSV file")
    args = ap.parse_args(argv)

    instances = []
    for spec in args.rows:
        n, p = spec.split(":")
        instances.append({"gnp": [int(n), float(p)], "seeds": list(range(args.seeds)),
                          "name": f"G({n},{p})"})
    suite = {"instances": instances, "configs": args.configs, "budget_s": args.budget_s,
             "paper_density": args.paper_density, "solve": not args.no_solve}
    rows = run_bench(suite, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rows_to_csv(rows))

    means = {(r.name, r.config): r for r in rows if r.status == "mean"}
    header = f"{'graph':>14} {'m':>8} | {'gramm kernel':>12} {'t_solve':>8} | {'VCC kernel':>10} {'t_solve':>8}"
    print(header)
    print("-" * len(header))
    for inst in instances:
        key = inst["name"] + "-mean"
        g = means.get((key, "gramm-only"))
        f = means.get((key, "full"))
        m = (g or f).m
        print(f"{inst['name']:>14} {m:>8} | {g.ecc_kernel if g else '':>12} {g.t_solve if g else '':>8} | "
              f"{f.vcc_kernel if f else '':>10} {f.t_solve if f else '':>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
