"""Time the projection algorithms on growing spike-train signals.

Writes the same CSV columns as ``sepsparse bench`` and prints the
dp/lassp speedup per dimension.
"""
import argparse
import sys

from sepsparse.cli import BENCH_COLUMNS, bench_rows, write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, nargs="+", default=[1000, 3000, 10_000, 30_000, 100_000])
    ap.add_argument("--algos", default="dp,dp-fast,lassp,recover")
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    cfg = {"d": ",".join(map(str, args.d)), "algos": args.algos,
           "trials": str(args.trials), "seed": str(args.seed)}
    rows, mismatches = bench_rows(cfg, log=lambda m: print(m, file=sys.stderr))
    write_csv(rows, BENCH_COLUMNS, args.out)
    med = {(r["algo"], r["d"]): r["time_median"] for r in rows}
    for d in args.d:
        if ("dp", d) in med and ("lassp", d) in med:
            print(f"d={d}: dp/lassp = {med[('dp', d)] / med[('lassp', d)]:.1f}", file=sys.stderr)
    for m in mismatches:
        print("value mismatch:", m, file=sys.stderr)
    return 4 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
