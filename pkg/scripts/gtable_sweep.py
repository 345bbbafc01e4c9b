"""Tabulate G_k^n for k = 2..6 over a range of n and write CSV."""

import argparse
import csv
import sys

from fiblab.classifier import g_count


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=200)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["k", "n", "gcd", "star", "count", "column"])
    for k in range(2, 7):
        for n in range(2, args.n_max + 1):
            r = g_count(k, n)
            w.writerow([k, n, r.d, int(r.star), "" if r.count is None else r.count, r.column])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
