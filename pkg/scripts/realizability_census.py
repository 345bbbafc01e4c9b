"""Fraction of attaching classes that are fibrations, by k and n."""

import argparse

from fiblab import homotopy_data as hd
from fiblab.classifier import count_realizable, star


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=60)
    args = ap.parse_args()
    print(f"{'k':>2} {'n':>4} {'n2':>5} {'count':>6} {'frac':>6} star")
    for k in range(2, 7):
        for n in range(2, args.n_max + 1):
            N = hd.n2(k, n)
            c = count_realizable(k, n)
            print(f"{k:>2} {n:>4} {N:>5} {c:>6} {c / N:>6.3f} {'*' if star(n) else ''}")


if __name__ == "__main__":
    main()
