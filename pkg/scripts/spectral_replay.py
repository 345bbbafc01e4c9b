"""Print every page of the replayed spectral sequence for one (k, n, λ)."""

import argparse

from fiblab.serre import fiber_homology, replay_fiber


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--lam", type=int, default=2)
    ap.add_argument("--max-degree", type=int, default=16)
    args = ap.parse_args()
    rep = replay_fiber(args.k, args.n, args.lam, args.max_degree)
    for page in rep.pages:
        print(f"== E_{page.r}  (p q free torsion)")
        print(page.dump(), end="")
    closed = fiber_homology(args.k, args.lam, args.max_degree)
    print("== reduced homology of the fiber")
    for d, g in rep.homology:
        print(f"H_{d} = {g}")
    print("closed form agrees:", list(rep.homology) == closed)


if __name__ == "__main__":
    main()
