"""Most similar / most diverse pairs of trees: binary search versus exhaustive pair scan."""
import argparse
import time
from itertools import combinations

from nksim.core import project
from nksim.distances import Mode, make_measure
from nksim.engine import enumerate_answer_sets
from nksim.methods import NotFound, SearchConfig, optimize_most
from nksim.testkit import gen_trees


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--leaves", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--distances", nargs="+", default=["nodal", "descendant"])
    ap.add_argument("--methods", nargs="+", default=["offline", "iterative", "incremental"])
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()
    print("leaves distance   mode     optimum  method       k_star  seconds")
    for m in args.leaves:
        p = gen_trees(m)
        sols = [project(X, p) for X in enumerate_answer_sets(p)]
        for dname in args.distances:
            measure = make_measure(dname)
            ds = [measure.pair(a, b) for a, b in combinations(sols, 2)]
            for mode in Mode:
                best = min(ds) if mode is Mode.SIMILAR else max(ds)
                if args.n != 2:
                    best = "-"
                for method in args.methods:
                    start = time.monotonic()
                    try:
                        k = optimize_most(p, SearchConfig(n=args.n, mode=mode, method=method,
                                                          measure=measure)).k_star
                    except NotFound as e:
                        k = type(e).__name__
                    dt = time.monotonic() - start
                    print(f"{m:6d} {dname:10s} {mode.value:8s} {best!s:>7}  {method:12s} "
                          f"{k!s:>6}  {dt:7.2f}")


if __name__ == "__main__":
    main()
