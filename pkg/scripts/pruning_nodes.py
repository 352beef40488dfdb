"""Search nodes (decisions) of the incremental method versus post-hoc filtering.

Post-hoc filtering runs the same engine without the pruner and keeps each
enumerated solution compatible with those kept so far.
"""
import argparse

from nksim.distances import DistancePruner, Mode, compatible, make_measure
from nksim.methods import SearchConfig
from nksim.methods.online import incremental_session
from nksim.testkit import gen_trees


def incremental_nodes(program, measure, mode, n, k, **kw):
    cfg = SearchConfig(n=n, k=k, mode=mode, measure=measure, method="incremental", **kw)
    state = incremental_session(program, cfg, n)
    return state.stats.decisions, len(state.solutions)


def posthoc_nodes(program, measure, mode, n, k, **kw):
    cfg = SearchConfig(n=n, k=k, mode=mode, measure=measure, method="incremental", **kw)
    state = cfg.engine(program)
    kept = []
    while len(kept) < n and state.next_answer_set() is not None:
        s = state.solutions[-1]
        if compatible(s, kept, measure, mode, k):
            kept.append(s)
    return state.stats.decisions, len(kept)


def sweep(program, measure, modes=(Mode.SIMILAR, Mode.DIVERSE), ns=(2, 3), ks=range(0, 13), **kw):
    for mode in modes:
        for n in ns:
            for k in ks:
                a, fa = incremental_nodes(program, measure, mode, n, k, **kw)
                b, fb = posthoc_nodes(program, measure, mode, n, k, **kw)
                yield mode, n, k, a, fa, b, fb


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--leaves", type=int, default=4)
    ap.add_argument("--distance", default="nodal")
    ap.add_argument("--learning", action="store_true")
    args = ap.parse_args()
    program = gen_trees(args.leaves)
    measure = make_measure(args.distance)
    print("mode     n  k  incremental(found)  posthoc(found)")
    for mode, n, k, a, fa, b, fb in sweep(program, measure, learning=args.learning):
        mark = "<" if a < b else "=" if a == b else ">"
        print(f"{mode.value:8s} {n}  {k:2d}  {a:6d} ({fa})  {mark}  {b:6d} ({fb})")


if __name__ == "__main__":
    main()
