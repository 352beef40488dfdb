"""Write the generator fixtures (both formats) and their answer-set counts."""
import argparse
import json
from pathlib import Path

from nksim.core import enumerate_bruteforce, serialize
from nksim.engine import enumerate_answer_sets
from nksim.testkit import RandomParams, fixture_programs, gen_random, write_fixtures


def golden_random(seeds=range(1, 11)) -> dict:
    """Oracle answer sets of default-size random programs, keyed by seed."""
    out = {}
    for seed in seeds:
        p = gen_random(RandomParams(seed=seed))
        sets = sorted(sorted(p.names(X)) for X in enumerate_bruteforce(p))
        out[str(seed)] = {"program": serialize(p).decode(), "answer_sets": sets}
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    programs = fixture_programs()
    paths = write_fixtures(args.out, programs)
    counts = {name: len(enumerate_answer_sets(p)) for name, p in programs.items()}
    (Path(args.out) / "counts.json").write_text(json.dumps(counts, indent=2, sort_keys=True) + "\n")
    (Path(args.out) / "golden_random.json").write_text(
        json.dumps(golden_random(), indent=2, sort_keys=True) + "\n")
    for name, c in sorted(counts.items()):
        print(f"{name:16s} {c:5d} answer sets")
    print(f"wrote {len(paths)} program files to {args.out}")


if __name__ == "__main__":
    main()
