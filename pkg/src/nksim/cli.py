"""Command-line driver.

    nksim similar --options run.opts --program trees4.lp --n 2 --k 4

Options come from a ``key = value`` file (``#`` starts a comment) and may be
overridden by flags of the same name.  Output is JSON lines: one record per
solution followed by a summary record.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

from .core.formats import ParseError, parse
from .core.program import Program, Solution
from .distances import DecodeError, Mode, make_measure, set_distance
from .methods import (METHODS, Infeasible, MethodFailure, NotFound,
                      SearchConfig, SolutionSet, UnsupportedMeasure, enumerate_solutions,
                      optimize_most, solve, solve_closest, solve_k_close, solve_k_close_set,
                      solve_maximal)

COMMANDS = ("solve", "similar", "diverse", "closest", "kclose", "maximal", "kcloseset")
EXIT_FOUND, EXIT_NONE, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class OptionsError(ValueError):
    pass


def _int(v: str) -> int:
    return int(v)


def _k(v: str):
    return "optimize" if v == "optimize" else int(v)


def _bool(v: str) -> bool:
    low = v.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(v)


def _choice(*allowed):
    def conv(v: str) -> str:
        if v not in allowed:
            raise ValueError(v)
        return v
    conv.allowed = allowed
    return conv


def _list(v: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in v.split(",") if x.strip())


def _ints(v: str) -> tuple[int, ...]:
    return tuple(int(x) for x in _list(v))


CONVERTERS = {
    "program": str,
    "format": _choice("auto", "dsl", "smodels"),
    "method": _choice(*METHODS),
    "distance": _choice("hamming", "nodal", "descendant", "plan"),
    "mode": _choice("similar", "diverse"),
    "n": _int,
    "k": _k,
    "distinguished": _list,
    "weights": _ints,
    "cutoff": _int,
    "edge_predicate": str,
    "action_predicate": str,
    "horizon": _int,
    "max_enumerated": _int,
    "max_set_size": _int,
    "time_budget": float,
    "seed": _int,
    "output": _choice("jsonl", "text"),
    "given": str,
    "learning": _bool,
    "heuristic": _choice("lowest", "activity"),
    "lo": _int,
    "hi": _int,
    "closest": _choice("search", "offline"),
}


@dataclass
class Options:
    program: Optional[str] = None
    format: str = "auto"
    method: str = "incremental"
    distance: str = "hamming"
    mode: str = "similar"
    n: Optional[int] = None
    k: Optional[object] = None
    distinguished: Optional[tuple[str, ...]] = None
    weights: Optional[tuple[int, ...]] = None
    cutoff: int = 3
    edge_predicate: str = "edge"
    action_predicate: str = "moveop"
    horizon: Optional[int] = None
    max_enumerated: int = 100_000
    max_set_size: int = 4
    time_budget: Optional[float] = None
    seed: int = 0
    output: str = "jsonl"
    given: Optional[str] = None
    learning: bool = False
    heuristic: str = "lowest"
    lo: Optional[int] = None
    hi: Optional[int] = None
    closest: str = "search"
    explicit: set = field(default_factory=set, repr=False, compare=False)


def _convert(key: str, raw: str, where: str):
    if key not in CONVERTERS:
        raise OptionsError(f"{where}: unknown key {key!r}")
    try:
        return CONVERTERS[key](raw)
    except ValueError:
        allowed = getattr(CONVERTERS[key], "allowed", None)
        hint = f" (expected one of {', '.join(allowed)})" if allowed else ""
        raise OptionsError(f"{where}: bad value {raw!r} for {key!r}{hint}") from None


def parse_options(text: str, source: str = "<options>") -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise OptionsError(f"{where}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key] = _convert(key, raw, where)
    return values


def load_options(path: Optional[str], overrides: Optional[dict] = None,
                 required=("n", "k")) -> Options:
    """Options from a file, with ``overrides`` (raw strings or typed) applied on top."""
    values = {}
    if path is not None:
        values.update(parse_options(Path(path).read_text(), str(path)))
    for key, raw in (overrides or {}).items():
        values[key] = _convert(key, raw, f"flag --{key}") if isinstance(raw, str) else raw
    opts = Options(**values)
    opts.explicit = set(values)
    missing = [k for k in required if getattr(opts, k) is None]
    if missing:
        where = f"{path}: " if path is not None else ""
        raise OptionsError(f"{where}missing required key(s): {', '.join(missing)}")
    return opts


def _read_program(opts: Options) -> Program:
    data = Path(opts.program).read_bytes()
    fmt = opts.format
    if fmt == "auto":
        first = data.lstrip().split(b"\n", 1)[0].split()
        fmt = "smodels" if first and all(t.isdigit() for t in first) else "dsl"
    program = parse(data, fmt)
    if opts.distinguished:
        program = program.with_distinguished(opts.distinguished)
    return program


def _read_given(path: str, program: Program) -> list[Solution]:
    dist = program.distinguished_ids()
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if isinstance(rec, dict):
            if rec.get("type", "solution") != "solution":
                continue
            rec = rec["atoms"]
        try:
            ids = program.ids(rec)
        except KeyError as e:
            raise OptionsError(f"{path}:{lineno}: unknown atom {e.args[0]!r}") from None
        out.append(Solution(ids & dist, ids, program))
    return out


def _measure(opts: Options, program: Program):
    return make_measure(opts.distance, weights=opts.weights, cutoff=opts.cutoff,
                        edge_predicate=opts.edge_predicate,
                        action_predicate=opts.action_predicate, horizon=opts.horizon)


def _config(opts: Options, program: Program, mode: Mode, k: int = 0) -> SearchConfig:
    return SearchConfig(n=opts.n or 1, k=k, mode=mode, method=opts.method,
                        measure=_measure(opts, program), max_enumerated=opts.max_enumerated,
                        max_set_size=opts.max_set_size, time_budget=opts.time_budget,
                        learning=opts.learning, heuristic=opts.heuristic, seed=opts.seed)


REQUIRED = {
    "solve": (),
    "similar": ("n", "k"),
    "diverse": ("n", "k"),
    "closest": ("given",),
    "kclose": ("k", "given"),
    "maximal": ("n", "k"),
    "kcloseset": ("k", "given"),
}


class _Writer:
    def __init__(self, out: TextIO, fmt: str, program: Program):
        self.out, self.fmt, self.program = out, fmt, program
        self.count = 0

    def solution(self, s: Solution) -> None:
        self.count += 1
        names = sorted(s.names)
        if self.fmt == "jsonl":
            rec = {"type": "solution", "index": self.count, "atoms": names}
            self.out.write(json.dumps(rec) + "\n")
        else:
            self.out.write(f"Solution {self.count}:\n  " + " ".join(names) + "\n")

    def summary(self, rec: dict) -> None:
        if self.fmt == "jsonl":
            self.out.write(json.dumps({"type": "summary", **rec}) + "\n")
        else:
            for key, val in rec.items():
                self.out.write(f"{key}: {val}\n")


def run(command: str, opts: Options, out: Optional[TextIO] = None, err: Optional[TextIO] = None,
        timing: bool = False) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if command not in COMMANDS:
        err.write(f"unknown command {command!r}\n")
        return EXIT_USAGE
    start = time.monotonic()
    if opts.program is None:
        err.write("no program given (set 'program' or pass --program)\n")
        return EXIT_USAGE
    try:
        program = _read_program(opts)
    except (ParseError, UnicodeDecodeError) as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        err.write(f"cannot read program: {e}\n")
        return EXIT_USAGE
    mode = {"similar": Mode.SIMILAR, "diverse": Mode.DIVERSE}.get(command, Mode(opts.mode))
    writer = _Writer(out, opts.output, program)
    summary = {"command": command, "method": opts.method, "mode": mode.value,
               "n": opts.n, "k": opts.k}
    solutions: list[Solution] = []
    try:
        given = _read_given(opts.given, program) if opts.given else []
        config = _config(opts, program, mode, opts.k if isinstance(opts.k, int) else 0)
        result = _dispatch(command, opts, program, config, given, summary)
        solutions = list(result)
        summary.update(found=len(solutions), proven_infeasible=False, method_failure=False)
        code = EXIT_FOUND if solutions else EXIT_NONE
    except (OptionsError, UnsupportedMeasure, ValueError) as e:
        if isinstance(e, DecodeError):
            err.write(f"decode error: {e}\n")
            return EXIT_PARSE
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        err.write(f"cannot read file: {e}\n")
        return EXIT_USAGE
    except NotFound as e:
        summary.update(found=0, delta=None, complete=isinstance(e, Infeasible),
                       proven_infeasible=isinstance(e, Infeasible),
                       method_failure=isinstance(e, MethodFailure), message=str(e))
        code = EXIT_NONE
    for s in solutions:
        writer.solution(s)
    if solutions and "delta" not in summary:
        summary["delta"] = set_distance(solutions, config.measure, mode)
    if timing:
        wall = time.monotonic() - start
        summary["wall_time"] = round(wall, 6)
        err.write(f"wall time: {wall:.3f}s\n")
    writer.summary(summary)
    return code


def _record(summary: dict, res: SolutionSet) -> None:
    summary.update(delta=res.delta, complete=res.complete, capped=res.capped)
    if res.method:
        summary["method"] = res.method
    if res.k_star is not None:
        summary["k_star"] = res.k_star


def _dispatch(command, opts, program, config, given, summary):
    mode = config.mode
    if opts.k == "optimize" and command not in ("similar", "diverse"):
        raise OptionsError("k = optimize is only meaningful for similar and diverse")
    if command == "solve":
        cap = opts.n if opts.n is not None else opts.max_enumerated
        sols, exhaustive = enumerate_solutions(program, min(cap, opts.max_enumerated), config)
        summary.update(method="enumerate", complete=exhaustive, delta=None)
        return sols
    if command in ("similar", "diverse"):
        if opts.k == "optimize":
            lo = opts.lo if opts.lo is not None else 0
            res = optimize_most(program, config, lo, opts.hi)
        else:
            res = solve(program, config)
        _record(summary, res)
        return res.solutions
    if command == "maximal":
        res = solve_maximal(program, config.measure, config.k, mode, opts.n, config)
        _record(summary, res)
        return res.solutions
    if not given:
        raise OptionsError("the given solution file is empty")
    if command == "kclose":
        s = solve_k_close(program, config.measure, given, config.k, mode, config)
        summary.update(delta=set_distance(given + [s], config.measure, mode), complete=True)
        return [s]
    if command == "closest":
        s, k_star = solve_closest(program, config.measure, given, mode, config,
                                  offline=opts.closest == "offline", lo=opts.lo or 0, hi=opts.hi)
        summary.update(delta=k_star, k_star=k_star, complete=True)
        return [s]
    res = solve_k_close_set(program, config.measure, given, config.k, mode,
                            opts.max_set_size, config)
    _record(summary, res)
    summary["reference_delta"] = set_distance(given, config.measure, mode)
    return res.solutions


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--options", metavar="FILE", help="key = value options file")
    common.add_argument("--timing", action="store_true",
                        help="report wall time (stderr and summary record)")
    for key in CONVERTERS:
        common.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE",
                            default=None)
    parser = argparse.ArgumentParser(prog="nksim", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "enumerate answer sets",
        "similar": "n solutions with set distance at most k",
        "diverse": "n solutions with set distance at least k",
        "closest": "the solution nearest (farthest from) a given set",
        "kclose": "one more solution within k of a given set",
        "maximal": "greedy maximal k-similar / k-diverse set",
        "kcloseset": "a set whose distance is close to (far from) a given set's",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items()
                 if k in CONVERTERS and v is not None}
    try:
        opts = load_options(args.options, overrides, REQUIRED[args.command])
    except OptionsError as e:
        print(f"options error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"cannot read options: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.command in ("similar", "diverse") and "mode" in opts.explicit and opts.mode != args.command:
        print(f"note: mode = {opts.mode} ignored by the {args.command} command", file=sys.stderr)
    return run(args.command, opts, timing=args.timing)


if __name__ == "__main__":
    sys.exit(main())
