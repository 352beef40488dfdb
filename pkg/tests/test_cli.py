import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from nksim.cli import Options, OptionsError, load_options, main, parse_options, run
from nksim.core import parse
from nksim.distances import Mode, make_measure, set_distance
from nksim.testkit import gen_subsets, gen_trees, serialize

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def subsets(tmp_path):
    path = tmp_path / "subsets.lp"
    path.write_bytes(serialize(gen_subsets(["a", "b", "c"])))
    return path


def call(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_linguist_options(tmp_path):
    f = tmp_path / "nk.opts"
    f.write_text("# three diverse phylogenies\nn = 3\nk = 20\nmode = diverse\n"
                 "distance = nodal\nmethod = incremental  # online search\n")
    o = load_options(str(f))
    assert (o.n, o.k, o.mode, o.distance, o.method) == (3, 20, "diverse", "nodal", "incremental")


def test_flags_override_file(tmp_path):
    f = tmp_path / "o"
    f.write_text("n = 3\nk = 2\n")
    assert load_options(str(f), {"k": "5"}).k == 5


def test_missing_key(tmp_path):
    f = tmp_path / "o"
    f.write_text("k = 2\n")
    with pytest.raises(OptionsError, match="missing.*n"):
        load_options(str(f))


def test_bad_values_name_line():
    with pytest.raises(OptionsError, match="x.opts:2.*mode"):
        parse_options("n = 2\nmode = both\n", "x.opts")
    with pytest.raises(OptionsError, match=":1.*unknown key"):
        parse_options("colour = red\n", "x.opts")
    with pytest.raises(OptionsError, match=":1"):
        parse_options("n = two\n", "x.opts")
    assert parse_options("k = optimize")["k"] == "optimize"


def test_similar_found(subsets, capsys):
    code, out, _ = call(["similar", "--program", subsets, "--n", 3, "--k", 2,
                         "--method", "offline"], capsys)
    recs = records(out)
    assert code == 0
    sols = [r for r in recs if r["type"] == "solution"]
    summary = recs[-1]
    assert len(sols) == 3 and summary["type"] == "summary" and summary["delta"] <= 2


def test_self_consistency(capsys):
    prog = FIXTURES / "trees4.lp"
    for cmd, k in (("similar", 4), ("diverse", 6)):
        code, out, _ = call([cmd, "--program", prog, "--n", 3, "--k", k, "--distance", "nodal",
                             "--method", "offline"], capsys)
        assert code == 0
        recs = records(out)
        program = parse(prog.read_bytes())
        sols = [program.ids(r["atoms"]) for r in recs if r["type"] == "solution"]
        m = make_measure("nodal")
        assert recs[-1]["delta"] == set_distance([program.names(s) for s in sols], m, Mode(cmd))


def test_infeasible_exit(subsets, capsys):
    code, out, _ = call(["similar", "--program", subsets, "--n", 2, "--k", 0,
                         "--method", "offline"], capsys)
    summary = records(out)[-1]
    assert code == 1 and summary["proven_infeasible"] is True and summary["method_failure"] is False


def test_method_failure_exit(capsys):
    code, out, _ = call(["similar", "--program", FIXTURES / "adversarial.lp", "--n", 2, "--k", 1,
                         "--method", "iterative"], capsys)
    summary = records(out)[-1]
    assert code == 1 and summary["method_failure"] is True and not summary["proven_infeasible"]


def test_bad_smodels_exit(tmp_path, capsys):
    bad = tmp_path / "bad.sm"
    bad.write_text("1 2 1 1\n0\n")
    assert call(["solve", "--program", bad, "--format", "smodels"], capsys)[0] == 3
    weight = tmp_path / "w.sm"
    weight.write_text("5 2 1 1 0 3 1\n0\n2 p\n0\nB+\n0\nB-\n0\n1\n")
    assert call(["solve", "--program", weight], capsys)[0] == 3


def test_usage_errors(subsets, capsys):
    assert call(["similar", "--program", subsets, "--n", 2], capsys)[0] == 2
    assert call(["similar", "--program", subsets, "--n", 2, "--k", 1, "--mode", "both"],
                capsys)[0] == 2
    assert call(["similar", "--program", subsets, "--n", 2, "--k", 1,
                 "--method", "reformulate", "--distance", "nodal"], capsys)[0] == 2
    assert call(["kclose", "--program", subsets, "--k", 1, "--given", "/nonexistent"],
                capsys)[0] == 2


def test_solve_enumerates(capsys):
    code, out, _ = call(["solve", "--program", FIXTURES / "trees4.sm", "--distinguished", "edge/2"],
                        capsys)
    recs = records(out)
    assert code == 0 and recs[-1]["found"] == 15 and recs[-1]["complete"] is True


def test_optimize(capsys):
    code, out, _ = call(["diverse", "--program", FIXTURES / "trees4.lp", "--n", 2,
                         "--k", "optimize", "--distance", "nodal", "--method", "offline"], capsys)
    assert code == 0 and records(out)[-1]["k_star"] == 8


def test_given_commands(subsets, tmp_path, capsys):
    given = tmp_path / "given.jsonl"
    given.write_text(json.dumps({"type": "solution", "atoms": []}) + "\n")
    base = ["--program", subsets, "--given", given]
    code, out, _ = call(["closest", *base, "--mode", "diverse"], capsys)
    assert code == 0 and records(out)[-1]["k_star"] == 3
    code, out, _ = call(["kclose", *base, "--k", 1], capsys)
    assert code == 0 and len(records(out)[0]["atoms"]) == 1
    code, out, _ = call(["kcloseset", *base, "--k", 0], capsys)
    assert code == 0
    code, out, _ = call(["maximal", "--program", subsets, "--n", 8, "--k", 1], capsys)
    assert code == 0 and records(out)[-1]["delta"] <= 1


def test_text_output(subsets, capsys):
    code, out, _ = call(["similar", "--program", subsets, "--n", 2, "--k", 1, "--output", "text"],
                        capsys)
    assert code == 0 and out.startswith("Solution 1:") and "delta: 1" in out


def test_timing_only_on_request(subsets, capsys):
    _, out, _ = call(["similar", "--program", subsets, "--n", 2, "--k", 1], capsys)
    assert "wall_time" not in records(out)[-1]
    _, out, err = call(["similar", "--program", subsets, "--n", 2, "--k", 1, "--timing"], capsys)
    assert "wall_time" in records(out)[-1] and "wall time" in err


def test_deterministic_subprocess(tmp_path):
    opts = tmp_path / "run.opts"
    opts.write_text(f"program = {FIXTURES / 'trees4.lp'}\nn = 3\nk = 6\nmode = diverse\n"
                    "distance = nodal\nmethod = incremental\nheuristic = activity\nseed = 11\n")
    cmd = [sys.executable, "-m", "nksim.cli", "diverse", "--options", str(opts)]
    runs = [subprocess.run(cmd, capture_output=True, check=False).stdout for _ in range(2)]
    assert runs[0] and runs[0] == runs[1]
