import io
import subprocess
import sys

import pytest

from multishot import corpus_path
from multishot.cli import IncmodeConfig, parse_script, run
from multishot.cli.script import Assign, Capture, Ground, ScriptError, Solve, split_top

SIMPLE_OUTPUT = """\
Solving...
Answer: 1
p(0) p(3)
Solving...
Solving...
Solving...
Answer: 1
p(0) p(3)
SATISFIABLE

Models : 2
Calls : 4
"""


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_simple_script_output():
    code, out = cli(corpus_path("simple.lp"), "0", "--script", corpus_path("simple.script"))
    assert code == 0
    assert out == SIMPLE_OUTPUT


def test_output_is_deterministic():
    args = (corpus_path("simple.lp"), "0", "--script", corpus_path("simple.script"))
    assert cli(*args) == cli(*args)


def test_empty_script(tmp_path):
    code, out = cli(corpus_path("simple.lp"), "--script", write(tmp_path, "e.script", "# nothing\n"))
    assert (code, out) == (0, "")


def test_single_shot_grounds_base_only():
    code, out = cli(corpus_path("listing1.lp"))
    assert code == 0
    assert out.splitlines()[:3] == ["Solving...", "Answer: 1", "a(1) a(2)"]


def test_empty_program(tmp_path):
    code, out = cli(write(tmp_path, "empty.lp", ""))
    assert code == 0
    assert out == "Solving...\nAnswer: 1\n\nSATISFIABLE\n\nModels : 1\nCalls : 1\n"


def test_unsatisfiable_exit_code(tmp_path):
    code, out = cli(write(tmp_path, "u.lp", "a :- not a."))
    assert code == 1
    assert "UNSATISFIABLE" in out


def test_parse_error_exit_code(tmp_path):
    assert cli(write(tmp_path, "bad.lp", "a :- ."))[0] == 2


def test_model_count(tmp_path):
    f = write(tmp_path, "c.lp", "{a;b}.")
    assert cli(f, "0")[1].count("Answer:") == 4
    _, out = cli(f, "2")
    assert out.count("Answer:") == 2
    assert "Models : 2+" in out


def test_show_restricts_display(tmp_path):
    f = write(tmp_path, "s.lp", "a. b. #show a/0.")
    assert cli(f)[1].splitlines()[2] == "a"


def test_constant_flag(tmp_path):
    f = write(tmp_path, "k.lp", "#const n = 1. p(n).")
    assert cli(f, "-c", "n=7")[1].splitlines()[2] == "p(7)"
    assert cli(f)[1].splitlines()[2] == "p(1)"


def test_optimization_lines(tmp_path):
    f = write(tmp_path, "o.lp", "{a;b}. :- not a, not b. #minimize{1,x:a; 2,y:b}.")
    code, out = cli(f)
    assert out.splitlines()[:4] == ["Solving...", "Answer: 1", "a", "Optimization: 1"]
    assert "OPTIMUM FOUND" in out


def test_dump_after_base():
    code, out = cli(corpus_path("simple.lp"), "--dump-ground")
    lines = out.splitlines()
    assert len([l for l in lines if not l.startswith("#external")]) == 2
    assert lines[2:] == ["#external p(1).", "#external p(2).", "#external p(3)."]


def test_dump_of_empty_state(tmp_path):
    code, out = cli(write(tmp_path, "empty.lp", ""), "--dump-ground")
    assert (code, out) == (0, "")


def test_dump_listing1_both_parts(tmp_path):
    script = write(tmp_path, "l.script", "ground base\nground acid(42)\ndump\n")
    _, out = cli(corpus_path("listing1.lp"), "--script", script)
    assert len(out.splitlines()) == 5


def test_incmode_stops_on_first_model(tmp_path):
    f = write(tmp_path, "i.lp", "#include <incmode>.\na.\n")
    code, out = cli(f, "--trace", tmp_path / "t.txt")
    assert code == 0
    assert "Calls : 1" in out
    assert (tmp_path / "t.txt").read_text().splitlines() == [
        "create", "ground((base,()),(check,(0)))", "assignExternal(query(0),t)", "cleanup", "solve(({},{}))"]


def test_incmode_imin_and_imax(tmp_path):
    f = write(tmp_path, "i.lp", "#include <incmode>.\n#program step(t).\nx(t).\n")
    assert "Calls : 3" in cli(f, "--imin", "3")[1]
    g = write(tmp_path, "n.lp", "#include <incmode>.\n#program step(t).\n#program check(t).\n:- query(t).\n")
    code, out = cli(g, "--imax", "4")
    assert code == 1
    assert "Calls : 4" in out


def test_incmode_trace_shape(tmp_path):
    trace = tmp_path / "t.txt"
    cli(corpus_path("tohI.lp"), corpus_path("tohE.lp"), "--imax", "2", "--istop", "UNKNOWN", "--trace", trace)
    assert trace.read_text().splitlines() == [
        "create",
        "ground((base,()),(check,(0)))", "assignExternal(query(0),t)", "cleanup", "solve(({},{}))",
        "releaseExternal(query(0))", "ground((step,(1)),(check,(1)))", "assignExternal(query(1),t)",
        "cleanup", "solve(({},{}))",
    ]


def test_incmode_missing_step_program(tmp_path):
    f = write(tmp_path, "n.lp", "#include <incmode>.\n#program check(t).\n:- query(t).\n")
    assert cli(f, "--imax", "3")[0] == 2


def test_incmode_config_checks():
    with pytest.raises(ValueError):
        IncmodeConfig(imin=3, imax=2)
    with pytest.raises(ValueError):
        IncmodeConfig(istop="UNKNOWN")


def test_script_parsing():
    cmds = [c for _, c in parse_script(
        "ground base succ(1)\nassign p(3) true\nsolve limit 2 assume a(1) not b(2)\n"
        "capture here pos/3 from pos/4 at horizon\n")]
    assert cmds[0] == Ground((("base", ()), ("succ", cmds[0].parts[1][1])))
    assert isinstance(cmds[1], Assign) and cmds[1].value == "t"
    assert cmds[2].limit == 2 and len(cmds[2].must_true) == 1 and len(cmds[2].must_false) == 1
    assert cmds[3] == Capture("here", ("pos", 3), ("pos", 4), "horizon")


@pytest.mark.parametrize("line", ["frobnicate", "assign p(1)", "solve limit x", "ground p(X)",
                                  "capture x pos/3 from pos/3 at 1"])
def test_script_errors(line):
    with pytest.raises(ScriptError):
        parse_script(line)


def test_split_top():
    assert split_top("ground a(1, 2)  b") == ["ground", "a(1, 2)", "b"]


def test_capture_and_variables(tmp_path):
    prog = write(tmp_path, "m.lp", "#external at(1..3).\nhere(X,2) :- at(X).\n#const h = 2.\n")
    script = write(tmp_path, "m.script", "\n".join([
        "ground base",
        "let start = at(2)",
        "assign $start true",
        "solve",
        "assign $start false",
        "capture next at/1 from here/2 at h",
        "assign $next true",
        "echo round two",
        "solve",
    ]))
    _, out = cli(prog, "--script", script)
    assert out.splitlines()[:7] == ["Solving...", "Answer: 1", "at(2) here(2,2)", "round two",
                                    "Solving...", "Answer: 1", "at(2) here(2,2)"]


def test_capture_without_model(tmp_path):
    prog = write(tmp_path, "m.lp", "a :- not a.\n")
    script = write(tmp_path, "m.script", "ground base\nsolve\ncapture x p/1 from q/2 at 1\n")
    code, _ = cli(prog, "--script", script)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multishot", str(corpus_path("listing1.lp"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "a(1) a(2)" in proc.stdout
