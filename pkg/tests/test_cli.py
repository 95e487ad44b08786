from pathlib import Path

import pytest

import kripkebench.cli
from kripkebench.fixtures import DISJUNCTION_BY_IMPLICATION
from kripkebench.formula import render
from kripkebench.validity import pigeonhole_formula
from kripkebench.values import godel_chain

MODELS = Path(__file__).resolve().parent.parent / "models"
RHS = render(DISJUNCTION_BY_IMPLICATION)


def test_eval(cli):
    assert cli("eval", "--model", MODELS / "lambda.model", "--world", "b", "p & q") == (0, "true\n", "")
    code, out, _ = cli("eval", "--model", MODELS / "lambda.model", "--world", "a", "p & q")
    assert (code, out) == (1, "false\n")


def test_valid_prints_a_replayable_counterexample(cli, tmp_path):
    code, out, _ = cli("valid", "--logic", "ipl", "--max-worlds", "3", "p | ~p")
    assert code == 1
    header, *model_lines = out.splitlines()
    assert header == "COUNTEREXAMPLE (ipl) frame 2 world 0"
    path = tmp_path / "counter.model"
    path.write_text("\n".join(model_lines) + "\n")
    assert cli("eval", "--model", path, "--world", "0", "p | ~p")[:2] == (1, "false\n")


def test_valid_classical(cli):
    assert cli("valid", "--logic", "cpl", "--max-worlds", "1", "p | ~p")[:2] == (0, "VALID (cpl, bound 1)\n")
    assert cli("valid", "--logic", "cpl", "--max-worlds", "4", "p -> p")[:2] == (0, "VALID (cpl, bound 4)\n")


def test_dummett_axiom(cli):
    assert cli("valid", "--logic", "gdl", "--max-worlds", "5", "(p -> q) | (q -> p)")[0] == 0
    code, out, _ = cli("valid", "--logic", "ipl", "--max-worlds", "3", "(p -> q) | (q -> p)")
    assert code == 1
    assert "worlds 0 1 2" in out


def test_equiv(cli):
    assert cli("equiv", "--logic", "gdl", "--max-worlds", "4", "p | q", RHS)[:2] == (0, "VALID (gdl, bound 4)\n")
    code, out, _ = cli("equiv", "--logic", "ipl", "--max-worlds", "3", "p | q", RHS)
    assert code == 1
    assert f"fails: {RHS}  =>  p | q" in out


def test_pigeonhole(cli):
    assert cli("pigeonhole", "1")[:2] == (0, "p0 -> p1\n")
    assert cli("pigeonhole", "2")[1] == "(p0 -> p1) | ((p0 -> p2) | (p1 -> p2))\n"


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_godel_fan_reverifies_through_eval(cli, tmp_path, n):
    code, out, _ = cli("godel-fan", n)
    assert code == 0
    *model_lines, verdict = out.splitlines()
    formula = render(pigeonhole_formula(n))
    assert verdict == f"root k does not force {formula}"
    path = tmp_path / "fan.model"
    path.write_text("\n".join(model_lines) + "\n")
    assert cli("eval", "--model", path, "--world", "k", formula)[:2] == (1, "false\n")
    assert cli("eval", "--model", path, "--world", "k0", "p0")[:2] == (0, "true\n")


def test_frames(cli):
    expected = "# frame 0\nworlds 0\n# frame 1\nworlds 0 1\n# frame 2\nworlds 0 1\norder 0 1\n"
    assert cli("frames", "--count", "3") == (0, expected, "")
    _, out, _ = cli("frames", "--count", "10", "--up-to-iso")
    assert out.count("# frame") == 8


def test_mv_eval(cli):
    code, out, _ = cli("mv", "eval", "--valuation", MODELS / "sample.val", "p | T")
    assert (code, out) == (0, "<| ones>\ndesignated\n")
    code, out, _ = cli("mv", "eval", "--valuation", MODELS / "sample.val", "q")
    assert (code, out) == (1, "<{0} | zeros>\nnot designated\n")


def test_mv_check_lemma3(cli):
    code, out, _ = cli("mv", "check-lemma3", "--depth", "3", "--frames", "5", "--trials", "200", "--seed", "7")
    assert code == 0
    assert "violations: 0\n" in out
    assert out.endswith("OK\n")


def test_clone_not_definable(cli):
    code, out, _ = cli("clone", "--model", MODELS / "lambda.model", "--connectives", "neg,or,imp",
                       "--target", "p & q", "--generators", "p,q,T")
    assert code == 1
    assert out == "NOT-DEFINABLE\nclosure size: 4\n{}\n{a, b}\n{b, c}\n{a, b, c}\n"


def test_clone_definable(cli):
    code, out, _ = cli("clone", "--model", MODELS / "v.model", "--connectives", "neg", "--target", "~p",
                       "--generators", "p,T")
    assert (code, out) == (0, "DEFINABLE\nwitness: ~p\n")


@pytest.mark.parametrize("model, connectives, target", [
    ("lambda-lean.model", "neg,or,and", "p -> q"),
    ("two-chains.model", "neg,imp", "p | q"),
    ("two-chains.model", "neg,and", "p | q"),
    ("v.model", "neg,and,imp", "p | q"),
    ("negation-chain.model", "and,or,imp", "~p"),
])
def test_shipped_models_give_negative_certificates(cli, model, connectives, target):
    code, out, _ = cli("clone", "--model", MODELS / model, "--connectives", connectives, "--target", target)
    assert code == 1
    assert out.startswith("NOT-DEFINABLE\n")


def test_syntax_error_exits_2(cli):
    code, out, err = cli("valid", "--logic", "ipl", "--max-worlds", "2", "p &")
    assert (code, out) == (2, "")
    assert "syntax error at byte 3" in err


def test_missing_file_exits_2(cli, tmp_path):
    code, _, err = cli("eval", "--model", tmp_path / "absent.model", "--world", "a", "p")
    assert code == 2
    assert "cannot read" in err


def test_ceiling_exits_2(cli):
    formula = render(pigeonhole_formula(4))
    code, _, err = cli("--ceiling", "1000", "valid", "--logic", "ipl", "--max-worlds", "5", formula)
    assert code == 2
    assert "ceiling" in err


def test_usage_errors_exit_2(cli):
    assert cli("bogus")[0] == 2
    assert cli("valid", "--logic", "s4", "--max-worlds", "2", "p")[0] == 2


def test_close_up(cli, tmp_path):
    path = tmp_path / "loose.model"
    path.write_text("worlds a b\norder a b\natom p a\n")
    code, _, err = cli("eval", "--model", path, "--world", "b", "p")
    assert code == 2 and "persistency" in err
    assert cli("eval", "--model", path, "--world", "b", "--close-up", "p")[:2] == (0, "true\n")


def test_unknown_world_exits_2(cli):
    code, _, err = cli("eval", "--model", MODELS / "lambda.model", "--world", "z", "p")
    assert code == 2
    assert "unknown world" in err


def test_output_is_deterministic(cli):
    argv = ("--threads", "3", "valid", "--logic", "ipl", "--max-worlds", "4", "((p -> q) -> p) -> p")
    assert cli(*argv) == cli(*argv)


def test_clone_default_generators_include_every_atom(cli):
    code, out, _ = cli("clone", "--model", MODELS / "v.model", "--connectives", "neg", "--target", "~p")
    assert (code, out) == (0, "DEFINABLE\nwitness: q\n")


def test_mv_tautology(cli):
    formula = render(pigeonhole_formula(3))
    assert cli("mv", "tautology", "--values", "3", formula)[:2] == (0, "TAUTOLOGY (G3)\n")
    assert cli("mv", "tautology", "--values", "3", "--family", "lukasiewicz", formula)[:2] == (0, "TAUTOLOGY (L3)\n")
    code, out, _ = cli("mv", "tautology", "--values", "4", formula)
    header, line = out.splitlines()
    assert (code, header) == (1, "FALSIFIED (G4)")
    assignment = {name: int(value) for name, value in (pair.split("=") for pair in line.split())}
    assert sorted(assignment) == ["p0", "p1", "p2", "p3"]
    assert godel_chain(4).value(pigeonhole_formula(3), assignment) != 3


def test_mv_tautology_errors_exit_2(cli):
    assert cli("mv", "tautology", "--values", "1", "p")[0] == 2
    code, _, err = cli("--ceiling", "100", "mv", "tautology", "--values", "5", render(pigeonhole_formula(5)))
    assert code == 2 and "ceiling" in err


def test_deep_input_exits_2(cli):
    code, _, err = cli("pigeonhole", "45")
    assert code == 2 and "nests deeper" in err
    chain = " & ".join(["p"] * 1200)
    code, _, err = cli("eval", "--model", MODELS / "lambda.model", "--world", "b", chain)
    assert code == 2 and "syntax error at byte 258" in err
    code, _, err = cli("eval", "--model", MODELS / "lambda.model", "--world", "b", "(" * 500 + "p" + ")" * 500)
    assert code == 2 and "syntax error at byte 128" in err


def test_recursion_error_exits_2(cli, monkeypatch):
    def overflow(args):
        raise RecursionError

    monkeypatch.setattr(kripkebench.cli, "cmd_eval", overflow)
    code, out, err = cli("eval", "--model", MODELS / "lambda.model", "--world", "b", "p")
    assert (code, out) == (2, "")
    assert "nested too deeply" in err


def test_help_documents_the_partial_ceiling_count(cli):
    code, out, _ = cli("--help")
    assert code == 0
    assert "partial count" in out
    assert "mv tautology" in out
