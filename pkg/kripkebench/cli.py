"""
Command-line entry point.

Reports go to stdout, logs and errors to stderr.  Exit codes: 0 positive
verdict (true, valid, equivalent, definable, no violations), 1 negative
verdict or counterexample, 2 usage, input or resource error.

Line formats:
    eval          true | false
    valid/equiv   VALID (LOGIC, bound K)
                  COUNTEREXAMPLE (LOGIC) frame I world W   + model text
    clone         DEFINABLE / witness: F
                  NOT-DEFINABLE / closure size: N / one upset per line
    mv tautology  TAUTOLOGY (G5)
                  FALSIFIED (G6) / NAME=VALUE ... for the first falsifying assignment

Classical validity is checked on the one-world frame whatever --max-worlds
says; the verdict still reports the requested bound.

The --ceiling guard is charged frame by frame as the search reaches each frame,
so the size a refused search reports is a partial count: the evaluations spent
plus those planned for the frame that tipped it over, not the whole space.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from kripkebench.bridge import check_lemma3
from kripkebench.config import configure_logging, settings
from kripkebench.definability import CloneProblem, Definable, check_definable
from kripkebench.errors import WorkbenchError
from kripkebench.formula import parse, render
from kripkebench.frames import enumerate_frames
from kripkebench.kripke import forces, parse_model_text, render_frame_text, render_model_text
from kripkebench.validity import (
    Counterexample,
    LogicClass,
    check_equivalence,
    check_validity,
    godel_fan,
    pigeonhole_formula,
)
from kripkebench.values import MATRIX_FAMILIES, extend_valuation, find_falsifying, is_designated, parse_valuation_text

logger = logging.getLogger(__name__)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise WorkbenchError(f"cannot read {path}: {e.strerror}") from None


def _print_verdict(verdict) -> int:
    if isinstance(verdict, Counterexample):
        print(f"COUNTEREXAMPLE ({verdict.logic.value}) frame {verdict.frame_index} world {verdict.world}")
        if verdict.direction:
            print(f"fails: {verdict.direction}")
        print(render_model_text(verdict.model), end="")
        return 1
    print(f"VALID ({verdict.logic.value}, bound {verdict.bound})")
    return 0


def cmd_eval(args) -> int:
    model = parse_model_text(_read(args.model), close_up=args.close_up)
    result = forces(model, args.world, parse(args.formula))
    print("true" if result else "false")
    return 0 if result else 1


def cmd_valid(args) -> int:
    verdict = check_validity(
        parse(args.formula), LogicClass(args.logic), args.max_worlds,
        ceiling=args.ceiling, threads=args.threads,
    )
    return _print_verdict(verdict)


def cmd_equiv(args) -> int:
    verdict = check_equivalence(
        parse(args.left), parse(args.right), LogicClass(args.logic), args.max_worlds,
        ceiling=args.ceiling, threads=args.threads,
    )
    return _print_verdict(verdict)


def cmd_godel_fan(args) -> int:
    model, f = godel_fan(args.n)
    print(render_model_text(model), end="")
    if forces(model, "k", f):
        print(f"root k forces {render(f)}")
        return 1
    print(f"root k does not force {render(f)}")
    return 0


def cmd_pigeonhole(args) -> int:
    print(render(pigeonhole_formula(args.n)))
    return 0


def cmd_frames(args) -> int:
    for i, fr in enumerate(enumerate_frames(args.count, up_to_iso=args.up_to_iso)):
        print(f"# frame {i}")
        print(render_frame_text(fr), end="")
    return 0


def cmd_mv_eval(args) -> int:
    valuation = parse_valuation_text(_read(args.valuation))
    value = extend_valuation(valuation, parse(args.formula))
    designated = is_designated(value)
    print(value)
    print("designated" if designated else "not designated")
    return 0 if designated else 1


def cmd_mv_check_lemma3(args) -> int:
    report = check_lemma3(args.depth, args.frames, args.trials, args.seed, threads=args.threads or settings.threads)
    print(f"checks: {report.checks}")
    print(f"violations: {report.violations}")
    if report.counterexample is not None:
        c = report.counterexample
        print(f"smallest: {c.direction} frame {c.frame_index} world {c.world} formula {c.formula} "
              f"forced={str(c.forced).lower()} component={c.component_bit}")
    print("OK" if report.ok else "FAILED")
    return 0 if report.ok else 1


def cmd_mv_tautology(args) -> int:
    matrix = MATRIX_FAMILIES[args.family](args.values)
    assignment = find_falsifying(matrix, parse(args.formula), ceiling=args.ceiling)
    if assignment is None:
        print(f"TAUTOLOGY ({matrix.name})")
        return 0
    print(f"FALSIFIED ({matrix.name})")
    print(" ".join(f"{name}={value}" for name, value in assignment.items()))
    return 1


def cmd_clone(args) -> int:
    model = parse_model_text(_read(args.model), close_up=args.close_up)
    connectives = [c for c in args.connectives.split(",") if c]
    generators = [g for g in args.generators.split(",") if g] if args.generators else None
    problem = CloneProblem.build(model, connectives, parse(args.target), generators)
    certificate = check_definable(problem)
    print(certificate.decision)
    if isinstance(certificate, Definable):
        print(f"witness: {render(certificate.witness)}")
        return 0
    print(f"closure size: {len(certificate.closure)}")
    for upset in certificate.closure:
        print(upset)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kripkebench",
        description="Kripke semantics, bounded validity and connective definability for IPL, GDL and CPL.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: KRIPKE_THREADS)")
    parser.add_argument("--ceiling", type=int, default=None, help="search-space ceiling (default: KRIPKE_CEILING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="does a world force a formula")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--close-up", action="store_true", help="repair non-persistent atoms instead of failing")
    p.add_argument("formula")
    p.set_defaults(func=cmd_eval)

    logics = [logic.value for logic in LogicClass]
    p = sub.add_parser("valid", help="bounded validity")
    p.add_argument("--logic", choices=logics, required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("formula")
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("equiv", help="bounded equivalence")
    p.add_argument("--logic", choices=logics, required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("godel-fan", help="fan model refuting the n-th pigeonhole formula")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_godel_fan)

    p = sub.add_parser("pigeonhole", help="print the n-th pigeonhole formula")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_pigeonhole)

    p = sub.add_parser("frames", help="list catalog frames")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--up-to-iso", action="store_true")
    p.set_defaults(func=cmd_frames)

    mv = sub.add_parser("mv", help="the countable value space").add_subparsers(dest="mv_command", required=True)
    p = mv.add_parser("eval", help="extend a valuation to a formula")
    p.add_argument("--valuation", required=True)
    p.add_argument("formula")
    p.set_defaults(func=cmd_mv_eval)

    p = mv.add_parser("check-lemma3", help="randomised model/valuation correspondence check")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_mv_check_lemma3)

    p = mv.add_parser("tautology", help="exhaustive tautology check in a finite chain")
    p.add_argument("--values", type=int, required=True, help="number of truth values")
    p.add_argument("--family", choices=sorted(MATRIX_FAMILIES), default="godel")
    p.add_argument("formula")
    p.set_defaults(func=cmd_mv_tautology)

    p = sub.add_parser("clone", help="connective definability on one model")
    p.add_argument("--model", required=True)
    p.add_argument("--connectives", required=True, help="comma separated: neg,and,or,imp")
    p.add_argument("--target", required=True)
    p.add_argument("--generators", default=None, help="comma separated atoms and T (default: T and all atoms)")
    p.add_argument("--close-up", action="store_true")
    p.set_defaults(func=cmd_clone)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging()
    try:
        return args.func(args)
    except (WorkbenchError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RecursionError:
        logger.debug("command failed", exc_info=True)
        print("error: input nested too deeply to process", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
