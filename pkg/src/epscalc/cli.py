"""Command-line driver: every pipeline stage over proof-script files.

Exit status: 0 on success, 1 when a check or transformation fails (the
report is printed), 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .elimination import (
    NotApplicable,
    check_ansatz_applicable,
    eliminate_all_critical,
)
from .epsub import NotSimpleCase, epsub_solve, render_transcript
from .kernel import AmbiguousMatrix, ProofScript, check_proof
from .parsing import DanglingReference, ParseError, parse_formula, parse_proof
from .pipeline import (
    InvalidProof,
    NonNumeralTerm,
    NotClosed,
    RefutedLeaf,
    WrongArity,
    check_verifiable,
    conservativity_extract,
    consistency_pipeline,
    eval_closed,
)
from .printing import print_proof
from .syntax import Formula
from .transform import (
    ResidualEpsilon,
    eliminate_free_variable_substs,
    ground_residual_variables,
    reduce_numerals,
    resolve_threads,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_proof(path: str) -> ProofScript:
    return parse_proof(_read(path))


def _load_formula(path: str) -> Formula:
    return parse_formula(_read(path))


def _checked(p: ProofScript) -> ProofScript:
    report = check_proof(p)
    if not report.valid:
        raise InvalidProof(report)
    return p


def _cmd_check(args) -> int:
    report = check_proof(_load_proof(args.file))
    sys.stdout.write(report.render())
    return 0 if report.valid else 1


def _cmd_threads(args) -> int:
    tree = resolve_threads(_checked(_load_proof(args.file)))
    sys.stdout.write(print_proof(tree.to_script()))
    return 0


def _cmd_elimvars(args) -> int:
    tree = resolve_threads(_checked(_load_proof(args.file)))
    tree = eliminate_free_variable_substs(tree)
    sys.stdout.write(print_proof(tree.to_script()))
    return 0


def _cmd_ground(args) -> int:
    tree = resolve_threads(_checked(_load_proof(args.file)))
    tree = eliminate_free_variable_substs(tree)
    tree = ground_residual_variables(tree)
    sys.stdout.write(print_proof(tree.to_script()))
    return 0


def _cmd_reduce(args) -> int:
    sys.stdout.write(print_proof(reduce_numerals(_load_proof(args.file))))
    return 0


def _cmd_ansatz(args) -> int:
    report = check_ansatz_applicable(_checked(_load_proof(args.file)))
    sys.stdout.write(report.render())
    return 0 if report.applicable else 1


def _cmd_eliminate_eps(args) -> int:
    script = eliminate_all_critical(_checked(_load_proof(args.file)))
    sys.stdout.write(print_proof(script))
    return 0


def _cmd_epsub(args) -> int:
    assignment, rounds = epsub_solve(_load_proof(args.file))
    sys.stdout.write(render_transcript(rounds))
    sys.stdout.write(f"final: {assignment.render()}\n")
    return 0


def _cmd_eval(args) -> int:
    value = eval_closed(_load_formula(args.file))
    sys.stdout.write("true\n" if value else "false\n")
    return 0


def _cmd_pipeline(args) -> int:
    certificate = consistency_pipeline(_load_proof(args.file))
    sys.stdout.write(certificate.render())
    return 0


def _cmd_conserve(args) -> int:
    certificate = conservativity_extract(_load_proof(args.file), args.numeral)
    sys.stdout.write(certificate.render())
    return 0


def _cmd_verify_axiom(args) -> int:
    if check_verifiable(_load_formula(args.file), args.bound):
        sys.stdout.write("verifiable\n")
        return 0
    sys.stdout.write("not verifiable\n")
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epscalc",
        description="Proof kernel and transformations for the epsilon calculus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, formula_file=False):
        cmd = sub.add_parser(name, help=help_text)
        target = "formula-file" if formula_file else "file"
        cmd.add_argument(
            "file", metavar=target, help=f"{target} to read, or - for stdin"
        )
        cmd.set_defaults(handler=handler)
        return cmd

    add("check", _cmd_check, "check a proof script and print the line report")
    add("threads", _cmd_threads, "resolve a proof into threads (tree form)")
    add("elimvars", _cmd_elimvars, "push substitutions onto the initial formulas")
    add("ground", _cmd_ground, "replace residual variables by 0 and 0 = 0")
    add("reduce", _cmd_reduce, "reduce numerals in every line")
    add("ansatz", _cmd_ansatz, "report simplest-case applicability")
    add("eliminate-eps", _cmd_eliminate_eps, "eliminate all critical formulas")
    add("epsub", _cmd_epsub, "solve the single-family epsilon substitution")
    add("eval", _cmd_eval, "evaluate a closed formula", formula_file=True)
    pipeline_cmd = add(
        "pipeline", _cmd_pipeline, "run the full consistency pipeline"
    )
    conserve = add(
        "conserve", _cmd_conserve, "certify a numeral instance of the end formula"
    )
    conserve.add_argument("--numeral", type=int, required=True, metavar="N")
    verify = add(
        "verify-axiom",
        _cmd_verify_axiom,
        "evaluate all numeral instances up to a bound",
        formula_file=True,
    )
    verify.add_argument("--bound", type=int, required=True, metavar="N")
    del pipeline_cmd
    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ParseError, DanglingReference) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InvalidProof as exc:
        sys.stdout.write(exc.report.render())
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except NotApplicable as exc:
        if exc.report.blockers:
            sys.stdout.write(exc.report.render())
        else:
            sys.stderr.write(f"error: {exc}\n")
        return 1
    except AmbiguousMatrix as exc:
        sys.stderr.write(f"error: {exc.describe()}\n")
        return 1
    except (
        NotSimpleCase,
        NotClosed,
        NonNumeralTerm,
        RefutedLeaf,
        WrongArity,
        ResidualEpsilon,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
