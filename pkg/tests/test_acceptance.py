"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the summary lines.
"""

from __future__ import annotations

import random
import time

from epscalc.cli import run as cli_run
from epscalc.elimination import (
    check_ansatz_applicable,
    eliminate_all_critical,
    eliminate_critical_family,
    translate_quantifiers,
)
from epscalc.epsub import epsub_solve
from epscalc.kernel import Crit, check_proof, find_critical_families
from epscalc.parsing import parse_formula, parse_proof
from epscalc.pipeline import (
    conservativity_extract,
    consistency_pipeline,
    eval_closed,
)
from epscalc.printing import print_formula, print_proof
from epscalc.syntax import (
    FreeVar,
    Pred,
    Succ,
    Term,
    ZERO,
    alpha_eq,
    free_individual_vars,
    has_epsilon,
    has_quantifier,
    numeral_value,
    variable_free,
)
from epscalc.transform import reduce_numerals
from corpus import (
    ansatz_corpus,
    base_corpus,
    blocker_scripts,
    epsub_corpus,
    freevar_corpus,
)
from gen import gen_formula, gen_sentence
from oracles import all_normal_forms, tarski_eval

import io
import sys


def _report(number: int, title: str, ok: bool) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} ({title}): {status}")
    assert ok, f"criterion {number} failed"


def test_criterion_1_base_theory_consistency():
    """>= 50 base-system proofs certify with all leaves and ends true in
    under 10 seconds."""
    corpus = [text for text in base_corpus() if
              variable_free(parse_proof(text).end_formula)]
    assert len(corpus) >= 50
    start = time.monotonic()
    for text in corpus:
        p = parse_proof(text)
        assert check_proof(p).valid
        cert = consistency_pipeline(p)
        assert cert.end_truth is True
        assert all(ok for _, ok in cert.leaf_evaluations)
    elapsed = time.monotonic() - start
    _report(1, "base-theory consistency", elapsed < 10.0)


def test_criterion_2_ansatz_elimination():
    """>= 20 applicable scripts: all crit lines removed, output valid, end
    formula byte-identical, one instance removed per round."""
    corpus = ansatz_corpus()
    assert len(corpus) >= 20
    ok = True
    for text in corpus:
        p = parse_proof(text)
        families = find_critical_families(p)
        total = sum(f.size() for f in families)
        end_before = print_formula(p.end_formula)

        current = p
        for expected in range(total - 1, -1, -1):
            fams = find_critical_families(current)
            current = eliminate_critical_family(current, fams[0])
            now = sum(f.size() for f in find_critical_families(current))
            ok = ok and now == expected
            ok = ok and check_proof(current).valid

        final = eliminate_all_critical(p)
        ok = ok and check_proof(final).valid
        ok = ok and not any(
            isinstance(l.justification, Crit) for l in final.lines
        )
        ok = ok and print_formula(final.end_formula) == end_before
    _report(2, "ansatz elimination", ok)


def test_criterion_3_blocker_detection():
    """Each counterexample shape rejected with the matching kind; zero
    findings on the applicable corpus."""
    ok = True
    for kind, text in blocker_scripts().items():
        p = parse_proof(text)
        ok = ok and check_proof(p).valid
        report = check_ansatz_applicable(p)
        ok = ok and not report.applicable
        ok = ok and kind in {b.kind for b in report.blockers}
    for text in ansatz_corpus():
        report = check_ansatz_applicable(parse_proof(text))
        ok = ok and report.applicable and not report.blockers
    _report(3, "blocker detection", ok)


def test_criterion_4_epsilon_substitution():
    """>= 10 single-family fixtures solve in <= 2 rounds; the assignment
    plus reduction makes every line true."""
    corpus = epsub_corpus()
    assert len(corpus) >= 10
    ok = True
    for text in corpus:
        p = parse_proof(text)
        assignment, rounds = epsub_solve(p)
        ok = ok and len(rounds) <= 2
        ok = ok and all(rounds[-1].evaluations)
        for line in p.lines:
            value = eval_closed(reduce_numerals(assignment.apply(line.formula)))
            ok = ok and value
    _report(4, "epsilon substitution simple case", ok)


def test_criterion_5_quantifier_translation():
    """100 generated sentences with <= 3 quantifiers: translation is
    quantifier-free and agrees with the finite-domain evaluator."""
    rng = random.Random(20250810)
    ok = True
    count = 0
    while count < 100:
        sentence = gen_sentence(rng, quantifiers=3)
        if not has_quantifier(sentence):
            continue
        count += 1
        translated = translate_quantifiers(sentence)
        ok = ok and not has_quantifier(translated)
        for k in range(4):
            ok = ok and tarski_eval(translated, k, []) == tarski_eval(
                sentence, k, []
            )
    _report(5, "quantifier translation semantics", ok)


def _terms_up_to(size: int) -> list[Term]:
    layer: list[list[Term]] = [[ZERO, FreeVar("a")]]
    for _ in range(size - 1):
        layer.append([f(t) for t in layer[-1] for f in (Succ, Pred)])
    return [t for level in layer for t in level]


def test_criterion_6_rewrite_properties():
    """Unique normal forms under every reduction order for terms of size
    <= 8; ground terms normalize to numerals."""
    ok = True
    for t in _terms_up_to(8):
        norms = all_normal_forms(t)
        ok = ok and len(norms) == 1
        ok = ok and reduce_numerals(t) == next(iter(norms))
        if not free_individual_vars(t):
            ok = ok and numeral_value(reduce_numerals(t)) is not None
    _report(6, "rewrite-system properties", ok)


def test_criterion_7_conservativity():
    """Every one-free-variable corpus proof extracts true certificates for
    all numerals z <= 10."""
    corpus = freevar_corpus()
    ok = True
    for text in corpus:
        p = parse_proof(text)
        assert len(free_individual_vars(p.end_formula)) == 1
        for z in range(11):
            cert = conservativity_extract(p, z)
            ok = ok and cert.end_truth is True
    _report(7, "conservativity extraction", ok)


def test_criterion_8_roundtrip_fidelity():
    """print-then-parse is identity up to alpha on 1000 generated formulas
    and on all corpus scripts; CLI outputs byte-stable across runs."""
    rng = random.Random(99)
    ok = True
    for _ in range(1000):
        f = gen_formula(rng, depth=4)
        ok = ok and alpha_eq(parse_formula(print_formula(f)), f)

    all_scripts = (
        base_corpus()
        + freevar_corpus()
        + ansatz_corpus()
        + epsub_corpus()
        + list(blocker_scripts().values())
    )
    for text in all_scripts:
        p = parse_proof(text)
        q = parse_proof(print_proof(p))
        ok = ok and len(p.lines) == len(q.lines)
        ok = ok and all(
            a.number == b.number
            and alpha_eq(a.formula, b.formula)
            and type(a.justification) is type(b.justification)
            for a, b in zip(p.lines, q.lines)
        )

    def capture(argv, stdin_text=None):
        out, err = io.StringIO(), io.StringIO()
        old = sys.stdout, sys.stderr, sys.stdin
        sys.stdout, sys.stderr = out, err
        if stdin_text is not None:
            sys.stdin = io.StringIO(stdin_text)
        try:
            code = cli_run(argv)
        finally:
            sys.stdout, sys.stderr, sys.stdin = old
        return code, out.getvalue(), err.getvalue()

    for text in ansatz_corpus()[:5] + base_corpus()[:5]:
        for command in (["check", "-"], ["threads", "-"], ["pipeline", "-"]):
            first = capture(command, text)
            second = capture(command, text)
            ok = ok and first == second
    _report(8, "round-trip fidelity", ok)
