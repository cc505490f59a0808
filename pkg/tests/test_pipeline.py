"""Closed evaluation, verifiability, and the two certificate pipelines."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epscalc.elimination import NotApplicable
from epscalc.kernel import check_proof
from epscalc.parsing import parse_formula, parse_proof
from epscalc.pipeline import (
    InvalidProof,
    NotClosed,
    TruthCertificate,
    WrongArity,
    check_verifiable,
    conservativity_extract,
    consistency_pipeline,
    eval_closed,
)
from epscalc.printing import print_formula
from epscalc.syntax import Implies, alpha_eq, variable_free
from epscalc.transform import reduce_numerals
from corpus import ansatz_corpus, base_corpus, freevar_corpus
from gen import gen_formula
from oracles import nat_eval

closed_formulas = st.integers(0, 10**9).map(
    lambda seed: gen_formula(
        random.Random(seed), depth=3, quant=False, eps=False, free=False, fvar=False
    )
)


# -- eval_closed -------------------------------------------------------------


def test_eval_examples():
    assert eval_closed(parse_formula("0+1 = 0+1")) is True
    assert eval_closed(parse_formula("0 != 0")) is False
    assert eval_closed(parse_formula("d(0+1) = 0")) is True
    assert eval_closed(parse_formula("0 = 0 -> 0 = 0+1")) is False
    assert eval_closed(parse_formula("0 = 0+1 -> 0 = 0+1")) is True


def test_eval_rejects_open_formulas():
    with pytest.raises(NotClosed):
        eval_closed(parse_formula("a = 0"))
    with pytest.raises(NotClosed):
        eval_closed(parse_formula("A(0)"))
    with pytest.raises(NotClosed):
        eval_closed(parse_formula("all x. x = 0"))
    with pytest.raises(NotClosed):
        eval_closed(parse_formula("eps x. x = 0 = 0"))


@settings(max_examples=300, deadline=None)
@given(closed_formulas)
def test_eval_agrees_with_nat_semantics(f):
    assert eval_closed(f) == nat_eval(f)


# -- check_verifiable -----------------------------------------------------------


def test_base_axioms_verifiable():
    assert check_verifiable(parse_formula("0 != a+1"), 5)
    assert check_verifiable(parse_formula("a = d(a+1)"), 5)


def test_unverifiable_axiom():
    assert not check_verifiable(parse_formula("a = a+1"), 0)


def test_verifiable_two_variables():
    assert check_verifiable(parse_formula("a = b -> b = a"), 3)


# -- consistency_pipeline ----------------------------------------------------------


def test_pipeline_on_pred_axiom_proof():
    p = parse_proof(
        "1. a = d(a+1) ; ax-pred\n2. 0 = d(0+1) ; subst 1 {a := 0}\n"
    )
    cert = consistency_pipeline(p)
    assert cert.end_truth is True
    assert all(ok for _, ok in cert.leaf_evaluations)


def test_pipeline_rejects_invalid_script():
    p = parse_proof("1. 0 != 0 ; ax-succ\n")
    with pytest.raises(InvalidProof):
        consistency_pipeline(p)


def test_no_certificate_for_contradiction():
    # a script claiming 0 != 0 cannot both check and certify: every road
    # ends in a rejection before a certificate exists
    bad = [
        "1. 0 != 0 ; taut\n",
        "1. 0 != 0 ; ax-succ\n",
        "1. 0 != 0 ; id1\n",
    ]
    for text in bad:
        with pytest.raises(InvalidProof):
            consistency_pipeline(parse_proof(text))


def test_pipeline_with_critical_formula():
    p = parse_proof(
        "1. 0 = 0 -> eps x. x = 0 = 0 ; crit\n"
        "2. 0 = d(0+1) ; ax-pred\n"
        "3. (0 = 0 -> eps x. x = 0 = 0) -> (0 = d(0+1) -> 0 = d(0+1)) ; taut\n"
        "4. 0 = d(0+1) -> 0 = d(0+1) ; mp 1 3\n"
        "5. 0 = d(0+1) ; mp 2 4\n"
    )
    cert = consistency_pipeline(p)
    assert cert.end_truth is True
    assert alpha_eq(cert.final_proof.end_formula, parse_formula("0 = 0"))


def test_pipeline_requires_variable_free_end():
    p = parse_proof("1. a = d(a+1) ; ax-pred\n")
    with pytest.raises(NotClosed):
        consistency_pipeline(p)


def test_pipeline_blocked_ansatz():
    p = parse_proof(
        "1. 0 = 0 ; id1\n"
        "2. 0 = 0 -> eps x. x = 0 = 0 ; crit\n"
        "3. (0 = 0 -> eps x. x = 0 = 0) -> (0 = 0 -> 0 = 0) ; taut\n"
        "4. 0 = 0 -> 0 = 0 ; mp 2 3\n"
    )
    with pytest.raises(NotApplicable):
        consistency_pipeline(p)


def test_modus_ponens_preserves_truth_in_certificates():
    for text in base_corpus():
        p = parse_proof(text)
        if not variable_free(p.end_formula):
            continue
        cert = consistency_pipeline(p)

        def check_node(node):
            value = eval_closed(node.formula)
            if node.rule == "mp":
                minor, major = node.premises
                if eval_closed(minor.formula) and eval_closed(major.formula):
                    assert value
            for child in node.premises:
                check_node(child)

        check_node(cert.final_proof.root)


def test_certificate_rendering_shape():
    p = parse_proof("1. 0 != 0+1 ; ax-succ\n")
    text = consistency_pipeline(p).render()
    lines = text.splitlines()
    assert lines[0].startswith("1. ")
    assert "leaf 1: true" in lines
    assert lines[-1] == "end: true"


# -- conservativity_extract -----------------------------------------------------------


def test_conservativity_pred_axiom_at_three():
    p = parse_proof("1. a = d(a+1) ; ax-pred\n")
    cert = conservativity_extract(p, 3)
    assert cert.end_truth is True
    assert print_formula(cert.final_proof.end_formula) == "0+1+1+1 = 0+1+1+1"


def test_conservativity_zero_instance():
    p = parse_proof("1. 0 != a+1 ; ax-succ\n")
    cert = conservativity_extract(p, 0)
    assert cert.end_truth is True


def test_conservativity_wrong_arity():
    with pytest.raises(WrongArity):
        conservativity_extract(parse_proof("1. a = b -> (a = 0 -> b = 0) ; id2\n"), 1)
    with pytest.raises(WrongArity):
        conservativity_extract(parse_proof("1. 0 = 0 ; id1\n"), 1)


def test_conservativity_uniform_over_instances():
    for text in freevar_corpus():
        p = parse_proof(text)
        assert conservativity_extract(p, 0).end_truth is True
        for z in range(1, 11):
            assert conservativity_extract(p, z).end_truth is True, (text, z)
