"""Finitary truth evaluation and the consistency / conservativity pipelines.

An equation n = n between identical numerals is true, n = m with distinct
numerals is false, and connectives evaluate classically. The consistency
pipeline turns a checked proof of a variable-free formula into a tree whose
leaves all evaluate true, certifying the end formula; conservativity
instantiates a one-variable end formula at a numeral first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .elimination import NotApplicable, check_ansatz_applicable, eliminate_all_critical
from .kernel import CheckReport, Crit, ProofLine, ProofScript, Subst, check_proof
from .syntax import (
    And,
    Eq,
    Formula,
    Implies,
    Not,
    Or,
    Substitution,
    formula_var_names,
    free_individual_vars,
    has_epsilon,
    numeral,
    numeral_value,
    apply_subst,
    variable_free,
)
from .transform import (
    ThreadProof,
    eliminate_free_variable_substs,
    ground_residual_variables,
    reduce_numerals,
    resolve_threads,
)


class NotClosed(Exception):
    """A variable, quantifier, or epsilon term blocks evaluation."""


class NonNumeralTerm(Exception):
    """A closed term failed to reduce to a numeral."""


class RefutedLeaf(Exception):
    """A leaf of the final tree evaluated false: the input's axioms are
    outside the kernel or not verifiable, so the certificate cannot exist."""

    def __init__(self, index: int, formula: Formula):
        self.index = index
        self.formula = formula
        super().__init__(f"leaf {index} evaluates false")


class WrongArity(Exception):
    """The end formula does not have exactly one free individual variable."""


class InvalidProof(Exception):
    def __init__(self, report: CheckReport):
        self.report = report
        failures = report.failures()
        super().__init__(
            f"the proof script does not check ({len(failures)} failing line(s))"
        )


def eval_closed(f: Formula) -> bool:
    """Truth value of a variable-free, epsilon-free formula."""
    if not variable_free(f):
        raise NotClosed(
            "evaluation needs a variable-free formula without quantifiers or epsilons"
        )
    return _eval(f)


def _eval(f: Formula) -> bool:
    match f:
        case Eq(l, r):
            lv = numeral_value(reduce_numerals(l))
            rv = numeral_value(reduce_numerals(r))
            if lv is None or rv is None:
                raise NonNumeralTerm("a term did not reduce to a numeral")
            return lv == rv
        case Not(b):
            return not _eval(b)
        case Implies(l, r):
            return (not _eval(l)) or _eval(r)
        case And(l, r):
            return _eval(l) and _eval(r)
        case Or(l, r):
            return _eval(l) or _eval(r)
        case _:
            raise NotClosed(f"cannot evaluate {type(f).__name__}")


def check_verifiable(axiom: Formula, bound: int) -> bool:
    """Spot-check a quantifier- and epsilon-free axiom: substitute every
    numeral up to the bound for its free variables and evaluate."""
    names = sorted(free_individual_vars(axiom))
    for values in product(range(bound + 1), repeat=len(names)):
        inst = apply_subst(
            axiom, Substitution({n: numeral(v) for n, v in zip(names, values)})
        )
        if not eval_closed(inst):
            return False
    return True


@dataclass(frozen=True)
class TruthCertificate:
    final_proof: ThreadProof
    leaf_evaluations: tuple[tuple[int, bool], ...]
    end_truth: bool

    def render(self) -> str:
        from .printing import print_proof

        parts = [print_proof(self.final_proof.to_script())]
        parts += [
            f"leaf {i}: {'true' if ok else 'false'}"
            for i, ok in self.leaf_evaluations
        ]
        parts.append(f"end: {'true' if self.end_truth else 'false'}")
        return "\n".join(parts) + "\n"


def consistency_pipeline(p: ProofScript) -> TruthCertificate:
    """Eliminate epsilons, resolve threads, push out substitutions, ground,
    reduce, and evaluate every leaf; certify the end formula true."""
    report = check_proof(p)
    if not report.valid:
        raise InvalidProof(report)
    end = p.end_formula
    if not variable_free(end):
        raise NotClosed("the end formula must be variable-free")

    needs_elimination = any(
        isinstance(line.justification, Crit) for line in p.lines
    ) or any(has_epsilon(line.formula) for line in p.lines)
    if needs_elimination:
        ansatz = check_ansatz_applicable(p)
        if not ansatz.applicable:
            raise NotApplicable(ansatz)
        p = eliminate_all_critical(p)

    tree = resolve_threads(p)
    tree = eliminate_free_variable_substs(tree)
    tree = ground_residual_variables(tree)
    tree = reduce_numerals(tree)

    evaluations = []
    for index, leaf in enumerate(tree.leaves(), 1):
        if not eval_closed(leaf.formula):
            raise RefutedLeaf(index, leaf.formula)
        evaluations.append((index, True))
    end_truth = eval_closed(tree.end_formula)
    assert end_truth, "true leaves and truth-preserving inferences force a true end"
    return TruthCertificate(tree, tuple(evaluations), end_truth)


def conservativity_extract(p: ProofScript, z: int) -> TruthCertificate:
    """Instantiate a one-free-variable end formula at the numeral z by a
    substitution step, then certify the instance through the pipeline."""
    end = p.end_formula
    names = sorted(free_individual_vars(end))
    if len(names) != 1 or formula_var_names(end):
        raise WrongArity(
            f"the end formula must have exactly one free individual variable, "
            f"found {len(names)} and {len(formula_var_names(end))} formula variable(s)"
        )
    report = check_proof(p)
    if not report.valid:
        raise InvalidProof(report)
    subst = Substitution({names[0]: numeral(z)})
    last = p.lines[-1].number
    extended = ProofScript(
        p.lines
        + (ProofLine(last + 1, apply_subst(end, subst), Subst(last, subst)),)
    )
    return consistency_pipeline(extended)
