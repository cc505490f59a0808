"""Structural proof transformations.

resolve_threads turns a checked script (a DAG) into a tree in which every
formula occurrence feeds at most one inference, duplicating shared
subproofs. eliminate_free_variable_substs walks the tree from the end
formula upward pushing substitutions onto the initial formulas, so the
result is substitution-free. ground_residual_variables replaces leftover
free individual variables by 0 and formula variables by 0 = 0.
reduce_numerals normalizes terms under d(0) -> 0 and d(t+1) -> t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .kernel import (
    MP,
    AXIOM_TAGS,
    AxPred,
    AxSucc,
    Crit,
    Id1,
    Id2,
    Justification,
    ProofLine,
    ProofScript,
    Rep,
    Subst,
    Taut,
    check_axiom,
)
from .syntax import (
    And,
    Bound,
    Epsilon,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaSchema,
    FormulaVar,
    FreeVar,
    Implies,
    Node,
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    ZERO,
    Zero,
    apply_subst,
    compose_subst,
    has_epsilon,
)

_TAG_FOR = {
    Taut: "taut",
    Id1: "id1",
    Id2: "id2",
    AxSucc: "ax-succ",
    AxPred: "ax-pred",
    Crit: "crit",
}
_JUST_FOR = {tag: cls for cls, tag in _TAG_FOR.items()}

AXIOM_RULES = tuple(_TAG_FOR.values())


class ResidualEpsilon(Exception):
    """Grounding met an epsilon term; run epsilon elimination first."""


@dataclass(frozen=True)
class ThreadNode:
    """One proof-tree node. Leaves carry axiom rules; inner nodes carry
    "subst" (one premise), "mp" (minor, major), or "rep" (one premise)."""

    formula: Formula
    rule: str
    premises: tuple["ThreadNode", ...] = ()
    subst: Optional[Substitution] = None


@dataclass(frozen=True)
class ThreadProof:
    root: ThreadNode

    @property
    def end_formula(self) -> Formula:
        return self.root.formula

    def leaves(self) -> list[ThreadNode]:
        """Leaf nodes in preorder; the certificate indexes follow this order."""
        out: list[ThreadNode] = []

        def walk(node: ThreadNode) -> None:
            if not node.premises:
                out.append(node)
            for child in node.premises:
                walk(child)

        walk(self.root)
        return out

    def node_count(self) -> int:
        def count(node: ThreadNode) -> int:
            return 1 + sum(count(c) for c in node.premises)

        return count(self.root)

    def to_script(self) -> ProofScript:
        """Linearize in postorder with lines numbered from 1."""
        lines: list[ProofLine] = []

        def emit(node: ThreadNode) -> int:
            refs = [emit(child) for child in node.premises]
            number = len(lines) + 1
            match node.rule:
                case "subst":
                    just: Justification = Subst(refs[0], node.subst)
                case "mp":
                    just = MP(refs[0], refs[1])
                case "rep":
                    just = Rep(refs[0])
                case tag:
                    just = _JUST_FOR[tag]()
            lines.append(ProofLine(number, node.formula, just))
            return number

        emit(self.root)
        return ProofScript(tuple(lines))


def resolve_threads(p: ProofScript) -> ThreadProof:
    """Copy shared subproofs so each formula feeds at most one inference.

    Only lines reachable from the end formula are kept; every root-to-leaf
    path then starts at an axiom. Expects a valid script.
    """
    formulas = {line.number: line for line in p.lines}

    def build(number: int) -> ThreadNode:
        line = formulas[number]
        j = line.justification
        if isinstance(j, AXIOM_TAGS):
            return ThreadNode(line.formula, _TAG_FOR[type(j)])
        match j:
            case Subst(m, s):
                return ThreadNode(line.formula, "subst", (build(m),), s)
            case MP(m, k):
                return ThreadNode(line.formula, "mp", (build(m), build(k)))
            case Rep(m):
                return ThreadNode(line.formula, "rep", (build(m),))
            case _:
                raise ValueError(f"unknown justification {j!r}")

    return ThreadProof(build(p.lines[-1].number))


def eliminate_free_variable_substs(t: ThreadProof) -> ThreadProof:
    """Push substitutions up every thread onto the initial formulas.

    Each substitution step vanishes: its substitution is recorded in the
    subproof above it, composing with any earlier one, and modus ponens is
    rewritten to the instantiated schema. Leaves end up as substitution
    instances of axioms; the end formula is unchanged.
    """

    def rewrite(node: ThreadNode, pending: Substitution) -> ThreadNode:
        if node.rule == "subst":
            carried = compose_subst(node.subst, pending)
            return rewrite(node.premises[0], carried)
        formula = apply_subst(node.formula, pending)
        if not node.premises:
            return ThreadNode(formula, node.rule)
        children = tuple(rewrite(c, pending) for c in node.premises)
        return ThreadNode(formula, node.rule, children)

    return ThreadProof(rewrite(t.root, Substitution()))


def _ground(x: Node) -> Node:
    match x:
        case FreeVar(_):
            return ZERO
        case FormulaVar(_, _):
            return Eq(ZERO, ZERO)
        case Zero() | Bound():
            return x
        case Succ(a):
            return Succ(_ground(a))
        case Pred(a):
            return Pred(_ground(a))
        case Epsilon(h, b):
            return Epsilon(h, _ground(b))
        case Eq(l, r):
            return Eq(_ground(l), _ground(r))
        case Not(b):
            return Not(_ground(b))
        case Implies(l, r):
            return Implies(_ground(l), _ground(r))
        case And(l, r):
            return And(_ground(l), _ground(r))
        case Or(l, r):
            return Or(_ground(l), _ground(r))
        case Forall(h, b):
            return Forall(h, _ground(b))
        case Exists(h, b):
            return Exists(h, _ground(b))
        case _:
            raise TypeError(f"not a term or formula: {x!r}")


def ground_residual_variables(t: ThreadProof) -> ThreadProof:
    """Replace residual free individual variables by 0 and formula variables
    by 0 = 0 (arguments discarded) throughout a substitution-free tree.

    Raises ResidualEpsilon if any epsilon term is present: grounding cannot
    remove those, so epsilon elimination has to run first.
    """

    def check(node: ThreadNode) -> None:
        if node.rule == "subst":
            raise ValueError("ground_residual_variables expects a subst-free tree")
        if has_epsilon(node.formula):
            raise ResidualEpsilon(
                "epsilon terms remain; eliminate critical formulas first"
            )
        for child in node.premises:
            check(child)

    def rewrite(node: ThreadNode) -> ThreadNode:
        return ThreadNode(
            _ground(node.formula),
            node.rule,
            tuple(rewrite(c) for c in node.premises),
        )

    check(t.root)
    return ThreadProof(rewrite(t.root))


# ---------------------------------------------------------------------------
# numeral reduction


def _reduce_term(t: Term) -> Term:
    match t:
        case Zero() | FreeVar() | Bound():
            return t
        case Succ(a):
            return Succ(_reduce_term(a))
        case Pred(a):
            inner = _reduce_term(a)
            if isinstance(inner, Zero):
                return ZERO
            if isinstance(inner, Succ):
                return inner.arg
            return Pred(inner)
        case Epsilon(h, b):
            return Epsilon(h, _reduce_formula(b))
        case _:
            raise TypeError(f"not a term: {t!r}")


def _reduce_formula(f: Formula) -> Formula:
    match f:
        case Eq(l, r):
            return Eq(_reduce_term(l), _reduce_term(r))
        case FormulaVar(n, args):
            return FormulaVar(n, tuple(_reduce_term(a) for a in args))
        case Not(b):
            return Not(_reduce_formula(b))
        case Implies(l, r):
            return Implies(_reduce_formula(l), _reduce_formula(r))
        case And(l, r):
            return And(_reduce_formula(l), _reduce_formula(r))
        case Or(l, r):
            return Or(_reduce_formula(l), _reduce_formula(r))
        case Forall(h, b):
            return Forall(h, _reduce_formula(b))
        case Exists(h, b):
            return Exists(h, _reduce_formula(b))
        case _:
            raise TypeError(f"not a formula: {f!r}")


def _reduce_subst(s: Substitution) -> Substitution:
    if s.is_empty():
        return s
    return Substitution(
        {k: _reduce_term(v) for k, v in s.terms.items()},
        {
            k: FormulaSchema(sch.params, _reduce_formula(sch.body))
            for k, sch in s.formulas.items()
        },
    )


def _retag(formula: Formula, rule: str) -> str:
    # Reduction can move a leaf out of its axiom class (an x = d(x+1)
    # instance reduces to n = n); pick the first class that still fits.
    if rule not in AXIOM_RULES or check_axiom(formula, _JUST_FOR[rule]()):
        return rule
    for tag in ("id1", "ax-succ", "ax-pred", "taut", "id2", "crit"):
        if check_axiom(formula, _JUST_FOR[tag]()):
            return tag
    return rule


def _reduce_node(node: ThreadNode) -> ThreadNode:
    formula = _reduce_formula(node.formula)
    return ThreadNode(
        formula,
        _retag(formula, node.rule),
        tuple(_reduce_node(c) for c in node.premises),
        _reduce_subst(node.subst) if node.subst is not None else None,
    )


def reduce_numerals(x):
    """Normal form under d(0) -> 0 and d(t+1) -> t, applied anywhere.

    Accepts a Term, Formula, ThreadProof, or ProofScript and maps the
    rewriting over it. Axiom lines whose class changes under reduction are
    retagged so the result still checks.
    """
    if isinstance(x, Term):
        return _reduce_term(x)
    if isinstance(x, Formula):
        return _reduce_formula(x)
    if isinstance(x, ThreadProof):
        return ThreadProof(_reduce_node(x.root))
    if isinstance(x, ProofScript):
        lines = []
        for line in x.lines:
            formula = _reduce_formula(line.formula)
            j = line.justification
            if isinstance(j, AXIOM_TAGS):
                j = _JUST_FOR[_retag(formula, _TAG_FOR[type(j)])]()
            elif isinstance(j, Subst):
                j = Subst(j.premise, _reduce_subst(j.subst))
            lines.append(ProofLine(line.number, formula, j))
        return ProofScript(tuple(lines))
    raise TypeError(f"cannot reduce {x!r}")
