"""The substitution-method iteration for a single, non-nested epsilon term.

Start by assigning 0 to the epsilon term and evaluate every critical
instance A(t_i) -> A(0). A false instance has a true antecedent, so its
witness value is a correct assignment; taking the least such value makes
every instance true in the next round. Two rounds always suffice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import ProofScript, check_proof, find_critical_families
from .pipeline import eval_closed
from .printing import print_term
from .syntax import (
    Epsilon,
    Formula,
    Implies,
    Node,
    Term,
    alpha_eq,
    contains_term,
    epsilon_free,
    instantiate,
    numeral,
    numeral_value,
    replace_term,
    variable_free,
)
from .transform import reduce_numerals


class NotSimpleCase(Exception):
    """The script falls outside the single non-nested family fragment."""


@dataclass(frozen=True)
class EpsAssignment:
    epsilon_term: Epsilon
    value: Term  # a numeral

    def apply(self, x: Node) -> Node:
        return replace_term(x, self.epsilon_term, self.value)

    def render(self) -> str:
        return f"{print_term(self.epsilon_term)} := {print_term(self.value)}"


@dataclass(frozen=True)
class Round:
    value: Term  # numeral tried for the epsilon term
    evaluations: tuple[bool, ...]  # one per critical instance, in line order

    def render(self, number: int) -> str:
        parts = [f"round {number}: eps := {print_term(self.value)}"]
        parts += [
            f"instance {i}: {'true' if ok else 'false'}"
            for i, ok in enumerate(self.evaluations, 1)
        ]
        return "; ".join(parts)


def render_transcript(rounds: list[Round]) -> str:
    return "\n".join(r.render(i) for i, r in enumerate(rounds, 1)) + "\n"


def epsub_solve(p: ProofScript) -> tuple[EpsAssignment, list[Round]]:
    """Find a numeral for the proof's single epsilon term that makes every
    critical instance evaluate true; also return the round transcript."""
    if not check_proof(p).valid:
        raise ValueError("the proof script does not check")
    families = find_critical_families(p)
    if len(families) != 1:
        raise NotSimpleCase(
            f"expected exactly one critical family, found {len(families)}"
        )
    fam = families[0]
    if not epsilon_free(fam.matrix):
        raise NotSimpleCase("the matrix contains a nested epsilon term")
    for _, witness in fam.instances:
        if contains_term(witness, fam.epsilon_term):
            raise NotSimpleCase(
                f"witness {print_term(witness)} contains the epsilon term"
            )
    for _, witness in fam.instances:
        if not variable_free(instantiate(fam.matrix, witness)):
            raise NotSimpleCase(
                "instances are not variable-free; run the transformation "
                "chain before solving"
            )

    def instance_value(value: Term) -> list[bool]:
        consequent = instantiate(fam.matrix, value)
        return [
            eval_closed(
                reduce_numerals(
                    Implies(instantiate(fam.matrix, w), consequent)
                )
            )
            for _, w in fam.instances
        ]

    rounds: list[Round] = []
    current = numeral(0)
    evaluations = instance_value(current)
    rounds.append(Round(current, tuple(evaluations)))
    if not all(evaluations):
        # a false instance has a true antecedent A(t_i); pick the least value
        candidates = []
        for (_, witness), ok in zip(fam.instances, evaluations):
            if not ok:
                n = numeral_value(reduce_numerals(witness))
                if n is None:
                    raise NotSimpleCase(
                        f"witness {print_term(witness)} does not reduce to a numeral"
                    )
                candidates.append(n)
        current = numeral(min(candidates))
        evaluations = instance_value(current)
        rounds.append(Round(current, tuple(evaluations)))
        assert all(evaluations), "the second round must satisfy every instance"
    return EpsAssignment(fam.epsilon_term, current), rounds
