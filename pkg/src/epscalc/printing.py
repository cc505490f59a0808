"""Canonical ASCII text for formulas, terms, and proof scripts.

The printer guarantees that its output reparses to an alpha-equivalent
value. Binder display names are chosen fresh against free variables and
enclosing binders, so shadowed or colliding hints never change meaning.
"""

from __future__ import annotations

from .kernel import (
    MP,
    AxPred,
    AxSucc,
    Crit,
    Id1,
    Id2,
    Justification,
    ProofScript,
    Rep,
    Subst,
    Taut,
)
from .syntax import (
    And,
    Bound,
    Epsilon,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaVar,
    FreeVar,
    Implies,
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    Zero,
    free_individual_vars,
    fresh_name,
)

RESERVED_NAMES = {"eps", "all", "ex", "s", "d"}

# connective precedence: implies < or < and < not < atoms
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NOT = 4
_PREC_ATOM = 5


def _display_name(hint: str, body, env: list[str]) -> str:
    base = hint if hint and hint[0].isalpha() and hint[0].islower() else "x"
    avoid = set(env) | free_individual_vars(body) | RESERVED_NAMES
    return fresh_name(base, avoid)


def _term(t: Term, env: list[str], protect_eps: bool) -> str:
    match t:
        case Zero():
            return "0"
        case Succ(a):
            inner = _term(a, env, protect_eps=True)
            return f"{inner}+1"
        case Pred(a):
            return f"d({_term(a, env, protect_eps=False)})"
        case FreeVar(name):
            return name
        case Bound(i):
            if i >= len(env):
                raise ValueError(f"dangling bound variable index {i}")
            return env[i]
        case Epsilon(hint, body):
            name = _display_name(hint, body, env)
            text = f"eps {name}. {_formula(body, [name] + env, 0)}"
            return f"({text})" if protect_eps else text
        case _:
            raise TypeError(f"not a term: {t!r}")


def _formula(f: Formula, env: list[str], ctx: int) -> str:
    match f:
        case Not(Eq(l, r)):
            return f"{_term(l, env, False)} != {_term(r, env, True)}"
        case Eq(l, r):
            return f"{_term(l, env, False)} = {_term(r, env, True)}"
        case FormulaVar(name, args):
            if not args:
                return name
            inner = ", ".join(_term(a, env, False) for a in args)
            return f"{name}({inner})"
        case Not(b):
            return f"~{_formula(b, env, _PREC_NOT)}"
        case Implies(l, r):
            text = (
                f"{_formula(l, env, _PREC_IMPLIES + 1)} -> "
                f"{_formula(r, env, _PREC_IMPLIES)}"
            )
            return f"({text})" if ctx > _PREC_IMPLIES else text
        case Or(l, r):
            text = f"{_formula(l, env, _PREC_OR)} | {_formula(r, env, _PREC_OR + 1)}"
            return f"({text})" if ctx > _PREC_OR else text
        case And(l, r):
            text = f"{_formula(l, env, _PREC_AND)} & {_formula(r, env, _PREC_AND + 1)}"
            return f"({text})" if ctx > _PREC_AND else text
        case Forall(hint, body):
            name = _display_name(hint, body, env)
            text = f"all {name}. {_formula(body, [name] + env, 0)}"
            return f"({text})" if ctx > _PREC_IMPLIES else text
        case Exists(hint, body):
            name = _display_name(hint, body, env)
            text = f"ex {name}. {_formula(body, [name] + env, 0)}"
            return f"({text})" if ctx > _PREC_IMPLIES else text
        case _:
            raise TypeError(f"not a formula: {f!r}")


def print_term(t: Term) -> str:
    return _term(t, [], protect_eps=False)


def print_formula(f: Formula) -> str:
    """Canonical text; parse_formula(print_formula(f)) is alpha_eq to f."""
    return _formula(f, [], 0)


def print_substitution(s: Substitution) -> str:
    parts = []
    for name in sorted(s.terms):
        parts.append(f"{name} := {print_term(s.terms[name])}")
    for name in sorted(s.formulas):
        schema = s.formulas[name]
        body = print_formula(schema.body)
        if schema.params:
            parts.append(f"{name} := ({', '.join(schema.params)}. {body})")
        else:
            parts.append(f"{name} := {body}")
    return "{" + ", ".join(parts) + "}"


def print_justification(j: Justification) -> str:
    match j:
        case Taut():
            return "taut"
        case Id1():
            return "id1"
        case Id2():
            return "id2"
        case AxSucc():
            return "ax-succ"
        case AxPred():
            return "ax-pred"
        case Crit():
            return "crit"
        case Subst(m, s):
            return f"subst {m} {print_substitution(s)}"
        case MP(m, k):
            return f"mp {m} {k}"
        case Rep(m):
            return f"rep {m}"
        case _:
            raise TypeError(f"not a justification: {j!r}")


def print_proof(p: ProofScript) -> str:
    lines = [
        f"{line.number}. {print_formula(line.formula)} ; "
        f"{print_justification(line.justification)}"
        for line in p.lines
    ]
    return "\n".join(lines) + "\n"
