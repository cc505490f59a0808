"""Deterministic random generators for terms, formulas, and substitutions."""

from __future__ import annotations

import random

from epscalc.syntax import (
    And,
    Bound,
    Epsilon,
    Eq,
    Exists,
    Forall,
    FormulaSchema,
    FormulaVar,
    FreeVar,
    Implies,
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    ZERO,
)

FREE_NAMES = ("a", "b", "c")
FORMULA_ARITY = {"A": 1, "B": 2, "C": 0}  # fixed arities keep schemas applicable
HINTS = ("x", "y", "z", "a")  # includes a free-name collision on purpose


def gen_term(rng: random.Random, depth: int, binders: int, *, eps=True, free=True):
    choices = ["zero", "succ", "pred"]
    if free:
        choices.append("var")
    if binders:
        choices.append("bound")
    if eps and depth > 0:
        choices.append("eps")
    if depth == 0:
        choices = [c for c in choices if c in ("zero", "var", "bound")] or ["zero"]
    match rng.choice(choices):
        case "zero":
            return ZERO
        case "succ":
            return Succ(gen_term(rng, depth - 1, binders, eps=eps, free=free))
        case "pred":
            return Pred(gen_term(rng, depth - 1, binders, eps=eps, free=free))
        case "var":
            return FreeVar(rng.choice(FREE_NAMES))
        case "bound":
            return Bound(rng.randrange(binders))
        case "eps":
            return Epsilon(
                rng.choice(HINTS),
                gen_formula(
                    rng, depth - 1, binders + 1, quant=False, eps=eps, free=free
                ),
            )


def gen_formula(
    rng: random.Random,
    depth: int,
    binders: int = 0,
    *,
    quant=True,
    eps=True,
    free=True,
    fvar=True,
):
    choices = ["eq"]
    if fvar:
        choices.append("fvar")
    if depth > 0:
        choices += ["not", "implies", "and", "or"]
        if quant:
            choices += ["all", "ex"]
    match rng.choice(choices):
        case "eq":
            return Eq(
                gen_term(rng, max(depth - 1, 0), binders, eps=eps, free=free),
                gen_term(rng, max(depth - 1, 0), binders, eps=eps, free=free),
            )
        case "fvar":
            name = rng.choice(sorted(FORMULA_ARITY))
            return FormulaVar(
                name,
                tuple(
                    gen_term(rng, max(depth - 1, 0), binders, eps=eps, free=free)
                    for _ in range(FORMULA_ARITY[name])
                ),
            )
        case "not":
            return Not(
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar)
            )
        case "implies":
            return Implies(
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
            )
        case "and":
            return And(
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
            )
        case "or":
            return Or(
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
                gen_formula(rng, depth - 1, binders, quant=quant, eps=eps, free=free, fvar=fvar),
            )
        case "all":
            return Forall(
                rng.choice(HINTS),
                gen_formula(rng, depth - 1, binders + 1, quant=quant, eps=eps, free=free, fvar=fvar),
            )
        case "ex":
            return Exists(
                rng.choice(HINTS),
                gen_formula(rng, depth - 1, binders + 1, quant=quant, eps=eps, free=free, fvar=fvar),
            )


def gen_sentence(rng: random.Random, quantifiers: int, depth: int = 3):
    """A closed quantified sentence over {0, +1, d, =}: no free variables,
    no epsilons, no formula variables, at most `quantifiers` binders."""

    def go(depth, binders, quota):
        choices = ["eq"]
        if depth > 0:
            choices += ["not", "implies", "and", "or"]
            if quota > 0:
                choices += ["all", "ex", "all", "ex"]
        match rng.choice(choices):
            case "eq":
                return (
                    Eq(
                        gen_term(rng, 2, binders, eps=False, free=False),
                        gen_term(rng, 2, binders, eps=False, free=False),
                    ),
                    quota,
                )
            case "not":
                f, quota = go(depth - 1, binders, quota)
                return Not(f), quota
            case "implies":
                l, quota = go(depth - 1, binders, quota)
                r, quota = go(depth - 1, binders, quota)
                return Implies(l, r), quota
            case "and":
                l, quota = go(depth - 1, binders, quota)
                r, quota = go(depth - 1, binders, quota)
                return And(l, r), quota
            case "or":
                l, quota = go(depth - 1, binders, quota)
                r, quota = go(depth - 1, binders, quota)
                return Or(l, r), quota
            case "all":
                f, quota = go(depth - 1, binders + 1, quota - 1)
                return Forall(rng.choice(HINTS), f), quota
            case "ex":
                f, quota = go(depth - 1, binders + 1, quota - 1)
                return Exists(rng.choice(HINTS), f), quota

    sentence, _ = go(depth, 0, quantifiers)
    return sentence


def gen_substitution(rng: random.Random) -> Substitution:
    terms = {}
    for name in FREE_NAMES:
        if rng.random() < 0.5:
            terms[name] = gen_term(rng, 2, 0, eps=rng.random() < 0.4)
    formulas = {}
    for name, arity in FORMULA_ARITY.items():
        if rng.random() < 0.4:
            params = tuple(f"p{i}" for i in range(arity))
            body = gen_formula(rng, 2, 0, quant=False, fvar=False)
            if params and rng.random() < 0.7:
                # make parameters actually occur
                body = And(body, Eq(FreeVar(params[0]), ZERO))
            formulas[name] = FormulaSchema(params, body)
    return Substitution(terms, formulas)
