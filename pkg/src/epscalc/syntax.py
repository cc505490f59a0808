"""Terms, formulas, and substitution for the epsilon calculus over {0, +1, d, =}.

Binders (eps, all, ex) are nameless internally: a bound occurrence is a de
Bruijn index counting enclosing binders, and the binder itself keeps only a
display hint used by the printer. Alpha-equivalence is therefore structural
equality that ignores hints, and substituting standalone (index-closed)
values can never capture a binder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class Term:
    pass


class Formula:
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True)
class Pred(Term):
    arg: Term


@dataclass(frozen=True)
class FreeVar(Term):
    name: str


@dataclass(frozen=True)
class Bound(Term):
    """Occurrence of a bound variable; index 0 is the nearest binder."""

    index: int


@dataclass(frozen=True)
class Epsilon(Term):
    """eps x. body -- a term-level binder whose body is a formula."""

    hint: str
    body: Formula


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class FormulaVar(Formula):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    hint: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    hint: str
    body: Formula


ZERO = Zero()

Node = Union[Term, Formula]


class ArityMismatch(Exception):
    """A formula-variable occurrence disagrees with its schema's arity."""

    def __init__(self, name: str, expected: int, got: int):
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(
            f"formula variable {name} expects {expected} argument(s), got {got}"
        )


# ---------------------------------------------------------------------------
# numerals


def numeral(n: int) -> Term:
    """The canonical term 0+1+...+1 with n successors."""
    if n < 0:
        raise ValueError("numerals are nonnegative")
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    """n if t is Succ^n(Zero), else None."""
    n = 0
    while isinstance(t, Succ):
        t = t.arg
        n += 1
    return n if isinstance(t, Zero) else None


# ---------------------------------------------------------------------------
# structural queries


def iter_terms(x: Node) -> Iterator[Term]:
    """All term nodes of x in preorder (including x itself if it is a term)."""
    match x:
        case Zero() | FreeVar() | Bound():
            yield x
        case Succ(a) | Pred(a):
            yield x
            yield from iter_terms(a)
        case Epsilon(_, b):
            yield x
            yield from iter_terms(b)
        case Eq(l, r):
            yield from iter_terms(l)
            yield from iter_terms(r)
        case FormulaVar(_, args):
            for a in args:
                yield from iter_terms(a)
        case Not(b) | Forall(_, b) | Exists(_, b):
            yield from iter_terms(b)
        case Implies(l, r) | And(l, r) | Or(l, r):
            yield from iter_terms(l)
            yield from iter_terms(r)
        case _:
            raise TypeError(f"not a term or formula: {x!r}")


def free_individual_vars(x: Node) -> set[str]:
    return {t.name for t in iter_terms(x) if isinstance(t, FreeVar)}


def formula_var_names(x: Node) -> set[str]:
    names = set()

    def walk(f: Node) -> None:
        match f:
            case FormulaVar(name, args):
                names.add(name)
                for a in args:
                    walk(a)
            case Eq(l, r) | Implies(l, r) | And(l, r) | Or(l, r):
                walk(l)
                walk(r)
            case Not(b) | Forall(_, b) | Exists(_, b) | Epsilon(_, b):
                walk(b)
            case Succ(a) | Pred(a):
                walk(a)
            case _:
                pass

    walk(x)
    return names


def has_epsilon(x: Node) -> bool:
    return any(isinstance(t, Epsilon) for t in iter_terms(x))


def epsilon_free(x: Node) -> bool:
    return not has_epsilon(x)


def has_quantifier(f: Node) -> bool:
    match f:
        case Forall(_, _) | Exists(_, _):
            return True
        case Not(b) | Epsilon(_, b):
            return has_quantifier(b)
        case Implies(l, r) | And(l, r) | Or(l, r) | Eq(l, r):
            return has_quantifier(l) or has_quantifier(r)
        case FormulaVar(_, args):
            return any(has_quantifier(a) for a in args)
        case Succ(a) | Pred(a):
            return has_quantifier(a)
        case _:
            return False


def variable_free(f: Node) -> bool:
    """No free variables, formula variables, quantifiers, or epsilons."""
    if has_quantifier(f) or formula_var_names(f):
        return False
    return all(
        not isinstance(t, (FreeVar, Epsilon)) for t in iter_terms(f)
    )


def closed(x: Node, depth: int = 0) -> bool:
    """True if no bound-variable index escapes the given binder depth."""
    match x:
        case Bound(i):
            return i < depth
        case Zero() | FreeVar():
            return True
        case Succ(a) | Pred(a):
            return closed(a, depth)
        case Epsilon(_, b) | Forall(_, b) | Exists(_, b):
            return closed(b, depth + 1)
        case Not(b):
            return closed(b, depth)
        case Eq(l, r) | Implies(l, r) | And(l, r) | Or(l, r):
            return closed(l, depth) and closed(r, depth)
        case FormulaVar(_, args):
            return all(closed(a, depth) for a in args)
        case _:
            raise TypeError(f"not a term or formula: {x!r}")


# ---------------------------------------------------------------------------
# alpha-equivalence


def alpha_eq(a: Node, b: Node) -> bool:
    """Structural equality ignoring binder hints."""
    if a is b:
        return True
    if type(a) is not type(b):
        return False
    match a:
        case Zero():
            return True
        case FreeVar(n):
            return n == b.name
        case Bound(i):
            return i == b.index
        case Succ(x) | Pred(x):
            return alpha_eq(x, b.arg)
        case Epsilon(_, body) | Forall(_, body) | Exists(_, body):
            return alpha_eq(body, b.body)
        case Eq(l, r):
            return alpha_eq(l, b.left) and alpha_eq(r, b.right)
        case FormulaVar(n, args):
            return (
                n == b.name
                and len(args) == len(b.args)
                and all(alpha_eq(x, y) for x, y in zip(args, b.args))
            )
        case Not(body):
            return alpha_eq(body, b.body)
        case Implies(l, r) | And(l, r) | Or(l, r):
            return alpha_eq(l, b.left) and alpha_eq(r, b.right)
        case _:
            raise TypeError(f"not a term or formula: {a!r}")


def canonical(x: Node) -> Node:
    """Hint-stripped copy; two nodes are alpha_eq iff canonical forms are ==."""
    match x:
        case Zero() | FreeVar() | Bound():
            return x
        case Succ(a):
            return Succ(canonical(a))
        case Pred(a):
            return Pred(canonical(a))
        case Epsilon(_, b):
            return Epsilon("", canonical(b))
        case Eq(l, r):
            return Eq(canonical(l), canonical(r))
        case FormulaVar(n, args):
            return FormulaVar(n, tuple(canonical(a) for a in args))
        case Not(b):
            return Not(canonical(b))
        case Implies(l, r):
            return Implies(canonical(l), canonical(r))
        case And(l, r):
            return And(canonical(l), canonical(r))
        case Or(l, r):
            return Or(canonical(l), canonical(r))
        case Forall(_, b):
            return Forall("", canonical(b))
        case Exists(_, b):
            return Exists("", canonical(b))
        case _:
            raise TypeError(f"not a term or formula: {x!r}")


def epsilon_subterms(f: Node) -> list[Term]:
    """All Epsilon subterms in first-occurrence preorder, deduplicated up to
    alpha_eq. Empty exactly when f is epsilon-free."""
    out: list[Term] = []
    seen: set[Node] = set()
    for t in iter_terms(f):
        if isinstance(t, Epsilon):
            key = canonical(t)
            if key not in seen:
                seen.add(key)
                out.append(t)
    return out


def contains_term(x: Node, target: Term) -> bool:
    """True if some term subterm of x is alpha_eq to target."""
    return any(alpha_eq(t, target) for t in iter_terms(x))


# ---------------------------------------------------------------------------
# index shifting and binder instantiation


def shift(x: Node, by: int, cutoff: int = 0) -> Node:
    """Add `by` to every dangling index >= cutoff."""
    if by == 0:
        return x
    match x:
        case Bound(i):
            return Bound(i + by) if i >= cutoff else x
        case Zero() | FreeVar():
            return x
        case Succ(a):
            return Succ(shift(a, by, cutoff))
        case Pred(a):
            return Pred(shift(a, by, cutoff))
        case Epsilon(h, b):
            return Epsilon(h, shift(b, by, cutoff + 1))
        case Eq(l, r):
            return Eq(shift(l, by, cutoff), shift(r, by, cutoff))
        case FormulaVar(n, args):
            return FormulaVar(n, tuple(shift(a, by, cutoff) for a in args))
        case Not(b):
            return Not(shift(b, by, cutoff))
        case Implies(l, r):
            return Implies(shift(l, by, cutoff), shift(r, by, cutoff))
        case And(l, r):
            return And(shift(l, by, cutoff), shift(r, by, cutoff))
        case Or(l, r):
            return Or(shift(l, by, cutoff), shift(r, by, cutoff))
        case Forall(h, b):
            return Forall(h, shift(b, by, cutoff + 1))
        case Exists(h, b):
            return Exists(h, shift(b, by, cutoff + 1))
        case _:
            raise TypeError(f"not a term or formula: {x!r}")


def instantiate(body: Formula, value: Term) -> Formula:
    """Open a binder body: references to the removed binder become `value`."""

    def go(x: Node, depth: int) -> Node:
        match x:
            case Bound(i):
                if i == depth:
                    return shift(value, depth)
                if i > depth:
                    return Bound(i - 1)
                return x
            case Zero() | FreeVar():
                return x
            case Succ(a):
                return Succ(go(a, depth))
            case Pred(a):
                return Pred(go(a, depth))
            case Epsilon(h, b):
                return Epsilon(h, go(b, depth + 1))
            case Eq(l, r):
                return Eq(go(l, depth), go(r, depth))
            case FormulaVar(n, args):
                return FormulaVar(n, tuple(go(a, depth) for a in args))
            case Not(b):
                return Not(go(b, depth))
            case Implies(l, r):
                return Implies(go(l, depth), go(r, depth))
            case And(l, r):
                return And(go(l, depth), go(r, depth))
            case Or(l, r):
                return Or(go(l, depth), go(r, depth))
            case Forall(h, b):
                return Forall(h, go(b, depth + 1))
            case Exists(h, b):
                return Exists(h, go(b, depth + 1))
            case _:
                raise TypeError(f"not a term or formula: {x!r}")

    return go(body, 0)


def replace_term(x: Node, target: Term, replacement: Term) -> Node:
    """Replace every subterm alpha_eq to `target` by `replacement`.

    Both target and replacement must be standalone (index-closed), so the
    replacement is depth-independent.
    """
    # an epsilon target cannot occur in an epsilon-free tree
    if isinstance(target, Epsilon) and not has_epsilon(x):
        return x

    def go(y: Node) -> Node:
        if isinstance(y, Term) and alpha_eq(y, target):
            return replacement
        match y:
            case Zero() | FreeVar() | Bound():
                return y
            case Succ(a):
                return Succ(go(a))
            case Pred(a):
                return Pred(go(a))
            case Epsilon(h, b):
                return Epsilon(h, go(b))
            case Eq(l, r):
                return Eq(go(l), go(r))
            case FormulaVar(n, args):
                return FormulaVar(n, tuple(go(a) for a in args))
            case Not(b):
                return Not(go(b))
            case Implies(l, r):
                return Implies(go(l), go(r))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Forall(h, b):
                return Forall(h, go(b))
            case Exists(h, b):
                return Exists(h, go(b))
            case _:
                raise TypeError(f"not a term or formula: {y!r}")

    return go(x)


def replace_all_epsilons(x: Node, replacement: Term = ZERO) -> Node:
    """Replace every (outermost) Epsilon subterm by `replacement`."""

    def go(y: Node) -> Node:
        match y:
            case Epsilon(_, _):
                return replacement
            case Zero() | FreeVar() | Bound():
                return y
            case Succ(a):
                return Succ(go(a))
            case Pred(a):
                return Pred(go(a))
            case Eq(l, r):
                return Eq(go(l), go(r))
            case FormulaVar(n, args):
                return FormulaVar(n, tuple(go(a) for a in args))
            case Not(b):
                return Not(go(b))
            case Implies(l, r):
                return Implies(go(l), go(r))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Forall(h, b):
                return Forall(h, go(b))
            case Exists(h, b):
                return Exists(h, go(b))
            case _:
                raise TypeError(f"not a term or formula: {y!r}")

    return go(x)


# ---------------------------------------------------------------------------
# substitution


@dataclass(frozen=True)
class FormulaSchema:
    """A formula with named parameter slots, e.g. (p. ex y. p = y)."""

    params: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Substitution:
    """Simultaneous replacement of free individual and formula variables.

    Values must be standalone (index-closed). Instances are treated as
    immutable; do not mutate the dicts after construction.
    """

    terms: dict[str, Term] = field(default_factory=dict)
    formulas: dict[str, FormulaSchema] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not self.terms and not self.formulas


EMPTY_SUBST = Substitution()


def apply_subst_term(t: Term, s: Substitution) -> Term:
    if s.is_empty():
        return t
    match t:
        case FreeVar(name):
            return s.terms.get(name, t)
        case Zero() | Bound():
            return t
        case Succ(a):
            return Succ(apply_subst_term(a, s))
        case Pred(a):
            return Pred(apply_subst_term(a, s))
        case Epsilon(h, b):
            return Epsilon(h, apply_subst(b, s))
        case _:
            raise TypeError(f"not a term: {t!r}")


def apply_subst(f: Formula, s: Substitution) -> Formula:
    """Capture-avoiding simultaneous substitution.

    Replacements are inserted as-is and not re-examined; named free
    variables cannot be captured by the index-based binders.
    """
    if s.is_empty():
        return f
    match f:
        case Eq(l, r):
            return Eq(apply_subst_term(l, s), apply_subst_term(r, s))
        case FormulaVar(name, args):
            new_args = tuple(apply_subst_term(a, s) for a in args)
            schema = s.formulas.get(name)
            if schema is None:
                return FormulaVar(name, new_args)
            if len(schema.params) != len(new_args):
                raise ArityMismatch(name, len(schema.params), len(new_args))
            if not schema.params:
                return schema.body
            return apply_subst(
                schema.body, Substitution(dict(zip(schema.params, new_args)))
            )
        case Not(b):
            return Not(apply_subst(b, s))
        case Implies(l, r):
            return Implies(apply_subst(l, s), apply_subst(r, s))
        case And(l, r):
            return And(apply_subst(l, s), apply_subst(r, s))
        case Or(l, r):
            return Or(apply_subst(l, s), apply_subst(r, s))
        case Forall(h, b):
            return Forall(h, apply_subst(b, s))
        case Exists(h, b):
            return Exists(h, apply_subst(b, s))
        case _:
            raise TypeError(f"not a formula: {f!r}")


def fresh_name(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _schema_after(schema: FormulaSchema, later: Substitution) -> FormulaSchema:
    # Parameters shadow the later substitution; rename any parameter the
    # later substitution could re-introduce into the body.
    introduced: set[str] = set()
    for v in later.terms.values():
        introduced |= free_individual_vars(v)
    for sch in later.formulas.values():
        introduced |= free_individual_vars(sch.body) - set(sch.params)

    shielded_terms = {
        k: v for k, v in later.terms.items() if k not in schema.params
    }
    avoid = (
        introduced
        | set(shielded_terms)
        | free_individual_vars(schema.body)
        | set(schema.params)
    )
    renaming: dict[str, Term] = {}
    new_params: list[str] = []
    for p in schema.params:
        if p in introduced:
            fresh = fresh_name(p, avoid)
            avoid.add(fresh)
            renaming[p] = FreeVar(fresh)
            new_params.append(fresh)
        else:
            new_params.append(p)
    body = schema.body
    if renaming:
        body = apply_subst(body, Substitution(renaming))
    body = apply_subst(body, Substitution(shielded_terms, later.formulas))
    return FormulaSchema(tuple(new_params), body)


def compose_subst(first: Substitution, second: Substitution) -> Substitution:
    """The substitution equivalent to applying `first`, then `second`."""
    if first.is_empty():
        return second
    if second.is_empty():
        return first
    terms = {x: apply_subst_term(v, second) for x, v in first.terms.items()}
    for y, v in second.terms.items():
        terms.setdefault(y, v)
    formulas = {
        name: _schema_after(sch, second) for name, sch in first.formulas.items()
    }
    for name, sch in second.formulas.items():
        formulas.setdefault(name, sch)
    return Substitution(terms, formulas)
