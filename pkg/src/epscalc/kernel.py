"""Axiom classes, inference rules, and proof checking.

The calculus is the elementary calculus of free variables over 0, +1, d
(tautology and identity axioms, substitution, modus ponens) together with
the transfinite axiom schema A(t) -> A(eps x. A(x)), whose instances are
the critical formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Union

from .syntax import (
    And,
    ArityMismatch,
    Bound,
    Epsilon,
    Eq,
    Formula,
    FormulaVar,
    Forall,
    Exists,
    FreeVar,
    Implies,
    Node,
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    Zero,
    alpha_eq,
    apply_subst,
    canonical,
    closed,
    epsilon_subterms,
    instantiate,
)

TAUT_ATOM_LIMIT = 16


# ---------------------------------------------------------------------------
# justifications and scripts


@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class Id1:
    pass


@dataclass(frozen=True)
class Id2:
    pass


@dataclass(frozen=True)
class AxSucc:
    pass


@dataclass(frozen=True)
class AxPred:
    pass


@dataclass(frozen=True)
class Crit:
    pass


@dataclass(frozen=True)
class Subst:
    premise: int
    subst: Substitution


@dataclass(frozen=True)
class MP:
    minor: int
    major: int


@dataclass(frozen=True)
class Rep:
    premise: int


Justification = Union[Taut, Id1, Id2, AxSucc, AxPred, Crit, Subst, MP, Rep]

AXIOM_TAGS = (Taut, Id1, Id2, AxSucc, AxPred, Crit)


def premises_of(j: Justification) -> tuple[int, ...]:
    match j:
        case Subst(m, _):
            return (m,)
        case MP(m, k):
            return (m, k)
        case Rep(m):
            return (m,)
        case _:
            return ()


@dataclass(frozen=True)
class ProofLine:
    number: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofScript:
    lines: tuple[ProofLine, ...]

    def __post_init__(self):
        if not self.lines:
            raise ValueError("a proof script must have at least one line")

    @property
    def end_formula(self) -> Formula:
        return self.lines[-1].formula

    def formula_at(self, number: int) -> Optional[Formula]:
        for line in self.lines:
            if line.number == number:
                return line.formula
        return None


# ---------------------------------------------------------------------------
# tautology checking via the propositional skeleton


def _is_connective(f: Formula) -> bool:
    return isinstance(f, (Not, Implies, And, Or))


def skeleton_atoms(f: Formula) -> list[Formula]:
    """Maximal non-propositional subformulas, deduplicated up to alpha_eq."""
    out: list[Formula] = []
    seen: set[Node] = set()

    def walk(g: Formula) -> None:
        match g:
            case Not(b):
                walk(b)
            case Implies(l, r) | And(l, r) | Or(l, r):
                walk(l)
                walk(r)
            case _:
                key = canonical(g)
                if key not in seen:
                    seen.add(key)
                    out.append(g)

    walk(f)
    return out


class _TautologyChecker:
    """Bit-parallel tautology checking with sharing across calls.

    Atom columns over all 2^k assignments are packed into integers and the
    propositional skeleton is folded once with bitwise operations. Compiled
    skeletons are cached per formula object, which matters when one checking
    pass visits many lines built from shared subformulas.
    """

    def __init__(self):
        self.atom_ids: dict[str, int] = {}
        # id(obj) -> (obj, compiled node, frozenset of atom ids)
        self.compiled: dict[int, tuple] = {}

    def compile(self, g: Formula):
        entry = self.compiled.get(id(g))
        if entry is not None and entry[0] is g:
            return entry[1], entry[2]
        match g:
            case Not(b):
                node, used = self.compile(b)
                result = ("not", node), used
            case Implies(l, r):
                ln, lu = self.compile(l)
                rn, ru = self.compile(r)
                result = ("implies", ln, rn), lu | ru
            case And(l, r):
                ln, lu = self.compile(l)
                rn, ru = self.compile(r)
                result = ("and", ln, rn), lu | ru
            case Or(l, r):
                ln, lu = self.compile(l)
                rn, ru = self.compile(r)
                result = ("or", ln, rn), lu | ru
            case _:
                key = repr(canonical(g))
                aid = self.atom_ids.setdefault(key, len(self.atom_ids))
                result = ("atom", aid), frozenset((aid,))
        self.compiled[id(g)] = (g, result[0], result[1])
        return result

    def status(self, f: Formula, atom_limit: int) -> tuple[bool, Optional[str]]:
        tree, used = self.compile(f)
        k = len(used)
        if k > atom_limit:
            return False, f"AtomLimit: {k} distinct atoms exceed {atom_limit}"
        size = 1 << k
        mask = (1 << size) - 1
        position = {aid: i for i, aid in enumerate(sorted(used))}
        columns = {}
        for aid, i in position.items():
            # assignment j makes atom i true iff bit i of j is set
            width = 1 << (i + 1)
            block = ((1 << (1 << i)) - 1) << (1 << i)
            columns[aid] = block * (mask // ((1 << width) - 1))

        def fold(node) -> int:
            match node:
                case ("atom", aid):
                    return columns[aid]
                case ("not", a):
                    return ~fold(a) & mask
                case ("implies", a, b):
                    return (~fold(a) | fold(b)) & mask
                case ("and", a, b):
                    return fold(a) & fold(b)
                case ("or", a, b):
                    return fold(a) | fold(b)

        if fold(tree) == mask:
            return True, None
        return False, "not a tautology instance"


def tautology_status(
    f: Formula,
    atom_limit: int = TAUT_ATOM_LIMIT,
    checker: Optional[_TautologyChecker] = None,
) -> tuple[bool, Optional[str]]:
    """(True, None) if f is a tautology instance, else (False, reason)."""
    return (checker or _TautologyChecker()).status(f, atom_limit)


# ---------------------------------------------------------------------------
# identity and arithmetical axiom shapes


def _is_id2_instance(f: Formula) -> bool:
    # a = b -> (A(a) -> A(b)): the two inner formulas agree except at term
    # positions holding the equation's sides.
    match f:
        case Implies(Eq(t, s), Implies(left, right)):
            return _diff_formula(left, right, t, s)
        case _:
            return False


def _diff_term(u: Term, v: Term, t: Term, s: Term) -> bool:
    if alpha_eq(u, v):
        return True
    if alpha_eq(u, t) and alpha_eq(v, s):
        return True
    if type(u) is not type(v):
        return False
    match u:
        case Succ(a) | Pred(a):
            return _diff_term(a, v.arg, t, s)
        case Epsilon(_, b):
            return _diff_formula(b, v.body, t, s)
        case _:
            return False


def _diff_formula(f: Formula, g: Formula, t: Term, s: Term) -> bool:
    if type(f) is not type(g):
        return False
    match f:
        case Eq(l, r):
            return _diff_term(l, g.left, t, s) and _diff_term(r, g.right, t, s)
        case FormulaVar(n, args):
            return (
                n == g.name
                and len(args) == len(g.args)
                and all(_diff_term(a, b, t, s) for a, b in zip(args, g.args))
            )
        case Not(b):
            return _diff_formula(b, g.body, t, s)
        case Implies(l, r) | And(l, r) | Or(l, r):
            return _diff_formula(l, g.left, t, s) and _diff_formula(r, g.right, t, s)
        case Forall(_, b) | Exists(_, b):
            return _diff_formula(b, g.body, t, s)
        case _:
            return False


# ---------------------------------------------------------------------------
# critical-formula decomposition


@dataclass(frozen=True)
class CritDecomposition:
    epsilon_term: Epsilon
    matrix: Formula  # binder body; Bound(0) marks the distinguished slot
    witness: Term


class AmbiguousMatrix(Exception):
    """A crit line admits several non-alpha-equivalent decompositions."""

    def __init__(self, line: int, decompositions: list[CritDecomposition]):
        self.line = line
        self.decompositions = decompositions
        super().__init__(
            f"line {line}: {len(decompositions)} distinct (matrix, witness) "
            "decompositions"
        )

    def describe(self) -> str:
        from .printing import print_formula, print_term

        alts = "; ".join(
            f"eps-term {print_term(d.epsilon_term)} with witness {print_term(d.witness)}"
            for d in self.decompositions
        )
        return f"line {self.line}: ambiguous critical formula: {alts}"


def _match_witness(body: Formula, inst: Formula) -> Optional[Term]:
    """Find t with instantiate(body, t) alpha_eq inst, matching structurally."""
    found: list[Term] = []

    def go_t(b: Term, l: Term, depth: int) -> bool:
        if isinstance(b, Bound) and b.index == depth:
            if not closed(l):
                return False
            if found and not alpha_eq(found[0], l):
                return False
            found.append(l)
            return True
        if type(b) is not type(l):
            return False
        match b:
            case Zero():
                return True
            case FreeVar():
                return b.name == l.name
            case Bound(i):
                return i == l.index
            case Succ(a) | Pred(a):
                return go_t(a, l.arg, depth)
            case Epsilon(_, f):
                return go_f(f, l.body, depth + 1)
            case _:
                return False

    def go_f(b: Formula, l: Formula, depth: int) -> bool:
        if type(b) is not type(l):
            return False
        match b:
            case Eq(x, y):
                return go_t(x, l.left, depth) and go_t(y, l.right, depth)
            case FormulaVar(n, args):
                return (
                    n == l.name
                    and len(args) == len(l.args)
                    and all(go_t(a, c, depth) for a, c in zip(args, l.args))
                )
            case Not(f):
                return go_f(f, l.body, depth)
            case Implies(x, y) | And(x, y) | Or(x, y):
                return go_f(x, l.left, depth) and go_f(y, l.right, depth)
            case Forall(_, f) | Exists(_, f):
                return go_f(f, l.body, depth + 1)
            case _:
                return False

    if not go_f(body, inst, 0):
        return None
    return found[0] if found else None


def crit_decompositions(f: Formula) -> list[CritDecomposition]:
    """All (eps-term, matrix, witness) readings of f as a critical formula.

    The eps-term must occur in the consequent; this rules out degenerate
    constant-matrix readings whose eps-term appears nowhere.
    """
    if not isinstance(f, Implies):
        return []
    antecedent, consequent = f.left, f.right
    out: list[CritDecomposition] = []
    seen: set[tuple[Node, Node]] = set()
    for e in epsilon_subterms(consequent):
        if not closed(e):
            continue
        assert isinstance(e, Epsilon)
        if not alpha_eq(instantiate(e.body, e), consequent):
            continue
        witness = _match_witness(e.body, antecedent)
        if witness is None:
            continue
        key = (canonical(e), canonical(witness))
        if key not in seen:
            seen.add(key)
            out.append(CritDecomposition(e, e.body, witness))
    return out


# ---------------------------------------------------------------------------
# axiom checking


def axiom_status(
    f: Formula,
    j: Justification,
    checker: Optional[_TautologyChecker] = None,
) -> tuple[bool, Optional[str]]:
    match j:
        case Taut():
            return tautology_status(f, checker=checker)
        case Id1():
            if isinstance(f, Eq) and alpha_eq(f.left, f.right):
                return True, None
            return False, "not an instance of id1 (t = t)"
        case Id2():
            if _is_id2_instance(f):
                return True, None
            return False, "not an instance of id2 (a = b -> (A(a) -> A(b)))"
        case AxSucc():
            match f:
                case Not(Eq(Zero(), Succ(_))):
                    return True, None
            return False, "not an instance of ax-succ (0 != x+1)"
        case AxPred():
            match f:
                case Eq(t, Pred(Succ(u))) if alpha_eq(t, u):
                    return True, None
            return False, "not an instance of ax-pred (x = d(x+1))"
        case Crit():
            if crit_decompositions(f):
                return True, None
            return False, "not a critical formula (A(t) -> A(eps x. A(x)))"
        case _:
            raise ValueError(f"not an axiom justification: {j!r}")


def check_axiom(f: Formula, j: Justification) -> bool:
    ok, _ = axiom_status(f, j)
    return ok


# ---------------------------------------------------------------------------
# proof checking


@dataclass(frozen=True)
class LineReport:
    number: int
    ok: bool
    reason: Optional[str] = None


@dataclass(frozen=True)
class CheckReport:
    entries: tuple[LineReport, ...]

    @property
    def valid(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[LineReport]:
        return [e for e in self.entries if not e.ok]

    def render(self) -> str:
        lines = []
        for e in self.entries:
            if e.ok:
                lines.append(f"line {e.number}: ok")
            else:
                lines.append(f"line {e.number}: FAIL {e.reason}")
        return "\n".join(lines) + "\n"


def check_proof(p: ProofScript) -> CheckReport:
    """Check every line; failures are reported, never raised."""
    entries: list[LineReport] = []
    earlier: dict[int, Formula] = {}
    checker = _TautologyChecker()
    for line in p.lines:
        ok, reason = _check_line(line, earlier, checker)
        entries.append(LineReport(line.number, ok, reason))
        earlier[line.number] = line.formula
    return CheckReport(tuple(entries))


def _check_line(
    line: ProofLine,
    earlier: dict[int, Formula],
    checker: Optional[_TautologyChecker] = None,
) -> tuple[bool, Optional[str]]:
    j = line.justification
    if isinstance(j, AXIOM_TAGS):
        return axiom_status(line.formula, j, checker)

    for ref in premises_of(j):
        if ref not in earlier:
            return False, f"reference to missing or later line {ref}"

    match j:
        case Subst(m, s):
            try:
                expected = apply_subst(earlier[m], s)
            except ArityMismatch as exc:
                return False, f"ArityMismatch: {exc}"
            if alpha_eq(line.formula, expected):
                return True, None
            return False, f"substitution into line {m} does not yield this formula"
        case MP(m, k):
            major = earlier[k]
            if not isinstance(major, Implies):
                return False, f"major premise (line {k}) is not an implication"
            if not alpha_eq(major.left, earlier[m]):
                return False, f"minor premise (line {m}) does not match the major's antecedent"
            if not alpha_eq(major.right, line.formula):
                return False, "conclusion does not match the major's consequent"
            return True, None
        case Rep(m):
            if alpha_eq(line.formula, earlier[m]):
                return True, None
            return False, f"repetition differs from line {m}"
        case _:
            return False, f"unknown justification {j!r}"


# ---------------------------------------------------------------------------
# critical families


@dataclass(frozen=True)
class CriticalFamily:
    """An eps-term with all critical-formula instances for it in a proof."""

    epsilon_term: Epsilon
    matrix: Formula  # binder body; Bound(0) is the distinguished slot
    instances: tuple[tuple[int, Term], ...]  # (line number, witness)

    def witnesses(self) -> list[Term]:
        """Distinct witnesses up to alpha_eq, in first-occurrence order."""
        out: list[Term] = []
        seen: set[Node] = set()
        for _, w in self.instances:
            key = canonical(w)
            if key not in seen:
                seen.add(key)
                out.append(w)
        return out

    def size(self) -> int:
        return len(self.witnesses())


def find_critical_families(p: ProofScript) -> list[CriticalFamily]:
    """Group Crit-justified lines by their eps-term, in first-occurrence order.

    Raises AmbiguousMatrix when a crit line admits several readings.
    Assumes the script checks valid.
    """
    order: list[Node] = []
    reps: dict[Node, Epsilon] = {}
    matrices: dict[Node, Formula] = {}
    instances: dict[Node, list[tuple[int, Term]]] = {}
    for line in p.lines:
        if not isinstance(line.justification, Crit):
            continue
        decomps = crit_decompositions(line.formula)
        if not decomps:
            raise ValueError(
                f"line {line.number} is Crit-justified but not a critical formula"
            )
        if len(decomps) > 1:
            raise AmbiguousMatrix(line.number, decomps)
        d = decomps[0]
        key = canonical(d.epsilon_term)
        if key not in reps:
            order.append(key)
            reps[key] = d.epsilon_term
            matrices[key] = d.matrix
            instances[key] = []
        instances[key].append((line.number, d.witness))
    return [
        CriticalFamily(reps[k], matrices[k], tuple(instances[k])) for k in order
    ]
