"""Critical-formula elimination in the simplest case, and its side conditions.

A critical formula A(t) -> A(eps x. A(x)) is removed by building two copies
of the proof: one in which every formula F becomes ~A(t1) -> F (the t1
instance then follows from two tautologies), and one in which every formula
becomes A(t1) -> F with eps x. A(x) replaced by t1 everywhere (the former
critical formulas become tautologies). The two conditionals combine by the
excluded-middle tautology (~p -> q) -> ((p -> q) -> q). Induction over
the remaining instances yields a proof without critical formulas, after
which every leftover epsilon term is replaced by 0.

The procedure only works when the matrices are epsilon-free, identity
axioms are absent, and no replacement can renew an epsilon term; the
checks here reject anything outside that fragment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import (
    AXIOM_TAGS,
    Crit,
    CriticalFamily,
    Id1,
    Id2,
    Justification,
    MP,
    ProofLine,
    ProofScript,
    Rep,
    Subst,
    Taut,
    find_critical_families,
)
from .printing import print_term
from .syntax import (
    And,
    Epsilon,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaSchema,
    FormulaVar,
    Implies,
    Node,
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    ZERO,
    alpha_eq,
    apply_subst,
    apply_subst_term,
    contains_term,
    epsilon_subterms,
    has_epsilon,
    instantiate,
    replace_term,
)

NESTED_MATRIX_EPSILON = "NestedMatrixEpsilon"
EQUALITY_AXIOM_G = "EqualityAxiomG"
RENEWED_EPSILON = "RenewedEpsilon"
IDENTITY_AXIOM_USED = "IdentityAxiomUsed"
WITNESS_CONTAINS_TARGET = "WitnessContainsTarget"

BLOCKER_KINDS = frozenset(
    {
        NESTED_MATRIX_EPSILON,
        EQUALITY_AXIOM_G,
        RENEWED_EPSILON,
        IDENTITY_AXIOM_USED,
        WITNESS_CONTAINS_TARGET,
    }
)


@dataclass(frozen=True)
class BlockerFinding:
    kind: str
    line: int
    detail: str

    def __post_init__(self):
        if self.kind not in BLOCKER_KINDS:
            raise ValueError(f"unknown blocker kind {self.kind!r}")

    def render(self) -> str:
        return f"blocker: {self.kind} line {self.line} - {self.detail}"


@dataclass(frozen=True)
class AnsatzReport:
    applicable: bool
    blockers: tuple[BlockerFinding, ...]
    families: tuple[CriticalFamily, ...]

    def render(self) -> str:
        if self.applicable:
            return "applicable\n"
        return "\n".join(b.render() for b in self.blockers) + "\n"


class NotApplicable(Exception):
    def __init__(self, report: AnsatzReport, message: str = ""):
        self.report = report
        text = message or "the simplest-case elimination does not apply"
        if report.blockers:
            text += "\n" + "\n".join(b.render() for b in report.blockers)
        super().__init__(text)


# ---------------------------------------------------------------------------
# quantifier translation


def translate_quantifiers(f: Formula) -> Formula:
    """Innermost-first replacement of ex x. A(x) by A(eps x. A(x)) and of
    all x. A(x) by A(eps x. ~A(x)); the result has no quantifiers."""
    match f:
        case Exists(h, b):
            body = translate_quantifiers(b)
            return instantiate(body, Epsilon(h, body))
        case Forall(h, b):
            body = translate_quantifiers(b)
            return instantiate(body, Epsilon(h, Not(body)))
        case Eq(l, r):
            return Eq(_translate_term(l), _translate_term(r))
        case FormulaVar(n, args):
            return FormulaVar(n, tuple(_translate_term(a) for a in args))
        case Not(b):
            return Not(translate_quantifiers(b))
        case Implies(l, r):
            return Implies(translate_quantifiers(l), translate_quantifiers(r))
        case And(l, r):
            return And(translate_quantifiers(l), translate_quantifiers(r))
        case Or(l, r):
            return Or(translate_quantifiers(l), translate_quantifiers(r))
        case _:
            raise TypeError(f"not a formula: {f!r}")


def _translate_term(t: Term) -> Term:
    match t:
        case Epsilon(h, b):
            return Epsilon(h, translate_quantifiers(b))
        case Succ(a):
            return Succ(_translate_term(a))
        case Pred(a):
            return Pred(_translate_term(a))
        case _:
            return t


# ---------------------------------------------------------------------------
# applicability


def check_ansatz_applicable(p: ProofScript) -> AnsatzReport:
    """Detect the structural blockers of the simplest-case elimination.

    Applicable iff every family matrix is epsilon-free, no identity axiom
    occurs, no witness contains a family epsilon term, and no epsilon term
    in a crit line properly contains a family epsilon term.
    """
    families = tuple(find_critical_families(p))
    fam_terms = [fam.epsilon_term for fam in families]
    findings: dict[tuple[str, int], BlockerFinding] = {}

    def add(kind: str, line: int, detail: str) -> None:
        findings.setdefault((kind, line), BlockerFinding(kind, line, detail))

    for line in p.lines:
        if isinstance(line.justification, (Id1, Id2)):
            if isinstance(line.justification, Id2) and has_epsilon(line.formula):
                add(
                    EQUALITY_AXIOM_G,
                    line.number,
                    "identity axiom applied to an epsilon functional",
                )
            else:
                add(IDENTITY_AXIOM_USED, line.number, "identity axiom used")

    for fam in families:
        if has_epsilon(fam.matrix):
            add(
                NESTED_MATRIX_EPSILON,
                fam.instances[0][0],
                f"matrix of {print_term(fam.epsilon_term)} contains an epsilon term",
            )
        for line_number, witness in fam.instances:
            for target in fam_terms:
                if contains_term(witness, target):
                    add(
                        WITNESS_CONTAINS_TARGET,
                        line_number,
                        f"witness {print_term(witness)} contains "
                        f"{print_term(target)}",
                    )

    for line in p.lines:
        if not isinstance(line.justification, Crit):
            continue
        for sub in epsilon_subterms(line.formula):
            for target in fam_terms:
                if not alpha_eq(sub, target) and contains_term(sub, target):
                    add(
                        RENEWED_EPSILON,
                        line.number,
                        f"epsilon term {print_term(sub)} properly contains "
                        f"{print_term(target)}; replacing the inner term "
                        "would renew a critical formula",
                    )

    ordered = tuple(
        sorted(findings.values(), key=lambda b: (b.line, b.kind))
    )
    return AnsatzReport(not ordered, ordered, families)


# ---------------------------------------------------------------------------
# elimination


class _Builder:
    def __init__(self):
        self.lines: list[ProofLine] = []

    def emit(self, formula: Formula, justification: Justification) -> int:
        number = len(self.lines) + 1
        self.lines.append(ProofLine(number, formula, justification))
        return number


def _subst_replaced(s: Substitution, target: Term, replacement: Term) -> Substitution:
    if s.is_empty():
        return s
    return Substitution(
        {k: replace_term(v, target, replacement) for k, v in s.terms.items()},
        {
            k: FormulaSchema(sch.params, replace_term(sch.body, target, replacement))
            for k, sch in s.formulas.items()
        },
    )


def eliminate_critical_family(p: ProofScript, fam: CriticalFamily) -> ProofScript:
    """Remove the first-witness instances of one critical family.

    The output proves the same end formula, checks valid, and contains
    critical formulas of this family only for the remaining witnesses.
    """
    report = check_ansatz_applicable(p)
    if not report.applicable:
        raise NotApplicable(report)
    if not fam.instances:
        raise ValueError("the family has no instances")
    end = p.end_formula
    if has_epsilon(end):
        raise NotApplicable(report, "the end formula must be epsilon-free")

    eps = fam.epsilon_term
    matrix = fam.matrix
    t1 = fam.instances[0][1]
    a_t1 = instantiate(matrix, t1)
    a_eps = instantiate(matrix, eps)
    guard_neg = Not(a_t1)
    first_witness_lines = {
        number for number, w in fam.instances if alpha_eq(w, t1)
    }
    instance_lines = {number: w for number, w in fam.instances}

    builder = _Builder()
    formulas = {line.number: line.formula for line in p.lines}

    def guarded_subst_ok(guard: Formula, s: Substitution) -> bool:
        return alpha_eq(apply_subst(guard, s), guard) and alpha_eq(
            apply_subst_term(eps, s), eps
        )

    # -- copy (i): every F becomes ~A(t1) -> F ------------------------------
    map1: dict[int, int] = {}
    raw1: dict[int, int] = {}
    for line in p.lines:
        f = line.formula
        guarded = Implies(guard_neg, f)
        j = line.justification
        if isinstance(j, AXIOM_TAGS):
            if line.number in first_witness_lines:
                # the t1 critical formula follows from two tautologies
                prem = Implies(a_t1, Implies(guard_neg, a_eps))
                goal = Implies(guard_neg, Implies(a_t1, a_eps))
                a = builder.emit(prem, Taut())
                b = builder.emit(Implies(prem, goal), Taut())
                map1[line.number] = builder.emit(goal, MP(a, b))
            else:
                r = builder.emit(f, j)
                raw1[line.number] = r
                t = builder.emit(Implies(f, guarded), Taut())
                map1[line.number] = builder.emit(guarded, MP(r, t))
            continue
        match j:
            case MP(m, k):
                g_minor = Implies(guard_neg, formulas[m])
                g_major = Implies(guard_neg, formulas[k])
                x = builder.emit(
                    Implies(g_minor, Implies(g_major, guarded)), Taut()
                )
                y = builder.emit(Implies(g_major, guarded), MP(map1[m], x))
                map1[line.number] = builder.emit(guarded, MP(map1[k], y))
            case Rep(m):
                map1[line.number] = builder.emit(guarded, Rep(map1[m]))
            case Subst(m, s):
                if not guarded_subst_ok(guard_neg, s):
                    raise NotApplicable(
                        report,
                        f"line {line.number}: the substitution interferes "
                        "with the guard formula",
                    )
                map1[line.number] = builder.emit(guarded, Subst(map1[m], s))
            case _:
                raise ValueError(f"unknown justification {j!r}")

    # -- copy (ii): A(t1) -> F with eps replaced by t1 everywhere -----------
    map2: dict[int, int] = {}
    for line in p.lines:
        f2 = replace_term(line.formula, eps, t1)
        guarded = Implies(a_t1, f2)
        j = line.justification
        if isinstance(j, AXIOM_TAGS):
            if line.number in instance_lines:
                # was A(w) -> A(eps); now A(t1) -> (A(w) -> A(t1)), a tautology
                a_w = instantiate(matrix, instance_lines[line.number])
                map2[line.number] = builder.emit(
                    Implies(a_t1, Implies(a_w, a_t1)), Taut()
                )
            elif isinstance(j, Crit):
                # other families never mention this eps; reuse copy (i)'s line
                r = builder.emit(line.formula, Rep(raw1[line.number]))
                t = builder.emit(Implies(line.formula, guarded), Taut())
                map2[line.number] = builder.emit(guarded, MP(r, t))
            else:
                r = builder.emit(f2, j)
                t = builder.emit(Implies(f2, guarded), Taut())
                map2[line.number] = builder.emit(guarded, MP(r, t))
            continue
        match j:
            case MP(m, k):
                g_minor = Implies(a_t1, replace_term(formulas[m], eps, t1))
                g_major = Implies(a_t1, replace_term(formulas[k], eps, t1))
                x = builder.emit(
                    Implies(g_minor, Implies(g_major, guarded)), Taut()
                )
                y = builder.emit(Implies(g_major, guarded), MP(map2[m], x))
                map2[line.number] = builder.emit(guarded, MP(map2[k], y))
            case Rep(m):
                map2[line.number] = builder.emit(guarded, Rep(map2[m]))
            case Subst(m, s):
                s2 = _subst_replaced(s, eps, t1)
                if not guarded_subst_ok(a_t1, s2):
                    raise NotApplicable(
                        report,
                        f"line {line.number}: the substitution interferes "
                        "with the guard formula",
                    )
                map2[line.number] = builder.emit(guarded, Subst(map2[m], s2))
            case _:
                raise ValueError(f"unknown justification {j!r}")

    # -- combine by excluded middle ------------------------------------------
    last = p.lines[-1].number
    neg_case = Implies(guard_neg, end)
    pos_case = Implies(a_t1, end)
    x = builder.emit(Implies(neg_case, Implies(pos_case, end)), Taut())
    y = builder.emit(Implies(pos_case, end), MP(map1[last], x))
    builder.emit(end, MP(map2[last], y))
    return ProofScript(tuple(builder.lines))


def _replace_eps_in_script(p: ProofScript, replacement: Term) -> ProofScript:
    # lines share subformulas heavily, so replace with an identity-preserving
    # memoized sweep instead of rebuilding every tree
    memo: dict[int, tuple] = {}

    def sweep(y):
        entry = memo.get(id(y))
        if entry is not None and entry[0] is y:
            return entry[1]
        match y:
            case Epsilon(_, _):
                result = replacement
            case Eq(l, r):
                l2, r2 = sweep(l), sweep(r)
                result = y if l2 is l and r2 is r else Eq(l2, r2)
            case Implies(l, r):
                l2, r2 = sweep(l), sweep(r)
                result = y if l2 is l and r2 is r else Implies(l2, r2)
            case And(l, r):
                l2, r2 = sweep(l), sweep(r)
                result = y if l2 is l and r2 is r else And(l2, r2)
            case Or(l, r):
                l2, r2 = sweep(l), sweep(r)
                result = y if l2 is l and r2 is r else Or(l2, r2)
            case Not(b):
                b2 = sweep(b)
                result = y if b2 is b else Not(b2)
            case Succ(a):
                a2 = sweep(a)
                result = y if a2 is a else Succ(a2)
            case Pred(a):
                a2 = sweep(a)
                result = y if a2 is a else Pred(a2)
            case Forall(h, b):
                b2 = sweep(b)
                result = y if b2 is b else Forall(h, b2)
            case Exists(h, b):
                b2 = sweep(b)
                result = y if b2 is b else Exists(h, b2)
            case FormulaVar(n, args):
                new_args = tuple(sweep(a) for a in args)
                result = (
                    y
                    if all(a is b for a, b in zip(args, new_args))
                    else FormulaVar(n, new_args)
                )
            case _:
                result = y
        memo[id(y)] = (y, result)
        return result

    lines = []
    for line in p.lines:
        j = line.justification
        if isinstance(j, Subst):
            s = j.subst
            j = Subst(
                j.premise,
                Substitution(
                    {k: sweep(v) for k, v in s.terms.items()},
                    {
                        k: FormulaSchema(sch.params, sweep(sch.body))
                        for k, sch in s.formulas.items()
                    },
                ),
            )
        lines.append(ProofLine(line.number, sweep(line.formula), j))
    return ProofScript(tuple(lines))


def eliminate_all_critical(p: ProofScript) -> ProofScript:
    """Repeat the elimination until no critical formula remains, then
    replace every residual epsilon term by 0."""
    report = check_ansatz_applicable(p)
    if not report.applicable:
        raise NotApplicable(report)
    current = p
    remaining = sum(fam.size() for fam in report.families)
    while remaining:
        families = find_critical_families(current)
        current = eliminate_critical_family(current, families[0])
        now = sum(fam.size() for fam in find_critical_families(current))
        assert now == remaining - 1, "critical-instance count must decrease by 1"
        remaining = now
    if any(has_epsilon(line.formula) for line in current.lines) or any(
        isinstance(line.justification, Subst)
        and (
            any(has_epsilon(v) for v in line.justification.subst.terms.values())
            or any(
                has_epsilon(sch.body)
                for sch in line.justification.subst.formulas.values()
            )
        )
        for line in current.lines
    ):
        current = _replace_eps_in_script(current, ZERO)
    return current
