"""Proof kernel and transformation engine for Hilbert's epsilon calculus."""

from .elimination import (
    AnsatzReport,
    BlockerFinding,
    NotApplicable,
    check_ansatz_applicable,
    eliminate_all_critical,
    eliminate_critical_family,
    translate_quantifiers,
)
from .epsub import EpsAssignment, NotSimpleCase, epsub_solve
from .kernel import (
    AmbiguousMatrix,
    AxPred,
    AxSucc,
    CheckReport,
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
    check_axiom,
    check_proof,
    find_critical_families,
)
from .parsing import (
    DanglingReference,
    ParseError,
    SourceSpan,
    parse_formula,
    parse_proof,
)
from .pipeline import (
    NonNumeralTerm,
    NotClosed,
    RefutedLeaf,
    TruthCertificate,
    WrongArity,
    check_verifiable,
    conservativity_extract,
    consistency_pipeline,
    eval_closed,
)
from .printing import print_formula, print_proof, print_term
from .syntax import (
    And,
    ArityMismatch,
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
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    ZERO,
    Zero,
    alpha_eq,
    apply_subst,
    epsilon_subterms,
    numeral,
    numeral_value,
)
from .transform import (
    ResidualEpsilon,
    ThreadNode,
    ThreadProof,
    eliminate_free_variable_substs,
    ground_residual_variables,
    reduce_numerals,
    resolve_threads,
)

__all__ = [name for name in dir() if not name.startswith("_")]
