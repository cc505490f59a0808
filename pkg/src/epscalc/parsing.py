"""Parser for the ASCII formula and proof-script formats.

Formula grammar (precedence ~ > & > | > ->, with -> right-associative):

    formula := or ('->' formula)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | ('all'|'ex') name '.' formula | atom
    atom    := NAME                      (formula variable, uppercase)
             | NAME '(' term,... ')'
             | term ('=' | '!=') term
             | '(' formula ')'
    term    := primary ('+1')*
    primary := '0' | 's' '(' term ')' | 'd' '(' term ')'
             | 'eps' name '.' formula | name | '(' term ')'

Binder bodies extend as far as possible; '=' never continues a formula, so
an epsilon term can stand unparenthesized on the left of an equation.

Proof scripts are lines `n. <formula> ; <justification>` with strictly
increasing line numbers; justifications may only cite earlier lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .kernel import (
    MP,
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
    Not,
    Or,
    Pred,
    Substitution,
    Succ,
    Term,
    ZERO,
)

KEYWORDS = {"eps", "all", "ex"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = ()):
        self.span = span
        self.expected = expected
        where = f"line {span.line}, column {span.column}"
        if expected:
            message = f"{message} (expected {', '.join(expected)})"
        super().__init__(f"{where}: {message}")
        self.message = message


class DanglingReference(Exception):
    """A justification cites a later or missing line."""

    def __init__(self, line: int, span: SourceSpan):
        self.line = line
        self.span = span
        super().__init__(
            f"line {span.line}, column {span.column}: "
            f"reference to missing or later line {line}"
        )


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "ident", "uident", "eof", or the punctuation itself
    text: str
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, len(self.text))


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)

    def err(message: str) -> ParseError:
        return ParseError(message, SourceSpan(line, col, 1))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            col += 1
            i += 1
            continue
        start_col = col
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (
                text[j].isalnum()
                or text[j] == "_"
                or (
                    text[j] == "-"
                    and j + 1 < n
                    and text[j + 1].isalnum()
                    and text[j + 1] != ">"
                )
            ):
                j += 1
            word = text[i:j]
            kind = "ident" if word[0].islower() else "uident"
            tokens.append(_Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        if c == "+":
            if i + 1 < n and text[i + 1] == "1":
                tokens.append(_Token("+1", "+1", line, start_col))
                col += 2
                i += 2
                continue
            raise err("'+' must be followed by '1'")
        if c == "-":
            if i + 1 < n and text[i + 1] == ">":
                tokens.append(_Token("->", "->", line, start_col))
                col += 2
                i += 2
                continue
            raise err("'-' must be followed by '>'")
        if c == "!":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(_Token("!=", "!=", line, start_col))
                col += 2
                i += 2
                continue
            raise err("'!' must be followed by '='")
        if c == ":":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(_Token(":=", ":=", line, start_col))
                col += 2
                i += 2
                continue
            raise err("':' must be followed by '='")
        if c in "().,;=~&|{}":
            tokens.append(_Token(c, c, line, start_col))
            col += 1
            i += 1
            continue
        raise err(f"unexpected character {c!r}")
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"found {tok.text!r}" if tok.text else "unexpected end of input", (kind,))
        return self.advance()

    def fail(self, message: str, expected: tuple[str, ...] = ()):
        raise ParseError(message, self.peek().span, expected)

    # -- formulas -----------------------------------------------------------

    def formula(self, env: list[str]) -> Formula:
        left = self.disjunction(env)
        if self.peek().kind == "->":
            self.advance()
            return Implies(left, self.formula(env))
        return left

    def disjunction(self, env: list[str]) -> Formula:
        f = self.conjunction(env)
        while self.peek().kind == "|":
            self.advance()
            f = Or(f, self.conjunction(env))
        return f

    def conjunction(self, env: list[str]) -> Formula:
        f = self.unary(env)
        while self.peek().kind == "&":
            self.advance()
            f = And(f, self.unary(env))
        return f

    def unary(self, env: list[str]) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.advance()
            return Not(self.unary(env))
        if tok.kind == "ident" and tok.text in ("all", "ex"):
            self.advance()
            name = self.binder_name()
            self.expect(".")
            body = self.formula([name] + env)
            return Forall(name, body) if tok.text == "all" else Exists(name, body)
        return self.atom(env)

    def binder_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.fail("expected a bound-variable name", ("variable",))
        self.advance()
        return tok.text

    def atom(self, env: list[str]) -> Formula:
        tok = self.peek()
        if tok.kind == "uident":
            self.advance()
            args: tuple[Term, ...] = ()
            if self.peek().kind == "(":
                self.advance()
                items: list[Term] = []
                if self.peek().kind != ")":
                    items.append(self.term(env))
                    while self.peek().kind == ",":
                        self.advance()
                        items.append(self.term(env))
                self.expect(")")
                args = tuple(items)
            return FormulaVar(tok.text, args)
        if tok.kind == "(":
            # Either a parenthesized term starting an equation or a
            # parenthesized formula; try the term reading first.
            saved = self.pos
            try:
                t = self.term(env)
                return self.equation(t, env)
            except ParseError:
                self.pos = saved
            self.advance()
            f = self.formula(env)
            self.expect(")")
            return f
        t = self.term(env)
        return self.equation(t, env)

    def equation(self, left: Term, env: list[str]) -> Formula:
        tok = self.peek()
        if tok.kind == "=":
            self.advance()
            return Eq(left, self.term(env))
        if tok.kind == "!=":
            self.advance()
            return Not(Eq(left, self.term(env)))
        self.fail(
            f"found {tok.text!r} after a term" if tok.text else "unexpected end of input",
            ("=", "!="),
        )

    # -- terms --------------------------------------------------------------

    def term(self, env: list[str]) -> Term:
        t = self.primary(env)
        while self.peek().kind == "+1":
            self.advance()
            t = Succ(t)
        return t

    def primary(self, env: list[str]) -> Term:
        tok = self.peek()
        if tok.kind == "int":
            if tok.text != "0":
                self.fail("only 0 is a numeric term", ("0",))
            self.advance()
            return ZERO
        if tok.kind == "(":
            self.advance()
            t = self.term(env)
            self.expect(")")
            return t
        if tok.kind == "ident":
            if tok.text == "eps":
                self.advance()
                name = self.binder_name()
                self.expect(".")
                body = self.formula([name] + env)
                return Epsilon(name, body)
            if tok.text in ("s", "d") and self.peek(1).kind == "(":
                self.advance()
                self.advance()
                inner = self.term(env)
                self.expect(")")
                return Succ(inner) if tok.text == "s" else Pred(inner)
            if tok.text in ("all", "ex"):
                self.fail("a quantified formula is not a term", ("term",))
            self.advance()
            if tok.text in env:
                return Bound(env.index(tok.text))
            return FreeVar(tok.text)
        self.fail(
            f"found {tok.text!r}" if tok.text else "unexpected end of input",
            ("term",),
        )

    # -- substitutions and justifications ------------------------------------

    def substitution(self) -> Substitution:
        self.expect("{")
        terms: dict[str, Term] = {}
        formulas: dict[str, FormulaSchema] = {}
        if self.peek().kind != "}":
            while True:
                self.subst_entry(terms, formulas)
                if self.peek().kind != ",":
                    break
                self.advance()
        self.expect("}")
        return Substitution(terms, formulas)

    def subst_entry(self, terms: dict, formulas: dict) -> None:
        tok = self.peek()
        if tok.kind == "ident":
            if tok.text in KEYWORDS:
                self.fail("expected a variable name", ("variable",))
            self.advance()
            self.expect(":=")
            if tok.text in terms:
                raise ParseError(f"duplicate entry for {tok.text}", tok.span)
            terms[tok.text] = self.term([])
            return
        if tok.kind == "uident":
            self.advance()
            self.expect(":=")
            if tok.text in formulas:
                raise ParseError(f"duplicate entry for {tok.text}", tok.span)
            formulas[tok.text] = self.schema_or_formula()
            return
        self.fail("expected a substitution entry", ("variable",))

    def _looks_like_params(self) -> bool:
        # '(' name (',' name)* '.' ahead of the cursor
        if self.peek().kind != "(":
            return False
        i = 1
        while True:
            if self.peek(i).kind != "ident" or self.peek(i).text in KEYWORDS:
                return False
            i += 1
            if self.peek(i).kind == ",":
                i += 1
                continue
            return self.peek(i).kind == "."

    def schema_or_formula(self) -> FormulaSchema:
        if self._looks_like_params():
            self.advance()  # (
            params = [self.binder_name()]
            while self.peek().kind == ",":
                self.advance()
                params.append(self.binder_name())
            self.expect(".")
            body = self.formula([])
            self.expect(")")
            return FormulaSchema(tuple(params), body)
        return FormulaSchema((), self.formula([]))

    def justification(self, seen: set[int]) -> Justification:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("expected a justification tag", ("justification",))
        self.advance()
        match tok.text:
            case "taut":
                return Taut()
            case "id1":
                return Id1()
            case "id2":
                return Id2()
            case "ax-succ":
                return AxSucc()
            case "ax-pred":
                return AxPred()
            case "crit":
                return Crit()
            case "subst":
                m = self.line_ref(seen)
                return Subst(m, self.substitution())
            case "mp":
                return MP(self.line_ref(seen), self.line_ref(seen))
            case "rep":
                return Rep(self.line_ref(seen))
            case other:
                raise ParseError(
                    f"unknown justification {other!r}",
                    tok.span,
                    ("taut", "id1", "id2", "ax-succ", "ax-pred", "crit", "subst", "mp", "rep"),
                )

    def line_ref(self, seen: set[int]) -> int:
        tok = self.expect("int")
        number = int(tok.text)
        if number not in seen:
            raise DanglingReference(number, tok.span)
        return number


def parse_formula(text: str) -> Formula:
    parser = _Parser(_lex(text))
    f = parser.formula([])
    if parser.peek().kind != "eof":
        parser.fail(f"trailing input {parser.peek().text!r}", ("end of input",))
    return f


def parse_term(text: str) -> Term:
    parser = _Parser(_lex(text))
    t = parser.term([])
    if parser.peek().kind != "eof":
        parser.fail(f"trailing input {parser.peek().text!r}", ("end of input",))
    return t


def parse_proof(text: str) -> ProofScript:
    parser = _Parser(_lex(text))
    lines: list[ProofLine] = []
    seen: set[int] = set()
    last = 0
    while parser.peek().kind != "eof":
        ntok = parser.expect("int")
        number = int(ntok.text)
        if number <= last:
            raise ParseError(
                f"line number {number} does not increase (previous was {last})",
                ntok.span,
            )
        parser.expect(".")
        formula = parser.formula([])
        parser.expect(";")
        justification = parser.justification(seen)
        lines.append(ProofLine(number, formula, justification))
        seen.add(number)
        last = number
    if not lines:
        raise ParseError("empty proof script", SourceSpan(1, 1, 0))
    return ProofScript(tuple(lines))
