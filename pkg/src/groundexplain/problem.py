"""Reading and writing problem files.

Grammar (statements end with ``.``, ``%`` starts a line comment)::

    abducible a, b, c.
    order a < b < c.
    axiom <clause>.
    goal <clause>.
    flatten <ground term>.

A clause is literals joined by ``|``; a literal is ``s = t`` or ``s != t``;
``$false`` is the empty clause. Identifiers starting with an uppercase letter
or ``_`` are variables, everything else is a function symbol or constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .terms import Clause, Fn, Literal, Term, Var


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class ClauseSyntaxError(ParseError):
    def __init__(self, line: int, col: int, expected: str, found: str):
        super().__init__(f"expected {expected}, found {found}", line, col)
        self.expected = expected
        self.found = found


class ArityMismatch(ParseError):
    def __init__(self, symbol: str, first: int, second: int, line: int, col: int):
        super().__init__(f"symbol {symbol!r} used with arity {second}, earlier {first}", line, col)
        self.symbol = symbol


class UnknownDirective(ParseError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unknown directive {name!r}", line, col)
        self.name = name


class ProblemError(ValueError):
    """Semantically invalid problem (e.g. an ordered name that is not abducible)."""


DIRECTIVES = ("abducible", "order", "axiom", "goal", "flatten")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)"
    r"|(?P<neq>!=)|(?P<false>\$false)|(?P<ident>[A-Za-z0-9_]+)|(?P<punct>[().,|=<])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ClauseSyntaxError(line, col, "a token", repr(text[pos]))
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class ProblemFile:
    abducibles: List[str] = field(default_factory=list)
    order: Optional[List[str]] = None
    axioms: List[Clause] = field(default_factory=list)
    goals: List[Clause] = field(default_factory=list)
    flatten: List[Term] = field(default_factory=list)

    @property
    def clauses(self) -> List[Clause]:
        return self.axioms + self.goals

    def abducible_order(self) -> List[str]:
        """Abducibles in increasing order: the ``order`` directive, then declaration order."""
        declared = list(dict.fromkeys(self.abducibles))
        if not self.order:
            return declared
        for name in self.order:
            if name not in declared:
                raise ProblemError(f"{name!r} appears in order but is not abducible")
        rest = [a for a in declared if a not in self.order]
        return list(dict.fromkeys(self.order)) + rest


def is_variable_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.arity: Dict[str, int] = {}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            raise ClauseSyntaxError(t.line, t.col, what or repr(text or kind), t.describe())
        return self.advance()

    def note_arity(self, name: str, n: int, tok: Token) -> None:
        seen = self.arity.setdefault(name, n)
        if seen != n:
            raise ArityMismatch(name, seen, n, tok.line, tok.col)

    def parse(self) -> ProblemFile:
        pf = ProblemFile()
        while self.tok.kind != "eof":
            head = self.tok
            if head.kind != "ident":
                raise ClauseSyntaxError(head.line, head.col, "a directive", head.describe())
            if head.text not in DIRECTIVES:
                raise UnknownDirective(head.text, head.line, head.col)
            self.advance()
            if head.text == "abducible":
                names = self.constant_list(",")
                pf.abducibles.extend(names)
            elif head.text == "order":
                names = self.constant_list("<")
                pf.order = (pf.order or []) + names
            elif head.text == "axiom":
                pf.axioms.append(self.clause())
            elif head.text == "goal":
                pf.goals.append(self.clause())
            else:
                pf.flatten.append(self.term({}))
            self.expect("punct", ".", "'.'")
        return pf

    def constant_list(self, sep: str) -> List[str]:
        names = []
        while True:
            t = self.expect("ident", what="a constant")
            if is_variable_name(t.text):
                raise ClauseSyntaxError(t.line, t.col, "a constant", repr(t.text))
            self.note_arity(t.text, 0, t)
            names.append(t.text)
            if self.tok.kind == "punct" and self.tok.text == sep:
                self.advance()
                continue
            return names

    def clause(self) -> Clause:
        if self.tok.kind == "false":
            self.advance()
            return Clause()
        scope: Dict[str, Var] = {}
        lits = [self.literal(scope)]
        while self.tok.kind == "punct" and self.tok.text == "|":
            self.advance()
            lits.append(self.literal(scope))
        return Clause(lits)

    def literal(self, scope) -> Literal:
        lhs = self.term(scope)
        t = self.tok
        if t.kind == "neq":
            positive = False
        elif t.kind == "punct" and t.text == "=":
            positive = True
        else:
            raise ClauseSyntaxError(t.line, t.col, "'=' or '!='", t.describe())
        self.advance()
        rhs = self.term(scope)
        return Literal(lhs, rhs, positive)

    def term(self, scope) -> Term:
        t = self.expect("ident", what="a term")
        name = t.text
        if is_variable_name(name):
            if self.tok.kind == "punct" and self.tok.text == "(":
                raise ClauseSyntaxError(self.tok.line, self.tok.col, "no arguments after a variable", "'('")
            return scope.setdefault(name, Var(name))
        args = []
        if self.tok.kind == "punct" and self.tok.text == "(":
            self.advance()
            args.append(self.term(scope))
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.advance()
                args.append(self.term(scope))
            self.expect("punct", ")", "',' or ')'")
        self.note_arity(name, len(args), t)
        return Fn(name, tuple(args))


def parse(text: str) -> ProblemFile:
    return _Parser(text).parse()


def parse_clause(text: str) -> Clause:
    """Parse a single clause, e.g. ``"a != c | b != d"``."""
    p = _Parser(text)
    c = p.clause()
    if p.tok.kind == "punct" and p.tok.text == ".":
        p.advance()
    p.expect("eof", what="end of clause")
    return c


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term({})
    p.expect("eof", what="end of term")
    return t


def format_clause(c: Clause) -> str:
    return str(c)


def format_problem(pf: ProblemFile) -> str:
    lines = []
    if pf.abducibles:
        lines.append(f"abducible {', '.join(pf.abducibles)}.")
    if pf.order:
        lines.append(f"order {' < '.join(pf.order)}.")
    lines += [f"axiom {format_clause(c)}." for c in pf.axioms]
    lines += [f"goal {format_clause(c)}." for c in pf.goals]
    lines += [f"flatten {t}." for t in pf.flatten]
    return "\n".join(lines) + "\n"
