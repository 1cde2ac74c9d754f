"""Terms, literals, clauses and substitutions.

Two kinds of variables exist: ordinary variables and abducible variables.
The latter only appear after abstraction and stand for abducible constants.
All objects are immutable; hashes are cached since clauses are stored in
sets and dictionaries throughout the prover.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Collection, Dict, Iterable, Iterator, List, Mapping, Tuple, Union


class NonGround(ValueError):
    """Raised when an operation requires a ground clause."""


class Var:
    __slots__ = ("name", "abducible", "_hash")

    ground = False

    def __init__(self, name: str, abducible: bool = False):
        self.name = name
        self.abducible = abducible
        self._hash = hash((name, abducible))

    def __eq__(self, other):
        return self is other or (
            type(other) is Var and self.name == other.name and self.abducible == other.abducible
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"?{self.name}" if self.abducible else self.name

    __str__ = __repr__


class Fn:
    """Application of a function symbol; constants have no arguments."""

    __slots__ = ("sym", "args", "ground", "_hash", "_str")

    def __init__(self, sym: str, args: Tuple["Term", ...] = ()):
        self.sym = sym
        self.args = args
        self.ground = all(a.ground for a in args)
        self._hash = hash((sym, args))
        self._str = None

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Fn
            and self._hash == other._hash
            and self.sym == other.sym
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self._str is None:
            if self.args:
                self._str = f"{self.sym}({', '.join(map(str, self.args))})"
            else:
                self._str = self.sym
        return self._str

    __str__ = __repr__


Term = Union[Var, Fn]
Substitution = Dict[Var, Term]


def const(name: str) -> Fn:
    return Fn(name)


def fn(sym: str, *args: Term) -> Fn:
    return Fn(sym, tuple(args))


def var(name: str) -> Var:
    return Var(name)


def avar(name: str) -> Var:
    """An abducible variable."""
    return Var(name, abducible=True)


def subterms(t: Term, pos: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], Term]]:
    """Pre-order walk yielding (position, subterm)."""
    yield pos, t
    if type(t) is Fn:
        for i, a in enumerate(t.args):
            yield from subterms(a, pos + (i,))


def subterm_at(t: Term, pos: Tuple[int, ...]) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Tuple[int, ...], new: Term) -> Term:
    if not pos:
        return new
    i = pos[0]
    args = list(t.args)
    args[i] = replace_at(args[i], pos[1:], new)
    return Fn(t.sym, tuple(args))


def term_vars(t: Term, acc: set | None = None) -> set:
    if acc is None:
        acc = set()
    if type(t) is Var:
        acc.add(t)
    elif not t.ground:
        for a in t.args:
            term_vars(a, acc)
    return acc


def occurs(v: Var, t: Term) -> bool:
    if type(t) is Var:
        return t == v
    if t.ground:
        return False
    return any(occurs(v, a) for a in t.args)


def term_size(t: Term) -> int:
    if type(t) is Var:
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def symbols(t: Term, acc: Counter | None = None) -> Counter:
    """Function symbols with arity, as a Counter over (sym, arity)."""
    if acc is None:
        acc = Counter()
    if type(t) is Fn:
        acc[(t.sym, len(t.args))] += 1
        for a in t.args:
            symbols(a, acc)
    return acc


def contains_constant(t: Term, names: Collection[str]) -> bool:
    if type(t) is Var:
        return False
    if not t.args:
        return t.sym in names
    return any(contains_constant(a, names) for a in t.args)


def apply_term(t: Term, s: Mapping[Var, Term]) -> Term:
    if type(t) is Var:
        return s.get(t, t)
    if t.ground or not s:
        return t
    return Fn(t.sym, tuple(apply_term(a, s) for a in t.args))


class Literal:
    """An equation or disequation. Sides are unordered: ``s = t`` equals ``t = s``.

    Sides are stored in a fixed syntactic order so that structural equality and
    hashing agree with the unordered semantics.
    """

    __slots__ = ("positive", "lhs", "rhs", "_hash")

    def __init__(self, lhs: Term, rhs: Term, positive: bool = True):
        if str(rhs) < str(lhs):
            lhs, rhs = rhs, lhs
        self.lhs = lhs
        self.rhs = rhs
        self.positive = positive
        self._hash = hash((positive, lhs, rhs))

    def __eq__(self, other):
        return self is other or (
            type(other) is Literal
            and self._hash == other._hash
            and self.positive == other.positive
            and self.lhs == other.lhs
            and self.rhs == other.rhs
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        op = "=" if self.positive else "!="
        return f"{self.lhs} {op} {self.rhs}"

    @property
    def sides(self) -> Tuple[Term, Term]:
        return (self.lhs, self.rhs)

    @property
    def ground(self) -> bool:
        return self.lhs.ground and self.rhs.ground

    def complement(self) -> "Literal":
        return Literal(self.lhs, self.rhs, not self.positive)

    def sort_key(self):
        return (str(self.lhs), str(self.rhs), not self.positive)


def eq(lhs: Term, rhs: Term) -> Literal:
    return Literal(lhs, rhs, True)


def neq(lhs: Term, rhs: Term) -> Literal:
    return Literal(lhs, rhs, False)


def apply_literal(lit: Literal, s: Mapping[Var, Term]) -> Literal:
    return Literal(apply_term(lit.lhs, s), apply_term(lit.rhs, s), lit.positive)


class Clause:
    """A multiset of literals: order is irrelevant, multiplicity is not."""

    __slots__ = ("literals", "_hash")

    def __init__(self, literals: Iterable[Literal] = ()):
        self.literals: Tuple[Literal, ...] = tuple(sorted(literals, key=Literal.sort_key))
        self._hash = hash(self.literals)

    def __eq__(self, other):
        return self is other or (
            type(other) is Clause and self._hash == other._hash and self.literals == other.literals
        )

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __repr__(self):
        if not self.literals:
            return "$false"
        return " | ".join(map(str, self.literals))

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def ground(self) -> bool:
        return all(lit.ground for lit in self.literals)

    def variables(self) -> set:
        acc: set = set()
        for lit in self.literals:
            term_vars(lit.lhs, acc)
            term_vars(lit.rhs, acc)
        return acc

    def weight(self) -> int:
        return sum(term_size(lit.lhs) + term_size(lit.rhs) for lit in self.literals)

    def without(self, index: int) -> List[Literal]:
        return [lit for i, lit in enumerate(self.literals) if i != index]


EMPTY = Clause()


def clause(*literals: Literal) -> Clause:
    return Clause(literals)


def apply_clause(c: Clause, s: Mapping[Var, Term]) -> Clause:
    if not s:
        return c
    return Clause(apply_literal(lit, s) for lit in c.literals)


def apply_substitution(e, s: Mapping[Var, Term]):
    """Apply ``s`` to a term, literal or clause."""
    if isinstance(e, Clause):
        return apply_clause(e, s)
    if isinstance(e, Literal):
        return apply_literal(e, s)
    return apply_term(e, s)


def compose(s1: Mapping[Var, Term], s2: Mapping[Var, Term]) -> Substitution:
    """The substitution ``s1 s2``: first ``s1`` then ``s2``."""
    out: Substitution = {}
    for x, t in s1.items():
        t2 = apply_term(t, s2)
        if t2 != x:
            out[x] = t2
    for x, t in s2.items():
        if x not in s1 and t != x:
            out[x] = t
    return out


def merge_duplicates(c: Clause) -> Clause:
    """Contract ``C | L | L`` to ``C | L``."""
    seen = []
    for lit in c.literals:
        if not seen or seen[-1] != lit:
            seen.append(lit)
    if len(seen) == len(c.literals):
        return c
    return Clause(seen)


# ---------------------------------------------------------------------------
# Abducible-aware classification


def is_abducible_term(t: Term, A: Collection[str]) -> bool:
    """True for abducible variables and abducible constants."""
    if type(t) is Var:
        return t.abducible
    return not t.args and t.sym in A


def is_abstracted_term(t: Term, A: Collection[str]) -> bool:
    return not contains_constant(t, A)


def is_a_literal(lit: Literal, A: Collection[str]) -> bool:
    return is_abducible_term(lit.lhs, A) and is_abducible_term(lit.rhs, A)


def is_constraint_literal(lit: Literal, A: Collection[str]) -> bool:
    """``x != a`` with ``x`` an abducible variable and ``a`` an abducible."""
    if lit.positive:
        return False
    l, r = lit.lhs, lit.rhs
    if type(l) is Var and l.abducible and type(r) is Fn and not r.args and r.sym in A:
        return True
    return type(r) is Var and r.abducible and type(l) is Fn and not l.args and l.sym in A


def constraint_pair(lit: Literal) -> Tuple[Var, str]:
    if type(lit.lhs) is Var:
        return lit.lhs, lit.rhs.sym
    return lit.rhs, lit.lhs.sym


def is_flat_literal(lit: Literal) -> bool:
    return all(type(t) is Var or not t.args for t in lit.sides)


def partition_clause(c: Clause, A: Collection[str]) -> Tuple[Clause, Clause, Clause]:
    """Split into (A-literals, other literals, constraint literals)."""
    delta, delta_bar, gamma = [], [], []
    for lit in c.literals:
        if is_a_literal(lit, A):
            delta.append(lit)
            if is_constraint_literal(lit, A):
                gamma.append(lit)
        else:
            delta_bar.append(lit)
    return Clause(delta), Clause(delta_bar), Clause(gamma)


def is_a_clause(c: Clause, A: Collection[str]) -> bool:
    return all(is_a_literal(lit, A) for lit in c.literals)


def abducible_vars(c: Clause) -> set:
    return {v for v in c.variables() if v.abducible}


def is_abstracted_clause(c: Clause, A: Collection[str]) -> bool:
    for lit in c.literals:
        if not is_a_literal(lit, A) and not (
            is_abstracted_term(lit.lhs, A) and is_abstracted_term(lit.rhs, A)
        ):
            return False
    return True


def is_va_stable(c: Clause, A: Collection[str]) -> bool:
    constrained = {constraint_pair(lit)[0] for lit in c.literals if is_constraint_literal(lit, A)}
    return abducible_vars(c) <= constrained


@dataclass(frozen=True)
class ClauseClass:
    is_a_clause: bool
    is_abstracted: bool
    is_va_stable: bool
    is_flat: bool
    is_ground: bool


def classify_clause(c: Clause, A: Collection[str]) -> ClauseClass:
    return ClauseClass(
        is_a_clause=is_a_clause(c, A),
        is_abstracted=is_abstracted_clause(c, A),
        is_va_stable=is_va_stable(c, A),
        is_flat=all(is_flat_literal(lit) for lit in c.literals),
        is_ground=c.ground,
    )


def negate_ground_clause(c: Clause) -> List[Clause]:
    """The complement of each literal, as unit clauses."""
    if not c.ground:
        raise NonGround(f"clause is not ground: {c}")
    return [Clause([lit.complement()]) for lit in c.literals]


def is_syntactic_tautology(c: Clause) -> bool:
    """Contains ``t = t`` or a complementary pair of literals."""
    lits = set(c.literals)
    for lit in c.literals:
        if lit.positive and lit.lhs == lit.rhs:
            return True
        if lit.positive and lit.complement() in lits:
            return True
    return False


def rename_clause(c: Clause, fresh: Iterator[int]) -> Tuple[Clause, Substitution]:
    """Rename every variable of ``c`` to a fresh one of the same class."""
    ren: Substitution = {v: Var(f"_{next(fresh)}", v.abducible) for v in ordered_variables(c)}
    return apply_clause(c, ren), ren


def ordered_variables(c: Clause) -> List[Var]:
    """Variables of ``c`` by first occurrence, for reproducible renaming."""
    seen: Dict[Var, None] = {}
    for lit in c.literals:
        for side in lit.sides:
            for _, t in subterms(side):
                if type(t) is Var:
                    seen.setdefault(t, None)
    return list(seen)


def normalize_variables(c: Clause) -> Clause:
    """Rename variables to X1, X2, ... and x1, x2, ... by first occurrence."""
    ren: Substitution = {}
    counts = [0, 0]
    for lit in c.literals:
        for side in lit.sides:
            for _, t in subterms(side):
                if type(t) is Var and t not in ren:
                    k = int(t.abducible)
                    counts[k] += 1
                    ren[t] = Var(f"{'x' if k else 'X'}{counts[k]}", t.abducible)
    if all(k.name == v.name for k, v in ren.items()):
        return c
    return apply_clause(c, ren)
