"""Layered term ordering for abduction.

The base ordering is a Knuth-Bendix ordering (unit weights) on terms in which
every abducible constant has been collapsed to the smallest abducible ``a0``.
A lexicographic path ordering over the same precedence is available too, but
it admits infinitely many terms below a given one, and saturation of ground
inputs can then run forever.
Terms whose collapsed forms coincide are then separated by the order on
abducibles, argument by argument. The ordering used on abstracted clauses
compares images under the substitution sending every abducible variable
to ``a0``.
"""

from __future__ import annotations

import enum
from collections import Counter
from typing import Callable, Dict, List, Sequence, Tuple

from .terms import Clause, Fn, Literal, Term, Var, occurs, term_size


class Order(enum.Enum):
    LT = "<"
    GT = ">"
    EQ = "="
    INCOMPARABLE = "?"

    def flip(self) -> "Order":
        return _FLIP[self]


_FLIP = {
    Order.LT: Order.GT,
    Order.GT: Order.LT,
    Order.EQ: Order.EQ,
    Order.INCOMPARABLE: Order.INCOMPARABLE,
}

LT, GT, EQ, INCOMPARABLE = Order.LT, Order.GT, Order.EQ, Order.INCOMPARABLE


class OrderingContext:
    """The abducible order plus the symbol precedence of the base ordering.

    ``abducibles`` is given in increasing order; its first element is ``a0``.
    The precedence puts ``a0`` below every other constant (compared by name)
    and every constant below every function symbol (by arity, then name).
    """

    def __init__(self, abducibles: Sequence[str], base: str = "kbo"):
        if len(set(abducibles)) != len(abducibles):
            raise ValueError("duplicate abducible in order")
        if base not in ("kbo", "lpo"):
            raise ValueError(f"unknown base ordering {base!r}")
        self.base = base
        self.abducibles: Tuple[str, ...] = tuple(abducibles)
        self.A = frozenset(self.abducibles)
        self.rank = {a: i for i, a in enumerate(self.abducibles)}
        self.a0 = self.abducibles[0] if self.abducibles else None
        self._a0_term = Fn(self.a0) if self.a0 is not None else None
        self._gt_cache: Dict[Tuple[Term, Term], bool] = {}
        self._cmp_cache: Dict[Tuple[Term, Term], Order] = {}

    # -- term transformations ---------------------------------------------

    def reduce_to_a0(self, t):
        """Replace every abducible constant by ``a0`` (terms, literals, clauses)."""
        if isinstance(t, Clause):
            return Clause(self.reduce_to_a0(lit) for lit in t.literals)
        if isinstance(t, Literal):
            return Literal(self.reduce_to_a0(t.lhs), self.reduce_to_a0(t.rhs), t.positive)
        return self._reduce(t)

    def _reduce(self, t: Term) -> Term:
        if type(t) is Var:
            return t
        if not t.args:
            if t.sym in self.A and t.sym != self.a0:
                return self._a0_term
            return t
        args = tuple(self._reduce(a) for a in t.args)
        if all(x is y for x, y in zip(args, t.args)):
            return t
        return Fn(t.sym, args)

    def apply_gamma0(self, t):
        """Replace every abducible variable by ``a0`` (terms, literals, clauses)."""
        if isinstance(t, Clause):
            return Clause(self.apply_gamma0(lit) for lit in t.literals)
        if isinstance(t, Literal):
            return Literal(self.apply_gamma0(t.lhs), self.apply_gamma0(t.rhs), t.positive)
        return self._gamma0(t)

    def _gamma0(self, t: Term) -> Term:
        if type(t) is Var:
            return self._a0_term if t.abducible else t
        if t.ground:
            return t
        args = tuple(self._gamma0(a) for a in t.args)
        if all(x is y for x, y in zip(args, t.args)):
            return t
        return Fn(t.sym, args)

    # -- base orderings -------------------------------------------------------

    def precedence(self, t: Fn):
        if not t.args:
            if t.sym == self.a0:
                return (0, 0, "")
            return (1, 0, t.sym)
        return (2, len(t.args), t.sym)

    def _gt(self, s: Term, t: Term) -> bool:
        if type(s) is Var:
            return False
        if type(t) is Var:
            return occurs(t, s)
        key = (s, t)
        hit = self._gt_cache.get(key)
        if hit is not None:
            return hit
        if self.base == "kbo":
            result = self._kbo_gt(s, t)
        else:
            result = self._lpo_gt_fn(s, t)
        self._gt_cache[key] = result
        return result

    def _kbo_gt(self, s: Fn, t: Fn) -> bool:
        if not s.ground or not t.ground:
            vs, vt = _var_counts(s), _var_counts(t)
            if any(vs[x] < n for x, n in vt.items()):
                return False
        ws, wt = term_size(s), term_size(t)
        if ws != wt:
            return ws > wt
        ps, pt = self.precedence(s), self.precedence(t)
        if ps != pt:
            return ps > pt
        for si, ti in zip(s.args, t.args):
            if si != ti:
                return self._gt(si, ti)
        return False

    def _lpo_gt_fn(self, s: Fn, t: Fn) -> bool:
        for si in s.args:
            if si == t or self._gt(si, t):
                return True
        ps, pt = self.precedence(s), self.precedence(t)
        if ps > pt:
            return all(self._gt(s, tj) for tj in t.args)
        if ps == pt:
            for si, ti in zip(s.args, t.args):
                if si != ti:
                    if not self._gt(si, ti):
                        return False
                    break
            else:
                return False
            return all(self._gt(s, tj) for tj in t.args)
        return False

    def compare_base(self, s: Term, t: Term) -> Order:
        """The base ordering alone (meant for A-reduced terms)."""
        if s == t:
            return EQ
        if self._gt(s, t):
            return GT
        if self._gt(t, s):
            return LT
        return INCOMPARABLE

    # -- the layered ordering ------------------------------------------------

    def compare_terms(self, t: Term, s: Term) -> Order:
        if t is s or t == s:
            return EQ
        key = (t, s)
        hit = self._cmp_cache.get(key)
        if hit is not None:
            return hit
        result = self._compare_terms(t, s)
        self._cmp_cache[key] = result
        return result

    def _compare_terms(self, t: Term, s: Term) -> Order:
        tr, sr = self._reduce(t), self._reduce(s)
        base = self.compare_base(tr, sr)
        if base is not EQ:
            return base
        # Same collapsed form: both are abducibles, or share head symbol.
        if type(t) is Var or type(s) is Var:
            return INCOMPARABLE
        if not t.args:
            rt, rs = self.rank[t.sym], self.rank[s.sym]
            return LT if rt < rs else GT
        for ti, si in zip(t.args, s.args):
            if ti != si:
                return self.compare_terms(ti, si)
        return EQ

    def compare_terms_A(self, t: Term, s: Term) -> Order:
        return self.compare_terms(self._gamma0(t), self._gamma0(s))

    # -- literals and clauses ---------------------------------------------------

    @staticmethod
    def literal_measure(lit: Literal) -> List[Term]:
        if lit.positive:
            return [lit.lhs, lit.rhs]
        return [lit.lhs, lit.lhs, lit.rhs, lit.rhs]

    def compare_literals(self, l1: Literal, l2: Literal) -> Order:
        return compare_multisets(
            self.literal_measure(l1), self.literal_measure(l2), self.compare_terms
        )

    def compare_literals_A(self, l1: Literal, l2: Literal) -> Order:
        return self.compare_literals(self.apply_gamma0(l1), self.apply_gamma0(l2))

    def compare_clauses(self, c1: Clause, c2: Clause) -> Order:
        return compare_multisets(list(c1.literals), list(c2.literals), self.compare_literals)

    def maximal_literals(self, c: Clause) -> List[int]:
        """Indices of literals not below any other literal of ``c`` (abstracted order)."""
        lits = [self.apply_gamma0(lit) for lit in c.literals]
        out = []
        for i, li in enumerate(lits):
            if not any(j != i and self.compare_literals(li, lj) is LT for j, lj in enumerate(lits)):
                out.append(i)
        return out

    def is_variable_eligible(self, c: Clause) -> bool:
        for i in self.maximal_literals(c):
            lit = c.literals[i]
            if not lit.positive:
                continue
            for x, t in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if type(x) is Var and self.compare_terms_A(x, t) is not LT:
                    return True
        return False


def _var_counts(t: Term) -> Counter:
    return Counter(x for x in _walk_vars(t))


def _walk_vars(t: Term):
    if type(t) is Var:
        yield t
    elif not t.ground:
        for a in t.args:
            yield from _walk_vars(a)


def compare_multisets(m: List, n: List, cmp: Callable[[object, object], Order]) -> Order:
    """Multiset extension of ``cmp`` (Dershowitz-Manna)."""
    m_rest = list(m)
    n_rest = []
    for y in n:
        for k, x in enumerate(m_rest):
            if x == y:
                del m_rest[k]
                break
        else:
            n_rest.append(y)
    if not m_rest and not n_rest:
        return EQ
    if all(any(cmp(x, y) is GT for x in m_rest) for y in n_rest):
        return GT
    if all(any(cmp(y, x) is GT for y in n_rest) for x in m_rest):
        return LT
    return INCOMPARABLE
