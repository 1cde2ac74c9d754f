"""A small decision procedure for ground clause sets with equality.

Case splitting over clause literals, with congruence closure deciding each
branch. Meant for checking results on small inputs, not for speed.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .terms import Clause, Fn, Literal, NonGround, Term, negate_ground_clause, subterms


class InputUnsatisfiable(Exception):
    pass


class CongruenceClosure:
    """Union-find over a fixed set of ground terms, closed under congruence."""

    def __init__(self, terms: Sequence[Term]):
        self.terms = list(terms)
        self.index: Dict[Term, int] = {t: i for i, t in enumerate(self.terms)}
        self.parent = list(range(len(self.terms)))
        self.compound = [
            (i, t.sym, tuple(self.index[a] for a in t.args))
            for i, t in enumerate(self.terms) if t.args
        ]
        self.diseqs: List[Tuple[int, int]] = []

    def copy(self) -> "CongruenceClosure":
        cc = object.__new__(CongruenceClosure)
        cc.terms = self.terms
        cc.index = self.index
        cc.compound = self.compound
        cc.parent = list(self.parent)
        cc.diseqs = list(self.diseqs)
        return cc

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def _union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[max(ri, rj)] = min(ri, rj)
        return True

    def merge(self, s: Term, t: Term) -> None:
        if not self._union(self.index[s], self.index[t]):
            return
        # propagate congruences until nothing changes
        changed = True
        while changed:
            changed = False
            sigs: Dict[tuple, int] = {}
            for i, sym, args in self.compound:
                key = (sym, tuple(self.find(a) for a in args))
                j = sigs.setdefault(key, i)
                if j != i and self._union(i, j):
                    changed = True

    def equal(self, s: Term, t: Term) -> bool:
        return self.find(self.index[s]) == self.find(self.index[t])

    def separate(self, s: Term, t: Term) -> None:
        self.diseqs.append((self.index[s], self.index[t]))

    def separated(self, s: Term, t: Term) -> bool:
        rs, rt = self.find(self.index[s]), self.find(self.index[t])
        return any({self.find(i), self.find(j)} == {rs, rt} for i, j in self.diseqs)

    def consistent(self) -> bool:
        return all(self.find(i) != self.find(j) for i, j in self.diseqs)

    def assert_literal(self, lit: Literal) -> bool:
        if lit.positive:
            self.merge(lit.lhs, lit.rhs)
        else:
            self.separate(lit.lhs, lit.rhs)
        return self.consistent()

    def holds(self, lit: Literal) -> Optional[bool]:
        """True/False if the literal is decided by the current state, else None."""
        if self.equal(lit.lhs, lit.rhs):
            return lit.positive
        if self.separated(lit.lhs, lit.rhs):
            return not lit.positive
        return None


def _collect_terms(clauses: Iterable[Clause]) -> List[Term]:
    seen: Dict[Term, None] = {}
    for c in clauses:
        if not c.ground:
            raise NonGround(f"clause is not ground: {c}")
        for lit in c.literals:
            for side in lit.sides:
                # children before parents so argument indices exist
                for _, t in reversed(list(subterms(side))):
                    seen.setdefault(t, None)
    return sorted(seen, key=_depth)


def _depth(t: Term) -> int:
    return 0 if not t.args else 1 + max(_depth(a) for a in t.args)


def _search(clauses: Sequence[Clause], cc: CongruenceClosure) -> bool:
    for c in clauses:
        open_lits = []
        satisfied = False
        for lit in c.literals:
            v = cc.holds(lit)
            if v is True:
                satisfied = True
                break
            if v is None:
                open_lits.append(lit)
        if satisfied:
            continue
        # branch on the first unsatisfied clause, positive literals first
        open_lits.sort(key=lambda lit: not lit.positive)
        branch = cc.copy()
        for lit in open_lits:
            trial = branch.copy()
            if trial.assert_literal(lit) and _search(clauses, trial):
                return True
            # later branches may assume this literal is false
            if not branch.assert_literal(lit.complement()):
                return False
        return False
    return True


def decide_sat(clauses: Iterable[Clause]) -> bool:
    """True when the ground clause set has a model."""
    clauses = list(clauses)
    if any(c.is_empty for c in clauses):
        return False
    cc = CongruenceClosure(_collect_terms(clauses))
    return _search(clauses, cc)


def entails(clauses: Iterable[Clause], c: Clause) -> bool:
    return not decide_sat(list(clauses) + negate_ground_clause(c))


def canonical_literals(A: Sequence[str]) -> List[Literal]:
    """Every literal ``a = b`` and ``a != b`` with a before b in the given order."""
    out = []
    for a, b in itertools.combinations(A, 2):
        out.append(Literal(Fn(a), Fn(b), True))
        out.append(Literal(Fn(a), Fn(b), False))
    return out


def _tautological(lits: Sequence[Literal]) -> bool:
    s = set(lits)
    return any(lit.complement() in s for lit in lits)


def enumerate_A_implicates(
    clauses: Iterable[Clause], A: Sequence[str], max_len: int = 2, prime: bool = False
) -> List[Clause]:
    """All non-tautological ground A-clauses of length <= max_len entailed by the set.

    With ``prime``, clauses having an entailed proper sub-clause are left out.
    Tautologies are left out both syntactically and modulo equality.
    """
    clauses = list(clauses)
    if not decide_sat(clauses):
        raise InputUnsatisfiable("input clause set is unsatisfiable")
    lits = canonical_literals(A)
    found: List[Clause] = []
    found_sets: List[Set[Literal]] = []
    for n in range(1, max_len + 1):
        for combo in itertools.combinations(lits, n):
            if _tautological(combo):
                continue
            c = Clause(combo)
            if entails([], c):
                continue
            if prime and any(s <= set(combo) for s in found_sets):
                continue
            if entails(clauses, c):
                found.append(c)
                found_sets.append(set(combo))
    return found
