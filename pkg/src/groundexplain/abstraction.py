"""Abstraction of abducibles, the constraint substitution, A-reduction, flattening."""

from __future__ import annotations

import itertools
from typing import Collection, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .ordering import OrderingContext
from .terms import (
    Clause,
    Fn,
    Literal,
    Substitution,
    Term,
    Var,
    apply_clause,
    constraint_pair,
    is_a_clause,
    is_a_literal,
    is_constraint_literal,
    neq,
    subterms,
    symbols,
)


class NonGroundTarget(ValueError):
    pass


def abstract_clause(c: Clause, A: Collection[str], fresh: Optional[Iterator[int]] = None) -> Clause:
    """Pull every abducible out of the non-A-literals of ``c``.

    Each occurrence gets its own abducible variable ``x`` and the constraint
    literal ``x != a`` is added. A-literals are kept as they are.
    """
    if fresh is None:
        fresh = itertools.count(1)
    out: List[Literal] = []
    constraints: List[Literal] = []

    def pull(t: Term) -> Term:
        if type(t) is Var:
            return t
        if not t.args:
            if t.sym in A:
                x = Var(f"x{next(fresh)}", abducible=True)
                constraints.append(neq(x, t))
                return x
            return t
        return Fn(t.sym, tuple(pull(a) for a in t.args))

    for lit in c.literals:
        if is_a_literal(lit, A):
            out.append(lit)
        else:
            out.append(Literal(pull(lit.lhs), pull(lit.rhs), lit.positive))
    return Clause(constraints + out)


def nu_of(c: Clause, ctx: OrderingContext) -> Substitution:
    """Map each constrained abducible variable to its smallest constraint abducible."""
    best: Dict[Var, str] = {}
    for lit in c.literals:
        if is_constraint_literal(lit, ctx.A):
            x, a = constraint_pair(lit)
            if x not in best or ctx.rank[a] < ctx.rank[best[x]]:
                best[x] = a
    return {x: Fn(a) for x, a in best.items()}


def a_reduce(c: Clause, ctx: OrderingContext) -> Optional[Clause]:
    """The A-reduction rule: ``C nu_C`` for an A-clause with a non-identity ``nu_C``.

    Returns None when the rule does not apply.
    """
    if not is_a_clause(c, ctx.A):
        return None
    nu = nu_of(c, ctx)
    if not nu:
        return None
    return apply_clause(c, nu)


def simplify_constraints(c: Clause, A: Collection[str]) -> Clause:
    """Drop needless constraint literals.

    ``x != a | C`` becomes ``C`` when x does not occur in C, and
    ``x != a | y != a | C`` becomes ``x != a | C{y -> x}``. Both results are
    equivalent to the input and smaller.
    """
    changed = True
    while changed:
        changed = False
        lits = list(c.literals)
        by_value: Dict[str, Var] = {}
        for i, lit in enumerate(lits):
            if not is_constraint_literal(lit, A):
                continue
            x, a = constraint_pair(lit)
            elsewhere = False
            for j, other in enumerate(lits):
                if j == i:
                    continue
                if any(t == x for side in other.sides for _, t in subterms(side)):
                    elsewhere = True
                    break
            if not elsewhere:
                c = Clause(lits[:i] + lits[i + 1:])
                changed = True
                break
            if a in by_value and by_value[a] != x:
                y = by_value[a]
                rest = lits[:i] + lits[i + 1:]
                c = apply_clause(Clause(rest), {x: y})
                changed = True
                break
            by_value.setdefault(a, x)
    return c


def fresh_names(used: Set[str], prefix: str = "d") -> Iterator[str]:
    for k in itertools.count(1):
        name = f"{prefix}{k}"
        if name not in used:
            used.add(name)
            yield name


def flatten_named_terms(
    clauses: Sequence[Clause], targets: Sequence[Term], used_names: Iterable[str] = ()
) -> Tuple[List[Clause], List[str], List[Clause]]:
    """Name each target and its compound subterms with fresh constants.

    Subterms are named innermost first, in reading order, reusing a name
    when the same subterm was already named. Returns the rewritten clauses,
    the fresh names and their defining unit equations.
    """
    used = set(used_names)
    for c in clauses:
        for lit in c.literals:
            for side in lit.sides:
                used.update(sym for sym, _ in symbols(side))
    for t in targets:
        used.update(sym for sym, _ in symbols(t))
    names = fresh_names(used)

    naming: Dict[Term, Fn] = {}
    new_names: List[str] = []
    defs: List[Clause] = []

    def name_subterms(t: Term) -> Term:
        """Return t with compound subterms replaced by names, naming as needed."""
        if type(t) is Var or not t.args:
            return t
        if t in naming:
            return naming[t]
        inner = Fn(t.sym, tuple(name_subterms(a) for a in t.args))
        d = Fn(next(names))
        naming[t] = d
        new_names.append(d.sym)
        defs.append(Clause([Literal(d, inner, True)]))
        return d

    for t in targets:
        if not t.ground:
            raise NonGroundTarget(f"flatten target is not ground: {t}")
        name_subterms(t)

    def rewrite(t: Term) -> Term:
        if t in naming:
            return naming[t]
        if type(t) is Var or not t.args or not naming:
            return t
        return Fn(t.sym, tuple(rewrite(a) for a in t.args))

    out = [
        Clause(Literal(rewrite(lit.lhs), rewrite(lit.rhs), lit.positive) for lit in c.literals)
        for c in clauses
    ]
    return out, new_names, defs
