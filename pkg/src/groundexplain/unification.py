"""Syntactic unification, matching, and the abducible-compliant repair of mgus."""

from __future__ import annotations

from typing import Collection, Dict, List, Optional, Tuple

from .terms import Fn, Substitution, Term, Var, apply_term, compose, is_abstracted_term, occurs


class NotUnifiable(Exception):
    pass


class NotACompliant(Exception):
    """The terms unify, but every mgu binds an abducible variable to a non-variable."""


def _walk(t: Term, s: Dict[Var, Term]) -> Term:
    while type(t) is Var and t in s:
        t = s[t]
    return t


def _occurs_walk(v: Var, t: Term, s: Dict[Var, Term]) -> bool:
    t = _walk(t, s)
    if type(t) is Var:
        return t == v
    if t.ground:
        return False
    return any(_occurs_walk(v, a, s) for a in t.args)


def _resolve(t: Term, s: Dict[Var, Term]) -> Term:
    t = _walk(t, s)
    if type(t) is Var or t.ground:
        return t
    return Fn(t.sym, tuple(_resolve(a, s) for a in t.args))


def unify_pairs(pairs: List[Tuple[Term, Term]], s: Optional[Dict[Var, Term]] = None) -> Substitution:
    """Unify all pairs simultaneously; returns an idempotent mgu."""
    s = {} if s is None else dict(s)
    stack = list(pairs)
    order: List[Var] = list(s)
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a is b or a == b:
            continue
        if type(a) is Var:
            if _occurs_walk(a, b, s):
                raise NotUnifiable(f"{a} occurs in {b}")
            s[a] = b
            order.append(a)
        elif type(b) is Var:
            if _occurs_walk(b, a, s):
                raise NotUnifiable(f"{b} occurs in {a}")
            s[b] = a
            order.append(b)
        else:
            if a.sym != b.sym or len(a.args) != len(b.args):
                raise NotUnifiable(f"clash {a.sym}/{b.sym}")
            stack.extend(zip(a.args, b.args))
    return {v: _resolve(s[v], s) for v in order}


def mgu(t: Term, s: Term) -> Substitution:
    """Most general unifier of ``t`` and ``s``; raises NotUnifiable."""
    return unify_pairs([(t, s)])


def is_a_compliant(s: Substitution, A: Collection[str]) -> bool:
    for x, t in s.items():
        if not is_abstracted_term(t, A):
            return False
        if x.abducible and not (type(t) is Var and t.abducible):
            return False
    return True


def repair(sigma: Substitution, A: Collection[str]) -> Substitution:
    """Turn an mgu into an abducible-compliant one by renaming, if possible.

    While some abducible variable x is bound to an ordinary variable y,
    compose with {y -> x}. Bindings are repaired in creation order.
    """
    sigma = dict(sigma)
    while True:
        for x, t in sigma.items():
            if x.abducible and type(t) is Var and not t.abducible:
                sigma = compose(sigma, {t: x})
                break
        else:
            break
    if not is_a_compliant(sigma, A):
        raise NotACompliant(str(sigma))
    return sigma


def a_compliant_mgu(t: Term, s: Term, A: Collection[str]) -> Substitution:
    return repair(mgu(t, s), A)


def match(pattern: Term, target: Term, s: Optional[Dict[Var, Term]] = None,
          abducible_to_abducible: bool = False) -> Optional[Dict[Var, Term]]:
    """One-way matching: find s extending the input with pattern s == target.

    Returns None on failure. With ``abducible_to_abducible``, abducible
    variables of the pattern may only be bound to abducible variables.
    """
    s = {} if s is None else dict(s)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if type(p) is Var:
            bound = s.get(p)
            if bound is None:
                if abducible_to_abducible and p.abducible and not (type(t) is Var and t.abducible):
                    return None
                s[p] = t
            elif bound != t:
                return None
        elif type(t) is Var:
            return None
        elif p.ground:
            if p != t:
                return None
        else:
            if p.sym != t.sym or len(p.args) != len(t.args):
                return None
            stack.extend(zip(p.args, t.args))
    return s


def unifies(s: Substitution, t: Term, u: Term) -> bool:
    return apply_term(t, s) == apply_term(u, s)


__all__ = [
    "NotUnifiable",
    "NotACompliant",
    "mgu",
    "unify_pairs",
    "is_a_compliant",
    "a_compliant_mgu",
    "repair",
    "match",
    "unifies",
    "occurs",
]
