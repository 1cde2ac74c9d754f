"""Clause construction shortcuts for tests."""

from groundexplain.problem import parse_clause, parse_term
from groundexplain.saturation import subsumes
from groundexplain.terms import Var, apply_substitution, ordered_variables


def cl(text, *abducible):
    """Parse a clause; variables named in ``abducible`` become abducible variables."""
    c = parse_clause(text)
    ren = {v: Var(v.name, True) for v in ordered_variables(c) if v.name in abducible}
    return apply_substitution(c, ren)


def tm(text, *abducible):
    t = parse_term(text)
    return apply_substitution(t, {Var(n): Var(n, True) for n in abducible})


def variant(c, d):
    return len(c) == len(d) and subsumes(c, d) and subsumes(d, c)
