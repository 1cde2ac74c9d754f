import itertools
import random

import pytest

from helpers import cl, tm
from groundexplain.terms import (
    Clause,
    Fn,
    Literal,
    NonGround,
    Var,
    apply_substitution,
    classify_clause,
    compose,
    is_abstracted_term,
    merge_duplicates,
    negate_ground_clause,
    partition_clause,
    rename_clause,
)
from groundexplain.unification import is_a_compliant

X, Y, Z = Var("X"), Var("Y"), Var("Z")
a, b = Fn("a"), Fn("b")


def test_apply_substitution_examples():
    assert apply_substitution(tm("f(X, a)"), {X: b}) == tm("f(b, a)")
    assert apply_substitution(X, {Y: a}) == X
    got = apply_substitution(cl("X != a | f(X) = Y"), {X: Z, Y: tm("g(Z)")})
    assert got == cl("Z != a | f(Z) = g(Z)")


def test_compose_examples():
    assert compose({X: Y}, {Y: a}) == {X: a, Y: a}
    s = {X: tm("f(Y)")}
    assert compose({}, s) == s
    assert compose({X: tm("f(Y)")}, {Y: Z}) == {X: tm("f(Z)"), Y: Z}


def test_compose_is_sequential_application():
    rng = random.Random(3)
    names = [Var(n) for n in "XYZW"]
    syms = [("f", 1), ("g", 2), ("a", 0), ("b", 0)]

    def term(d):
        if d == 0 or rng.random() < 0.4:
            return rng.choice(names) if rng.random() < 0.6 else Fn(rng.choice("ab"))
        s, n = rng.choice(syms)
        return Fn(s, tuple(term(d - 1) for _ in range(n)))

    for _ in range(200):
        s1 = {v: term(2) for v in rng.sample(names, 2)}
        s2 = {v: term(2) for v in rng.sample(names, 2)}
        t = term(3)
        assert apply_substitution(t, compose(s1, s2)) == apply_substitution(apply_substitution(t, s1), s2)


def test_partition_abstracted_store_definition():
    A = {"i", "j", "b", "c"}
    c = cl("X1 != i | Y1 != b | d1 = store(a, X1, Y1)", "X1", "Y1")
    delta, delta_bar, gamma = partition_clause(c, A)
    assert delta == cl("X1 != i | Y1 != b", "X1", "Y1")
    assert delta_bar == cl("d1 = store(a, X1, Y1)", "X1", "Y1")
    assert gamma == delta


def test_partition_clause_trivial():
    d, db, g = partition_clause(cl("a != b"), {"a", "b"})
    assert (d, db, g) == (cl("a != b"), Clause(), Clause())
    c = cl("f(X) = g(Y)")
    assert partition_clause(c, {"a"}) == (Clause(), c, Clause())


def test_partition_is_a_partition():
    A = {"a", "b"}
    c = cl("X != a | X != a | X = b | a = b | f(X) = Y | Y != a", "X")
    delta, delta_bar, gamma = partition_clause(c, A)
    assert sorted(delta.literals + delta_bar.literals, key=Literal.sort_key) == list(c.literals)
    assert all(delta.literals.count(l) >= gamma.literals.count(l) for l in gamma.literals)


def test_negate_ground_clause():
    assert negate_ground_clause(cl("a = b | c != d")) == [cl("a != b"), cl("c = d")]
    assert negate_ground_clause(Clause()) == []
    assert negate_ground_clause(cl("i = j")) == [cl("i != j")]
    with pytest.raises(NonGround):
        negate_ground_clause(cl("X = a"))


def test_classify_clause():
    A = {"i", "j", "b", "c"}
    k = classify_clause(cl("X1 != i | Y1 != b | d1 = store(a, X1, Y1)", "X1", "Y1"), A)
    assert k.is_abstracted and k.is_va_stable and not k.is_a_clause
    k = classify_clause(cl("X != a | X = b", "X"), {"a", "b"})
    assert k.is_a_clause and k.is_va_stable and k.is_flat and not k.is_ground
    k = classify_clause(cl("X = b", "X"), {"a", "b"})
    assert k.is_a_clause and not k.is_va_stable


def test_literal_sides_are_unordered():
    assert Literal(a, tm("f(X)"), True) == Literal(tm("f(X)"), a, True)
    assert hash(Literal(a, b, False)) == hash(Literal(b, a, False))
    assert Literal(a, b, True) != Literal(a, b, False)
    assert Literal(a, b, True).complement() == Literal(b, a, False)


def test_duplicates_are_kept():
    c = cl("a = b | b = a | c = d")
    assert len(c) == 3
    assert len(apply_substitution(cl("X = a | Y = a"), {Y: X})) == 2
    renamed, _ = rename_clause(cl("X = a | X = a"), itertools.count())
    assert len(renamed) == 2
    assert len(negate_ground_clause(c)) == 3
    assert merge_duplicates(c) == cl("a = b | c = d")


def test_compliant_substitution_keeps_terms_abstracted():
    rng = random.Random(5)
    A = {"a", "b"}
    ordinary = [Var("X"), Var("Y")]
    abducible = [Var("U", True), Var("W", True)]

    def term(d, allow_abducible_consts):
        r = rng.random()
        if d == 0 or r < 0.3:
            pool = ordinary + abducible + [Fn("c")]
            if allow_abducible_consts:
                pool += [a, b]
            return rng.choice(pool)
        return Fn("f", (term(d - 1, allow_abducible_consts),)) if r < 0.6 else \
            Fn("g", (term(d - 1, allow_abducible_consts), term(d - 1, allow_abducible_consts)))

    for _ in range(300):
        s = {}
        for v in ordinary:
            if rng.random() < 0.5:
                s[v] = term(2, False)
        for v in abducible:
            if rng.random() < 0.5:
                s[v] = rng.choice(abducible)
        assert is_a_compliant(s, A)
        t = term(3, False)
        assert is_abstracted_term(t, A)
        assert is_abstracted_term(apply_substitution(t, s), A)
