import random

import pytest

from helpers import tm
from groundexplain.terms import Fn, Var, apply_substitution, compose, is_abstracted_term
from groundexplain.unification import (
    NotACompliant,
    NotUnifiable,
    a_compliant_mgu,
    is_a_compliant,
    match,
    mgu,
    unifies,
)

A = {"a", "b"}
X, Y = Var("X", True), Var("Y", True)
Z, W = Var("Z"), Var("W")


def test_mgu_examples():
    x, y = Var("X"), Var("Y")
    assert mgu(tm("f(X, a)"), tm("f(b, Y)")) == {x: Fn("b"), y: Fn("a")}
    with pytest.raises(NotUnifiable):
        mgu(x, tm("f(X)"))
    with pytest.raises(NotUnifiable):
        mgu(tm("g(X, X)"), tm("g(Y, f(Y))"))
    with pytest.raises(NotUnifiable):
        mgu(tm("f(a)"), tm("g(a)"))


def test_mgu_is_idempotent_and_unifies():
    rng = random.Random(11)
    vs = [Var(n) for n in "XYZW"]

    def term(d):
        if d == 0 or rng.random() < 0.35:
            return rng.choice(vs) if rng.random() < 0.6 else Fn(rng.choice("abc"))
        if rng.random() < 0.5:
            return Fn("f", (term(d - 1),))
        return Fn("g", (term(d - 1), term(d - 1)))

    found = 0
    for _ in range(2000):
        t, s = term(3), term(3)
        try:
            sigma = mgu(t, s)
        except NotUnifiable:
            continue
        found += 1
        assert unifies(sigma, t, s)
        assert compose(sigma, sigma) == sigma
    assert found > 300


def test_is_a_compliant():
    assert is_a_compliant({X: Y}, A)
    assert not is_a_compliant({X: Fn("a")}, A)
    assert not is_a_compliant({Z: tm("f(a)")}, A)
    assert is_a_compliant({Z: tm("f(c)")}, A)


def test_a_compliant_mgu_examples():
    assert a_compliant_mgu(X, Z, A) == {Z: X}
    assert a_compliant_mgu(Z, X, A) == {Z: X}
    with pytest.raises(NotACompliant):
        a_compliant_mgu(X, Fn("c"), A)
    t = Fn("f", (X, Z))
    s = Fn("f", (Y, tm("g(W)")))
    sigma = a_compliant_mgu(t, s, A)
    assert is_a_compliant(sigma, A)
    assert apply_substitution(t, sigma) == apply_substitution(s, sigma)
    assert sigma[Z] == tm("g(W)")
    assert {k: v for k, v in sigma.items() if k != Z} in ({X: Y}, {Y: X})


def test_repair_gives_a_variant_of_the_plain_mgu():
    rng = random.Random(13)
    ordinary = [Var(n) for n in ("P", "Q", "R")]
    abducible = [Var(n, True) for n in ("U", "V")]

    def term(d):
        if d == 0 or rng.random() < 0.4:
            return rng.choice(ordinary + abducible + [Fn("c")])
        return Fn("h", (term(d - 1), term(d - 1)))

    checked = 0
    for _ in range(2000):
        t, s = term(2), term(2)
        try:
            plain = mgu(t, s)
        except NotUnifiable:
            continue
        try:
            sigma = a_compliant_mgu(t, s, A)
        except NotACompliant:
            # fails exactly when an abducible variable must become a non-variable
            assert any(type(apply_substitution(v, plain)) is not Var for v in abducible)
            continue
        assert all(type(apply_substitution(v, plain)) is Var for v in abducible)
        checked += 1
        assert is_a_compliant(sigma, A)
        u1, u2 = apply_substitution(t, plain), apply_substitution(t, sigma)
        assert match(u1, u2) is not None and match(u2, u1) is not None
    assert checked > 200


def test_composition_of_compliant_substitutions():
    rng = random.Random(19)
    ordinary = [Var(n) for n in ("P", "Q")]
    abducible = [Var(n, True) for n in ("U", "V", "S")]

    def image(d):
        if d == 0 or rng.random() < 0.4:
            return rng.choice(ordinary + abducible + [Fn("c")])
        return Fn("f", (image(d - 1),))

    for _ in range(500):
        s1 = {v: rng.choice(abducible) for v in rng.sample(abducible, 2)}
        s1.update({v: image(2) for v in rng.sample(ordinary, 1)})
        s2 = {v: rng.choice(abducible) for v in rng.sample(abducible, 1)}
        s2.update({v: image(2) for v in rng.sample(ordinary, 1)})
        assert is_a_compliant(s1, A) and is_a_compliant(s2, A)
        comp = compose(s1, s2)
        assert is_a_compliant(comp, A)
        assert all(is_abstracted_term(t, A) for t in comp.values())
