import itertools
import random

import pytest

from gen import random_ground_problem
from helpers import cl, tm, variant
from groundexplain.abstraction import (
    NonGroundTarget,
    a_reduce,
    abstract_clause,
    flatten_named_terms,
    nu_of,
    simplify_constraints,
)
from groundexplain.oracle import decide_sat, entails
from groundexplain.ordering import OrderingContext
from groundexplain.terms import Fn, Var, apply_substitution, classify_clause, partition_clause


def test_worked_example():
    got = abstract_clause(cl("a = b | a = c | f(b, d, X) != g(b, Y)"), {"a", "b"})
    want = cl("X1 != a | X2 != b | X3 != b | a = b | X1 = c | f(X2, d, X) != g(X3, Y)", "X1", "X2", "X3")
    assert variant(got, want)
    assert len({v for v in got.variables() if v.abducible}) == 3


def test_a_clause_is_unchanged():
    assert abstract_clause(cl("a = b"), {"a", "b"}) == cl("a = b")


def test_f_a_neq_f_b():
    got = abstract_clause(cl("f(a) != f(b)"), {"a", "b"})
    assert variant(got, cl("X1 != a | X2 != b | f(X1) != f(X2)", "X1", "X2"))


def test_nu_of_picks_smallest_abducible():
    ctx = OrderingContext(["a", "b", "c"])
    c = cl("X != a | X != c | Y != b | Z != a | Y != c", "X", "Y", "Z")
    assert nu_of(c, ctx) == {Var("X", True): Fn("a"), Var("Y", True): Fn("b"), Var("Z", True): Fn("a")}
    assert nu_of(cl("f(X) = a"), ctx) == {}
    assert nu_of(cl("X != c", "X"), ctx) == {Var("X", True): Fn("c")}


def test_a_reduce():
    ctx = OrderingContext(["a", "b", "c"])
    assert a_reduce(cl("X != a | X != b | X = c", "X"), ctx) == cl("a != a | a != b | a = c")
    assert a_reduce(cl("a != b"), ctx) is None
    ctx38 = OrderingContext(["i", "j", "b", "c"])
    assert a_reduce(cl("X1 != i | Y1 != b | d1 = store(a, X1, Y1)", "X1", "Y1"), ctx38) is None


def test_simplify_constraints():
    A = {"a", "b"}
    assert simplify_constraints(cl("X != a | f(Y) = c", "X"), A) == cl("f(Y) = c")
    got = simplify_constraints(cl("X != a | Z != a | f(X, Z) = c", "X", "Z"), A)
    assert variant(got, cl("X != a | f(X, X) = c", "X"))
    kept = cl("X != a | Z != b | f(X, Z) = c", "X", "Z")
    assert simplify_constraints(kept, A) == kept


def test_abstraction_properties():
    rng = random.Random(31)
    for _ in range(150):
        S, A = random_ground_problem(rng)
        ctx = OrderingContext(A)
        fresh = itertools.count(1)
        for c in S:
            ab = abstract_clause(c, A, fresh)
            k = classify_clause(ab, A)
            assert k.is_abstracted and k.is_va_stable
            nu = nu_of(ab, ctx)
            back = apply_substitution(ab, nu)
            assert back.ground
            # the instantiated constraints are a != a, so back is equivalent to c
            assert entails([c], back) and entails([back], c)
            assert partition_clause(back, A)[1] == partition_clause(c, A)[1]
            red = a_reduce(ab, ctx)
            if red is not None:
                assert red.ground


def test_clause_equals_its_nu_instance():
    rng = random.Random(37)
    ctx = OrderingContext(["a", "b", "c"])
    for _ in range(200):
        xs = [Var(f"X{k}", True) for k in range(3)]
        lits = []
        for x in xs:
            for a in rng.sample(ctx.abducibles, rng.randint(1, 2)):
                lits.append(f"{x.name} != {a}")
        for _ in range(rng.randint(1, 2)):
            l, r = rng.sample([x.name for x in xs] + ["a", "b", "c"], 2)
            lits.append(f"{l} {'=' if rng.random() < 0.5 else '!='} {r}")
        c = cl(" | ".join(lits), "X0", "X1", "X2")
        inst = apply_substitution(c, nu_of(c, ctx))
        # every ground instance of c over A is implied by the nu instance
        for values in itertools.product(ctx.abducibles, repeat=3):
            g = apply_substitution(c, {x: Fn(v) for x, v in zip(xs, values)})
            assert entails([inst], g)


def test_flatten_select_store():
    goal = cl("select(store(a, i, b), j) != e")
    out, names, defs = flatten_named_terms([goal], [tm("select(store(a, i, b), j)")])
    assert names == ["d1", "d2"]
    assert defs == [cl("d1 = store(a, i, b)"), cl("d2 = select(d1, j)")]
    assert out == [cl("d2 != e")]


def test_flatten_constant_and_nested():
    c = cl("f(a) = b")
    assert flatten_named_terms([c], [tm("a")]) == ([c], [], [])
    goal = cl("select(store(store(a, i, b), j, c), k) != e")
    out, names, defs = flatten_named_terms([goal], [tm("store(store(a, i, b), j, c)")])
    assert names == ["d1", "d2"]
    assert defs[0] == cl("d1 = store(a, i, b)")
    assert defs[1] == cl("d2 = store(d1, j, c)")
    assert out == [cl("select(d2, k) != e")]
    for extra in ([], [cl("d1 = a")], [cl("i = j"), cl("e = select(store(store(a, i, b), j, c), k)")]):
        assert decide_sat(out + defs + extra) == decide_sat([goal] + extra)


def test_flatten_rejects_variables():
    with pytest.raises(NonGroundTarget):
        flatten_named_terms([cl("f(X) = a")], [tm("f(X)")])


def test_flatten_is_equisatisfiable_on_random_sets():
    rng = random.Random(41)
    for _ in range(80):
        S, _ = random_ground_problem(rng)
        targets = [t for c in S for lit in c.literals for t in lit.sides if t.args]
        if not targets:
            continue
        out, _, defs = flatten_named_terms(S, targets[:2])
        assert decide_sat(out + defs)
        extra = [cl("a != b")]
        assert decide_sat(out + defs + extra) == decide_sat(S + extra)
