"""From a saturated clause set to ground explanations.

The ground A-clauses left after saturation are closed under propositional
resolution together with the ground equivalence axioms over the abducibles,
then minimized. Each surviving implicate C yields the hypothesis "not C".
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import oracle
from .abstraction import abstract_clause
from .ordering import OrderingContext
from .saturation import Limits, Status, saturate
from .terms import Clause, Fn, Literal, is_a_clause, negate_ground_clause


class EmptyAbducibleSet(ValueError):
    pass


class EntailmentModeUnavailable(RuntimeError):
    """Entailment minimization asked for, but saturation or closure stopped early."""


class Consistency:
    CONSISTENT = "Consistent"
    INCONSISTENT = "Inconsistent"
    UNKNOWN = "Unknown"


def eq_axioms(A: Sequence[str]) -> List[Clause]:
    """Reflexivity, symmetry and transitivity instantiated over A (no congruence)."""
    consts = [Fn(a) for a in A]
    out = [Clause([Literal(x, x, True)]) for x in consts]
    for x, y in itertools.product(consts, repeat=2):
        out.append(Clause([Literal(x, y, False), Literal(y, x, True)]))
    for x, y, z in itertools.product(consts, repeat=3):
        out.append(Clause([Literal(x, y, False), Literal(y, z, False), Literal(x, z, True)]))
    return out


# -- ground resolution --------------------------------------------------------


class _Atoms:
    """Bit encoding of ground literals: atom k positive is bit 2k, negative 2k+1."""

    def __init__(self):
        self.index: Dict[Tuple, int] = {}
        self.atoms: List[Tuple] = []

    def bit(self, lit: Literal) -> int:
        key = (lit.lhs, lit.rhs)
        k = self.index.get(key)
        if k is None:
            k = self.index[key] = len(self.atoms)
            self.atoms.append(key)
        return 1 << (2 * k + (0 if lit.positive else 1))

    def encode(self, c: Clause) -> int:
        m = 0
        for lit in c.literals:
            m |= self.bit(lit)
        return m

    def decode(self, m: int) -> Clause:
        lits = []
        i = 0
        while m:
            if m & 1:
                lhs, rhs = self.atoms[i >> 1]
                lits.append(Literal(lhs, rhs, not i & 1))
            m >>= 1
            i += 1
        return Clause(lits)


def _even_mask(m: int) -> int:
    return int("01" * ((m.bit_length() + 1) // 2 + 1), 2)


def _tautology(m: int) -> bool:
    even = _even_mask(m)
    return bool((m & even) & ((m >> 1) & even))


@dataclass
class ClosureOutcome:
    clauses: List[Clause]
    fixpoint: bool
    generated: int = 0


def resolution_closure(clauses: Iterable[Clause], max_clauses: int = 50_000) -> ClosureOutcome:
    """Close ground clauses under binary resolution (factoring is implicit).

    Tautologies (complementary pairs) are deleted and subsumed clauses are
    removed in both directions. Stops early once ``max_clauses`` clauses
    have been kept.
    """
    atoms = _Atoms()
    passive: List[Tuple[int, int, int]] = []
    counter = itertools.count()
    for c in clauses:
        if not c.ground:
            raise oracle.NonGround(f"clause is not ground: {c}")
        m = atoms.encode(c)
        if not _tautology(m):
            heapq.heappush(passive, (bin(m).count("1"), next(counter), m))
    active: List[int] = []
    kept = 0
    generated = 0
    fixpoint = True
    while passive:
        _, _, g = heapq.heappop(passive)
        if any(d & ~g == 0 for d in active):
            continue
        active = [d for d in active if g & ~d != 0]
        active.append(g)
        kept += 1
        if g == 0:
            break
        if kept >= max_clauses:
            fixpoint = False
            break
        for d in active:
            bits = g
            while bits:
                low = bits & -bits
                bits ^= low
                pos = low.bit_length() - 1
                comp = 1 << (pos ^ 1)
                if d & comp:
                    r = (g & ~low) | (d & ~comp)
                    generated += 1
                    if not _tautology(r):
                        heapq.heappush(passive, (bin(r).count("1"), next(counter), r))
    return ClosureOutcome([atoms.decode(m) for m in active], fixpoint, generated)


# -- minimization ---------------------------------------------------------------


def is_equality_valid(c: Clause) -> bool:
    """Is a ground clause over constants true in every model of equality?

    Assume every negative literal false (merge its sides) and check whether
    some positive literal is then forced.
    """
    parent: Dict[object, object] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for lit in c.literals:
        if not lit.positive:
            a, b = find(lit.lhs), find(lit.rhs)
            if a != b:
                parent[a] = b
    return any(lit.positive and find(lit.lhs) == find(lit.rhs) for lit in c.literals)


def _strictly_subsumes(d: Clause, c: Clause) -> bool:
    return set(d.literals) < set(c.literals)


def minimize_prime(clauses: Iterable[Clause], mode: str = "subsumption",
                   A: Optional[Sequence[str]] = None) -> List[Clause]:
    """Drop valid clauses, then subsumed (or, in entailment mode, implied) ones.

    Entailment mode removes clauses one at a time, longest first, whenever
    the remaining set still implies the removed clause; the result is
    equivalent to the input.
    """
    pool = []
    for c in dict.fromkeys(clauses):
        if A is not None and not is_a_clause(c, A):
            raise ValueError(f"not an A-clause: {c}")
        if not c.ground:
            raise oracle.NonGround(f"clause is not ground: {c}")
        if not is_equality_valid(c):
            pool.append(c)
    kept = [c for c in pool if not any(_strictly_subsumes(d, c) for d in pool)]
    if mode == "subsumption":
        return kept
    if mode != "entailment":
        raise ValueError(f"unknown minimization mode {mode!r}")
    order = sorted(kept, key=lambda c: (-len(c), str(c)))
    alive = set(order)
    for c in order:
        rest = [d for d in kept if d in alive and d != c]
        if oracle.entails(rest, c):
            alive.discard(c)
    return [c for c in kept if c in alive]


def consistency_filter(axioms: Sequence[Clause], implicate: Clause, ctx: OrderingContext,
                       limits: Optional[Limits] = None) -> str:
    """Is the hypothesis "not implicate" consistent with the axioms?"""
    hyp = negate_ground_clause(implicate)
    fresh = itertools.count(1)
    clauses = [abstract_clause(c, ctx.A, fresh) for c in list(axioms) + hyp]
    out = saturate(clauses, ctx, limits)
    if out.status is Status.SATURATED:
        return Consistency.CONSISTENT
    if out.status is Status.UNSATISFIABLE:
        return Consistency.INCONSISTENT
    return Consistency.UNKNOWN


# -- presentation -------------------------------------------------------------------


def canonical_literal(lit: Literal, ctx: OrderingContext) -> Tuple[str, str, bool]:
    """Sides of an A-literal, smaller abducible first."""
    l, r = lit.lhs.sym, lit.rhs.sym
    if ctx.rank[r] < ctx.rank[l]:
        l, r = r, l
    return l, r, lit.positive


def literal_key(lit: Literal, ctx: OrderingContext):
    l, r, positive = canonical_literal(lit, ctx)
    return ctx.rank[l], ctx.rank[r], not positive


def format_literal(lit: Literal, ctx: OrderingContext) -> str:
    l, r, positive = canonical_literal(lit, ctx)
    return f"{l} {'=' if positive else '!='} {r}"


def format_implicate(c: Clause, ctx: OrderingContext) -> str:
    if c.is_empty:
        return "$false"
    return " | ".join(format_literal(l, ctx) for l in sorted(c.literals, key=lambda l: literal_key(l, ctx)))


def implicate_key(c: Clause, ctx: OrderingContext):
    return len(c), [literal_key(l, ctx) for l in sorted(c.literals, key=lambda l: literal_key(l, ctx))]


def format_hypothesis(c: Clause, ctx: OrderingContext) -> str:
    """The conjunction of the complemented literals of an implicate."""
    lits = sorted(c.literals, key=lambda l: literal_key(l, ctx))
    return " & ".join(format_literal(l.complement(), ctx) for l in lits)


# -- the pipeline --------------------------------------------------------------------


@dataclass
class ExplainConfig:
    limits: Limits = field(default_factory=Limits)
    minimize: str = "auto"
    consistency_filter: bool = False
    axioms: Optional[List[Clause]] = None
    on_a_clause: Optional[Callable[[Clause], None]] = None
    keep_log: bool = False
    demodulation: bool = True


@dataclass
class ImplicateReport:
    status: str
    t_infinity: List[Clause]
    closure_size: int
    prime_implicates: List[Clause]
    explanations: List[List[Clause]]
    complete: bool
    minimize_mode: str
    consistency: Dict[Clause, str] = field(default_factory=dict)
    stats: Dict[str, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)
    saturation: object = None
    limit_reached: bool = False


def explain(clauses: Sequence[Clause], A: Sequence[str],
            config: Optional[ExplainConfig] = None) -> ImplicateReport:
    """Abstract, saturate, close the ground A-part under resolution, minimize.

    ``A`` lists the abducibles in increasing order.
    """
    config = config or ExplainConfig()
    if not A:
        raise EmptyAbducibleSet("no abducible constants declared")
    t0 = time.perf_counter()
    ctx = OrderingContext(A)
    fresh = itertools.count(1)
    abstracted = [abstract_clause(c, ctx.A, fresh) for c in clauses]
    sat = saturate(abstracted, ctx, config.limits, keep_log=config.keep_log,
                   demodulation=config.demodulation, on_a_clause=config.on_a_clause)
    warnings = list(sat.warnings)
    stats = {"generated": sat.stats.get("generated", 0), "kept": sat.stats.get("kept", 0)}

    if sat.status is Status.UNSATISFIABLE:
        stats["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
        return ImplicateReport("Unsatisfiable", sat.t_infinity, 0, [], [], True, "none",
                               stats=stats, warnings=warnings, violations=sat.violations,
                               saturation=sat)

    t_inf = [c for c in sat.t_infinity if c.ground]
    closure = resolution_closure(t_inf + eq_axioms(ctx.abducibles), config.limits.max_clauses)
    stats["closure"] = len(closure.clauses)
    if not closure.fixpoint:
        warnings.append("resolution closure stopped at a resource limit")
    fixpoint = sat.status is Status.SATURATED and closure.fixpoint

    mode = config.minimize
    if mode == "auto":
        mode = "entailment" if fixpoint else "subsumption"
    elif mode == "entailment" and not fixpoint:
        raise EntailmentModeUnavailable("entailment minimization needs a complete saturation")

    if any(c.is_empty for c in closure.clauses):
        implicates = [Clause()]
        status = "Unsatisfiable"
    else:
        implicates = minimize_prime(closure.clauses, mode)
        status = sat.status.value
    implicates.sort(key=lambda c: implicate_key(c, ctx))

    consistency = {}
    if config.consistency_filter:
        axioms = config.axioms if config.axioms is not None else list(clauses)
        for c in implicates:
            consistency[c] = consistency_filter(axioms, c, ctx, config.limits)

    if sat.variable_eligible_seen:
        warnings.append("variable_eligible")
    stats["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
    return ImplicateReport(
        status=status,
        t_infinity=sat.t_infinity,
        closure_size=len(closure.clauses),
        prime_implicates=implicates,
        explanations=[negate_ground_clause(c) for c in implicates],
        complete=fixpoint and not sat.variable_eligible_seen,
        minimize_mode=mode,
        consistency=consistency,
        stats=stats,
        warnings=warnings,
        violations=sat.violations,
        saturation=sat,
        limit_reached=not fixpoint,
    )
