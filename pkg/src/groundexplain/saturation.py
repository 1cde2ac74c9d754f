"""Given-clause saturation for the abducible-aware superposition calculus.

Inferences are the usual superposition, paramodulation, reflection and
equational factoring rules with non-strict ordering conditions, evaluated
with the abstracted ordering after applying the unifier. Unifiers that bind
an abducible variable to anything but an abducible variable are dropped.
Contraction: A-reduction, duplicate merging, constraint simplification,
tautology deletion, subsumption and unit demodulation.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .abstraction import a_reduce, simplify_constraints
from .ordering import GT, LT, OrderingContext
from .terms import (
    Clause,
    Fn,
    Literal,
    Substitution,
    Term,
    Var,
    apply_literal,
    apply_term,
    is_a_clause,
    is_abstracted_clause,
    is_syntactic_tautology,
    is_va_stable,
    merge_duplicates,
    normalize_variables,
    rename_clause,
    replace_at,
    subterms,
)
from .unification import NotACompliant, NotUnifiable, match, mgu, repair

log = logging.getLogger(__name__)


class Status(str, enum.Enum):
    SATURATED = "Saturated"
    UNSATISFIABLE = "Unsatisfiable"
    LIMIT_REACHED = "LimitReached"


@dataclass
class Limits:
    max_clauses: int = 50_000
    max_iterations: int = 200_000
    max_weight: Optional[int] = None
    pick_ratio: int = 4


@dataclass
class Inference:
    rule: str
    premises: Tuple[int, ...]
    premise_clauses: Tuple[Clause, ...]
    sigma: Substitution
    conclusion: Clause


@dataclass
class SaturationOutcome:
    status: Status
    clauses: List[Clause]
    t_infinity: List[Clause]
    variable_eligible_seen: bool
    log: List[Inference] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)


def orientations(lit: Literal):
    yield lit.lhs, lit.rhs
    if lit.lhs != lit.rhs:
        yield lit.rhs, lit.lhs


class ProverState:
    """Active and passive clause sets with the inference log.

    ``abstraction=False`` runs plain superposition: no compliance filter on
    unifiers and no A-reduction (used to compare against the unabstracted input).
    """

    def __init__(
        self,
        ctx: OrderingContext,
        limits: Optional[Limits] = None,
        abstraction: bool = True,
        demodulation: bool = True,
        keep_log: bool = False,
        on_a_clause: Optional[Callable[[Clause], None]] = None,
    ):
        self.ctx = ctx
        self.A = ctx.A
        self.limits = limits or Limits()
        self.abstraction = abstraction
        self.demodulation = demodulation
        self.keep_log = keep_log
        self.on_a_clause = on_a_clause

        self.clauses: Dict[int, Clause] = {}
        self.active: Dict[int, Clause] = {}
        self.passive: Dict[int, Clause] = {}
        self.present: Dict[Clause, int] = {}
        self._heap: List[Tuple[int, int]] = []
        self._fifo: deque = deque()
        self._ids = itertools.count(1)
        self._fresh = itertools.count(1)
        self._maximal: Dict[int, List[int]] = {}
        self.units: Dict[int, List[Tuple[Term, Term]]] = {}

        self.log: List[Inference] = []
        self.origin: Dict[int, Tuple[str, Tuple[int, ...]]] = {}
        self.violations: List[str] = []
        self.warnings: List[str] = []
        self.variable_eligible_seen = False
        self.limit_hit = False
        self.stats = dict(generated=0, kept=0, given=0, forward_subsumed=0,
                          backward_subsumed=0, tautologies=0, a_reductions=0,
                          demodulations=0, non_compliant=0)

    # -- queue management -----------------------------------------------------

    def _store(self, c: Clause, origin: Tuple[str, Tuple[int, ...]]) -> Optional[int]:
        if c in self.present:
            return None
        cid = next(self._ids)
        self.clauses[cid] = c
        self.passive[cid] = c
        self.present[c] = cid
        self.origin[cid] = origin
        heapq.heappush(self._heap, (c.weight(), cid))
        self._fifo.append(cid)
        self.stats["kept"] += 1
        return cid

    def add_input(self, clauses: Iterable[Clause]) -> None:
        for c in clauses:
            self._store(normalize_variables(c), ("input", ()))

    def _pick(self) -> Optional[int]:
        ratio = self.limits.pick_ratio
        by_age = ratio > 0 and self.stats["given"] % (ratio + 1) == ratio
        if by_age:
            while self._fifo:
                cid = self._fifo.popleft()
                if cid in self.passive:
                    return cid
        while self._heap:
            _, cid = heapq.heappop(self._heap)
            if cid in self.passive:
                return cid
        while self._fifo:
            cid = self._fifo.popleft()
            if cid in self.passive:
                return cid
        return None

    def _remove(self, cid: int) -> None:
        c = self.clauses[cid]
        self.active.pop(cid, None)
        self.passive.pop(cid, None)
        self._maximal.pop(cid, None)
        self.units.pop(cid, None)
        if self.present.get(c) == cid:
            del self.present[c]

    # -- contraction ----------------------------------------------------------

    def simplify(self, c: Clause) -> Clause:
        """Forward contraction to a fixpoint (no deletion decisions here)."""
        while True:
            before = c
            c = merge_duplicates(c)
            if self.abstraction:
                c = simplify_constraints(c, self.A)
                r = a_reduce(c, self.ctx)
                if r is not None:
                    self.stats["a_reductions"] += 1
                    c = r
            if self.demodulation and self.units:
                c = self.demodulate(c)
            if c == before:
                return normalize_variables(c)

    def _demodulators(self):
        for rules in self.units.values():
            yield from rules

    def demodulate(self, c: Clause) -> Clause:
        lits = list(c.literals)
        changed = False
        for i, lit in enumerate(lits):
            sides = [lit.lhs, lit.rhs]
            for k in (0, 1):
                while True:
                    new = self._rewrite_once(sides[k], sides[1 - k], lit.positive)
                    if new is None:
                        break
                    sides[k] = new
                    changed = True
            if changed:
                lits[i] = Literal(sides[0], sides[1], lit.positive)
        if not changed:
            return c
        self.stats["demodulations"] += 1
        return Clause(lits)

    def _rewrite_once(self, side: Term, other: Term, positive: bool) -> Optional[Term]:
        cmp = self.ctx.compare_terms_A
        for pos, sub in subterms(side):
            if type(sub) is Var:
                continue
            for l, r in self._demodulators():
                if type(l) is Fn and l.sym != sub.sym:
                    continue
                theta = match(l, sub)
                if theta is None:
                    continue
                r_inst = apply_term(r, theta)
                if cmp(sub, r_inst) is not GT:
                    continue
                if not pos and positive and cmp(other, r_inst) is not GT:
                    continue
                return replace_at(side, pos, r_inst)
        return None

    def subsumes(self, d: Clause, c: Clause) -> bool:
        return subsumes(d, c)

    def is_redundant(self, c: Clause) -> bool:
        """Tautology, or subsumed by an active clause (after contraction)."""
        if is_syntactic_tautology(c):
            return True
        for cid, d in self.active.items():
            if len(d) <= len(c) and subsumes(d, c):
                return True
        return False

    def _add_unit_rules(self, cid: int, c: Clause) -> None:
        if len(c) != 1 or not c.literals[0].positive:
            return
        lit = c.literals[0]
        if any(v.abducible for v in c.variables()) or is_a_clause(c, self.A):
            return
        rules = []
        for l, r in orientations(lit):
            if type(l) is Var:
                continue
            if self.ctx.compare_terms_A(l, r) is LT:
                continue
            rules.append((l, r))
        if rules:
            self.units[cid] = rules

    # -- inference rules --------------------------------------------------------

    def _unify(self, s: Term, t: Term) -> Optional[Substitution]:
        try:
            sigma = mgu(s, t)
        except NotUnifiable:
            return None
        if self.abstraction:
            try:
                sigma = repair(sigma, self.A)
            except NotACompliant:
                self.stats["non_compliant"] += 1
                return None
        return sigma

    def maximal(self, cid: int, c: Clause) -> List[int]:
        m = self._maximal.get(cid)
        if m is None:
            m = self.ctx.maximal_literals(c)
            self._maximal[cid] = m
        return m

    def _not_less(self, lit: Literal, others: Sequence[Literal]) -> bool:
        cmp = self.ctx.compare_literals_A
        return all(cmp(lit, o) is not LT for o in others)

    def superposition(self, into: Clause, into_max: Sequence[int],
                      from_: Clause, from_max: Sequence[int]) -> List[Tuple[str, Clause, Substitution]]:
        """All superposition/paramodulation conclusions rewriting ``into`` with ``from_``."""
        cmp = self.ctx.compare_terms_A
        out = []
        for fi in from_max:
            flit = from_.literals[fi]
            if not flit.positive:
                continue
            for u, t in orientations(flit):
                if type(u) is Var and (u.abducible or cmp(u, t) is LT):
                    continue
                if type(u) is Fn and cmp(u, t) is LT:
                    continue
                for ii in into_max:
                    ilit = into.literals[ii]
                    for l, r in orientations(ilit):
                        if cmp(l, r) is LT:
                            continue
                        for pos, sub in subterms(l):
                            if type(sub) is Var:
                                continue
                            if type(u) is Fn and (u.sym != sub.sym or len(u.args) != len(sub.args)):
                                continue
                            sigma = self._unify(u, sub)
                            if sigma is None:
                                continue
                            res = self._check_sup(into, ii, l, r, pos, from_, fi, u, t, sigma)
                            if res is not None:
                                rule = "superposition" if ilit.positive else "paramodulation"
                                out.append((rule, res, sigma))
        return out

    def _check_sup(self, into, ii, l, r, pos, from_, fi, u, t, sigma):
        cmp = self.ctx.compare_terms_A
        u_s, t_s = apply_term(u, sigma), apply_term(t, sigma)
        if cmp(u_s, t_s) is LT:
            return None
        from_rest = [apply_literal(x, sigma) for x in from_.without(fi)]
        if not self._not_less(Literal(u_s, t_s, True), from_rest):
            return None
        l_s, r_s = apply_term(l, sigma), apply_term(r, sigma)
        if cmp(l_s, r_s) is LT:
            return None
        ilit = into.literals[ii]
        into_rest = [apply_literal(x, sigma) for x in into.without(ii)]
        if not self._not_less(Literal(l_s, r_s, ilit.positive), into_rest):
            return None
        new_l = replace_at(l_s, pos, t_s)
        return Clause(into_rest + from_rest + [Literal(new_l, r_s, ilit.positive)])

    def reflection(self, c: Clause, cmax: Sequence[int]):
        out = []
        for i in cmax:
            lit = c.literals[i]
            if lit.positive:
                continue
            sigma = self._unify(lit.lhs, lit.rhs)
            if sigma is None:
                continue
            rest = [apply_literal(x, sigma) for x in c.without(i)]
            if self._not_less(apply_literal(lit, sigma), rest):
                out.append(("reflection", Clause(rest), sigma))
        return out

    def equational_factoring(self, c: Clause, cmax: Sequence[int]):
        cmp = self.ctx.compare_terms_A
        out = []
        n = len(c.literals)
        for i in cmax:
            li = c.literals[i]
            if not li.positive:
                continue
            for j in range(n):
                lj = c.literals[j]
                if j == i or not lj.positive:
                    continue
                for u, t in orientations(li):
                    if cmp(u, t) is LT:
                        continue
                    for u2, t2 in orientations(lj):
                        sigma = self._unify(u, u2)
                        if sigma is None:
                            continue
                        u_s, t_s = apply_term(u, sigma), apply_term(t, sigma)
                        if cmp(u_s, t_s) is LT:
                            continue
                        rest = [apply_literal(c.literals[k], sigma) for k in range(n) if k not in (i, j)]
                        t2_s = apply_term(t2, sigma)
                        others = rest + [Literal(apply_term(u2, sigma), t2_s, True)]
                        if not self._not_less(Literal(u_s, t_s, True), others):
                            continue
                        concl = Clause(rest + [Literal(t_s, t2_s, False), Literal(u_s, t2_s, True)])
                        out.append(("equational_factoring", concl, sigma))
        return out

    # -- main loop ------------------------------------------------------------------

    def _activate(self, gid: int, g: Clause) -> None:
        self.passive.pop(gid, None)
        self.active[gid] = g
        if self.abstraction:
            if not is_abstracted_clause(g, self.A) or not is_va_stable(g, self.A):
                self.violations.append(f"kept clause not abstracted/stable: {g}")
        if g.variables() and self.ctx.is_variable_eligible(g):
            if not self.variable_eligible_seen:
                self.warnings.append(f"variable-eligible clause kept: {g}")
            self.variable_eligible_seen = True
        if self.on_a_clause is not None and g.ground and is_a_clause(g, self.A):
            self.on_a_clause(g)

    def _record(self, rule, premises, premise_clauses, sigma, concl) -> None:
        self.stats["generated"] += 1
        if len(premises) == 2 and self.abstraction:
            k1, k2 = (is_a_clause(p, self.A) for p in premise_clauses)
            if k1 != k2:
                self.violations.append(
                    f"{rule} mixes A-clause and non-A-clause premises: {premise_clauses}"
                )
        if self.keep_log:
            self.log.append(Inference(rule, tuple(premises), tuple(premise_clauses), sigma, concl))

    def _generate(self, gid: int, g: Clause) -> List[Tuple[str, Tuple[int, ...], Clause]]:
        renamed, _ = rename_clause(g, self._fresh)
        # renaming may reorder literals, so maximality is recomputed
        gmax = self.ctx.maximal_literals(renamed)
        results = []
        for rule, concl, sigma in self.reflection(renamed, gmax):
            self._record(rule, (gid,), (renamed,), sigma, concl)
            results.append((rule, (gid,), concl))
        for rule, concl, sigma in self.equational_factoring(renamed, gmax):
            self._record(rule, (gid,), (renamed,), sigma, concl)
            results.append((rule, (gid,), concl))
        for cid, c in list(self.active.items()):
            cmax = self.maximal(cid, c)
            for rule, concl, sigma in self.superposition(c, cmax, renamed, gmax):
                self._record(rule, (cid, gid), (c, renamed), sigma, concl)
                results.append((rule, (cid, gid), concl))
            if cid == gid:
                continue
            for rule, concl, sigma in self.superposition(renamed, gmax, c, cmax):
                self._record(rule, (gid, cid), (renamed, c), sigma, concl)
                results.append((rule, (gid, cid), concl))
        return results

    def _backward(self, gid: int, g: Clause) -> None:
        for cid, d in list(self.active.items()):
            if cid != gid and len(g) <= len(d) and subsumes(g, d):
                self._remove(cid)
                self.stats["backward_subsumed"] += 1
        if gid in self.units and self.demodulation:
            for cid, d in list(self.active.items()):
                if cid == gid:
                    continue
                d2 = self.demodulate(d)
                if d2 != d:
                    self._remove(cid)
                    self._store(normalize_variables(d2), ("demodulation", (cid, gid)))

    def run(self) -> Status:
        limits = self.limits
        while True:
            if self.stats["given"] >= limits.max_iterations:
                self.limit_hit = True
                return Status.LIMIT_REACHED
            if len(self.active) + len(self.passive) > limits.max_clauses:
                self.limit_hit = True
                return Status.LIMIT_REACHED
            gid = self._pick()
            if gid is None:
                return Status.SATURATED
            g0 = self.passive.pop(gid)
            if self.present.get(g0) == gid:
                del self.present[g0]
            g = self.simplify(g0)
            if g.is_empty:
                self._activate(self._relabel(gid, g0, g), g)
                return Status.UNSATISFIABLE
            if is_syntactic_tautology(g):
                self.stats["tautologies"] += 1
                continue
            if self.is_redundant(g):
                self.stats["forward_subsumed"] += 1
                continue
            if g != g0:
                gid = self._relabel(gid, g0, g)
            self.stats["given"] += 1
            self._add_unit_rules(gid, g)
            self._backward(gid, g)
            self._activate(gid, g)
            self.present[g] = gid
            for rule, premises, concl in self._generate(gid, g):
                concl = normalize_variables(concl)
                if concl.is_empty:
                    cid = self._store(concl, (rule, premises))
                    self._activate(cid if cid is not None else self.present[concl], concl)
                    return Status.UNSATISFIABLE
                if is_syntactic_tautology(concl):
                    self.stats["tautologies"] += 1
                    continue
                if limits.max_weight is not None and concl.weight() > limits.max_weight:
                    self.limit_hit = True
                    continue
                self._store(concl, (rule, premises))

    def _relabel(self, gid: int, old: Clause, new: Clause) -> int:
        """Give a simplified clause its own id, remembering where it came from."""
        if new == old:
            return gid
        nid = next(self._ids)
        self.clauses[nid] = new
        self.origin[nid] = ("simplification", (gid,))
        return nid

    def t_infinity(self) -> List[Clause]:
        out = []
        seen = set()
        pool = list(self.active.values())
        if self.limit_hit:
            pool += [self.simplify(c) for c in self.passive.values()]
        for c in pool:
            if is_a_clause(c, self.A):
                if self.abstraction:
                    r = a_reduce(c, self.ctx)
                    c = r if r is not None else c
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out


def subsumes(d: Clause, c: Clause) -> bool:
    """Is there a substitution mapping the literal multiset of d into that of c?"""
    if len(d) > len(c):
        return False
    dl, cl = d.literals, c.literals
    if d.ground:
        rest = list(cl)
        for lit in dl:
            try:
                rest.remove(lit)
            except ValueError:
                return False
        return True
    used = [False] * len(cl)

    def search(i: int, theta: Dict[Var, Term]) -> bool:
        if i == len(dl):
            return True
        lit = dl[i]
        for j, target in enumerate(cl):
            if used[j] or target.positive != lit.positive:
                continue
            for tl, tr in ((target.lhs, target.rhs), (target.rhs, target.lhs)):
                th = match(lit.lhs, tl, theta, abducible_to_abducible=True)
                if th is None:
                    continue
                th = match(lit.rhs, tr, th, abducible_to_abducible=True)
                if th is None:
                    continue
                used[j] = True
                if search(i + 1, th):
                    return True
                used[j] = False
        return False

    return search(0, {})


def saturate(
    clauses: Sequence[Clause],
    ctx: OrderingContext,
    limits: Optional[Limits] = None,
    *,
    abstraction: bool = True,
    demodulation: bool = True,
    keep_log: bool = False,
    on_a_clause: Optional[Callable[[Clause], None]] = None,
) -> SaturationOutcome:
    """Saturate an abstracted, stable clause set. Abstraction is the caller's job."""
    state = ProverState(ctx, limits, abstraction=abstraction, demodulation=demodulation,
                        keep_log=keep_log, on_a_clause=on_a_clause)
    state.add_input(clauses)
    t0 = time.perf_counter()
    status = state.run()
    state.stats["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
    if state.limit_hit and status is Status.SATURATED:
        status = Status.LIMIT_REACHED
    final = list(state.active.values())
    t_inf = [c for c in final if c.is_empty] if status is Status.UNSATISFIABLE else state.t_infinity()
    warnings = list(state.warnings)
    if status is Status.LIMIT_REACHED:
        warnings.append("saturation stopped at a resource limit")
    return SaturationOutcome(
        status=status,
        clauses=final,
        t_infinity=t_inf,
        variable_eligible_seen=state.variable_eligible_seen,
        log=state.log,
        stats=state.stats,
        warnings=warnings,
        violations=state.violations,
    )


def extract_t_infinity(out: SaturationOutcome) -> List[Clause]:
    return list(out.t_infinity)
