"""The transition systems behind the solver: plain backtracking search
over a clause set, its unfounded-set extension for clause/program
theories, and the backjumping/learning variant, all driven by
per-strategy rule priorities with deterministic tie-breaking.

A run is a walk through the corresponding graph; every applied rule is
recorded as a trace step carrying its payload and a digest of the
resulting trail.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from . import oracles, translations
from .model import (
    Atom,
    Clause,
    Literal,
    Program,
    SmaspTheory,
    Trail,
    duals,
    sorted_atoms,
)

RULE_UNIT_PROPAGATE = "UnitPropagate"
RULE_DECIDE = "Decide"
RULE_FAIL = "Fail"
RULE_BACKTRACK = "Backtrack"
RULE_UNFOUNDED = "Unfounded"
RULE_UNIT_PROPAGATE_LEARN = "UnitPropagateLearn"
RULE_BACKJUMP = "Backjump"
RULE_LEARN = "Learn"

ALL_RULES = frozenset({
    RULE_UNIT_PROPAGATE, RULE_DECIDE, RULE_FAIL, RULE_BACKTRACK,
    RULE_UNFOUNDED, RULE_UNIT_PROPAGATE_LEARN, RULE_BACKJUMP, RULE_LEARN,
})

VERDICT_MODEL = "model"
VERDICT_UNSAT = "unsatisfiable"
VERDICT_LIMIT = "limit-exceeded"

DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_LEARNED = 10_000
SELF_CHECK_ATOM_LIMIT = 12


class SelfCheckError(RuntimeError):
    """A verdict contradicted the semantic oracle."""


@dataclass(frozen=True)
class Transition:
    rule: str
    literal: Optional[Literal] = None
    clause: Optional[Clause] = None
    witness: Optional[tuple[Atom, ...]] = None
    prefix_length: Optional[int] = None


@dataclass(frozen=True)
class AugmentedState:
    """A trail paired with the learned-clause store; ``failed`` is the
    distinguished terminal state and carries no trail."""

    trail: Trail = Trail()
    learned: tuple[Clause, ...] = ()
    failed: bool = False


@dataclass(frozen=True)
class Strategy:
    mode: str
    priority: tuple[tuple[str, ...], ...]
    learning: bool


_PRIORITIES: dict[str, tuple[tuple[str, ...], ...]] = {
    "dpll": (
        (RULE_FAIL, RULE_BACKTRACK),
        (RULE_UNIT_PROPAGATE,),
        (RULE_DECIDE,),
    ),
    "smodels": (
        (RULE_FAIL, RULE_BACKTRACK),
        (RULE_UNIT_PROPAGATE,),
        (RULE_UNFOUNDED,),
        (RULE_DECIDE,),
    ),
    "cmodels": (
        (RULE_BACKJUMP, RULE_FAIL),
        (RULE_UNIT_PROPAGATE_LEARN,),
        (RULE_DECIDE,),
        (RULE_UNFOUNDED,),
    ),
    "clasp": (
        (RULE_BACKJUMP, RULE_FAIL),
        (RULE_UNIT_PROPAGATE_LEARN,),
        (RULE_UNFOUNDED,),
        (RULE_DECIDE,),
    ),
}
_PRIORITIES["minisatid"] = _PRIORITIES["clasp"]

MODES = tuple(sorted(_PRIORITIES))
_LEARNING_MODES = frozenset({"cmodels", "clasp", "minisatid"})


def strategy_priority(mode: str) -> tuple[tuple[str, ...], ...]:
    try:
        return _PRIORITIES[mode]
    except KeyError:
        raise ValueError(f"unknown strategy mode: {mode!r}") from None


def for_mode(mode: str) -> Strategy:
    return Strategy(mode, strategy_priority(mode), mode in _LEARNING_MODES)


@dataclass(frozen=True)
class _TheoryContext:
    atoms: tuple[Atom, ...]
    opened: Program
    up_sources: tuple[Clause, ...]  # clause set first, program reading after


@lru_cache(maxsize=512)
def _context(theory: SmaspTheory) -> _TheoryContext:
    sources = list(theory.clauses)
    seen = set(sources)
    for c in translations.clausal(theory.program):
        if c not in seen:
            sources.append(c)
            seen.add(c)
    opened = translations.open_program(theory.program, theory.atoms)
    return _TheoryContext(theory.atoms, opened, tuple(sources))


def digest_trail(trail: Trail) -> str:
    toks = []
    for e in trail:
        t = e.literal.atom.name if e.literal.positive else "-" + e.literal.atom.name
        if e.is_decision:
            t += "@d"
        toks.append(t)
    return hashlib.sha256(" ".join(toks).encode()).hexdigest()[:16]


def applicable_unit_propagate(state: AugmentedState, theory: SmaspTheory,
                              include_learned: bool = False) -> list[tuple[Literal, Clause]]:
    """All unit-propagation candidates ``(l, clause)``: the clause's
    other literals are falsified and ``l`` itself is not yet on the
    trail (its dual may be: that is how conflicts enter). Ordered by
    the clause set, then the program reading, then learned clauses."""
    if state.failed:
        return []
    sources = list(_context(theory).up_sources)
    if include_learned:
        seen = set(sources)
        for c in state.learned:
            if c not in seen:
                sources.append(c)
                seen.add(c)
    m = state.trail.literal_set
    out: list[tuple[Literal, Clause]] = []
    for c in sources:
        falsified = sum(1 for l in c if l.complement() in m)
        if falsified < len(c) - 1:
            continue
        for l in c:
            if l in m:
                continue
            if all(o.complement() in m for o in c if o != l):
                out.append((l, c))
    return out


def applicable_decide(state: AugmentedState, theory: SmaspTheory) -> list[Literal]:
    """Both polarities of every unassigned atom; only offered on
    consistent trails (every strategy ranks conflict handling above
    Decide, so this guard never changes reachable behavior)."""
    if state.failed or not state.trail.is_consistent:
        return []
    out = []
    for a in _context(theory).atoms:
        if state.trail.is_unassigned(Literal(a)):
            out.append(Literal(a))
            out.append(Literal(a, positive=False))
    return out


def applicable_fail(state: AugmentedState, theory: SmaspTheory) -> bool:
    return (not state.failed and not state.trail.is_consistent
            and not state.trail.decision_indices)


def applicable_backtrack(state: AugmentedState, theory: SmaspTheory) -> Optional[Literal]:
    """The flipped literal replacing the last decision, when the trail
    is inconsistent and has one."""
    if state.failed or state.trail.is_consistent or not state.trail.decision_indices:
        return None
    last = state.trail.decision_indices[-1]
    return state.trail.entries[last].literal.complement()


def applicable_unfounded(state: AugmentedState, theory: SmaspTheory) -> list[tuple[Literal, tuple[Atom, ...]]]:
    """Negations of the greatest unfounded set's members not already on
    the trail, each carrying the set as witness. Inapplicable on
    inconsistent trails (unfoundedness is undefined there)."""
    if state.failed or not state.trail.is_consistent:
        return []
    ctx = _context(theory)
    gus = oracles.greatest_unfounded_set(state.trail.literal_set, ctx.opened)
    witness = sorted_atoms(gus)
    out = []
    for a in witness:
        lit = Literal(a, positive=False)
        if lit not in state.trail:
            out.append((lit, witness))
    return out


def unfounded_reason(atom: Atom, u: Iterable[Atom], m: Union[Trail, Iterable[Literal]],
                     pio: Program) -> Clause:
    """Reason clause for falsifying a member of an unfounded set: the
    member is false, or one of the set's external bodies has its
    already-falsified literal true."""
    ms = m.literal_set if isinstance(m, Trail) else frozenset(m)
    us = frozenset(u)
    lits = {Literal(atom, positive=False)}
    bodies = []
    for a in sorted_atoms(us):
        for body in pio.bodies(a):
            if not (body.pos_set & us) and body not in bodies:
                bodies.append(body)
    for body in sorted(bodies, key=lambda b: b.key):
        falsified = [l for l in body.s_literals if l.complement() in ms]
        if not falsified:
            raise ValueError(f"body {body} of an allegedly unfounded set is not falsified")
        lits.add(falsified[0])
    return Clause(tuple(lits))


def conflicting_clause(state: AugmentedState) -> Clause:
    """Reason of the first trail entry that broke consistency; it is
    falsified by the consistent prefix."""
    i = state.trail.first_conflict_index
    if i is None:
        raise ValueError("trail is consistent; no conflicting clause")
    reason = state.trail.entries[i].reason
    if reason is None:
        raise ValueError("conflicting entry has no reason attached")
    return reason


def analyze_conflict(state: AugmentedState, conflicting: Clause,
                     theory: SmaspTheory) -> tuple[Clause, Literal, int]:
    """Resolve the conflicting clause backwards along trail reasons
    until a single literal remains at the deepest decision level
    involved; returns the learned clause, its asserting literal, and
    the length of the trail prefix the backjump keeps."""
    trail = state.trail
    if trail.is_consistent or not trail.decision_indices:
        raise ValueError("conflict analysis requires an inconsistent trail with a decision")
    prefix = trail.consistent_prefix()
    position = {e.literal: i for i, e in enumerate(prefix.entries)}
    levels = prefix.levels

    current = set(conflicting.literals)
    while True:
        by_level: list[tuple[int, Literal]] = []
        for lit in current:
            dual = lit.complement()
            if dual not in position:
                raise ValueError(f"clause literal {lit!r} is not falsified by the trail prefix")
            by_level.append((levels[position[dual]], lit))
        dec = max(level for level, _ in by_level)
        at_dec = [lit for level, lit in by_level if level == dec]
        if len(at_dec) == 1:
            asserting = at_dec[0]
            break
        # resolve on the most recently assigned non-decision literal of
        # the deepest level whose dual sits in the clause
        pivot_entry = None
        for e in reversed(prefix.entries):
            if (not e.is_decision and levels[position[e.literal]] == dec
                    and e.literal.complement() in current):
                pivot_entry = e
                break
        if pivot_entry is None or pivot_entry.reason is None:
            raise ValueError("no resolvable literal; reason bookkeeping is broken")
        current.discard(pivot_entry.literal.complement())
        current.update(l for l in pivot_entry.reason if l != pivot_entry.literal)

    learned = Clause(tuple(current))
    target_decision = max(dec, 1)  # level 0 jumps to the decision-free prefix
    prefix_length = trail.decision_indices[target_decision - 1]
    return learned, asserting, prefix_length


def _backjump_transition(state: AugmentedState, theory: SmaspTheory) -> Optional[Transition]:
    if state.failed or state.trail.is_consistent or not state.trail.decision_indices:
        return None
    learned, asserting, prefix_length = analyze_conflict(state, conflicting_clause(state), theory)
    return Transition(RULE_BACKJUMP, literal=asserting, clause=learned,
                      prefix_length=prefix_length)


def is_singular_unfounded(state: AugmentedState, theory: SmaspTheory) -> bool:
    """An unfounded-set edge is singular when some other non-decision
    edge leaves the same state; strategies emulating the eager
    unfounded-check solver must never traverse one."""
    if not state.trail.is_consistent:
        return False
    if not applicable_unfounded(state, theory):
        return False
    return (bool(applicable_unit_propagate(state, theory))
            or applicable_fail(state, theory)
            or applicable_backtrack(state, theory) is not None)


def step(state: AugmentedState, transition: Transition, theory: SmaspTheory) -> AugmentedState:
    """Apply a transition after checking it is applicable in ``state``."""
    rule = transition.rule
    if rule not in ALL_RULES:
        raise ValueError(f"unknown transition rule: {rule!r}")
    if state.failed:
        raise ValueError("no transition applies to the failed state")
    trail = state.trail

    if rule in (RULE_UNIT_PROPAGATE, RULE_UNIT_PROPAGATE_LEARN):
        include_learned = rule == RULE_UNIT_PROPAGATE_LEARN
        pair = (transition.literal, transition.clause)
        if pair not in applicable_unit_propagate(state, theory, include_learned):
            raise ValueError(f"inapplicable {rule}: {transition}")
        return AugmentedState(trail.append(transition.literal, reason=transition.clause),
                              state.learned, False)

    if rule == RULE_DECIDE:
        if transition.literal not in applicable_decide(state, theory):
            raise ValueError(f"inapplicable Decide: {transition}")
        return AugmentedState(trail.append(transition.literal, decision=True),
                              state.learned, False)

    if rule == RULE_FAIL:
        if not applicable_fail(state, theory):
            raise ValueError("Fail requires an inconsistent, decision-free trail")
        return AugmentedState(Trail(), state.learned, True)

    if rule == RULE_BACKTRACK:
        expected = applicable_backtrack(state, theory)
        if expected is None or transition.literal != expected:
            raise ValueError(f"inapplicable Backtrack: {transition}")
        last = trail.decision_indices[-1]
        return AugmentedState(trail.truncate(last).append(transition.literal),
                              state.learned, False)

    if rule == RULE_UNFOUNDED:
        if not trail.is_consistent:
            raise ValueError("Unfounded requires a consistent trail")
        witness = transition.witness or ()
        lit = transition.literal
        if lit is None or lit.positive or lit.atom not in witness or lit in trail:
            raise ValueError(f"inapplicable Unfounded: {transition}")
        opened = _context(theory).opened
        if not oracles.is_unfounded(witness, trail.literal_set, opened):
            raise ValueError(f"witness {witness} is not unfounded on the trail")
        reason = unfounded_reason(lit.atom, witness, trail, opened)
        return AugmentedState(trail.append(lit, reason=reason), state.learned, False)

    if rule == RULE_BACKJUMP:
        if trail.is_consistent or not trail.decision_indices:
            raise ValueError("Backjump requires an inconsistent trail with a decision")
        plen = transition.prefix_length
        lit, cl = transition.literal, transition.clause
        if plen is None or lit is None or cl is None:
            raise ValueError("Backjump carries a literal, a clause, and a prefix length")
        if not (0 <= plen < len(trail)) or not trail.entries[plen].is_decision:
            raise ValueError("Backjump prefix must end right before a decision literal")
        prefix_lits = frozenset(e.literal for e in trail.entries[:plen])
        if lit not in cl or not duals(l for l in cl if l != lit) <= prefix_lits:
            raise ValueError("Backjump clause must be asserting for the kept prefix")
        return AugmentedState(trail.truncate(plen).append(lit, reason=cl),
                              state.learned, False)

    if rule == RULE_LEARN:
        cl = transition.clause
        if cl is None:
            raise ValueError("Learn carries a clause")
        if cl in state.learned:
            raise ValueError("clause is already in the learned store")
        if not set(cl.atoms) <= set(_context(theory).atoms):
            raise ValueError("learned clause mentions atoms outside the theory")
        return AugmentedState(trail, state.learned + (cl,), False)

    raise AssertionError(rule)


def _choose(state: AugmentedState, theory: SmaspTheory, strategy: Strategy) -> Optional[Transition]:
    if state.failed:
        return None
    for group in strategy.priority:
        for rule in group:
            if rule == RULE_FAIL:
                if applicable_fail(state, theory):
                    return Transition(RULE_FAIL)
            elif rule == RULE_BACKTRACK:
                lit = applicable_backtrack(state, theory)
                if lit is not None:
                    return Transition(RULE_BACKTRACK, literal=lit)
            elif rule == RULE_BACKJUMP:
                tr = _backjump_transition(state, theory)
                if tr is not None:
                    return tr
            elif rule in (RULE_UNIT_PROPAGATE, RULE_UNIT_PROPAGATE_LEARN):
                cands = applicable_unit_propagate(
                    state, theory, include_learned=(rule == RULE_UNIT_PROPAGATE_LEARN))
                if cands:
                    lit, cl = cands[0]
                    return Transition(rule, literal=lit, clause=cl)
            elif rule == RULE_DECIDE:
                lits = applicable_decide(state, theory)
                if lits:
                    return Transition(RULE_DECIDE, literal=lits[0])
            elif rule == RULE_UNFOUNDED:
                cands = applicable_unfounded(state, theory)
                if cands:
                    lit, witness = cands[0]
                    return Transition(RULE_UNFOUNDED, literal=lit, witness=witness)
    return None


@dataclass(frozen=True)
class TraceStep:
    index: int
    rule: str
    literal: Optional[Literal] = None
    clause: Optional[Clause] = None
    witness: Optional[tuple[Atom, ...]] = None
    prefix_length: Optional[int] = None
    trail_digest: str = ""


@dataclass(frozen=True)
class Outcome:
    verdict: str
    model: Optional[frozenset[Literal]]
    steps: tuple[TraceStep, ...]
    stats: dict[str, int]


def run(theory: SmaspTheory, strategy: Union[Strategy, str],
        max_steps: int = DEFAULT_MAX_STEPS, max_learned: int = DEFAULT_MAX_LEARNED,
        self_check: Optional[bool] = None) -> Outcome:
    """Walk the graph from the empty state, always taking the highest
    priority applicable rule (first candidate in canonical order), with
    one Learn step injected after each Backjump that does not reach a
    semi-terminal state.

    Halting without failure yields a model verdict, checked against the
    semantic oracle by default at desk scale; pass ``self_check=False``
    to run a strategy outside its sound pairing (e.g. the plain
    backtracking mode over a theory with a non-empty program).
    """
    if isinstance(strategy, str):
        strategy = for_mode(strategy)
    ctx = _context(theory)
    if self_check is None:
        self_check = len(ctx.atoms) <= SELF_CHECK_ATOM_LIMIT

    state = AugmentedState()
    steps: list[TraceStep] = []
    stats: Counter[str] = Counter()
    limit = False

    def record(tr: Transition) -> None:
        steps.append(TraceStep(
            index=len(steps) + 1, rule=tr.rule, literal=tr.literal, clause=tr.clause,
            witness=tr.witness, prefix_length=tr.prefix_length,
            trail_digest=digest_trail(state.trail)))
        stats[tr.rule] += 1

    while True:
        if len(steps) >= max_steps:
            limit = True
            break
        tr = _choose(state, theory, strategy)
        if tr is None:
            break
        state = step(state, tr, theory)
        record(tr)
        if tr.rule == RULE_BACKJUMP and strategy.learning and tr.clause not in state.learned:
            if _choose(state, theory, strategy) is None:
                break  # semi-terminal: nothing basic applies, so no Learn
            if len(state.learned) >= max_learned:
                limit = True
                break
            learn = Transition(RULE_LEARN, clause=tr.clause)
            state = step(state, learn, theory)
            record(learn)

    if limit:
        return Outcome(VERDICT_LIMIT, None, tuple(steps), dict(stats))
    if state.failed:
        return Outcome(VERDICT_UNSAT, None, tuple(steps), dict(stats))
    model = state.trail.literal_set
    if self_check and not oracles.is_smasp_model(theory, model):
        raise SelfCheckError(f"halting state is not a model of the theory: {sorted(model, key=lambda l: l.key)}")
    return Outcome(VERDICT_MODEL, model, tuple(steps), dict(stats))
