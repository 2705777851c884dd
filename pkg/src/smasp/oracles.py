"""Ground-truth semantics by direct definition and exhaustive
enumeration: reducts, answer sets, unfounded sets, well-founded
fixpoints, the two model relations, and entailment.

This is the slow trusted side of every dual-route check; the transition
engine is validated against it. All functions are pure; enumerations
are capped and raise :class:`CapExceeded` instead of running away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .model import (
    Atom,
    CapExceeded,
    Clause,
    Literal,
    PcidTheory,
    Program,
    Rule,
    SmaspTheory,
    atoms_of_literals,
    duals,
    is_complete_over,
    is_consistent_literals,
    positive_part,
    restrict_literals,
    satisfies,
    sorted_atoms,
)
from . import translations

DEFAULT_ENUMERATION_CAP = 20

LiteralSet = frozenset  # alias; oracle arguments accept any literal iterable


@dataclass(frozen=True)
class ThreeValuedModel:
    """A consistent literal set over a universe; atoms it leaves
    unassigned are undefined."""

    literals: frozenset[Literal]
    universe: tuple[Atom, ...]

    @property
    def is_total(self) -> bool:
        return atoms_of_literals(self.literals) == frozenset(self.universe)


def _check_cap(atoms: Iterable[Atom], cap: int) -> tuple[Atom, ...]:
    atoms = sorted_atoms(atoms)
    if len(atoms) > cap:
        raise CapExceeded(f"enumeration over {len(atoms)} atoms exceeds cap {cap}")
    return atoms


def reduct(pi: Program, x: Iterable[Atom]) -> Program:
    """Eliminate negation from ``pi`` relative to ``x``: a rule survives
    iff no negated atom is in ``x`` and every doubly negated atom is;
    surviving rules keep only head and positive body.

    A surviving constraint whose positive body is empty cannot shed its
    body (constraints are non-empty by construction); it is kept
    verbatim and marks an unconditional violation.
    """
    xs = frozenset(x)
    kept = []
    for r in pi:
        if any(a in xs for a in r.neg):
            continue
        if not all(a in xs for a in r.negneg):
            continue
        if r.head is None and not r.pos:
            kept.append(r)
        else:
            kept.append(Rule(r.head, pos=r.pos))
    return Program(tuple(kept))


def _least_model(pi: Program) -> frozenset[Atom]:
    """Least model of the positive rules of a negation-free program."""
    derived: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for r in pi:
            if r.head is not None and r.head not in derived and set(r.pos) <= derived:
                derived.add(r.head)
                changed = True
    return frozenset(derived)


def is_answer_set(pi: Program, x: Iterable[Atom]) -> bool:
    xs = frozenset(x)
    for r in pi:
        if r.head is None:
            survives = not any(a in xs for a in r.neg) and all(a in xs for a in r.negneg)
            if survives and set(r.pos) <= xs:
                return False
    defining = Program(tuple(r for r in pi if r.head is not None))
    return _least_model(reduct(defining, xs)) == xs


def enumerate_answer_sets(pi: Program, universe: Optional[Iterable[Atom]] = None,
                          cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[frozenset[Atom], ...]:
    """All answer sets of ``pi`` over ``universe`` (default: its atoms),
    in canonical subset order."""
    atoms = _check_cap(pi.atoms if universe is None else universe, cap)
    out = []
    for size in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, size):
            if is_answer_set(pi, combo):
                out.append(frozenset(combo))
    return tuple(out)


def facts(atoms: Iterable[Atom]) -> tuple[Rule, ...]:
    return tuple(Rule(a) for a in sorted_atoms(atoms))


def is_input_answer_set(pi: Program, x: Iterable[Atom]) -> bool:
    """True iff ``x`` is an answer set of ``pi`` extended with the
    members of ``x`` that cannot be defined by ``pi``."""
    xs = frozenset(x)
    inputs = xs - pi.heads
    return is_answer_set(pi.extend(facts(inputs)), xs)


def is_unfounded(u: Iterable[Atom], m: Iterable[Literal], pi: Program) -> bool:
    """Every rule for a member of ``u`` has its body contradicted by
    ``m`` or positively dependent on ``u``."""
    ms = frozenset(m)
    if not is_consistent_literals(ms):
        raise ValueError("unfoundedness is defined on consistent literal sets only")
    us = frozenset(u)
    for a in us:
        for body in pi.bodies(a):
            if not (ms & duals(body.s_literals)) and not (us & body.pos_set):
                return False
    return True


def greatest_unfounded_set(m: Iterable[Literal], pi: Program) -> frozenset[Atom]:
    """Union of all sets unfounded on ``m``; computed as the complement
    of the founded-atom fixpoint."""
    ms = frozenset(m)
    if not is_consistent_literals(ms):
        raise ValueError("unfoundedness is defined on consistent literal sets only")
    founded: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for a in pi.atoms:
            if a in founded:
                continue
            for body in pi.bodies(a):
                if not (ms & duals(body.s_literals)) and body.pos_set <= founded:
                    founded.add(a)
                    changed = True
                    break
    return frozenset(pi.atoms) - founded


def w_step(pi: Program, m: Iterable[Literal]) -> frozenset[Literal]:
    """One application of the well-founded operator: derived heads plus
    negations of the greatest unfounded set; on an inconsistent input
    the result saturates to all literals."""
    if not pi.is_weakly_normal:
        raise ValueError("the well-founded operator is defined for weakly normal programs only")
    ms = frozenset(m)
    if not is_consistent_literals(ms):
        return frozenset(Literal(a, p) for a in pi.atoms for p in (True, False))
    derived = {Literal(r.head) for r in pi if set(r.body.s_literals) <= ms}
    negated = duals(Literal(a) for a in greatest_unfounded_set(ms, pi))
    return ms | derived | negated


def w_fix(pi: Program, m: Iterable[Literal]) -> frozenset[Literal]:
    """Iterate :func:`w_step` to its fixpoint (the operator is
    increasing on a finite lattice, so this terminates)."""
    current = frozenset(m)
    while True:
        nxt = w_step(pi, current)
        if nxt == current:
            return current
        current = nxt


def well_founded_model(pi: Program) -> ThreeValuedModel:
    fix = w_fix(pi, frozenset())
    assert is_consistent_literals(fix), "well-founded fixpoint must be consistent"
    return ThreeValuedModel(fix, pi.atoms)


def open_view(theory: Union[SmaspTheory, PcidTheory]) -> tuple[Program, tuple[Atom, ...]]:
    """The theory's program with its non-head atoms opened, plus the
    open atoms themselves."""
    opened = translations.open_program(theory.program, theory.atoms)
    open_atoms = translations.open_atoms(theory.program, theory.atoms)
    return opened, open_atoms


def is_pcid_model(theory: PcidTheory, m: Iterable[Literal]) -> bool:
    ms = frozenset(m)
    if not is_consistent_literals(ms) or not is_complete_over(ms, theory.atoms):
        return False
    if not satisfies(ms, theory.clauses):
        return False
    opened, open_atoms = open_view(theory)
    return w_fix(opened, restrict_literals(ms, open_atoms)) == ms


def is_smasp_model(theory: SmaspTheory, m: Iterable[Literal]) -> bool:
    ms = frozenset(m)
    if not is_consistent_literals(ms) or not is_complete_over(ms, theory.atoms):
        return False
    if not satisfies(ms, theory.clauses):
        return False
    return is_input_answer_set(theory.program, positive_part(ms))


def enumerate_assignments(atoms: Iterable[Atom]) -> Iterator[frozenset[Literal]]:
    """All complete consistent literal sets over ``atoms``, positive
    polarity first per atom."""
    atoms = sorted_atoms(atoms)
    for signs in itertools.product((True, False), repeat=len(atoms)):
        yield frozenset(Literal(a, s) for a, s in zip(atoms, signs))


def enumerate_models(clauses: Iterable[Clause], atoms: Iterable[Atom],
                     cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[frozenset[Literal], ...]:
    clauses = tuple(clauses)
    atoms = _check_cap(atoms, cap)
    return tuple(m for m in enumerate_assignments(atoms) if satisfies(m, clauses))


def enumerate_smasp_models(theory: SmaspTheory,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[frozenset[Literal], ...]:
    atoms = _check_cap(theory.atoms, cap)
    return tuple(m for m in enumerate_assignments(atoms) if is_smasp_model(theory, m))


def enumerate_pcid_models(theory: PcidTheory,
                          cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[frozenset[Literal], ...]:
    atoms = _check_cap(theory.atoms, cap)
    return tuple(m for m in enumerate_assignments(atoms) if is_pcid_model(theory, m))


def entails(theory: SmaspTheory, goal: Union[Clause, Iterable[Clause]],
            cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """True iff every model of the theory satisfies ``goal`` (a clause
    or a conjunction of clauses)."""
    goal_clauses = (goal,) if isinstance(goal, Clause) else tuple(goal)
    theory_atoms = frozenset(theory.atoms)
    for c in goal_clauses:
        if not set(c.atoms) <= theory_atoms:
            raise ValueError(f"goal clause {c!r} mentions atoms outside the theory")
    atoms = _check_cap(theory.atoms, cap)
    for m in enumerate_assignments(atoms):
        if is_smasp_model(theory, m) and not satisfies(m, goal_clauses):
            return False
    return True


def is_total_on(theory: PcidTheory, m: Iterable[Literal]) -> bool:
    """The well-founded evaluation started from ``m``'s open part
    assigns every atom of the theory."""
    opened, open_atoms = open_view(theory)
    fix = w_fix(opened, restrict_literals(frozenset(m), open_atoms))
    return frozenset(theory.atoms) <= atoms_of_literals(fix)


def is_total(theory: PcidTheory, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Total on every model of the clause part."""
    atoms = _check_cap(theory.atoms, cap)
    for m in enumerate_assignments(atoms):
        if satisfies(m, theory.clauses) and not is_total_on(theory, m):
            return False
    return True


def simplify_by(pi: Program, n: Iterable[Literal]) -> Program:
    """Partially evaluate ``pi`` under the literals ``n``: drop rules
    with a contradicted body part, erase satisfied body parts.

    A constraint whose body is entirely satisfied by ``n`` is kept
    verbatim (its empty remainder is not representable); it marks an
    unconditional violation.
    """
    ns = frozenset(n)
    if not is_consistent_literals(ns):
        raise ValueError("simplification requires a consistent literal set")
    kept = []
    for r in pi:
        body = r.body.s_literals  # program literals, via their s() reading
        if any(l.complement() in ns for l in body):
            continue
        pos = tuple(a for a in r.pos if Literal(a) not in ns)
        neg = tuple(a for a in r.neg if Literal(a, positive=False) not in ns)
        negneg = tuple(a for a in r.negneg if Literal(a) not in ns)
        if r.head is None and not (pos or neg or negneg):
            kept.append(r)
        else:
            kept.append(Rule(r.head, pos=pos, neg=neg, negneg=negneg))
    return Program(tuple(kept))


def choice_rules(atoms: Iterable[Atom]) -> tuple[Rule, ...]:
    """Self-supporting rules that exempt ``atoms`` from foundedness."""
    return tuple(Rule(a, negneg=(a,)) for a in sorted_atoms(atoms))
