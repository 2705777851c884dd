"""Core value types: atoms, literals, trails, clauses, rules, programs,
and the two theory pairings.

Everything is an immutable value; derived views are cached per instance.
All orderings are total so that candidate enumeration is reproducible
across runs (the trace-identity tests depend on it).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

__version__ = "0.1.0"

ORIGIN_USER = "user"
ORIGIN_FRESH = "fresh-body"

# Fresh body-alias atoms sort before user atoms; the unit-propagation
# order on alias-extended completions depends on this.
_ORIGIN_RANK = {ORIGIN_FRESH: 0, ORIGIN_USER: 1}


class CapExceeded(Exception):
    """An enumeration or output budget would be exceeded."""


@dataclass(frozen=True)
class Atom:
    """A propositional atom.

    ``origin`` separates user atoms from the fresh body aliases
    introduced by the linear completion; alias names never collide with
    parseable user tokens.
    """

    name: str
    origin: str = ORIGIN_USER

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("atom name must be a non-empty token")
        if self.origin not in _ORIGIN_RANK:
            raise ValueError(f"unknown atom origin: {self.origin!r}")

    @property
    def key(self) -> tuple[int, str]:
        return (_ORIGIN_RANK[self.origin], self.name)

    def __lt__(self, other: "Atom") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        if self.origin == ORIGIN_USER:
            return f"Atom({self.name!r})"
        return f"Atom({self.name!r}, fresh)"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    @property
    def key(self) -> tuple[int, str, int]:
        return (*self.atom.key, 0 if self.positive else 1)

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __lt__(self, other: "Literal") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return self.atom.name if self.positive else f"-{self.atom.name}"


def complement(literal: Literal) -> Literal:
    """Dual of a literal; an involution."""
    return literal.complement()


def duals(literals: Iterable[Literal]) -> frozenset[Literal]:
    return frozenset(l.complement() for l in literals)


def sorted_literals(literals: Iterable[Literal]) -> tuple[Literal, ...]:
    return tuple(sorted(set(literals), key=lambda l: l.key))


def sorted_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    return tuple(sorted(set(atoms), key=lambda a: a.key))


@dataclass(frozen=True)
class Clause:
    """A non-empty disjunction of literals, kept in canonical order."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        lits = sorted_literals(self.literals)
        if not lits:
            raise ValueError("a clause is a non-empty disjunction")
        object.__setattr__(self, "literals", lits)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __contains__(self, literal: Literal) -> bool:
        return literal in self.literals

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return sorted_atoms(l.atom for l in self.literals)

    @property
    def key(self) -> tuple:
        return tuple(l.key for l in self.literals)

    def __lt__(self, other: "Clause") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return "Clause(" + " | ".join(map(repr, self.literals)) + ")"


def clause(*literals: Literal) -> Clause:
    return Clause(tuple(literals))


def sorted_clauses(clauses: Iterable[Clause]) -> tuple[Clause, ...]:
    return tuple(sorted(set(clauses), key=lambda c: c.key))


@dataclass(frozen=True)
class Body:
    """A rule body split into its plain, negated, and doubly negated parts."""

    pos: tuple[Atom, ...] = ()
    neg: tuple[Atom, ...] = ()
    negneg: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", sorted_atoms(self.pos))
        object.__setattr__(self, "neg", sorted_atoms(self.neg))
        object.__setattr__(self, "negneg", sorted_atoms(self.negneg))

    def __len__(self) -> int:
        return len(self.pos) + len(self.neg) + len(self.negneg)

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    @cached_property
    def s_literals(self) -> tuple[Literal, ...]:
        """The body read as literals: atoms and doubly negated atoms map
        to positive literals, negated atoms to negative ones."""
        lits = [Literal(a) for a in self.pos]
        lits += [Literal(a, positive=False) for a in self.neg]
        lits += [Literal(a) for a in self.negneg]
        return sorted_literals(lits)

    @property
    def pos_set(self) -> frozenset[Atom]:
        return frozenset(self.pos)

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return sorted_atoms(self.pos + self.neg + self.negneg)

    @property
    def key(self) -> tuple:
        return (
            tuple(a.key for a in self.pos),
            tuple(a.key for a in self.neg),
            tuple(a.key for a in self.negneg),
        )


@dataclass(frozen=True)
class Rule:
    """A program rule; ``head`` is absent for constraints, which must
    have a non-empty body."""

    head: Optional[Atom]
    pos: tuple[Atom, ...] = ()
    neg: tuple[Atom, ...] = ()
    negneg: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", sorted_atoms(self.pos))
        object.__setattr__(self, "neg", sorted_atoms(self.neg))
        object.__setattr__(self, "negneg", sorted_atoms(self.negneg))
        if self.head is None and self.is_fact:
            raise ValueError("a constraint must have a non-empty body")

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return not (self.pos or self.neg or self.negneg)

    @cached_property
    def body(self) -> Body:
        return Body(self.pos, self.neg, self.negneg)

    @property
    def atoms(self) -> tuple[Atom, ...]:
        head = (self.head,) if self.head is not None else ()
        return sorted_atoms(head + self.pos + self.neg + self.negneg)


def body_literals(rule: Rule) -> tuple[Literal, ...]:
    """Literal reading of a rule body, in canonical order."""
    return rule.body.s_literals


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    @cached_property
    def atoms(self) -> tuple[Atom, ...]:
        seen: list[Atom] = []
        for r in self.rules:
            seen.extend(r.atoms)
        return sorted_atoms(seen)

    @cached_property
    def heads(self) -> frozenset[Atom]:
        return frozenset(r.head for r in self.rules if r.head is not None)

    def bodies(self, atom: Atom) -> tuple[Body, ...]:
        """Distinct bodies of the rules with head ``atom``, in rule order."""
        out: list[Body] = []
        for r in self.rules:
            if r.head == atom and r.body not in out:
                out.append(r.body)
        return tuple(out)

    @property
    def is_weakly_normal(self) -> bool:
        return all(r.head is not None for r in self.rules)

    @property
    def is_normal(self) -> bool:
        return self.is_weakly_normal and all(not r.negneg for r in self.rules)

    def is_fact_atom(self, atom: Atom) -> bool:
        """True when some rule for ``atom`` has an empty body."""
        return any(b.is_empty for b in self.bodies(atom))

    def extend(self, rules: Iterable[Rule]) -> "Program":
        return Program(self.rules + tuple(rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


@dataclass(frozen=True)
class TrailEntry:
    literal: Literal
    is_decision: bool = False
    reason: Optional[Clause] = None


@dataclass(frozen=True)
class Trail:
    """An ordered, duplicate-free record of literals, some marked as
    decisions; propagated entries carry their reason clause."""

    entries: tuple[TrailEntry, ...] = ()

    def __post_init__(self) -> None:
        seen: set[Literal] = set()
        for e in self.entries:
            if e.literal in seen:
                raise ValueError(f"literal {e.literal!r} occurs twice in trail")
            seen.add(e.literal)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TrailEntry]:
        return iter(self.entries)

    def __contains__(self, literal: Literal) -> bool:
        return literal in self.literal_set

    @cached_property
    def literal_set(self) -> frozenset[Literal]:
        return frozenset(e.literal for e in self.entries)

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(e.literal for e in self.entries)

    def is_unassigned(self, literal: Literal) -> bool:
        return literal not in self.literal_set and literal.complement() not in self.literal_set

    def assigns(self, atom: Atom) -> bool:
        return not self.is_unassigned(Literal(atom))

    def is_complete_over(self, atoms: Iterable[Atom]) -> bool:
        return all(self.assigns(a) for a in atoms)

    @cached_property
    def first_conflict_index(self) -> Optional[int]:
        """Index of the first entry whose dual occurs earlier, if any."""
        seen: set[Literal] = set()
        for i, e in enumerate(self.entries):
            if e.literal.complement() in seen:
                return i
            seen.add(e.literal)
        return None

    @property
    def is_consistent(self) -> bool:
        return self.first_conflict_index is None

    def consistent_prefix(self) -> "Trail":
        """Longest prefix in which no atom occurs in both polarities."""
        i = self.first_conflict_index
        return self if i is None else Trail(self.entries[:i])

    @cached_property
    def decision_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e.is_decision)

    @cached_property
    def levels(self) -> tuple[int, ...]:
        """Decision level of each entry; entries before the first
        decision are level 0, a decision opens the next level."""
        out = []
        level = 0
        for e in self.entries:
            if e.is_decision:
                level += 1
            out.append(level)
        return tuple(out)

    def decision_level(self, literal: Literal) -> int:
        for i, e in enumerate(self.entries):
            if e.literal == literal:
                return self.levels[i]
        raise ValueError(f"literal {literal!r} does not occur in trail")

    def append(self, literal: Literal, decision: bool = False,
               reason: Optional[Clause] = None) -> "Trail":
        return Trail(self.entries + (TrailEntry(literal, decision, reason),))

    def truncate(self, length: int) -> "Trail":
        return Trail(self.entries[:length])

    @property
    def positive_atoms(self) -> frozenset[Atom]:
        return frozenset(e.literal.atom for e in self.entries if e.literal.positive)

    def restricted_to(self, atoms: Iterable[Atom]) -> frozenset[Literal]:
        keep = set(atoms)
        return frozenset(l for l in self.literal_set if l.atom in keep)

    def __repr__(self) -> str:
        toks = [repr(e.literal) + ("^" if e.is_decision else "") for e in self.entries]
        return "Trail(" + " ".join(toks) + ")"


def trail_state(trail: Trail) -> str:
    return "consistent" if trail.is_consistent else "inconsistent"


# Set-view helpers used by the oracles and validators; literal sets are
# plain frozensets throughout.

def positive_part(literals: Iterable[Literal]) -> frozenset[Atom]:
    return frozenset(l.atom for l in literals if l.positive)


def restrict_literals(literals: Iterable[Literal], atoms: Iterable[Atom]) -> frozenset[Literal]:
    keep = set(atoms)
    return frozenset(l for l in literals if l.atom in keep)


def atoms_of_literals(literals: Iterable[Literal]) -> frozenset[Atom]:
    return frozenset(l.atom for l in literals)


def is_consistent_literals(literals: Iterable[Literal]) -> bool:
    ls = set(literals)
    return not any(l.complement() in ls for l in ls)


def is_complete_over(literals: Iterable[Literal], atoms: Iterable[Atom]) -> bool:
    """Complete over ``atoms``: every atom occurs and no others do."""
    present = atoms_of_literals(literals)
    return present == frozenset(atoms)


def satisfies(literals: Iterable[Literal], clauses: Iterable[Clause]) -> bool:
    ls = set(literals)
    return all(any(l in ls for l in c) for c in clauses)


def atoms_of_clauses(clauses: Iterable[Clause]) -> tuple[Atom, ...]:
    out: list[Atom] = []
    for c in clauses:
        out.extend(c.atoms)
    return sorted_atoms(out)


@dataclass(frozen=True)
class SmaspTheory:
    """A clause set paired with a program; models are models of the
    clauses whose positive part is an input answer set of the program."""

    clauses: tuple[Clause, ...]
    program: Program = Program()

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", sorted_clauses(self.clauses))

    @cached_property
    def atoms(self) -> tuple[Atom, ...]:
        return sorted_atoms(atoms_of_clauses(self.clauses) + self.program.atoms)


@dataclass(frozen=True)
class PcidTheory:
    """A clause set paired with a weakly normal program evaluated under
    the well-founded semantics."""

    clauses: tuple[Clause, ...]
    program: Program = Program()

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", sorted_clauses(self.clauses))
        if not self.program.is_weakly_normal:
            raise ValueError("program of a PC(ID) theory must be weakly normal")

    @cached_property
    def atoms(self) -> tuple[Atom, ...]:
        return sorted_atoms(atoms_of_clauses(self.clauses) + self.program.atoms)
