"""Construction shortcuts shared by the test modules."""

from smasp.model import Atom, Clause, Literal, Program, Rule, Trail, TrailEntry


def atom(name):
    return Atom(name)


def atoms(names):
    return tuple(Atom(n) for n in names.split())


def lit(token):
    if token.startswith("-"):
        return Literal(Atom(token[1:]), positive=False)
    return Literal(Atom(token))


def lits(tokens):
    return frozenset(lit(t) for t in tokens.split())


def cl(*tokens):
    return Clause(tuple(lit(t) for t in tokens))


def rule(head, pos="", neg="", negneg=""):
    return Rule(Atom(head) if head else None, atoms(pos), atoms(neg), atoms(negneg))


def prog(*rules):
    return Program(tuple(rules))


def trail(spec, reasons=None):
    """Build a trail from tokens like "a* b -c"; '*' marks a decision.

    ``reasons`` maps a token (without '*') to the reason clause of the
    corresponding entry.
    """
    reasons = reasons or {}
    entries = []
    for token in spec.split():
        decision = token.endswith("*")
        if decision:
            token = token[:-1]
        entries.append(TrailEntry(lit(token), decision, reasons.get(token)))
    return Trail(tuple(entries))


# the running example: a :- b, not c.  b.
PI0 = prog(rule("a", pos="b", neg="c"), rule("b"))
# a :- a.
PI2 = prog(rule("a", pos="a"))
# a :- b.  b :- a.
PI3 = prog(rule("a", pos="b"), rule("b", pos="a"))
# a :- not not a.
PI4 = prog(rule("a", negneg="a"))

F0 = (cl("b", "-c"),)
F1 = (cl("x1", "x2"), cl("-x1", "x3"))  # renamed copy of {a|b, -a|c}
