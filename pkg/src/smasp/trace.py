"""Trace records: serialization to JSON lines, and replay validation
of a trace against a theory (a trace is valid when each step is an
edge of the transition graph and every trail digest matches).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional, TextIO, Union

from . import engine, oracles
from .model import Clause, SmaspTheory, __version__, satisfies
from .parsing import ParseError, format_clause, format_literal, format_program, parse_literal_token


ENTAILMENT_CHECK_ATOM_LIMIT = 14


@dataclass(frozen=True)
class TraceHeader:
    mode: str
    theory_digest: str
    version: str = __version__


@dataclass(frozen=True)
class Trace:
    header: TraceHeader
    steps: tuple[engine.TraceStep, ...]


@dataclass(frozen=True)
class Validation:
    ok: bool
    step_index: Optional[int] = None
    reason: Optional[str] = None


def theory_digest(theory: SmaspTheory) -> str:
    text = "\n".join(format_clause(c) for c in theory.clauses)
    text += "\n#\n" + format_program(theory.program)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def trace_from_outcome(outcome: engine.Outcome, mode: str, theory: SmaspTheory) -> Trace:
    return Trace(TraceHeader(mode, theory_digest(theory)), outcome.steps)


def _step_to_json(step: engine.TraceStep) -> dict:
    record: dict = {"index": step.index, "rule": step.rule}
    if step.literal is not None:
        record["literal"] = format_literal(step.literal)
    if step.clause is not None:
        record["clause"] = [format_literal(l) for l in step.clause]
    if step.witness is not None:
        record["witness"] = [a.name for a in step.witness]
    if step.prefix_length is not None:
        record["prefix_length"] = step.prefix_length
    record["trail"] = step.trail_digest
    return record


def dump_trace(trace: Trace) -> str:
    lines = [json.dumps({
        "mode": trace.header.mode,
        "theory": trace.header.theory_digest,
        "version": trace.header.version,
    })]
    lines.extend(json.dumps(_step_to_json(s)) for s in trace.steps)
    return "\n".join(lines) + "\n"


def write_trace(path: str, trace: Trace) -> None:
    with open(path, "w") as handle:
        handle.write(dump_trace(trace))


def _step_from_json(record: dict) -> engine.TraceStep:
    rule = record.get("rule")
    if rule not in engine.ALL_RULES:
        raise ParseError(f"unknown trace rule: {rule!r}")
    literal = parse_literal_token(record["literal"]) if "literal" in record else None
    clause = None
    if "clause" in record:
        clause = Clause(tuple(parse_literal_token(t) for t in record["clause"]))
    witness = None
    if "witness" in record:
        witness = tuple(parse_literal_token(t).atom for t in record["witness"])
    return engine.TraceStep(
        index=int(record["index"]), rule=rule, literal=literal, clause=clause,
        witness=witness, prefix_length=record.get("prefix_length"),
        trail_digest=record.get("trail", ""))


def load_trace(source: Union[str, TextIO]) -> Trace:
    text = source if isinstance(source, str) else source.read()
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        raise ParseError("empty trace file")
    try:
        header = json.loads(lines[0])
        steps = tuple(_step_from_json(json.loads(l)) for l in lines[1:])
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise ParseError(f"malformed trace: {exc}") from None
    return Trace(TraceHeader(header.get("mode", ""), header.get("theory", ""),
                             header.get("version", __version__)), steps)


def _transition_of(step: engine.TraceStep) -> engine.Transition:
    return engine.Transition(rule=step.rule, literal=step.literal, clause=step.clause,
                             witness=step.witness, prefix_length=step.prefix_length)


def _strict_violation(state: engine.AugmentedState, theory: SmaspTheory,
                      strategy: engine.Strategy, rule: str) -> Optional[str]:
    """Under strict checking the step's rule must sit in the first
    priority group that has any applicable rule."""
    if rule == engine.RULE_LEARN:
        return None  # the learning policy, not a priority slot
    allowed = {r for group in strategy.priority for r in group}
    if rule not in allowed:
        return f"rule {rule} is not part of mode {strategy.mode!r}"
    for group in strategy.priority:
        applicable = [r for r in group if _rule_applicable(state, theory, r)]
        if applicable:
            if rule not in group:
                return f"higher-priority rule {applicable[0]} was applicable"
            return None
    return f"no rule of mode {strategy.mode!r} is applicable"


def _rule_applicable(state: engine.AugmentedState, theory: SmaspTheory, rule: str) -> bool:
    if rule == engine.RULE_FAIL:
        return engine.applicable_fail(state, theory)
    if rule == engine.RULE_BACKTRACK:
        return engine.applicable_backtrack(state, theory) is not None
    if rule == engine.RULE_BACKJUMP:
        return (not state.failed and not state.trail.is_consistent
                and bool(state.trail.decision_indices))
    if rule == engine.RULE_UNIT_PROPAGATE:
        return bool(engine.applicable_unit_propagate(state, theory))
    if rule == engine.RULE_UNIT_PROPAGATE_LEARN:
        return bool(engine.applicable_unit_propagate(state, theory, include_learned=True))
    if rule == engine.RULE_DECIDE:
        return bool(engine.applicable_decide(state, theory))
    if rule == engine.RULE_UNFOUNDED:
        return bool(engine.applicable_unfounded(state, theory))
    return False


def validate_trace(trace: Trace, theory: SmaspTheory,
                   strategy: Union[engine.Strategy, str, None] = None,
                   strict_strategy: bool = False) -> Validation:
    """Replay a trace from the empty state. Each step must be an edge
    of its rule (payload included) and reproduce the recorded trail
    digest; entailment side conditions are oracle-checked at desk
    scale. Strategy priorities are only enforced under
    ``strict_strategy``.
    """
    if isinstance(strategy, str):
        strategy = engine.for_mode(strategy)
    if trace.header.theory_digest and trace.header.theory_digest != theory_digest(theory):
        return Validation(False, 0, "trace header does not match the theory digest")
    if strict_strategy and strategy is None:
        raise ValueError("strict validation needs a strategy")

    theory_models = None  # enumerated once, on the first semantic check

    def entailed(clause: Clause) -> bool:
        nonlocal theory_models
        if theory_models is None:
            theory_models = oracles.enumerate_smasp_models(
                theory, cap=ENTAILMENT_CHECK_ATOM_LIMIT)
        return all(satisfies(m, (clause,)) for m in theory_models)

    check_entailment = len(theory.atoms) <= ENTAILMENT_CHECK_ATOM_LIMIT
    state = engine.AugmentedState()
    for position, step in enumerate(trace.steps, start=1):
        if step.index != position:
            return Validation(False, position, f"step index {step.index} out of order")
        if strict_strategy and strategy is not None:
            violation = _strict_violation(state, theory, strategy, step.rule)
            if violation:
                return Validation(False, position, violation)
        if check_entailment and step.rule == engine.RULE_BACKJUMP and step.clause is not None:
            kept = state.trail.entries[:step.prefix_length or 0]
            side = Clause((step.literal,) + tuple(e.literal.complement() for e in kept)) \
                if step.literal is not None else step.clause
            if not entailed(side):
                return Validation(False, position, "backjump literal is not entailed over the kept prefix")
        if check_entailment and step.rule == engine.RULE_LEARN and step.clause is not None:
            if not entailed(step.clause):
                return Validation(False, position, "learned clause is not entailed")
        try:
            state = engine.step(state, _transition_of(step), theory)
        except ValueError as exc:
            return Validation(False, position, str(exc))
        if step.trail_digest and engine.digest_trail(state.trail) != step.trail_digest:
            return Validation(False, position, "trail digest mismatch after step")
    return Validation(True)
