"""Exact reachability for two automata joined by one channel, via a one-counter system.

The writer ``A`` and the reader ``B`` run de-synchronised: ``B`` may run ahead
in time and the lead ``B - A`` is stored as a counter. Values up to ``K`` live
in the control state; beyond ``K`` every extra unit is a ``1`` on the stack
above ``⊥``. ``A`` stays frozen while its last message is pending, so the age
of that message is always the current lead.

Rule families:

* pops: 1(a) A-tick popping a ``1``; 1(b) A-tick popping ``⊥`` (lead ``K`` to
  ``K-1``); 1(c)/1(d) the ``⊥``/``1`` checks before a read at age ``K`` / ``> K``.
* pushes: 2(a)-(c) restore the checked symbol; 2(d) B-tick beyond ``K``.
* internal: 3(a) nop; 3(b)/3(c) B-tick / A-tick inside ``[0, K]``; 3(d) write;
  3(e) read at age below ``K``; 3(f)/3(g) read after the age-``K`` / ``>K`` check.

Stacks are written top-first. A hidden ``$`` sits under ``⊥`` so that ``⊥`` can
be popped and pushed back on a non-empty stack.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import LiftError, ReplayError, TopologyError
from .metrics import SearchStats, log_search_stats
from .model import Classification, analyze_topology
from .pushdown import Rule, pre_star
from .regions import (
    RegionState,
    check_bound,
    discrete_successors,
    initial_region_states,
    tick_state,
)
from .semantics import (
    Configuration,
    Discrete,
    Elapse,
    Step,
    Target,
    TraceStep,
    initial_configuration,
    replay,
)
from .types import Network, Nop, Read, Write

logger = logging.getLogger(__name__)

ONE = "1"
BOTTOM = "⊥"
HIDDEN_BOTTOM = "$"
STACK_ALPHABET = (ONE, BOTTOM, HIDDEN_BOTTOM)
INITIAL_STACK = (BOTTOM, HIDDEN_BOTTOM)

A_MARKS = ("", "bot")
B_MARKS = ("", "bot", "bot'", "one", "one'")
_MARK_SUFFIX = {"": "", "bot": "_bot", "bot'": "'_bot", "one": "_1", "one'": "'_1"}


@dataclass(frozen=True)
class OcaState:
    a: RegionState
    b: RegionState
    pending: str | None = None
    counter: int = 0
    a_mark: str = ""
    b_mark: str = ""

    @property
    def decorated(self) -> bool:
        return bool(self.a_mark or self.b_mark)

    def label(self) -> str:
        a = _decorate(self.a, self.a_mark)
        b = _decorate(self.b, self.b_mark)
        return f"{a}|{b},{self.pending or 'eps'}|{self.counter}"

    def __str__(self) -> str:
        return self.label()


def _decorate(state: RegionState, mark: str) -> str:
    return str(RegionState(state.location + _MARK_SUFFIX[mark], state.values))


@dataclass(frozen=True)
class SimMove:
    """The CTA move an OCA transition simulates; ``transition=None`` is a tick."""

    automaton: str
    transition: int | None


@dataclass(frozen=True)
class OcaTransition:
    source: OcaState
    kind: str  # "int", "push" or "pop"
    symbol: str | None
    target: OcaState
    rule: str
    move: SimMove | None = None

    def apply(self, stack: Sequence[str]) -> tuple[str, ...]:
        stack = tuple(stack)
        if self.kind == "push":
            return (self.symbol,) + stack
        if self.kind == "pop":
            if not stack or stack[0] != self.symbol:
                raise ValueError(f"Rule {self.rule} needs {self.symbol!r} on top of the stack.")
            return stack[1:]
        return stack


@dataclass(frozen=True)
class OneCounterSystem:
    network: Network
    writer: str
    reader: str
    bound: int
    states: tuple[OcaState, ...]
    initial: tuple[OcaState, ...]
    transitions: tuple[OcaTransition, ...]

    @cached_property
    def outgoing(self) -> dict[OcaState, tuple[OcaTransition, ...]]:
        table: dict[OcaState, list[OcaTransition]] = {s: [] for s in self.states}
        for transition in self.transitions:
            table[transition.source].append(transition)
        return {s: tuple(edges) for s, edges in table.items()}

    def rules_used(self) -> set[str]:
        return {t.rule for t in self.transitions}

    def fire(
        self,
        state: OcaState,
        stack: Sequence[str],
        rule: str,
        transition: int | None = None,
    ) -> tuple[OcaState, tuple[str, ...]]:
        """Take the ``rule`` transition from ``(state, stack)``.

        ``transition`` selects among simulated discrete edges when several apply.
        """
        for candidate in self.outgoing.get(state, ()):
            if candidate.rule != rule:
                continue
            if transition is not None and (
                candidate.move is None or candidate.move.transition != transition
            ):
                continue
            try:
                return candidate.target, candidate.apply(stack)
            except ValueError:
                continue
        raise ValueError(f"No {rule} transition from {state.label()} with stack {''.join(stack)}.")


def _require_two_chain(net: Network) -> tuple[int, int]:
    report = analyze_topology(net)
    if report.classification is not Classification.TWO_CHAIN_NO_GLOBALS:
        raise TopologyError(
            "The one-counter reduction needs two automata joined by one channel"
            " and no global clocks."
        )
    channel = net.channels[0]
    return net.automaton_index[channel.source], net.automaton_index[channel.sink]


def build_oca(net: Network, bound: int | None = None) -> OneCounterSystem:
    """Build the one-counter system of a two-automata, one-channel network.

    Control states are explored from the initial ones ignoring stack contents.
    """
    writer_index, reader_index = _require_two_chain(net)
    writer = net.automata[writer_index]
    reader = net.automata[reader_index]
    k = net.max_constant if bound is None else bound
    check_bound(writer, k)
    check_bound(reader, k)
    a_id, b_id = writer.id, reader.id

    def successors(s: OcaState) -> list[OcaTransition]:
        out: list[OcaTransition] = []

        def add(kind: str, symbol: str | None, target: OcaState, rule: str,
                move: SimMove | None = None) -> None:
            out.append(OcaTransition(s, kind, symbol, target, rule, move))

        if s.a_mark == "bot":
            add("push", BOTTOM, _with(s, a_mark=""), "2(a)")
            return out
        if s.b_mark == "bot":
            add("push", BOTTOM, _with(s, b_mark="bot'"), "2(b)")
            return out
        if s.b_mark == "one":
            add("push", ONE, _with(s, b_mark="one'"), "2(c)")
            return out
        if s.b_mark in ("bot'", "one'"):
            rule = "3(f)" if s.b_mark == "bot'" else "3(g)"
            for index, edge, target in discrete_successors(reader, s.b):
                if _reads(edge.op, s.pending) and (
                    edge.op.age.contains(k) if s.b_mark == "bot'" else edge.op.age.unbounded
                ):
                    add("int", None, _with(s, b=target, b_mark="", pending=None), rule,
                        SimMove(b_id, index))
            return out

        if s.pending is None:
            ticked = tick_state(s.a, k)
            if 0 < s.counter < k:
                add("int", None, _with(s, a=ticked, counter=s.counter - 1), "3(c)",
                    SimMove(a_id, None))
            if s.counter == k:
                add("pop", ONE, _with(s, a=ticked), "1(a)", SimMove(a_id, None))
                if k >= 1:
                    add("pop", BOTTOM, _with(s, a=ticked, a_mark="bot", counter=k - 1), "1(b)",
                        SimMove(a_id, None))
            for index, edge, target in discrete_successors(writer, s.a):
                if isinstance(edge.op, Nop):
                    add("int", None, _with(s, a=target), "3(a)", SimMove(a_id, index))
                elif isinstance(edge.op, Write):
                    add("int", None, _with(s, a=target, pending=edge.op.message), "3(d)",
                        SimMove(a_id, index))

        ticked_b = tick_state(s.b, k)
        if s.counter < k:
            add("int", None, _with(s, b=ticked_b, counter=s.counter + 1), "3(b)",
                SimMove(b_id, None))
        else:
            add("push", ONE, _with(s, b=ticked_b), "2(d)", SimMove(b_id, None))

        check_bottom = check_one = False
        for index, edge, target in discrete_successors(reader, s.b):
            if isinstance(edge.op, Nop):
                add("int", None, _with(s, b=target), "3(a)", SimMove(b_id, index))
            elif _reads(edge.op, s.pending):
                if s.counter < k:
                    if edge.op.age.contains(s.counter):
                        add("int", None, _with(s, b=target, pending=None), "3(e)",
                            SimMove(b_id, index))
                else:
                    check_bottom |= edge.op.age.contains(k)
                    check_one |= edge.op.age.unbounded
        if check_bottom:
            add("pop", BOTTOM, _with(s, b_mark="bot"), "1(c)")
        if check_one:
            add("pop", ONE, _with(s, b_mark="one"), "1(d)")
        return out

    initial = tuple(
        OcaState(a, b)
        for a in initial_region_states(writer)
        for b in initial_region_states(reader)
    )
    seen: dict[OcaState, None] = dict.fromkeys(initial)
    queue = deque(seen)
    transitions: list[OcaTransition] = []
    while queue:
        state = queue.popleft()
        for transition in successors(state):
            transitions.append(transition)
            if transition.target not in seen:
                seen[transition.target] = None
                queue.append(transition.target)
    logger.info(
        "one-counter system: K=%d states=%d transitions=%d", k, len(seen), len(transitions)
    )
    return OneCounterSystem(net, a_id, b_id, k, tuple(seen), initial, tuple(transitions))


def _with(state: OcaState, **changes) -> OcaState:
    values = {
        "a": state.a,
        "b": state.b,
        "pending": state.pending,
        "counter": state.counter,
        "a_mark": state.a_mark,
        "b_mark": state.b_mark,
    }
    values.update(changes)
    return OcaState(**values)


def _reads(op, pending: str | None) -> bool:
    return isinstance(op, Read) and pending is not None and op.message == pending


@dataclass
class OcaReachable:
    start: OcaState
    witness: list[OcaTransition]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def final(self) -> OcaState:
        return self.witness[-1].target if self.witness else self.start


@dataclass
class OcaUnreachable:
    stats: SearchStats = field(default_factory=SearchStats)


OcaResult = Union[OcaReachable, OcaUnreachable]


def _to_rules(ocs: OneCounterSystem) -> list[Rule]:
    rules: list[Rule] = []
    for t in ocs.transitions:
        if t.kind == "pop":
            rules.append(Rule(t.source, t.symbol, t.target, (), t))
        elif t.kind == "push":
            rules.extend(Rule(t.source, g, t.target, (t.symbol, g), t) for g in STACK_ALPHABET)
        else:
            rules.extend(Rule(t.source, g, t.target, (g,), t) for g in STACK_ALPHABET)
    return rules


def pushdown_reach(
    ocs: OneCounterSystem, targets: Callable[[OcaState], bool]
) -> OcaResult:
    """Decide whether a target control state is reachable with some stack."""
    start = time.perf_counter()
    stats = SearchStats(states=len(ocs.states), transitions=len(ocs.transitions))
    goal = [s for s in ocs.states if targets(s)]
    result: OcaResult = OcaUnreachable(stats)
    for initial in ocs.initial:
        if targets(initial):
            result = OcaReachable(initial, [], stats)
            break
    else:
        if goal:
            saturation = pre_star(_to_rules(ocs), goal, STACK_ALPHABET)
            stats.transitions += saturation.size
            for initial in ocs.initial:
                rules = saturation.witness(initial, INITIAL_STACK)
                if rules is not None:
                    result = OcaReachable(initial, [rule.label for rule in rules], stats)
                    break
    stats.elapsed_ms = (time.perf_counter() - start) * 1000
    log_search_stats("oca", stats)
    return result


def run_oca(
    start: OcaState, transitions: Iterable[OcaTransition]
) -> list[tuple[OcaState, tuple[str, ...]]]:
    """Replay OCA transitions from ``(start, ⊥$)``; returns every visited configuration."""
    state, stack = start, INITIAL_STACK
    visited = [(state, stack)]
    for position, transition in enumerate(transitions):
        if transition.source != state:
            raise ReplayError(f"Rule {transition.rule} does not start at {state.label()}.", position)
        try:
            stack = transition.apply(stack)
        except ValueError as exc:
            raise ReplayError(str(exc), position) from exc
        state = transition.target
        visited.append((state, stack))
    return visited


def visible_stack(stack: Sequence[str]) -> str:
    """Stack as shown to users (top-first, without the hidden bottom)."""
    return "".join(symbol for symbol in stack if symbol != HIDDEN_BOTTOM)


def audit_witness(ocs: OneCounterSystem, start: OcaState,
                  witness: Sequence[OcaTransition]) -> list[str]:
    """Check the counter encoding along a witness.

    At undecorated states the lead ``B - A`` equals the counter plus the ones
    on the stack; at reads the consumed age matches the rule that read it.
    """
    violations: list[str] = []
    a_time = b_time = 0
    for position, (state, stack) in enumerate(run_oca(start, witness)):
        if position > 0:
            transition = witness[position - 1]
            move = transition.move
            if move is not None and move.transition is None:
                if move.automaton == ocs.writer:
                    a_time += 1
                else:
                    b_time += 1
            age = b_time - a_time
            if transition.rule == "3(e)" and age != transition.source.counter:
                violations.append(f"step {position - 1}: 3(e) read at age {age}")
            if transition.rule == "3(f)" and age != ocs.bound:
                violations.append(f"step {position - 1}: 3(f) read at age {age}")
            if transition.rule == "3(g)" and age <= ocs.bound:
                violations.append(f"step {position - 1}: 3(g) read at age {age}")
        if state.decorated:
            continue
        ones = stack.count(ONE)
        if state.counter + ones != b_time - a_time:
            violations.append(
                f"step {position}: counter {state.counter} + ones {ones} "
                f"!= lead {b_time - a_time}"
            )
        if ones and state.counter < ocs.bound:
            violations.append(f"step {position}: ones above ⊥ with counter below K")
    return violations


def lift_witness(ocs: OneCounterSystem, witness: Sequence[OcaTransition]) -> list[Step]:
    """Re-synchronise the simulated moves into a CTA step sequence.

    Every move is stamped with its automaton's local time; for each global
    time the writer's moves come first, then the reader's, then one unit of
    time elapses.
    """
    clock = {ocs.writer: 0, ocs.reader: 0}
    events: dict[str, list[tuple[int, int]]] = {ocs.writer: [], ocs.reader: []}
    for transition in witness:
        move = transition.move
        if move is None:
            continue
        if move.transition is None:
            clock[move.automaton] += 1
        else:
            events[move.automaton].append((clock[move.automaton], move.transition))
    horizon = max(clock.values())
    steps: list[Step] = []
    cursors = {ocs.writer: 0, ocs.reader: 0}
    for now in range(horizon + 1):
        for automaton in (ocs.writer, ocs.reader):
            queue = events[automaton]
            while cursors[automaton] < len(queue) and queue[cursors[automaton]][0] == now:
                steps.append(Discrete(automaton, queue[cursors[automaton]][1]))
                cursors[automaton] += 1
        if now < horizon:
            steps.append(Elapse(1))
    return steps


@dataclass
class TwoCtaVerdict:
    reachable: bool
    steps: list[Step] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)
    oca_witness: list[OcaTransition] = field(default_factory=list)
    initial: Configuration | None = None
    stats: SearchStats = field(default_factory=SearchStats)


def _target_locations(
    net: Network, target: Target | Mapping[str, str | None]
) -> dict[str, str]:
    if isinstance(target, Target):
        pairs = dict(target.locations)
    else:
        pairs = {k: v for k, v in target.items() if v is not None}
    for automaton, location in pairs.items():
        if automaton not in net.automaton_index:
            raise ValueError(f"Target names unknown automaton {automaton}.")
        if location not in net.automaton(automaton).locations:
            raise ValueError(f"Target names unknown location {location} of {automaton}.")
    return pairs


def decide_2cta_reach(
    net: Network, target: Target | Mapping[str, str | None]
) -> TwoCtaVerdict:
    """Decide location reachability with an empty channel and lift the witness.

    The lifted trace is replayed in the exact semantics; any failure there is
    a construction bug and raises LiftError.
    """
    wanted = _target_locations(net, target)
    ocs = build_oca(net)
    want_a = wanted.get(ocs.writer)
    want_b = wanted.get(ocs.reader)

    def is_target(state: OcaState) -> bool:
        return (
            not state.decorated
            and state.pending is None
            and (want_a is None or state.a.location == want_a)
            and (want_b is None or state.b.location == want_b)
        )

    result = pushdown_reach(ocs, is_target)
    if isinstance(result, OcaUnreachable):
        return TwoCtaVerdict(False, stats=result.stats)

    violations = audit_witness(ocs, result.start, result.witness)
    if violations:
        raise LiftError("Counter encoding violated: " + "; ".join(violations[:3]))
    steps = lift_witness(ocs, result.witness)
    initial = _initial_for(net, ocs, result.start)
    try:
        trace = replay(net, steps, initial)
    except ReplayError as exc:
        raise LiftError(f"Lifted witness does not replay: {exc}") from exc
    final = trace[-1].configuration if trace else initial
    if any(final.channels) or any(
        final.locations[net.automaton_index[a]] != loc for a, loc in wanted.items()
    ):
        raise LiftError("Lifted witness does not end in the target configuration.")
    return TwoCtaVerdict(True, steps, trace, result.witness, initial, result.stats)


def _initial_for(net: Network, ocs: OneCounterSystem, start: OcaState) -> Configuration:
    locations = {ocs.writer: start.a.location, ocs.reader: start.b.location}
    for cfg in initial_configuration(net):
        if all(cfg.locations[net.automaton_index[a]] == loc for a, loc in locations.items()):
            return cfg
    raise LiftError(f"No initial configuration matches {start.label()}.")
