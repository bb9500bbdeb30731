"""Bounded-context networks as bounded-phase multistack pushdown systems.

Every channel ``c`` owns two stacks. ``W:c`` receives writes (newest on top)
and ``R:c`` serves reads (oldest on top, each message tagged with its age at
transfer time). A unit of time pushes the tag ``1`` onto every stack, one
stack at a time, under an in-progress marker. Reading drains ``R:c``; once it
is empty the content of ``W:c`` is moved over in reverse, each message tagged
with the time accumulated above it. Stacks are stored bottom-first with the
bottom marker implicit; popping ``⊥`` is an emptiness test.

The search here is a budgeted explicit exploration restricted to a phase
bound: it finds witnesses but exhausting the budget proves nothing.
"""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence, Union

from .clocks import cap, capped_values, guard_holds, reset, tick
from .errors import LiftError, ReplayError
from .metrics import SearchStats, log_search_stats
from .regions import RegionState
from .semantics import (
    Configuration,
    Discrete,
    Elapse,
    Step,
    Target,
    TimedWord,
    TraceStep,
    channel_operation,
    initial_configuration,
    replay,
)
from .types import TRUE, ClockConstraint, Network, Nop, Read, Value, Write, format_value

logger = logging.getLogger(__name__)

BOTTOM = "⊥"
Symbol = Union[int, float, str, tuple]


def is_tag(symbol: Symbol) -> bool:
    return isinstance(symbol, (int, float)) and not isinstance(symbol, bool)


def format_symbol(symbol: Symbol) -> str:
    if is_tag(symbol):
        return format_value(symbol)
    if isinstance(symbol, tuple):
        return f"({symbol[0]},{format_value(symbol[1])})"
    return str(symbol)


@dataclass(frozen=True)
class MpsTransition:
    source: Hashable
    kind: str  # "int", "push" or "pop"
    stack: str | None
    symbol: Symbol | None
    target: Hashable
    action: str = "int"
    edge: tuple[int, int] | None = None
    channel: str | None = None

    def label(self) -> str:
        if self.kind == "int":
            return self.action
        verb = "push" if self.kind == "push" else "pop"
        return f"{self.action} {verb} {self.stack}:{format_symbol(self.symbol)}"


@dataclass(frozen=True)
class MpsConfig:
    control: Hashable
    stacks: tuple[tuple[Symbol, ...], ...]

    def top(self, index: int) -> Symbol:
        stack = self.stacks[index]
        return stack[-1] if stack else BOTTOM


class MultistackSystem(ABC):
    """Control states with a fixed family of named stacks."""

    stacks: tuple[str, ...] = ()

    @property
    @abstractmethod
    def initial(self) -> tuple[Hashable, ...]: ...

    @abstractmethod
    def transitions_from(
        self, control: Hashable, tops: Sequence[Symbol] | None = None
    ) -> list[MpsTransition]:
        """Transitions leaving ``control``.

        With ``tops`` (one top symbol per stack, ``BOTTOM`` for empty) only
        pops that match the current tops are produced.
        """

    @cached_property
    def stack_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.stacks)}

    def apply(self, config: MpsConfig, transition: MpsTransition) -> MpsConfig | None:
        if transition.source != config.control:
            return None
        stacks = config.stacks
        if transition.kind == "push":
            i = self.stack_index[transition.stack]
            stacks = stacks[:i] + (stacks[i] + (transition.symbol,),) + stacks[i + 1 :]
        elif transition.kind == "pop":
            i = self.stack_index[transition.stack]
            if transition.symbol == BOTTOM:
                if stacks[i]:
                    return None
            elif not stacks[i] or stacks[i][-1] != transition.symbol:
                return None
            else:
                stacks = stacks[:i] + (stacks[i][:-1],) + stacks[i + 1 :]
        return MpsConfig(transition.target, stacks)

    def initial_configs(self) -> list[MpsConfig]:
        empty = tuple(() for _ in self.stacks)
        return [MpsConfig(control, empty) for control in self.initial]

    def moves(self, config: MpsConfig) -> list[tuple[MpsTransition, MpsConfig]]:
        tops = [config.top(i) for i in range(len(self.stacks))]
        out = []
        for transition in self.transitions_from(config.control, tops):
            successor = self.apply(config, transition)
            if successor is not None:
                out.append((transition, successor))
        return out


class ExplicitMps(MultistackSystem):
    """A multistack system given by an explicit transition list."""

    def __init__(
        self,
        stacks: Iterable[str],
        initial: Iterable[Hashable],
        transitions: Iterable[MpsTransition],
    ) -> None:
        self.stacks = tuple(stacks)
        self._initial = tuple(initial)
        self.transitions = tuple(transitions)
        self._by_source: dict[Hashable, list[MpsTransition]] = {}
        for transition in self.transitions:
            self._by_source.setdefault(transition.source, []).append(transition)

    @property
    def initial(self) -> tuple[Hashable, ...]:
        return self._initial

    def transitions_from(self, control, tops=None):
        edges = self._by_source.get(control, [])
        if tops is None:
            return list(edges)
        return [
            t
            for t in edges
            if t.kind != "pop" or tops[self.stack_index[t.stack]] == t.symbol
        ]


# Translation of bounded-context networks.


@dataclass(frozen=True)
class ReadMode:
    stack: str  # "R" while draining R, "W" while transferring
    channel: str
    tag: Value = 0
    held: str | None = None


@dataclass(frozen=True)
class MpsControl:
    locations: tuple[str, ...]
    values: tuple[tuple[Value, ...], ...]
    globals: tuple[Value, ...]
    active: int
    context: int = 0
    reading: str | None = None
    mode: ReadMode | None = None
    transferred: bool = False
    suspended: frozenset[str] = frozenset()
    tick_stage: int | None = None

    @property
    def idle(self) -> bool:
        return self.mode is None and self.tick_stage is None

    def label(self, net: Network) -> str:
        parts = []
        for i, location in enumerate(self.locations):
            shown = location
            if i == self.active and self.mode is not None:
                shown = f"{location}^{self.mode.stack}:{self.mode.channel}"
                if self.mode.tag:
                    shown += f"_{format_value(self.mode.tag)}"
                if self.mode.held is not None:
                    shown += self.mode.held
            parts.append(str(RegionState(shown, self.values[i])))
        if self.globals:
            parts.append("[" + ",".join(format_value(v) for v in self.globals) + "]")
        parts.append(f"({net.automata[self.active].id},{self.context})")
        text = ",".join(parts)
        if self.tick_stage is not None:
            text += f"|tick{self.tick_stage}"
        if self.suspended:
            text += "|suspended:" + ",".join(sorted(self.suspended))
        return text


def w_stack(channel: str) -> str:
    return f"W:{channel}"


def r_stack(channel: str) -> str:
    return f"R:{channel}"


class Bmps(MultistackSystem):
    """Multistack system simulating ``net`` within ``contexts`` context switches."""

    def __init__(self, net: Network, contexts: int, bound: int | None = None) -> None:
        if contexts < 0:
            raise ValueError("Context bound must be >= 0.")
        self.network = net
        self.contexts = contexts
        self.bound = net.max_constant if bound is None else bound
        self.stacks = tuple(
            name for c in net.channels for name in (w_stack(c.id), r_stack(c.id))
        )
        self._tags: tuple[Value, ...] = tuple(capped_values(self.bound)[1:])

    @cached_property
    def initial(self) -> tuple[MpsControl, ...]:
        out = []
        for cfg in initial_configuration(self.network):
            for active in range(len(self.network.automata)):
                out.append(
                    MpsControl(cfg.locations, cfg.valuations, cfg.globals, active)
                )
        return tuple(out)

    def initial_control(self, cfg: Configuration, active: int = 0) -> MpsControl:
        values = tuple(tuple(cap(v, self.bound) for v in vals) for vals in cfg.valuations)
        globals_ = tuple(cap(v, self.bound) for v in cfg.globals)
        return MpsControl(cfg.locations, values, globals_, active)

    def _switch(self, c: MpsControl, active: int, reading: str | None) -> MpsControl | None:
        if c.active == active and (reading is None or c.reading in (None, reading)):
            return replace(c, reading=reading if reading is not None else c.reading)
        if c.context + 1 > self.contexts:
            return None
        return replace(c, active=active, context=c.context + 1, reading=reading,
                       transferred=False)

    def _guard(self, c: MpsControl, j: int, guard: ClockConstraint) -> bool:
        automaton = self.network.automata[j]
        return guard_holds(guard, automaton.clock_index, c.values[j],
                           self.network.global_index, c.globals)

    def _fire(self, c: MpsControl, j: int, index: int) -> MpsControl:
        net = self.network
        automaton = net.automata[j]
        t = automaton.transitions[index]
        locations = c.locations[:j] + (t.target,) + c.locations[j + 1 :]
        values = c.values
        globals_ = c.globals
        if t.resets:
            values = values[:j] + (reset(values[j], automaton.clock_index, t.resets),) + values[j + 1 :]
            globals_ = reset(globals_, net.global_index, t.resets)
        return replace(c, locations=locations, values=values, globals=globals_)

    def _tick(self, c: MpsControl) -> MpsControl:
        return replace(
            c,
            values=tuple(tick(v, self.bound) for v in c.values),
            globals=tick(c.globals, self.bound),
        )

    def _read_symbols(self, tops, index: int, mode: ReadMode) -> list[Symbol]:
        if tops is not None:
            return [tops[index]]
        if mode.stack == "R":
            messages = [(m, a) for m in self.network.alphabet for a in capped_values(self.bound)]
        else:
            messages = list(self.network.alphabet)
        return [BOTTOM, *self._tags, *messages]

    def transitions_from(self, control, tops=None):
        c: MpsControl = control
        net = self.network
        out: list[MpsTransition] = []

        def add(kind, stack, symbol, target, action, edge=None, channel=None):
            out.append(MpsTransition(c, kind, stack, symbol, target, action, edge, channel))

        if c.tick_stage is not None or c.mode is None:
            stage = 0 if c.tick_stage is None else c.tick_stage
            if not self.stacks:
                add("int", None, None, self._tick(c), "tick")
            else:
                last = stage == len(self.stacks) - 1
                target = self._tick(replace(c, tick_stage=None)) if last else replace(
                    c, tick_stage=stage + 1
                )
                add("push", self.stacks[stage], 1, target, "tick")
            if c.tick_stage is not None:
                return out

        if c.mode is None:
            for j, automaton in enumerate(net.automata):
                location = c.locations[j]
                readable: set[str] = set()
                for index, t in automaton.outgoing.get(location, ()):
                    if not self._guard(c, j, t.guard):
                        continue
                    op = t.op
                    if isinstance(op, Nop):
                        add("int", None, None, self._fire(c, j, index), "nop", (j, index))
                    elif isinstance(op, Write):
                        if op.channel in c.suspended:
                            continue
                        switched = self._switch(c, j, None)
                        if switched is not None:
                            add("push", w_stack(op.channel), op.message,
                                self._fire(switched, j, index), "write", (j, index), op.channel)
                    elif isinstance(op, Read):
                        readable.add(op.channel)
                for channel in sorted(readable):
                    switched = self._switch(c, j, channel)
                    if switched is None:
                        continue
                    if channel in c.suspended:
                        target = replace(switched, mode=ReadMode("W", channel),
                                         transferred=True,
                                         suspended=switched.suspended - {channel})
                    else:
                        target = replace(switched, mode=ReadMode("R", channel))
                    add("int", None, None, target, "begin-read", channel=channel)
            return out

        mode = c.mode
        channel = mode.channel
        j = c.active
        if mode.stack == "R":
            stack = r_stack(channel)
            index = self.stack_index[stack]
            for symbol in self._read_symbols(tops, index, mode):
                if symbol == BOTTOM:
                    if not c.transferred:
                        add("pop", stack, BOTTOM,
                            replace(c, mode=ReadMode("W", channel), transferred=True),
                            "transfer-start", channel=channel)
                elif is_tag(symbol):
                    tagged = ReadMode("R", channel, cap(mode.tag + symbol, self.bound))
                    add("pop", stack, symbol, replace(c, mode=tagged), "tag", channel=channel)
                elif isinstance(symbol, tuple):
                    message, age = symbol
                    age = cap(age + mode.tag, self.bound)
                    for t_index, t in net.automata[j].outgoing.get(c.locations[j], ()):
                        op = t.op
                        if (
                            isinstance(op, Read)
                            and op.channel == channel
                            and op.message == message
                            and op.age.contains(age)
                            and self._guard(c, j, t.guard)
                        ):
                            add("pop", stack, symbol, self._fire(c, j, t_index), "read",
                                (j, t_index), channel)
            settled = replace(c, mode=None)
            if mode.tag:
                add("push", stack, mode.tag, settled, "settle", channel=channel)
            else:
                add("int", None, None, settled, "settle", channel=channel)
            return out

        stack = w_stack(channel)
        if mode.held is not None:
            add("push", r_stack(channel), (mode.held, mode.tag),
                replace(c, mode=replace(mode, held=None)), "transfer", channel=channel)
            return out
        index = self.stack_index[stack]
        for symbol in self._read_symbols(tops, index, mode):
            if symbol == BOTTOM:
                add("pop", stack, BOTTOM, replace(c, mode=ReadMode("R", channel)),
                    "transfer-end", channel=channel)
            elif is_tag(symbol):
                tagged = ReadMode("W", channel, cap(mode.tag + symbol, self.bound))
                add("pop", stack, symbol, replace(c, mode=tagged), "tag", channel=channel)
            elif isinstance(symbol, str):
                add("pop", stack, symbol, replace(c, mode=replace(mode, held=symbol)),
                    "move", channel=channel)
        suspended = replace(c, mode=None, suspended=c.suspended | {channel})
        if mode.tag:
            add("push", stack, mode.tag, suspended, "suspend", channel=channel)
        else:
            add("int", None, None, suspended, "suspend", channel=channel)
        return out


def build_bmps(net: Network, contexts: int) -> Bmps:
    mps = Bmps(net, contexts)
    logger.info(
        "multistack system: %d stacks, %d initial controls, B=%d",
        len(mps.stacks), len(mps.initial), contexts,
    )
    return mps


# Channel reconstruction.


def _check_tag(symbol: Symbol, where: str) -> None:
    if is_tag(symbol):
        return
    raise ValueError(f"Malformed stack {where}: unexpected symbol {symbol!r}.")


def reconstruct_channel(mps: Bmps, config: MpsConfig, channel: str) -> TimedWord:
    """Channel content encoded by the stacks (and the control) of ``config``."""
    control: MpsControl = config.control
    k = mps.bound
    mode = control.mode if control.mode is not None and control.mode.channel == channel else None

    acc: Value = mode.tag if mode is not None and mode.stack == "W" else 0
    newer: list[tuple[str, Value]] = []
    for symbol in reversed(config.stacks[mps.stack_index[w_stack(channel)]]):
        if isinstance(symbol, str):
            newer.append((symbol, acc))
        else:
            _check_tag(symbol, w_stack(channel))
            acc = cap(acc + symbol, k)

    acc = mode.tag if mode is not None and mode.stack == "R" else 0
    older: list[tuple[str, Value]] = []
    for symbol in reversed(config.stacks[mps.stack_index[r_stack(channel)]]):
        if isinstance(symbol, tuple) and len(symbol) == 2 and isinstance(symbol[0], str):
            older.append((symbol[0], cap(symbol[1] + acc, k)))
        else:
            _check_tag(symbol, r_stack(channel))
            acc = cap(acc + symbol, k)
    older.reverse()

    mid_transfer = (mode is not None and mode.stack == "W") or channel in control.suspended
    if not mid_transfer:
        return TimedWord(tuple(newer + older))
    held = [(mode.held, mode.tag)] if mode is not None and mode.held is not None else []
    return TimedWord(tuple(older + held + newer))


# Phases and search.


@dataclass(frozen=True)
class PhaseTrace:
    transitions: tuple[MpsTransition, ...]
    phases: tuple[int, ...]

    @classmethod
    def from_transitions(cls, transitions: Iterable[MpsTransition]) -> PhaseTrace:
        transitions = tuple(transitions)
        phases: list[int] = []
        current: str | None = None
        count = 0
        for transition in transitions:
            if transition.kind == "pop" and transition.stack != current:
                current = transition.stack
                count += 1
            phases.append(count)
        return cls(transitions, tuple(phases))

    def to_dict(self) -> list[dict[str, Any]]:
        return [
            {"action": t.action, "kind": t.kind, "stack": t.stack,
             "symbol": None if t.symbol is None else format_symbol(t.symbol), "phase": p}
            for t, p in zip(self.transitions, self.phases)
        ]


def count_phases(trace: PhaseTrace | Iterable[MpsTransition]) -> int:
    if not isinstance(trace, PhaseTrace):
        trace = PhaseTrace.from_transitions(trace)
    return trace.phases[-1] if trace.phases else 0


@dataclass
class MpsReached:
    start: MpsConfig
    trace: PhaseTrace
    configs: list[MpsConfig]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def final(self) -> MpsConfig:
        return self.configs[-1] if self.configs else self.start


@dataclass
class BudgetExhausted:
    stats: SearchStats = field(default_factory=SearchStats)


MpsResult = Union[MpsReached, BudgetExhausted]


def phase_bounded_reach(
    mps: MultistackSystem,
    phase_bound: int,
    target: Callable[[MpsConfig], bool],
    *,
    max_steps: int = 200,
    max_stack_depth: int = 32,
) -> MpsResult:
    """Breadth-first search over runs with at most ``phase_bound`` phases."""
    if phase_bound < 1:
        raise ValueError("Phase bound must be >= 1.")
    start_time = time.perf_counter()
    stats = SearchStats()
    # Search nodes are (config, last popped stack, phases used).
    parents: dict[tuple, tuple[tuple, MpsTransition] | None] = {}
    frontier: deque[tuple[tuple, int]] = deque()
    for config in mps.initial_configs():
        key = (config, None, 0)
        if key in parents:
            continue
        parents[key] = None
        stats.states += 1
        if target(config):
            return _mps_done(MpsReached(config, PhaseTrace((), ()), [], stats), start_time)
        frontier.append((key, 0))

    while frontier:
        key, depth = frontier.popleft()
        if depth >= max_steps:
            stats.bound_hits += 1
            continue
        config, last, phases = key
        for transition, successor in mps.moves(config):
            stats.transitions += 1
            next_last, next_phases = last, phases
            if transition.kind == "pop" and transition.stack != last:
                next_last, next_phases = transition.stack, phases + 1
                if next_phases > phase_bound:
                    stats.bound_hits += 1
                    continue
            if any(len(stack) > max_stack_depth for stack in successor.stacks):
                stats.bound_hits += 1
                continue
            next_key = (successor, next_last, next_phases)
            if next_key in parents:
                continue
            parents[next_key] = (key, transition)
            stats.states += 1
            if target(successor):
                transitions: list[MpsTransition] = []
                configs: list[MpsConfig] = []
                cursor = next_key
                while (entry := parents[cursor]) is not None:
                    configs.append(cursor[0])
                    transitions.append(entry[1])
                    cursor = entry[0]
                transitions.reverse()
                configs.reverse()
                trace = PhaseTrace.from_transitions(transitions)
                return _mps_done(MpsReached(cursor[0], trace, configs, stats), start_time)
            frontier.append((next_key, depth + 1))
    return _mps_done(BudgetExhausted(stats), start_time)


def _mps_done(result: MpsResult, start: float) -> MpsResult:
    result.stats.elapsed_ms = (time.perf_counter() - start) * 1000
    log_search_stats("bmps", result.stats)
    return result


def control_graph(
    mps: MultistackSystem, limit: int = 10_000
) -> tuple[list[Hashable], list[MpsTransition]]:
    """Controls reachable when stack contents are ignored, with their transitions."""
    seen: dict[Hashable, None] = dict.fromkeys(mps.initial)
    queue = deque(seen)
    edges: list[MpsTransition] = []
    while queue and len(seen) <= limit:
        control = queue.popleft()
        for transition in mps.transitions_from(control):
            edges.append(transition)
            if transition.target not in seen:
                seen[transition.target] = None
                queue.append(transition.target)
    if queue:
        logger.warning("control graph truncated at %d controls", limit)
    return list(seen), edges


# Relating CTA runs and multistack runs.


def bmps_target(mps: Bmps, target: Target) -> Callable[[MpsConfig], bool]:
    net = mps.network
    wanted = [(net.automaton_index[a], loc) for a, loc in target.locations]
    words = [(c, word.capped(mps.bound)) for c, word in target.channel_words]

    def has_messages(config: MpsConfig) -> bool:
        return any(
            not is_tag(symbol) for stack in config.stacks for symbol in stack
        )

    def checked(config: MpsConfig) -> bool:
        control: MpsControl = config.control
        if not control.idle or control.suspended:
            return False
        if any(control.locations[i] != loc for i, loc in wanted):
            return False
        if target.channel_empty and has_messages(config):
            return False
        return all(reconstruct_channel(mps, config, c) == word for c, word in words)

    return checked


def project_steps(mps: Bmps, transitions: Iterable[MpsTransition]) -> list[Step]:
    """CTA steps simulated by a multistack run."""
    net = mps.network
    steps: list[Step] = []
    for transition in transitions:
        if transition.action == "tick":
            if transition.target.tick_stage is None:
                steps.append(Elapse(1))
        elif transition.edge is not None:
            j, index = transition.edge
            steps.append(Discrete(net.automata[j].id, index))
    return steps


@dataclass
class InducedRun:
    start: MpsConfig
    transitions: list[MpsTransition]
    checkpoints: list[MpsConfig]

    @property
    def trace(self) -> PhaseTrace:
        return PhaseTrace.from_transitions(self.transitions)


def induce_bmps_trace(
    mps: Bmps, steps: Sequence[Step], initial: Configuration | None = None
) -> InducedRun:
    """Map a CTA step sequence to a run of ``mps``.

    ``checkpoints[i]`` is the multistack configuration matching the CTA
    configuration after ``steps[i]``. Raises ReplayError when the run leaves
    the system, for instance by exceeding its context bound.
    """
    net = mps.network
    cfg = initial if initial is not None else initial_configuration(net)[0]
    active = 0
    for step in steps:
        operation = channel_operation(net, step)
        if operation is not None:
            active = net.automaton_index[operation[1]]
            break
    config = MpsConfig(mps.initial_control(cfg, active), tuple(() for _ in mps.stacks))
    start = config
    transitions: list[MpsTransition] = []
    checkpoints: list[MpsConfig] = []

    def take(position: int, wanted: Callable[[MpsTransition], bool], what: str) -> None:
        nonlocal config
        for transition, successor in mps.moves(config):
            if wanted(transition):
                transitions.append(transition)
                config = successor
                return
        raise ReplayError(f"No multistack move for {what}.", position)

    for position, step in enumerate(steps):
        if isinstance(step, Elapse):
            for _ in range(step.t):
                take(position, lambda t: t.action == "tick", "a time unit")
                while config.control.tick_stage is not None:
                    take(position, lambda t: t.action == "tick", "a time unit")
            checkpoints.append(config)
            continue
        j = net.automaton_index[step.automaton]
        edge = (j, step.transition)
        op = net.automata[j].transitions[step.transition].op
        if not isinstance(op, Read):
            take(position, lambda t: t.edge == edge, f"{step.automaton}#{step.transition}")
            checkpoints.append(config)
            continue
        take(
            position,
            lambda t: t.action == "begin-read" and t.channel == op.channel,
            f"reading {op.channel}",
        )
        while True:
            mode = config.control.mode
            if mode is None:
                raise ReplayError(f"Read of {op.channel} left the reading mode.", position)
            if mode.stack == "W":
                if mode.held is not None:
                    take(position, lambda t: t.action == "transfer", "a transfer")
                    continue
                top = config.top(mps.stack_index[w_stack(op.channel)])
                action = "transfer-end" if top == BOTTOM else ("tag" if is_tag(top) else "move")
                take(position, lambda t, a=action: t.action == a, f"{action} on W:{op.channel}")
                continue
            top = config.top(mps.stack_index[r_stack(op.channel)])
            if top == BOTTOM:
                take(position, lambda t: t.action == "transfer-start", f"emptying R:{op.channel}")
            elif is_tag(top):
                take(position, lambda t: t.action == "tag", f"a tag on R:{op.channel}")
            else:
                take(position, lambda t: t.edge == edge, f"{step.automaton}#{step.transition}")
                break
        take(position, lambda t: t.action == "settle", "settling the read")
        checkpoints.append(config)
    return InducedRun(start, transitions, checkpoints)


@dataclass
class BmpsVerdict:
    reached: bool
    steps: list[Step] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)
    phase_trace: PhaseTrace | None = None
    initial: Configuration | None = None
    stats: SearchStats = field(default_factory=SearchStats)


def decide_bmps_reach(
    net: Network,
    target: Target,
    *,
    contexts: int,
    phase_bound: int | None = None,
    max_steps: int = 200,
    max_stack_depth: int = 32,
) -> BmpsVerdict:
    """Phase-bounded witness search on the multistack translation of ``net``.

    A found witness is projected to CTA steps and replayed in the exact
    semantics; a replay failure raises LiftError.
    """
    mps = build_bmps(net, contexts)
    bound = 3 * (contexts + 1) if phase_bound is None else phase_bound
    result = phase_bounded_reach(
        mps, bound, bmps_target(mps, target),
        max_steps=max_steps, max_stack_depth=max_stack_depth,
    )
    if isinstance(result, BudgetExhausted):
        return BmpsVerdict(False, stats=result.stats)
    steps = project_steps(mps, result.trace.transitions)
    control: MpsControl = result.start.control
    initial = next(
        cfg for cfg in initial_configuration(net) if cfg.locations == control.locations
    )
    try:
        trace = replay(net, steps, initial)
    except ReplayError as exc:
        raise LiftError(f"Multistack witness does not replay: {exc}") from exc
    final = trace[-1].configuration if trace else initial
    if not target.bind(net)(final):
        raise LiftError("Multistack witness does not end in the target configuration.")
    return BmpsVerdict(True, steps, trace, result.trace, initial, result.stats)


# Timed multistack systems.


@dataclass(frozen=True)
class TimedMpsTransition:
    source: str
    target: str
    kind: str = "int"
    stack: str | None = None
    symbol: Symbol | None = None
    guard: ClockConstraint = TRUE
    resets: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TimedMps:
    """A timed automaton equipped with untimed stacks."""

    locations: tuple[str, ...]
    initial: tuple[str, ...]
    stacks: tuple[str, ...]
    alphabet: tuple[Symbol, ...]
    clocks: tuple[str, ...] = ()
    transitions: tuple[TimedMpsTransition, ...] = ()

    @property
    def max_constant(self) -> int:
        return max((c for t in self.transitions for c in t.guard.constants), default=0)

    @cached_property
    def clock_index(self) -> dict[str, int]:
        return {clock: i for i, clock in enumerate(self.clocks)}


class RegionMps(MultistackSystem):
    """Region quotient of a timed multistack system over [bound]."""

    def __init__(self, tm: TimedMps, bound: int) -> None:
        self.timed = tm
        self.bound = bound
        self.stacks = tm.stacks
        self._outgoing: dict[str, list[tuple[int, TimedMpsTransition]]] = {}
        for index, t in enumerate(tm.transitions):
            self._outgoing.setdefault(t.source, []).append((index, t))

    @property
    def initial(self) -> tuple[RegionState, ...]:
        zeros = tuple(0 for _ in self.timed.clocks)
        return tuple(RegionState(loc, zeros) for loc in self.timed.initial)

    def transitions_from(self, control, tops=None):
        state: RegionState = control
        out: list[MpsTransition] = [
            MpsTransition(
                state, "int", None, None,
                RegionState(state.location, tick(state.values, self.bound)), "tick",
            )
        ]
        for index, t in self._outgoing.get(state.location, ()):
            if not guard_holds(t.guard, self.timed.clock_index, state.values):
                continue
            if t.kind == "pop" and tops is not None and tops[self.stack_index[t.stack]] != t.symbol:
                continue
            values = reset(state.values, self.timed.clock_index, t.resets)
            out.append(MpsTransition(
                state, t.kind, t.stack, t.symbol, RegionState(t.target, values),
                "discrete", (0, index),
            ))
        return out


def regionize_mps(tm: TimedMps, bound: int | None = None) -> RegionMps:
    k = tm.max_constant if bound is None else bound
    if k < tm.max_constant:
        raise ValueError(f"Region bound {k} is below the largest constant {tm.max_constant}.")
    return RegionMps(tm, k)
