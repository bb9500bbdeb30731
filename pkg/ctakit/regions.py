"""Region automata of single discrete-time timed automata.

A region state pairs a location with a capped valuation over [K]. A tick adds
one to every clock and saturates values above K to ``INF``; a discrete edge is
present exactly when the capped valuation satisfies the guard.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .clocks import guard_holds, reset, tick
from .errors import RegionBoundError
from .semantics import Discrete, Elapse, Step
from .types import Automaton, Transition, Value, format_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegionState:
    location: str
    values: tuple[Value, ...] = ()

    def __str__(self) -> str:
        if not self.values:
            return f"({self.location})"
        return f"({self.location},{','.join(format_value(v) for v in self.values)})"


@dataclass(frozen=True)
class RegionEdge:
    source: RegionState
    target: RegionState
    transition: int | None  # None marks a tick

    @property
    def is_tick(self) -> bool:
        return self.transition is None


@dataclass(frozen=True)
class RegionAutomaton:
    automaton: Automaton
    bound: int
    states: tuple[RegionState, ...]
    initial: tuple[RegionState, ...]
    edges: tuple[RegionEdge, ...] = field(default=())

    @cached_property
    def outgoing(self) -> dict[RegionState, tuple[RegionEdge, ...]]:
        table: dict[RegionState, list[RegionEdge]] = {s: [] for s in self.states}
        for edge in self.edges:
            table[edge.source].append(edge)
        return {s: tuple(edges) for s, edges in table.items()}

    def label(self, edge: RegionEdge) -> str:
        if edge.transition is None:
            return "tick"
        return str(self.automaton.transitions[edge.transition].op)


def check_bound(automaton: Automaton, bound: int) -> None:
    foreign = sorted(
        c
        for t in automaton.transitions
        for c in t.guard.clocks | t.resets
        if c not in automaton.clock_index
    )
    if foreign:
        raise ValueError(
            f"Automaton {automaton.id} uses clocks outside its own set: {', '.join(foreign)}."
        )
    if bound < automaton.max_constant:
        raise RegionBoundError(automaton.max_constant, bound)


def initial_region_states(automaton: Automaton) -> tuple[RegionState, ...]:
    zeros = tuple(0 for _ in automaton.clocks)
    return tuple(RegionState(loc, zeros) for loc in automaton.initial)


def tick_state(state: RegionState, bound: int) -> RegionState:
    return RegionState(state.location, tick(state.values, bound))


def discrete_successors(
    automaton: Automaton, state: RegionState
) -> list[tuple[int, Transition, RegionState]]:
    """Enabled discrete edges of ``automaton`` from ``state``, by transition index."""
    out = []
    for index, transition in automaton.outgoing.get(state.location, ()):
        if not guard_holds(transition.guard, automaton.clock_index, state.values):
            continue
        values = reset(state.values, automaton.clock_index, transition.resets)
        out.append((index, transition, RegionState(transition.target, values)))
    return out


def build_region_automaton(automaton: Automaton, bound: int) -> RegionAutomaton:
    """Reachable part of the region automaton of ``automaton`` over [bound]."""
    check_bound(automaton, bound)
    initial = initial_region_states(automaton)
    seen: dict[RegionState, None] = dict.fromkeys(initial)
    queue = deque(seen)
    edges: list[RegionEdge] = []
    while queue:
        state = queue.popleft()
        successors: list[tuple[int | None, RegionState]] = [(None, tick_state(state, bound))]
        successors.extend(
            (index, target) for index, _, target in discrete_successors(automaton, state)
        )
        for index, target in successors:
            edges.append(RegionEdge(state, target, index))
            if target not in seen:
                seen[target] = None
                queue.append(target)
    logger.debug("region automaton of %s: %d states, %d edges", automaton.id, len(seen), len(edges))
    return RegionAutomaton(automaton, bound, tuple(seen), initial, tuple(edges))


@dataclass(frozen=True)
class RegionWitness:
    nonempty: bool
    path: tuple[RegionEdge, ...] = ()
    start: RegionState | None = None

    def steps(self, automaton_id: str) -> list[Step]:
        """The path as semantics steps, replayable on the one-automaton network."""
        return [
            Elapse(1) if edge.transition is None else Discrete(automaton_id, edge.transition)
            for edge in self.path
        ]


def region_nonempty(region: RegionAutomaton, finals: Iterable[str]) -> RegionWitness:
    wanted = set(finals)
    parents: dict[RegionState, RegionEdge | None] = {}
    queue: deque[RegionState] = deque()
    for state in region.initial:
        if state not in parents:
            parents[state] = None
            queue.append(state)
    while queue:
        state = queue.popleft()
        if state.location in wanted:
            path: list[RegionEdge] = []
            cursor = state
            while (edge := parents[cursor]) is not None:
                path.append(edge)
                cursor = edge.source
            path.reverse()
            return RegionWitness(True, tuple(path), cursor)
        for edge in region.outgoing.get(state, ()):
            if edge.target not in parents:
                parents[edge.target] = edge
                queue.append(edge.target)
    return RegionWitness(False)
