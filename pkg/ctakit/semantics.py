"""Operational semantics of CTA networks and bounded explicit exploration.

Configurations are immutable tuples indexed like the network: one location and
one local valuation per automaton, one global valuation, one timed word per
channel. Channel words are stored newest-first so a write prepends ``(m, 0)``
and a read consumes the last entry.
"""

from __future__ import annotations

import logging
import random
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, Union

from .clocks import cap, guard_holds, reset
from .config import VerifierConfig
from .errors import ReplayError
from .io import load_document, save_json
from .metrics import SearchStats, log_search_stats
from .types import INF, Network, Nop, Read, Transition, Value, Write, format_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimedWord:
    """Channel content, newest entry first."""

    entries: tuple[tuple[str, Value], ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def head(self) -> tuple[str, Value] | None:
        return self.entries[-1] if self.entries else None

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(symbol for symbol, _ in self.entries)

    def write(self, message: str) -> TimedWord:
        return TimedWord(((message, 0),) + self.entries)

    def consume(self) -> TimedWord:
        return TimedWord(self.entries[:-1])

    def elapse(self, t: int, age_cap: int | None = None) -> TimedWord:
        if not self.entries or t == 0:
            return self
        if age_cap is None:
            return TimedWord(tuple((m, a + t) for m, a in self.entries))
        return TimedWord(tuple((m, cap(a + t, age_cap)) for m, a in self.entries))

    def is_monotonic(self) -> bool:
        ages = [age for _, age in self.entries]
        return all(left <= right for left, right in zip(ages, ages[1:]))

    def capped(self, age_cap: int) -> TimedWord:
        return TimedWord(tuple((m, cap(a, age_cap)) for m, a in self.entries))

    def __str__(self) -> str:
        if not self.entries:
            return "eps"
        return "".join(f"({m},{format_value(a)})" for m, a in self.entries)


EMPTY_WORD = TimedWord()


@dataclass(frozen=True)
class Configuration:
    locations: tuple[str, ...]
    valuations: tuple[tuple[Value, ...], ...]
    globals: tuple[Value, ...] = ()
    channels: tuple[TimedWord, ...] = ()

    def to_dict(self, net: Network) -> dict[str, Any]:
        return {
            "automata": {
                a.id: {
                    "location": self.locations[i],
                    "clocks": {
                        c: _json_value(self.valuations[i][j]) for j, c in enumerate(a.clocks)
                    },
                }
                for i, a in enumerate(net.automata)
            },
            "globals": {
                c: _json_value(self.globals[i]) for i, c in enumerate(net.global_clocks)
            },
            "channels": {
                ch.id: [[m, _json_value(age)] for m, age in self.channels[i].entries]
                for i, ch in enumerate(net.channels)
            },
        }


def _json_value(value: Value) -> int | str:
    return "inf" if value == INF else int(value)


def format_configuration(cfg: Configuration) -> str:
    """Render as ``((s2,1),(q2,inf),eps)`` with one tuple per clock-owning part."""
    parts = []
    for location, values in zip(cfg.locations, cfg.valuations):
        shown = ",".join(format_value(v) for v in values)
        parts.append(f"({location},{shown})" if values else f"({location})")
    if cfg.globals:
        parts.append("[" + ",".join(format_value(v) for v in cfg.globals) + "]")
    parts.extend(str(word) for word in cfg.channels)
    return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class Elapse:
    t: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "elapse", "t": self.t}


@dataclass(frozen=True)
class Discrete:
    automaton: str
    transition: int

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "discrete", "automaton": self.automaton, "transition": self.transition}


Step = Union[Elapse, Discrete]


@dataclass(frozen=True)
class TraceStep:
    step: Step
    configuration: Configuration


@dataclass(frozen=True)
class ExploreBounds:
    max_steps: int = 40
    max_channel_len: int = 6
    max_delay_per_step: int = 1
    age_cap: int | None = None
    cap_clocks: bool = True
    threads: int = 1

    @classmethod
    def from_config(cls, config: VerifierConfig, **overrides: Any) -> ExploreBounds:
        values = {
            "max_steps": config.max_steps,
            "max_channel_len": config.max_channel_len,
            "max_delay_per_step": config.max_delay_per_step,
            "age_cap": config.age_cap,
            "threads": config.threads,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def resolved_cap(self, net: Network) -> int:
        cap_value = net.max_constant if self.age_cap is None else self.age_cap
        if cap_value < net.max_constant:
            raise ValueError(
                f"Age cap {cap_value} is below the largest constant {net.max_constant}."
            )
        return cap_value


@dataclass
class Reached:
    trace: list[TraceStep]
    initial: Configuration
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def steps(self) -> list[Step]:
        return [item.step for item in self.trace]

    @property
    def final(self) -> Configuration:
        return self.trace[-1].configuration if self.trace else self.initial


@dataclass
class Exhausted:
    stats: SearchStats = field(default_factory=SearchStats)


ExploreResult = Union[Reached, Exhausted]


@dataclass(frozen=True)
class Target:
    """Reachability goal: required locations plus optional channel constraints."""

    locations: tuple[tuple[str, str], ...] = ()
    channel_empty: bool = False
    channel_words: tuple[tuple[str, TimedWord], ...] = ()

    def bind(self, net: Network) -> Callable[[Configuration], bool]:
        wanted = [(net.automaton_index[a], loc) for a, loc in self.locations]
        words = [(net.channel_index[c], word) for c, word in self.channel_words]
        channel_empty = self.channel_empty

        def predicate(cfg: Configuration) -> bool:
            if any(cfg.locations[i] != loc for i, loc in wanted):
                return False
            if channel_empty and any(cfg.channels):
                return False
            return all(cfg.channels[i] == word for i, word in words)

        return predicate

    def location_for(self, automaton_id: str) -> str | None:
        for automaton, location in self.locations:
            if automaton == automaton_id:
                return location
        return None


def parse_target(text: str) -> Target:
    """Parse ``A:s2,B:q2,channel-empty``."""
    locations: list[tuple[str, str]] = []
    channel_empty = False
    for raw in text.split(","):
        item = raw.strip()
        if not item:
            continue
        if item == "channel-empty":
            channel_empty = True
            continue
        automaton, sep, location = item.partition(":")
        if not sep or not automaton or not location:
            raise ValueError(f"Malformed target item {item!r}; expected <automaton>:<location>.")
        locations.append((automaton.strip(), location.strip()))
    return Target(tuple(locations), channel_empty)


def initial_configuration(net: Network) -> list[Configuration]:
    """All initial configurations, one per combination of initial locations."""
    zeros = tuple(tuple(0 for _ in a.clocks) for a in net.automata)
    globals_ = tuple(0 for _ in net.global_clocks)
    channels = tuple(EMPTY_WORD for _ in net.channels)
    return [
        Configuration(tuple(combo), zeros, globals_, channels)
        for combo in product(*(a.initial for a in net.automata))
    ]


def timed_step(
    net: Network,
    cfg: Configuration,
    t: int,
    *,
    age_cap: int | None = None,
    cap_clocks: bool = False,
) -> Configuration:
    if t < 0:
        raise ValueError("Time elapse must be >= 0.")
    if t == 0:
        return cfg
    clock_cap = age_cap if cap_clocks else None

    def advance(values: tuple[Value, ...]) -> tuple[Value, ...]:
        if clock_cap is None:
            return tuple(v + t for v in values)
        return tuple(cap(v + t, clock_cap) for v in values)

    return Configuration(
        cfg.locations,
        tuple(advance(values) for values in cfg.valuations),
        advance(cfg.globals),
        tuple(word.elapse(t, age_cap) for word in cfg.channels),
    )


def _fire(
    net: Network,
    cfg: Configuration,
    index: int,
    transition: Transition,
) -> Configuration | None:
    automaton = net.automata[index]
    if cfg.locations[index] != transition.source:
        return None
    if not guard_holds(
        transition.guard,
        automaton.clock_index,
        cfg.valuations[index],
        net.global_index,
        cfg.globals,
    ):
        return None
    channels = cfg.channels
    op = transition.op
    if isinstance(op, Write):
        position = net.channel_index[op.channel]
        channels = _replace(channels, position, channels[position].write(op.message))
    elif isinstance(op, Read):
        position = net.channel_index[op.channel]
        head = channels[position].head
        if head is None or head[0] != op.message or not op.age.contains(head[1]):
            return None
        channels = _replace(channels, position, channels[position].consume())
    locations = _replace(cfg.locations, index, transition.target)
    valuations = cfg.valuations
    globals_ = cfg.globals
    if transition.resets:
        valuations = _replace(
            valuations,
            index,
            reset(valuations[index], automaton.clock_index, transition.resets),
        )
        globals_ = reset(globals_, net.global_index, transition.resets)
    return Configuration(locations, valuations, globals_, channels)


def _replace(items: tuple, position: int, value: Any) -> tuple:
    return items[:position] + (value,) + items[position + 1 :]


def enabled_discrete(
    net: Network, cfg: Configuration
) -> list[tuple[str, int, Configuration]]:
    """Discrete successors ordered by (automaton index, transition index)."""
    out: list[tuple[str, int, Configuration]] = []
    for index, automaton in enumerate(net.automata):
        for t_index, transition in automaton.outgoing.get(cfg.locations[index], ()):
            successor = _fire(net, cfg, index, transition)
            if successor is not None:
                out.append((automaton.id, t_index, successor))
    return out


def apply_step(
    net: Network,
    cfg: Configuration,
    step: Step,
    *,
    age_cap: int | None = None,
    cap_clocks: bool = False,
) -> Configuration | None:
    """Apply one step, returning None when it is not enabled."""
    if isinstance(step, Elapse):
        return timed_step(net, cfg, step.t, age_cap=age_cap, cap_clocks=cap_clocks)
    index = net.automaton_index.get(step.automaton)
    if index is None:
        return None
    automaton = net.automata[index]
    if not 0 <= step.transition < len(automaton.transitions):
        return None
    return _fire(net, cfg, index, automaton.transitions[step.transition])


def replay(
    net: Network,
    steps: Sequence[Step],
    initial: Configuration | None = None,
    *,
    age_cap: int | None = None,
    cap_clocks: bool = False,
) -> list[TraceStep]:
    """Replay ``steps`` from ``initial`` (default: the first initial configuration)."""
    cfg = initial if initial is not None else initial_configuration(net)[0]
    trace: list[TraceStep] = []
    for position, step in enumerate(steps):
        if isinstance(step, Discrete) and step.automaton not in net.automaton_index:
            raise ReplayError(f"Unknown automaton {step.automaton}.", position)
        successor = apply_step(net, cfg, step, age_cap=age_cap, cap_clocks=cap_clocks)
        if successor is None:
            raise ReplayError(f"{_describe(net, step)} is not enabled.", position)
        trace.append(TraceStep(step, successor))
        cfg = successor
    return trace


def _describe(net: Network, step: Step) -> str:
    if isinstance(step, Elapse):
        return f"Elapse({step.t})"
    automaton = net.automata[net.automaton_index[step.automaton]]
    if not 0 <= step.transition < len(automaton.transitions):
        return f"Transition {step.automaton}#{step.transition} (out of range)"
    return (
        f"Transition {step.automaton}#{step.transition} "
        f"[{automaton.transitions[step.transition].label()}]"
    )


def _successors(
    net: Network,
    cfg: Configuration,
    bounds: ExploreBounds,
    age_cap: int,
) -> tuple[list[tuple[Step, Configuration]], int]:
    out: list[tuple[Step, Configuration]] = []
    hits = 0
    current = cfg
    for t in range(1, bounds.max_delay_per_step + 1):
        current = timed_step(
            net, current, 1, age_cap=age_cap, cap_clocks=bounds.cap_clocks
        )
        out.append((Elapse(t), current))
    for automaton_id, t_index, successor in enabled_discrete(net, cfg):
        if any(len(word) > bounds.max_channel_len for word in successor.channels):
            hits += 1
            continue
        out.append((Discrete(automaton_id, t_index), successor))
    return out, hits


def _rebuild(
    parents: dict[Configuration, tuple[Configuration, Step] | None], cfg: Configuration
) -> list[TraceStep]:
    trace: list[TraceStep] = []
    while True:
        entry = parents[cfg]
        if entry is None:
            break
        parent, step = entry
        trace.append(TraceStep(step, cfg))
        cfg = parent
    trace.reverse()
    return trace


def _root(
    parents: dict[Configuration, tuple[Configuration, Step] | None], cfg: Configuration
) -> Configuration:
    while (entry := parents[cfg]) is not None:
        cfg = entry[0]
    return cfg


def explore_reach(
    net: Network,
    bounds: ExploreBounds,
    target: Callable[[Configuration], bool] | Target,
) -> ExploreResult:
    """Breadth-first search of the age-capped LTS.

    Frontiers are expanded layer by layer; with ``threads > 1`` a layer is
    mapped over a thread pool and merged in frontier order, so the returned
    trace does not depend on scheduling.
    """
    predicate = target.bind(net) if isinstance(target, Target) else target
    age_cap = bounds.resolved_cap(net)
    start = time.perf_counter()
    stats = SearchStats()
    parents: dict[Configuration, tuple[Configuration, Step] | None] = {}
    frontier: list[Configuration] = []
    for cfg in initial_configuration(net):
        if cfg in parents:
            continue
        parents[cfg] = None
        stats.states += 1
        if predicate(cfg):
            return _finish(Reached([], cfg, stats), start)
        frontier.append(cfg)

    executor = ThreadPoolExecutor(max_workers=bounds.threads) if bounds.threads > 1 else None
    try:
        for depth in range(bounds.max_steps):
            if not frontier:
                break

            def expand(cfg: Configuration) -> tuple[list[tuple[Step, Configuration]], int]:
                return _successors(net, cfg, bounds, age_cap)

            if executor is not None and len(frontier) > 1:
                expanded = list(executor.map(expand, frontier))
            else:
                expanded = [expand(cfg) for cfg in frontier]
            next_frontier: list[Configuration] = []
            for cfg, (successors, hits) in zip(frontier, expanded):
                stats.bound_hits += hits
                for step, successor in successors:
                    stats.transitions += 1
                    if successor in parents:
                        continue
                    parents[successor] = (cfg, step)
                    stats.states += 1
                    if predicate(successor):
                        trace = _rebuild(parents, successor)
                        return _finish(Reached(trace, _root(parents, successor), stats), start)
                    next_frontier.append(successor)
            logger.debug("depth=%d frontier=%d", depth + 1, len(next_frontier))
            frontier = next_frontier
        if frontier:
            stats.bound_hits += len(frontier)
    finally:
        if executor is not None:
            executor.shutdown()
    return _finish(Exhausted(stats), start)


def _finish(result: ExploreResult, start: float) -> ExploreResult:
    result.stats.elapsed_ms = (time.perf_counter() - start) * 1000
    log_search_stats("explore", result.stats)
    return result


def reachable_locations(
    net: Network, bounds: ExploreBounds, *, channel_empty: bool = False
) -> set[tuple[str, ...]]:
    """Location tuples seen by the bounded exploration."""
    seen: set[tuple[str, ...]] = set()

    def record(cfg: Configuration) -> bool:
        if not channel_empty or not any(cfg.channels):
            seen.add(cfg.locations)
        return False

    explore_reach(net, bounds, record)
    return seen


def reachable_configurations(
    net: Network, bounds: ExploreBounds
) -> set[Configuration]:
    seen: set[Configuration] = set()

    def record(cfg: Configuration) -> bool:
        seen.add(cfg)
        return False

    explore_reach(net, bounds, record)
    return seen


def simulate(
    net: Network,
    steps: int,
    *,
    max_channel_len: int = 6,
    seed: int | None = None,
    age_cap: int | None = None,
) -> list[TraceStep]:
    """Seeded random walk over the LTS; stops early when nothing but time can move."""
    rng = random.Random(seed)
    cap_value = net.max_constant if age_cap is None else age_cap
    cfg = rng.choice(initial_configuration(net))
    trace: list[TraceStep] = []
    for _ in range(steps):
        options: list[tuple[Step, Configuration]] = [
            (Elapse(1), timed_step(net, cfg, 1, age_cap=cap_value))
        ]
        for automaton_id, t_index, successor in enabled_discrete(net, cfg):
            if all(len(word) <= max_channel_len for word in successor.channels):
                options.append((Discrete(automaton_id, t_index), successor))
        step, cfg = rng.choice(options)
        trace.append(TraceStep(step, cfg))
    return trace


def steps_to_dict(steps: Iterable[Step]) -> list[dict[str, Any]]:
    return [step.to_dict() for step in steps]


def steps_from_dict(data: Any) -> list[Step]:
    if not isinstance(data, list):
        raise ValueError("A trace document must be a list of steps.")
    steps: list[Step] = []
    for position, item in enumerate(data):
        if not isinstance(item, dict):
            raise ValueError(f"Trace step {position} must be an object.")
        kind = item.get("kind")
        if kind == "elapse":
            steps.append(Elapse(int(item.get("t", 1))))
        elif kind == "discrete":
            steps.append(Discrete(str(item["automaton"]), int(item["transition"])))
        else:
            raise ValueError(f"Trace step {position} has unknown kind {kind!r}.")
    return steps


def save_trace(path: str | Path, steps: Iterable[Step]) -> None:
    save_json(path, steps_to_dict(steps))


def load_trace(path: str | Path) -> list[Step]:
    return steps_from_dict(load_document(path))


def channel_operation(net: Network, step: Step) -> tuple[str, str, str] | None:
    """``(kind, automaton, channel)`` for channel-operating steps, else None."""
    if isinstance(step, Elapse):
        return None
    automaton = net.automata[net.automaton_index[step.automaton]]
    op = automaton.transitions[step.transition].op
    if isinstance(op, Nop):
        return None
    kind = "write" if isinstance(op, Write) else "read"
    return kind, step.automaton, op.channel
