"""Shared types for communicating timed automata networks."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

# Clock values and message ages live in N ∪ {∞}; ∞ is the float infinity so
# comparisons against finite bounds behave as the capped domain requires.
INF = math.inf
Value = Union[int, float]

RELATIONS = ("<", "<=", "=", ">", ">=")
_RELATION_ALIASES = {"≤": "<=", "≥": ">=", "==": "="}

_INTERVAL_RE = re.compile(
    r"^\s*([\[(])\s*(\d+)\s*,\s*(\d+|inf|∞)\s*([\])])\s*$", re.IGNORECASE
)


def normalize_relation(rel: str) -> str:
    rel = _RELATION_ALIASES.get(rel, rel)
    if rel not in RELATIONS:
        raise ValueError(f"Unknown clock relation {rel!r}.")
    return rel


def format_value(value: Value) -> str:
    return "inf" if value == INF else str(int(value))


@dataclass(frozen=True)
class Atom:
    """One conjunct ``clock rel bound``."""

    clock: str
    rel: str
    bound: int

    def holds(self, value: Value) -> bool:
        if self.rel == "<":
            return value < self.bound
        if self.rel == "<=":
            return value <= self.bound
        if self.rel == "=":
            return value == self.bound
        if self.rel == ">":
            return value > self.bound
        return value >= self.bound

    def __str__(self) -> str:
        return f"{self.clock}{self.rel}{self.bound}"


@dataclass(frozen=True)
class ClockConstraint:
    atoms: tuple[Atom, ...] = ()

    def holds(self, lookup: Callable[[str], Value]) -> bool:
        return all(atom.holds(lookup(atom.clock)) for atom in self.atoms)

    @property
    def clocks(self) -> frozenset[str]:
        return frozenset(atom.clock for atom in self.atoms)

    @property
    def constants(self) -> tuple[int, ...]:
        return tuple(atom.bound for atom in self.atoms)

    def __str__(self) -> str:
        return " && ".join(str(atom) for atom in self.atoms) or "true"


TRUE = ClockConstraint()


@dataclass(frozen=True)
class Interval:
    """Age interval of a read; ``upper`` may be ``INF`` (then open)."""

    lower: int = 0
    lower_closed: bool = True
    upper: Value = INF
    upper_closed: bool = False

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ValueError("Interval lower bound must be >= 0.")
        if self.upper == INF and self.upper_closed:
            raise ValueError("An unbounded interval must be open on the right.")
        if self.upper != INF and self.lower > self.upper:
            raise ValueError("Interval lower bound exceeds its upper bound.")

    @classmethod
    def parse(cls, text: str) -> Interval:
        match = _INTERVAL_RE.match(text)
        if match is None:
            raise ValueError(f"Malformed interval {text!r}.")
        left, low, high, right = match.groups()
        upper: Value = INF if high.lower() in ("inf", "∞") else int(high)
        return cls(
            lower=int(low),
            lower_closed=left == "[",
            upper=upper,
            upper_closed=right == "]" and upper != INF,
        )

    @classmethod
    def point(cls, value: int) -> Interval:
        return cls(value, True, value, True)

    def contains(self, age: Value) -> bool:
        if age < self.lower or (age == self.lower and not self.lower_closed):
            return False
        if self.upper == INF:
            return True
        return age < self.upper or (age == self.upper and self.upper_closed)

    @property
    def unbounded(self) -> bool:
        return self.upper == INF

    @property
    def constants(self) -> tuple[int, ...]:
        if self.upper == INF:
            return (self.lower,)
        return (self.lower, int(self.upper))

    def __str__(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower},{format_value(self.upper)}{right}"


@dataclass(frozen=True)
class Nop:
    def __str__(self) -> str:
        return "nop"


@dataclass(frozen=True)
class Write:
    channel: str
    message: str

    def __str__(self) -> str:
        return f"{self.channel}!{self.message}"


@dataclass(frozen=True)
class Read:
    channel: str
    message: str
    age: Interval = field(default_factory=Interval)

    def __str__(self) -> str:
        return f"{self.channel}?{self.message}{self.age}"


ChannelOp = Union[Nop, Write, Read]
NOP = Nop()


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    guard: ClockConstraint = TRUE
    op: ChannelOp = NOP
    resets: frozenset[str] = frozenset()

    def label(self) -> str:
        parts = []
        if self.guard.atoms:
            parts.append(str(self.guard))
        parts.append(str(self.op))
        if self.resets:
            parts.append("{" + ",".join(sorted(self.resets)) + ":=0}")
        return " ".join(parts)


@dataclass(frozen=True)
class Automaton:
    id: str
    locations: tuple[str, ...]
    initial: tuple[str, ...]
    final: tuple[str, ...] = ()
    clocks: tuple[str, ...] = ()
    transitions: tuple[Transition, ...] = ()

    @cached_property
    def outgoing(self) -> dict[str, tuple[tuple[int, Transition], ...]]:
        table: dict[str, list[tuple[int, Transition]]] = {
            loc: [] for loc in self.locations
        }
        for index, transition in enumerate(self.transitions):
            table.setdefault(transition.source, []).append((index, transition))
        return {loc: tuple(edges) for loc, edges in table.items()}

    @cached_property
    def clock_index(self) -> dict[str, int]:
        return {clock: i for i, clock in enumerate(self.clocks)}

    @property
    def max_constant(self) -> int:
        constants = [c for t in self.transitions for c in t.guard.constants]
        return max(constants, default=0)


@dataclass(frozen=True)
class Channel:
    id: str
    source: str
    sink: str


@dataclass(frozen=True)
class Network:
    automata: tuple[Automaton, ...]
    global_clocks: tuple[str, ...] = ()
    channels: tuple[Channel, ...] = ()
    alphabet: tuple[str, ...] = ()

    @cached_property
    def automaton_index(self) -> dict[str, int]:
        return {automaton.id: i for i, automaton in enumerate(self.automata)}

    @cached_property
    def channel_index(self) -> dict[str, int]:
        return {channel.id: i for i, channel in enumerate(self.channels)}

    @cached_property
    def global_index(self) -> dict[str, int]:
        return {clock: i for i, clock in enumerate(self.global_clocks)}

    def automaton(self, automaton_id: str) -> Automaton:
        return self.automata[self.automaton_index[automaton_id]]

    def channel(self, channel_id: str) -> Channel:
        return self.channels[self.channel_index[channel_id]]

    @cached_property
    def max_constant(self) -> int:
        constants: list[int] = []
        for automaton in self.automata:
            for transition in automaton.transitions:
                constants.extend(transition.guard.constants)
                if isinstance(transition.op, Read):
                    constants.extend(transition.op.age.constants)
        return max(constants, default=0)
