"""Two-counter machines, their interpreter, and untimed self-channel automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Union

from .io import load_document, save_json


@dataclass(frozen=True)
class Inc:
    counter: int
    goto: int


@dataclass(frozen=True)
class Dec:
    counter: int
    goto: int


@dataclass(frozen=True)
class IfZero:
    counter: int
    zero: int
    pos: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Inc, Dec, IfZero, Halt]


@dataclass(frozen=True)
class TwoCounterMachine:
    instructions: tuple[Instruction, ...]

    @property
    def halt(self) -> int:
        return len(self.instructions) - 1

    def validate(self) -> list[str]:
        problems: list[str] = []
        n = len(self.instructions)
        if n == 0:
            return ["machine has no instructions"]
        halts = [i for i, ins in enumerate(self.instructions) if isinstance(ins, Halt)]
        if halts != [n - 1]:
            problems.append("exactly one halt is required, as the last instruction")
        for i, ins in enumerate(self.instructions):
            if isinstance(ins, Halt):
                continue
            if ins.counter not in (1, 2):
                problems.append(f"l{i}: counter must be 1 or 2")
            targets = (ins.zero, ins.pos) if isinstance(ins, IfZero) else (ins.goto,)
            for target in targets:
                if not 0 <= target < n:
                    problems.append(f"l{i}: goto l{target} out of range")
        return problems


@dataclass(frozen=True)
class Halted:
    steps: int
    c1: int
    c2: int


@dataclass(frozen=True)
class Running:
    pc: int
    c1: int
    c2: int
    steps: int


@dataclass(frozen=True)
class Stuck:
    pc: int
    c1: int
    c2: int
    steps: int


RunResult = Union[Halted, Running, Stuck]


def iterate_2cm(m: TwoCounterMachine) -> Iterator[tuple[int, int, int]]:
    """Yield ``(pc, c1, c2)`` from the initial state until halt or a dec at zero."""
    pc, counters = 0, [0, 0, 0]
    while True:
        yield pc, counters[1], counters[2]
        ins = m.instructions[pc]
        if isinstance(ins, Halt):
            return
        if isinstance(ins, Inc):
            counters[ins.counter] += 1
            pc = ins.goto
        elif isinstance(ins, Dec):
            if counters[ins.counter] == 0:
                return
            counters[ins.counter] -= 1
            pc = ins.goto
        else:
            pc = ins.zero if counters[ins.counter] == 0 else ins.pos


def run_2cm(m: TwoCounterMachine, max_steps: int) -> RunResult:
    problems = m.validate()
    if problems:
        raise ValueError(f"Invalid counter machine: {problems[0]}.")
    steps = -1
    pc = c1 = c2 = 0
    for steps, (pc, c1, c2) in enumerate(iterate_2cm(m)):
        if isinstance(m.instructions[pc], Halt):
            return Halted(steps, c1, c2)
        if steps >= max_steps:
            return Running(pc, c1, c2, steps)
    return Stuck(pc, c1, c2, steps)


def boundaries(m: TwoCounterMachine, max_steps: int) -> list[tuple[int, int, int]]:
    """Instruction boundaries ``(pc, c1, c2)`` of the run, at most ``max_steps + 1`` of them."""
    out = []
    for position, state in enumerate(iterate_2cm(m)):
        if position > max_steps:
            break
        out.append(state)
    return out


def machine_from_dict(data: Any) -> TwoCounterMachine:
    if not isinstance(data, list):
        raise ValueError("A counter machine document must be a list of instructions.")
    instructions: list[Instruction] = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "op" not in item:
            raise ValueError(f"Instruction {i} must be an object with an 'op'.")
        op = item["op"]
        if op == "inc":
            instructions.append(Inc(int(item["counter"]), int(item["goto"])))
        elif op == "dec":
            instructions.append(Dec(int(item["counter"]), int(item["goto"])))
        elif op == "ifzero":
            instructions.append(IfZero(int(item["counter"]), int(item["zero"]), int(item["pos"])))
        elif op == "halt":
            instructions.append(Halt())
        else:
            raise ValueError(f"Instruction {i} has unknown op {op!r}.")
    return TwoCounterMachine(tuple(instructions))


def machine_to_dict(m: TwoCounterMachine) -> list[dict[str, Any]]:
    out: list[dict[str, Any]] = []
    for ins in m.instructions:
        if isinstance(ins, Inc):
            out.append({"op": "inc", "counter": ins.counter, "goto": ins.goto})
        elif isinstance(ins, Dec):
            out.append({"op": "dec", "counter": ins.counter, "goto": ins.goto})
        elif isinstance(ins, IfZero):
            out.append({"op": "ifzero", "counter": ins.counter, "zero": ins.zero, "pos": ins.pos})
        else:
            out.append({"op": "halt"})
    return out


def load_counter_machine(path: str | Path) -> TwoCounterMachine:
    return machine_from_dict(load_document(path))


def save_counter_machine(path: str | Path, m: TwoCounterMachine) -> None:
    save_json(path, machine_to_dict(m))


# Untimed automata over a channel to themselves.


@dataclass(frozen=True)
class ChannelEdge:
    source: str
    kind: str  # "nop", "write" or "read"
    message: str | None
    target: str


@dataclass(frozen=True)
class ChannelAutomaton:
    locations: tuple[str, ...]
    initial: str
    alphabet: tuple[str, ...]
    edges: tuple[ChannelEdge, ...] = field(default=())

    def validate(self) -> list[str]:
        problems = []
        known = set(self.locations)
        if self.initial not in known:
            problems.append(f"unknown initial location {self.initial}")
        for edge in self.edges:
            if edge.source not in known or edge.target not in known:
                problems.append(f"edge {edge.source}->{edge.target} has an unknown endpoint")
            if edge.kind not in ("nop", "write", "read"):
                problems.append(f"edge {edge.source}->{edge.target} has unknown kind {edge.kind}")
            elif edge.kind != "nop" and edge.message not in self.alphabet:
                problems.append(f"edge {edge.source}->{edge.target} uses unknown message")
        return problems

    def reachable(self, max_channel_len: int) -> set[tuple[str, tuple[str, ...]]]:
        """``(location, word)`` pairs reachable with channel length bounded; words newest-first."""
        start = (self.initial, ())
        seen = {start}
        queue = deque([start])
        outgoing: dict[str, list[ChannelEdge]] = {}
        for edge in self.edges:
            outgoing.setdefault(edge.source, []).append(edge)
        while queue:
            location, word = queue.popleft()
            for edge in outgoing.get(location, ()):
                if edge.kind == "nop":
                    nxt = (edge.target, word)
                elif edge.kind == "write":
                    if len(word) >= max_channel_len:
                        continue
                    nxt = (edge.target, (edge.message,) + word)
                else:
                    if not word or word[-1] != edge.message:
                        continue
                    nxt = (edge.target, word[:-1])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen


def counter_machine_to_channel_automaton(m: TwoCounterMachine) -> ChannelAutomaton:
    """Compile ``m`` to a self-channel automaton.

    Between instructions the channel holds one ``a`` per unit of ``c1``, one
    ``b`` per unit of ``c2`` and the marker ``#`` as its newest entry. Every
    instruction rotates the whole queue once, rewriting each token it reads
    and applying its effect when the marker comes back around.
    """
    problems = m.validate()
    if problems:
        raise ValueError(f"Invalid counter machine: {problems[0]}.")
    token = {1: "a", 2: "b"}
    locations: list[str] = ["init"]
    edges: list[ChannelEdge] = [ChannelEdge("init", "write", "#", "l0")]

    def loc(name: str) -> str:
        if name not in locations:
            locations.append(name)
        return name

    def rewrite(state: str, symbol: str, back: str) -> None:
        mid = loc(f"{state}_w{symbol}")
        edges.append(ChannelEdge(state, "read", symbol, mid))
        edges.append(ChannelEdge(mid, "write", symbol, back))

    def close(state: str, extra: tuple[str, ...], goto: int) -> None:
        current = state
        marker = loc(f"{state}_close")
        edges.append(ChannelEdge(current, "read", "#", marker))
        current = marker
        for k, symbol in enumerate(extra):
            nxt = loc(f"{state}_close{k}")
            edges.append(ChannelEdge(current, "write", symbol, nxt))
            current = nxt
        edges.append(ChannelEdge(current, "write", "#", loc(f"l{goto}")))

    for i, ins in enumerate(m.instructions):
        here = loc(f"l{i}")
        if isinstance(ins, Halt):
            continue
        if isinstance(ins, Inc):
            for symbol in ("a", "b"):
                rewrite(here, symbol, here)
            close(here, (token[ins.counter],), ins.goto)
        elif isinstance(ins, Dec):
            dropped = loc(f"l{i}_dropped")
            edges.append(ChannelEdge(here, "read", token[ins.counter], dropped))
            for symbol in ("a", "b"):
                if symbol != token[ins.counter]:
                    rewrite(here, symbol, here)
                rewrite(dropped, symbol, dropped)
            close(dropped, (), ins.goto)
        else:
            seen = loc(f"l{i}_nonzero")
            mid = loc(f"l{i}_w{token[ins.counter]}first")
            edges.append(ChannelEdge(here, "read", token[ins.counter], mid))
            edges.append(ChannelEdge(mid, "write", token[ins.counter], seen))
            for symbol in ("a", "b"):
                if symbol != token[ins.counter]:
                    rewrite(here, symbol, here)
                rewrite(seen, symbol, seen)
            close(here, (), ins.zero)
            close(seen, (), ins.pos)
    return ChannelAutomaton(tuple(locations), "init", ("a", "b", "#"), tuple(edges))
