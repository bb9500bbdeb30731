"""Reductions emitted as networks, and the two-counter cross-check harness.

Three constructions live here:

* ``gen_selfloop_sim`` turns an untimed automaton that talks to itself over a
  channel into a two-automata network where global clocks carry the
  handshake between the writer and a star-shaped reader.
* ``gen_three_cta`` encodes a two-counter machine into three one-clock
  automata on a chain. Counter values are the differences between the times
  at which neighbouring automata enter the same instruction.
* ``gen_subset_sum`` builds the two-automata instance whose final location is
  reachable exactly when a subset of ``S`` sums to ``c``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable

from .counter_machine import (
    ChannelAutomaton,
    Dec,
    Halted,
    IfZero,
    Inc,
    Running,
    Stuck,
    TwoCounterMachine,
    boundaries,
    run_2cm,
)
from .metrics import SearchStats
from .semantics import (
    Configuration,
    Discrete,
    ExploreBounds,
    Reached,
    Target,
    explore_reach,
)
from .types import (
    NOP,
    TRUE,
    Atom,
    Automaton,
    Channel,
    ClockConstraint,
    Interval,
    Network,
    Nop,
    Read,
    Transition,
    Write,
)

logger = logging.getLogger(__name__)

# Time each automaton spends in an instruction widget, as (A1, A2, A3).
WIDGET_DURATIONS = {
    ("inc", 1): (1, 2, 2),
    ("inc", 2): (1, 1, 2),
    ("dec", 1): (2, 1, 1),
    ("dec", 2): (2, 2, 1),
}

ZERO_AGE = Interval.point(0)
POSITIVE_AGE = Interval(0, False)


def _guard(*atoms: tuple[str, str, int]) -> ClockConstraint:
    if not atoms:
        return TRUE
    return ClockConstraint(tuple(Atom(clock, rel, bound) for clock, rel, bound in atoms))


def _edge(
    source: str,
    target: str,
    *atoms: tuple[str, str, int],
    op: Nop | Write | Read = NOP,
    resets: Iterable[str] = (),
) -> Transition:
    return Transition(source, target, _guard(*atoms), op, frozenset(resets))


class _Builder:
    """Collects locations in first-seen order while transitions are added."""

    def __init__(self, automaton_id: str, clocks: tuple[str, ...]):
        self.id = automaton_id
        self.clocks = clocks
        self.locations: dict[str, None] = {}
        self.transitions: list[Transition] = []

    def location(self, name: str) -> str:
        self.locations.setdefault(name, None)
        return name

    def add(self, transition: Transition) -> None:
        self.location(transition.source)
        self.location(transition.target)
        self.transitions.append(transition)

    def build(self, initial: str, final: tuple[str, ...] = ()) -> Automaton:
        self.location(initial)
        for name in final:
            self.location(name)
        return Automaton(
            self.id,
            tuple(self.locations),
            (initial,),
            final,
            self.clocks,
            tuple(self.transitions),
        )


# Self-channel simulation with global clocks


def _clock_suffix(message: str) -> str:
    return message if message.isidentifier() else f"m{ord(message[0])}"


def gen_selfloop_sim(automaton: ChannelAutomaton) -> Network:
    """Simulate ``automaton``'s self-channel with a writer ``A1`` and a reader hub ``A2``.

    Every edge of the source takes exactly one time unit in ``A1`` (local clock
    ``x1``). A read of ``m`` resets the global clock ``x_m``; the hub answers
    in the same instant by consuming ``m`` and resetting ``y_m``, which ``A1``
    observes before finishing the edge.
    """
    problems = automaton.validate()
    if problems:
        raise ValueError(f"Invalid channel automaton: {problems[0]}.")
    read_messages = [
        m for m in automaton.alphabet if any(e.kind == "read" and e.message == m for e in automaton.edges)
    ]
    x_clock = {m: f"x_{_clock_suffix(m)}" for m in read_messages}
    y_clock = {m: f"y_{_clock_suffix(m)}" for m in read_messages}

    writer = _Builder("A1", ("x1",))
    for name in automaton.locations:
        writer.location(name)
    for k, edge in enumerate(automaton.edges):
        if edge.kind == "read":
            assert edge.message is not None
            m = edge.message
            waiting = f"{edge.source}__r{k}"
            answered = f"{edge.source}__r{k}b"
            writer.add(_edge(edge.source, waiting, ("x1", "=", 1), resets=("x1", x_clock[m])))
            writer.add(_edge(waiting, answered, (y_clock[m], "=", 0)))
            writer.add(_edge(answered, edge.target, ("x1", "=", 1), resets=("x1",)))
        else:
            op: Nop | Write = Write("c", edge.message) if edge.kind == "write" else NOP
            writer.add(_edge(edge.source, edge.target, ("x1", "=", 1), op=op, resets=("x1",)))

    hub = _Builder("A2", ())
    for m in read_messages:
        armed, consumed = f"wait_{_clock_suffix(m)}", f"done_{_clock_suffix(m)}"
        hub.add(_edge("hub", armed, (x_clock[m], "=", 0)))
        hub.add(
            _edge(armed, consumed, (x_clock[m], "=", 0), op=Read("c", m), resets=(y_clock[m],))
        )
        hub.add(_edge(consumed, "hub", (y_clock[m], "=", 1)))

    global_clocks = tuple(c for m in read_messages for c in (x_clock[m], y_clock[m]))
    net = Network(
        (writer.build(automaton.initial), hub.build("hub")),
        global_clocks,
        (Channel("c", "A1", "A2"),),
        tuple(automaton.alphabet),
    )
    logger.debug(
        "selfloop simulation: %d writer locations, %d hub widgets",
        len(net.automata[0].locations),
        len(read_messages),
    )
    return net


# Three-automata two-counter encoding


def _message(i: int, kind: str, j: int) -> str:
    return f"l{i}:{kind}:l{j}"


def _split(
    builder: _Builder,
    source: str,
    target: str,
    guard: tuple[str, str, int],
    read: Read,
    write: Write,
    mid: str | None = None,
) -> None:
    # One read followed by one write in the same instant; w2 pins the instant.
    mid = mid or f"{source}__mid_{target}"
    builder.add(_edge(source, mid, guard, op=read, resets=("w2",)))
    builder.add(_edge(mid, target, ("w2", "=", 0), op=write, resets=("y1",)))


def three_cta_alphabet(m: TwoCounterMachine) -> tuple[str, ...]:
    messages: list[str] = []
    for i, ins in enumerate(m.instructions):
        if isinstance(ins, (Inc, Dec)):
            kind = "inc" if isinstance(ins, Inc) else "dec"
            messages.append(_message(i, f"{kind}{ins.counter}", ins.goto))
        elif isinstance(ins, IfZero):
            zero, pos = ("alpha", "beta") if ins.counter == 1 else ("gamma", "zeta")
            messages.append(_message(i, zero, ins.zero))
            messages.append(_message(i, pos, ins.pos))
    return tuple(dict.fromkeys(messages)) + ("zero1", "zero2")


def gen_three_cta(m: TwoCounterMachine, ghosts: bool = False) -> Network:
    """Encode ``m`` as ``A1 -c12-> A2 -c23-> A3``.

    ``A1`` runs the machine and announces each step on ``c12``; ``A2`` follows
    and forwards on ``c23``; ``A3`` follows ``A2``. With ``ghosts`` every
    automaton gets an extra clock ``g_Ak`` that is never tested nor reset.
    """
    problems = m.validate()
    if problems:
        raise ValueError(f"Invalid counter machine: {problems[0]}.")
    ghost = {k: (f"g_A{k}",) if ghosts else () for k in (1, 2, 3)}
    a1 = _Builder("A1", ("x1",) + ghost[1])
    a2 = _Builder("A2", ("y1", "w2") + ghost[2])
    a3 = _Builder("A3", ("z1",) + ghost[3])
    for builder in (a1, a2, a3):
        for i in range(len(m.instructions)):
            builder.location(f"l{i}")

    for i, ins in enumerate(m.instructions):
        here = f"l{i}"
        if isinstance(ins, (Inc, Dec)):
            kind = "inc" if isinstance(ins, Inc) else "dec"
            d1, d2, d3 = WIDGET_DURATIONS[(kind, ins.counter)]
            msg = _message(i, f"{kind}{ins.counter}", ins.goto)
            there = f"l{ins.goto}"
            a1.add(_edge(here, there, ("x1", "=", d1), op=Write("c12", msg), resets=("x1",)))
            _split(a2, here, there, ("y1", "=", d2), Read("c12", msg), Write("c23", msg))
            a3.add(_edge(here, there, ("z1", "=", d3), op=Read("c23", msg), resets=("z1",)))
        elif isinstance(ins, IfZero) and ins.counter == 1:
            _zero_check_first(a1, a2, a3, i, ins)
        elif isinstance(ins, IfZero):
            _zero_check_second(a1, a2, a3, i, ins)

    halt = f"l{m.halt}"
    net = Network(
        (a1.build("l0", (halt,)), a2.build("l0", (halt,)), a3.build("l0", (halt,))),
        (),
        (Channel("c12", "A1", "A2"), Channel("c23", "A2", "A3")),
        three_cta_alphabet(m),
    )
    logger.debug(
        "three-automata encoding: %s locations",
        "/".join(str(len(a.locations)) for a in net.automata),
    )
    return net


def _zero_check_first(a1: _Builder, a2: _Builder, a3: _Builder, i: int, ins: IfZero) -> None:
    here = f"l{i}"
    branches = (("alpha", ins.zero, ZERO_AGE), ("beta", ins.pos, POSITIVE_AGE))
    announced = f"{here}__zero1"
    a1.add(_edge(here, announced, ("x1", "=", 0), op=Write("c12", "zero1")))
    for kind, goto, age in branches:
        there = f"l{goto}"
        msg = _message(i, kind, goto)
        a1.add(_edge(announced, there, ("x1", "=", 0), op=Write("c12", msg), resets=("x1",)))
        checked = f"{here}__{kind}"
        a2.add(_edge(here, checked, ("y1", "=", 0), op=Read("c12", "zero1", age)))
        _split(a2, checked, there, ("y1", "=", 0), Read("c12", msg), Write("c23", msg))
        a3.add(_edge(here, there, ("z1", "=", 0), op=Read("c23", msg), resets=("z1",)))


def _zero_check_second(a1: _Builder, a2: _Builder, a3: _Builder, i: int, ins: IfZero) -> None:
    here = f"l{i}"
    branches = (("gamma", ins.zero, ZERO_AGE), ("zeta", ins.pos, POSITIVE_AGE))
    announced = f"{here}__zero2"
    a2.add(_edge(here, announced, ("y1", "=", 0), op=Write("c23", "zero2")))
    for kind, goto, age in branches:
        there = f"l{goto}"
        msg = _message(i, kind, goto)
        a1.add(_edge(here, there, ("x1", "=", 0), op=Write("c12", msg), resets=("x1",)))
        _split(
            a2,
            announced,
            there,
            ("y1", "=", 0),
            Read("c12", msg),
            Write("c23", msg),
            mid=f"{announced}__{kind}_mid_{there}",
        )
        checked = f"{here}__{kind}"
        a3.add(_edge(here, checked, ("z1", "=", 0), op=Read("c23", "zero2", age)))
        a3.add(_edge(checked, there, ("z1", "=", 0), op=Read("c23", msg), resets=("z1",)))


# Subset sum


def gen_subset_sum(values: Iterable[int], target: int) -> Network:
    """``B`` reaches ``r_f`` with an empty channel iff some subset of ``values`` sums to ``target``."""
    values = list(values)
    if not values:
        raise ValueError("Subset-sum instance needs at least one value.")
    if any(v <= 0 for v in values):
        raise ValueError("Subset-sum values must be positive.")
    if target < 0:
        raise ValueError("Subset-sum target must be >= 0.")
    n = len(values)
    messages = tuple(f"a{i}" for i in range(1, n + 1))

    writer = _Builder("A", ())
    reader = _Builder("B", ("x", "y"))
    for i, (value, msg) in enumerate(zip(values, messages), start=1):
        writer.add(_edge(f"s{i - 1}", f"s{i}", op=Write("c", msg)))
        taken = Read("c", msg)
        reader.add(_edge(f"r{i - 1}", f"r{i}", ("x", "=", value), op=taken, resets=("x",)))
        reader.add(_edge(f"r{i - 1}", f"r{i}", ("x", "=", 0), op=taken))
    reader.add(_edge(f"r{n}", "r_f", ("x", "=", 0), ("y", "=", target)))
    return Network(
        (writer.build("s0"), reader.build("r0", ("r_f",))),
        (),
        (Channel("c", "A", "B"),),
        messages,
    )


def subset_sum_oracle(values: Iterable[int], target: int) -> bool:
    sums = {0}
    for value in values:
        sums |= {s + value for s in sums if s + value <= target}
    return target in sums


# Two-counter cross-check


@dataclass(frozen=True)
class Boundary:
    """Entry of all three automata into the ``index``-th instruction of the run."""

    index: int
    instruction: int
    expected: tuple[int, int]
    observed: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "instruction": self.instruction,
            "expected": list(self.expected),
            "observed": list(self.observed),
        }


@dataclass(frozen=True)
class ZeroCheck:
    index: int
    instruction: int
    counter: int
    age: int | float
    branch: str
    counter_value: int

    @property
    def ok(self) -> bool:
        is_zero = self.branch in ("alpha", "gamma")
        return (self.age == 0) == is_zero == (self.counter_value == 0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "instruction": self.instruction,
            "counter": self.counter,
            "age": self.age,
            "branch": self.branch,
            "counter_value": self.counter_value,
        }


@dataclass
class CrosscheckReport:
    ok: bool
    halted: bool
    boundaries: list[Boundary] = field(default_factory=list)
    zero_checks: list[ZeroCheck] = field(default_factory=list)
    divergence: str | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "halted": self.halted,
            "boundaries": [b.to_dict() for b in self.boundaries],
            "zero_checks": [z.to_dict() for z in self.zero_checks],
            "divergence": self.divergence,
            "stats": self.stats.to_dict(),
        }


def _instruction_of(location: str) -> int | None:
    if location.startswith("l") and location[1:].isdigit():
        return int(location[1:])
    return None


def _entries(net: Network, result: Reached) -> list[list[tuple[int, int]]]:
    """Per automaton, ``(instruction, ghost value)`` at every instruction entry."""
    ghost_slots = [a.clock_index[f"g_{a.id}"] for a in net.automata]
    initial = result.initial
    entries: list[list[tuple[int, int]]] = [
        [(_instruction_of(initial.locations[k]) or 0, int(initial.valuations[k][slot]))]
        for k, slot in enumerate(ghost_slots)
    ]
    for item in result.trace:
        step = item.step
        if not isinstance(step, Discrete):
            continue
        k = net.automaton_index[step.automaton]
        instruction = _instruction_of(item.configuration.locations[k])
        if instruction is not None:
            value = item.configuration.valuations[k][ghost_slots[k]]
            entries[k].append((instruction, int(value)))
    return entries


def _zero_reads(
    net: Network, m: TwoCounterMachine, result: Reached, run: list[tuple[int, int, int]]
) -> list[ZeroCheck]:
    checks: list[ZeroCheck] = []
    readers = {"zero1": "A2", "zero2": "A3"}
    position = {a.id: 0 for a in net.automata}
    pending: dict[str, tuple[int, int | float]] = {}
    previous: Configuration = result.initial
    for item in result.trace:
        step = item.step
        if isinstance(step, Discrete):
            automaton = net.automaton(step.automaton)
            op = automaton.transitions[step.transition].op
            k = net.automaton_index[step.automaton]
            if isinstance(op, Read):
                head = previous.channels[net.channel_index[op.channel]].head
                assert head is not None
                if op.message in readers and readers[op.message] == step.automaton:
                    pending[step.automaton] = (position[step.automaton], head[1])
                elif step.automaton in pending:
                    index, age = pending.pop(step.automaton)
                    branch = op.message.split(":")[1]
                    pc, c1, c2 = run[index]
                    ins = m.instructions[pc]
                    assert isinstance(ins, IfZero)
                    checks.append(
                        ZeroCheck(index, pc, ins.counter, age, branch, c1 if ins.counter == 1 else c2)
                    )
            if _instruction_of(item.configuration.locations[k]) is not None:
                position[step.automaton] += 1
        previous = item.configuration
    return checks


def crosscheck_gadget(
    m: TwoCounterMachine,
    steps: int,
    *,
    max_channel_len: int | None = None,
    max_explore_steps: int | None = None,
) -> CrosscheckReport:
    """Co-simulate ``m`` with the ghost-instrumented three-automata encoding.

    At each instruction boundary the ghost differences ``g_A2 - g_A1`` and
    ``g_A3 - g_A2`` must equal the counters, and every zero marker must be
    read at age 0 exactly when the tested counter is zero.
    """
    outcome = run_2cm(m, steps)
    if isinstance(outcome, Stuck):
        raise ValueError(f"Counter machine decrements zero at l{outcome.pc}.")
    run = boundaries(m, steps)
    net = gen_three_cta(m, ghosts=True)
    if isinstance(outcome, Halted):
        halt = f"l{m.halt}"
        target = Target((("A1", halt), ("A2", halt), ("A3", halt)), channel_empty=True)
    else:
        assert isinstance(outcome, Running)
        target = Target((("A3", f"l{outcome.pc}"),))
    bounds = ExploreBounds(
        max_steps=max_explore_steps or 10 * (len(run) + 1),
        max_channel_len=max_channel_len or 2 * len(run) + 2,
        age_cap=2,
        cap_clocks=False,
    )
    result = explore_reach(net, bounds, target)
    if not isinstance(result, Reached):
        return CrosscheckReport(
            False,
            isinstance(outcome, Halted),
            divergence="The encoding did not reach the expected instruction within bounds.",
            stats=result.stats,
        )

    entries = _entries(net, result)
    report = CrosscheckReport(True, isinstance(outcome, Halted), stats=result.stats)
    for h in range(min(len(run), *(len(e) for e in entries))):
        pc, c1, c2 = run[h]
        (i1, g1), (i2, g2), (i3, g3) = (e[h] for e in entries)
        boundary = Boundary(h, pc, (c1, c2), (g2 - g1, g3 - g2))
        report.boundaries.append(boundary)
        if (i1, i2, i3) != (pc, pc, pc):
            report.ok = False
            report.divergence = (
                f"Boundary {h}: expected l{pc} in every automaton, got l{i1}/l{i2}/l{i3}."
            )
            break
        if not boundary.ok:
            report.ok = False
            report.divergence = (
                f"Boundary {h} at l{pc}: counters ({c1},{c2}) but ghost differences "
                f"({g2 - g1},{g3 - g2})."
            )
            break
    report.zero_checks = _zero_reads(net, m, result, run)
    if report.ok:
        for check in report.zero_checks:
            if not check.ok:
                report.ok = False
                report.divergence = (
                    f"Zero check at boundary {check.index} (l{check.instruction}): marker age "
                    f"{check.age}, branch {check.branch}, counter c{check.counter}="
                    f"{check.counter_value}."
                )
                break
    logger.info(
        "crosscheck: %d boundaries, %d zero checks, ok=%s",
        len(report.boundaries),
        len(report.zero_checks),
        report.ok,
    )
    return report
