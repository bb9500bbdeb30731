"""Seeded random instances for cross-validation sweeps."""

from __future__ import annotations

import random

from .counter_machine import (
    ChannelAutomaton,
    ChannelEdge,
    Dec,
    Halt,
    Halted,
    IfZero,
    Inc,
    Instruction,
    TwoCounterMachine,
    run_2cm,
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
    Read,
    Transition,
    Write,
)

_RELATIONS = ("<", "<=", "=", ">", ">=")


def _random_guard(rng: random.Random, clocks: tuple[str, ...], bound: int) -> ClockConstraint:
    if not clocks or rng.random() < 0.4:
        return TRUE
    return ClockConstraint((Atom(rng.choice(clocks), rng.choice(_RELATIONS), rng.randint(0, bound)),))


def _random_interval(rng: random.Random, bound: int) -> Interval:
    lower = rng.randint(0, bound)
    if rng.random() < 0.5:
        return Interval(lower, rng.random() < 0.7)
    upper = rng.randint(lower, bound)
    if upper == lower:
        return Interval.point(lower)
    return Interval(lower, rng.random() < 0.7, upper, rng.random() < 0.7)


def _random_resets(rng: random.Random, clocks: tuple[str, ...]) -> frozenset[str]:
    return frozenset(c for c in clocks if rng.random() < 0.3)


def _random_automaton(
    rng: random.Random,
    automaton_id: str,
    prefix: str,
    clocks: tuple[str, ...],
    ops: list,
    *,
    max_locations: int,
    max_transitions: int,
    bound: int,
) -> Automaton:
    locations = tuple(f"{prefix}{i}" for i in range(1, rng.randint(1, max_locations) + 1))
    transitions = tuple(
        Transition(
            rng.choice(locations),
            rng.choice(locations),
            _random_guard(rng, clocks, bound),
            rng.choice(ops),
            _random_resets(rng, clocks),
        )
        for _ in range(rng.randint(1, max_transitions))
    )
    final = (rng.choice(locations),)
    return Automaton(automaton_id, locations, (locations[0],), final, clocks, transitions)


def random_two_chain(
    rng: random.Random,
    *,
    max_locations: int = 3,
    bound: int = 2,
    alphabet_size: int = 2,
    max_transitions: int = 4,
) -> Network:
    """Writer ``A`` (clock ``x``) and reader ``B`` (clock ``y``) over one channel."""
    alphabet = tuple("abcdefgh"[:alphabet_size])
    writes = [NOP] + [Write("c", m) for m in alphabet]
    reads = [NOP] + [Read("c", m, _random_interval(rng, bound)) for m in alphabet for _ in range(2)]
    a = _random_automaton(
        rng, "A", "s", ("x",), writes,
        max_locations=max_locations, max_transitions=max_transitions, bound=bound,
    )
    b = _random_automaton(
        rng, "B", "q", ("y",), reads,
        max_locations=max_locations, max_transitions=max_transitions, bound=bound,
    )
    return Network((a, b), (), (Channel("c", "A", "B"),), alphabet)


def random_timed_automaton(
    rng: random.Random, *, max_locations: int = 4, bound: int = 2, max_transitions: int = 6
) -> Network:
    """One channel-free automaton with a single clock."""
    a = _random_automaton(
        rng, "A", "s", ("x",), [NOP],
        max_locations=max_locations, max_transitions=max_transitions, bound=bound,
    )
    return Network((a,))


def random_bounded_context_net(
    rng: random.Random,
    *,
    automata: int | None = None,
    max_locations: int = 3,
    bound: int = 2,
    alphabet_size: int = 2,
    max_transitions: int = 5,
) -> Network:
    """Two or three automata with channels on random ordered pairs."""
    n = automata if automata is not None else rng.randint(2, 3)
    ids = tuple(f"A{i}" for i in range(1, n + 1))
    pairs = [(s, t) for s in ids for t in ids if s != t]
    rng.shuffle(pairs)
    chosen = pairs[: rng.randint(1, len(pairs))]
    channels = tuple(Channel(f"c_{s}_{t}", s, t) for s, t in sorted(chosen))
    alphabet = tuple("abcdefgh"[:alphabet_size])
    built = []
    for k, automaton_id in enumerate(ids, start=1):
        ops: list = [NOP]
        for channel in channels:
            if channel.source == automaton_id:
                ops.extend(Write(channel.id, m) for m in alphabet)
            if channel.sink == automaton_id:
                ops.extend(Read(channel.id, m, _random_interval(rng, bound)) for m in alphabet)
        built.append(
            _random_automaton(
                rng, automaton_id, f"p{k}_", (f"x{k}",), ops,
                max_locations=max_locations, max_transitions=max_transitions, bound=bound,
            )
        )
    return Network(tuple(built), (), channels, alphabet)


def random_channel_automaton(
    rng: random.Random, *, max_states: int = 3, messages: int = 2, max_edges: int = 5
) -> ChannelAutomaton:
    alphabet = tuple("abcdefgh"[:messages])
    states = tuple(f"p{i}" for i in range(rng.randint(1, max_states)))
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        kind = rng.choice(("nop", "write", "write", "read", "read"))
        message = None if kind == "nop" else rng.choice(alphabet)
        edges.append(ChannelEdge(rng.choice(states), kind, message, rng.choice(states)))
    return ChannelAutomaton(states, states[0], alphabet, tuple(edges))


def random_subset_sum(
    rng: random.Random, *, max_size: int = 6, max_value: int = 10, max_target: int = 60
) -> tuple[list[int], int]:
    values = [rng.randint(1, max_value) for _ in range(rng.randint(1, max_size))]
    return values, rng.randint(0, max_target)


def _block(rng: random.Random, start: int) -> list[Instruction]:
    # Instructions of one block placed at index ``start``; control leaves at start+len.
    kind = rng.choice(("inc", "inc", "guarded-dec", "transfer", "test"))
    counter = rng.choice((1, 2))
    other = 3 - counter
    if kind == "inc":
        return [Inc(counter, start + 1)]
    if kind == "guarded-dec":
        return [IfZero(counter, start + 2, start + 1), Dec(counter, start + 2)]
    if kind == "transfer":
        return [IfZero(counter, start + 3, start + 1), Dec(counter, start + 2), Inc(other, start)]
    return [IfZero(counter, start + 1, start + 1)]


def random_counter_machine(
    rng: random.Random, *, blocks: int = 4, max_run: int = 25, attempts: int = 100
) -> TwoCounterMachine:
    """A halting machine made of increments, guarded decrements, transfer loops and tests."""
    for _ in range(attempts):
        instructions: list[Instruction] = []
        for _ in range(rng.randint(1, blocks)):
            instructions.extend(_block(rng, len(instructions)))
        instructions.append(Halt())
        machine = TwoCounterMachine(tuple(instructions))
        outcome = run_2cm(machine, max_run)
        if isinstance(outcome, Halted):
            return machine
    raise ValueError(f"No machine with a run of at most {max_run} steps after {attempts} attempts.")
