"""Arithmetic over the capped value domain [K] = {0, ..., K, inf}."""

from __future__ import annotations

from typing import Iterable

from .types import INF, ClockConstraint, Value


def cap(value: Value, bound: int) -> Value:
    """Saturate ``value`` to ``INF`` once it exceeds ``bound``."""
    return INF if value > bound else value


def capped_add(left: Value, right: Value, bound: int) -> Value:
    return cap(left + right, bound)


def capped_values(bound: int) -> tuple[Value, ...]:
    return tuple(range(bound + 1)) + (INF,)


def tick(values: tuple[Value, ...], bound: int) -> tuple[Value, ...]:
    return tuple(cap(v + 1, bound) for v in values)


def reset(
    values: tuple[Value, ...], index: dict[str, int], clocks: Iterable[str]
) -> tuple[Value, ...]:
    positions = {index[c] for c in clocks if c in index}
    if not positions:
        return values
    return tuple(0 if i in positions else v for i, v in enumerate(values))


def guard_holds(
    guard: ClockConstraint,
    local_index: dict[str, int],
    local_values: tuple[Value, ...],
    global_index: dict[str, int] | None = None,
    global_values: tuple[Value, ...] = (),
) -> bool:
    """Evaluate a guard against local and global valuations.

    Clocks at ``INF`` satisfy only ``>`` and ``>=`` atoms, which is exactly the
    float comparison behaviour.
    """
    for atom in guard.atoms:
        if atom.clock in local_index:
            value = local_values[local_index[atom.clock]]
        elif global_index is not None and atom.clock in global_index:
            value = global_values[global_index[atom.clock]]
        else:
            raise KeyError(atom.clock)
        if not atom.holds(value):
            return False
    return True
