"""Context-switch accounting along CTA traces.

A context is a maximal stretch in which one automaton performs all channel
operations and reads from at most one channel. Steps that touch no channel
leave the current context untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .semantics import Configuration, Step, channel_operation, replay
from .types import Network


@dataclass(frozen=True)
class ContextState:
    active: str | None = None
    reading: str | None = None
    index: int = 0

    def after(self, kind: str, automaton: str, channel: str) -> ContextState:
        """Context state after ``automaton`` performs a ``kind`` operation on ``channel``."""
        if self.active is None:
            return ContextState(automaton, channel if kind == "read" else None, self.index)
        if kind == "write":
            if self.active == automaton:
                return self
            return ContextState(automaton, None, self.index + 1)
        if self.active == automaton and self.reading in (None, channel):
            return ContextState(automaton, channel, self.index)
        return ContextState(automaton, channel, self.index + 1)


@dataclass(frozen=True)
class ContextAnnotation:
    indices: tuple[int, ...]
    switches: int
    active: tuple[str | None, ...] = ()

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "switches": self.switches,
            "active": list(self.active),
        }


def context_states(net: Network, steps: Sequence[Step]) -> list[ContextState]:
    """Context state after each step (no replay)."""
    state = ContextState()
    out: list[ContextState] = []
    for step in steps:
        operation = channel_operation(net, step)
        if operation is not None:
            state = state.after(*operation)
        out.append(state)
    return out


def annotate_contexts(
    net: Network,
    steps: Sequence[Step],
    initial: Configuration | None = None,
) -> ContextAnnotation:
    """Replay ``steps`` and assign each a context index.

    Raises ReplayError naming the first step that is not enabled.
    """
    replay(net, steps, initial)
    states = context_states(net, steps)
    return ContextAnnotation(
        indices=tuple(s.index for s in states),
        switches=states[-1].index if states else 0,
        active=tuple(s.active for s in states),
    )
