"""Backward saturation (pre*) for pushdown systems.

Configurations are ``(control, stack)`` with the stack written top-first. A
finite automaton over stack words (the P-automaton) recognises the target
configurations; saturation adds transitions until it recognises every
configuration that can reach a target. Each added transition remembers the
rule and the transitions that justified it, which is enough to rebuild a
rule-level witness afterwards.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

logger = logging.getLogger(__name__)

FINAL = ("__final__",)

Edge = tuple[Hashable, str, Hashable]


@dataclass(frozen=True)
class Rule:
    """``<source, top> -> <target, word>``; ``word[0]`` becomes the new top."""

    source: Hashable
    top: str
    target: Hashable
    word: tuple[str, ...] = ()
    label: Any = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.word) > 2:
            raise ValueError("Pushdown rules may write at most two stack symbols.")

    def apply(self, stack: Sequence[str]) -> tuple[str, ...]:
        if not stack or stack[0] != self.top:
            raise ValueError(f"Rule expects top {self.top!r}.")
        return tuple(self.word) + tuple(stack[1:])


@dataclass
class Saturation:
    """Saturated P-automaton recognising pre*(targets)."""

    edges: dict[tuple[Hashable, str], list[Hashable]]
    justification: dict[Edge, tuple[Rule, tuple[Edge, ...]] | None]

    @property
    def size(self) -> int:
        return len(self.justification)

    def _path(self, control: Hashable, stack: Sequence[str]) -> list[Edge] | None:
        # Subset simulation keeping one path per reached state.
        layer: dict[Hashable, list[Edge]] = {control: []}
        for symbol in stack:
            next_layer: dict[Hashable, list[Edge]] = {}
            for state, path in layer.items():
                for target in self.edges.get((state, symbol), ()):
                    if target not in next_layer:
                        next_layer[target] = path + [(state, symbol, target)]
            layer = next_layer
            if not layer:
                return None
        return layer.get(FINAL)

    def accepts(self, control: Hashable, stack: Sequence[str]) -> bool:
        return self._path(control, stack) is not None

    def witness(self, control: Hashable, stack: Sequence[str]) -> list[Rule] | None:
        """Rules leading from ``(control, stack)`` to a target, or None."""
        path = self._path(control, stack)
        if path is None:
            return None
        rules: list[Rule] = []
        pending = deque(path)
        while pending:
            first = pending[0]
            reason = self.justification[first]
            if reason is None:
                break
            rule, consumed = reason
            rules.append(rule)
            pending.popleft()
            pending.extendleft(reversed(consumed))
        return rules


def pre_star(
    rules: Iterable[Rule],
    targets: Iterable[Hashable],
    alphabet: Iterable[str],
) -> Saturation:
    """Saturate the automaton accepting ``{(t, w) : t in targets, w nonempty}``."""
    rules = list(rules)
    alphabet = tuple(alphabet)
    by_head: dict[tuple[Hashable, str], list[Rule]] = defaultdict(list)
    for rule in rules:
        if rule.word:
            by_head[(rule.target, rule.word[0])].append(rule)

    edges: dict[tuple[Hashable, str], list[Hashable]] = defaultdict(list)
    justification: dict[Edge, tuple[Rule, tuple[Edge, ...]] | None] = {}
    derived: dict[tuple[Hashable, str], list[tuple[Rule, Edge]]] = defaultdict(list)
    worklist: deque[Edge] = deque()
    in_rel: set[Edge] = set()

    def offer(edge: Edge, reason: tuple[Rule, tuple[Edge, ...]] | None) -> None:
        if edge not in justification:
            justification[edge] = reason
            worklist.append(edge)

    for target in dict.fromkeys(targets):
        for symbol in alphabet:
            offer((target, symbol, FINAL), None)
    for symbol in alphabet:
        offer((FINAL, symbol, FINAL), None)
    for rule in rules:
        if not rule.word:
            offer((rule.source, rule.top, rule.target), (rule, ()))

    while worklist:
        edge = worklist.popleft()
        if edge in in_rel:
            continue
        in_rel.add(edge)
        state, symbol, successor = edge
        edges[(state, symbol)].append(successor)

        for rule in by_head.get((state, symbol), ()):
            if len(rule.word) == 1:
                offer((rule.source, rule.top, successor), (rule, (edge,)))
            else:
                second = rule.word[1]
                derived[(successor, second)].append((rule, edge))
                for further in list(edges.get((successor, second), ())):
                    offer(
                        (rule.source, rule.top, further),
                        (rule, (edge, (successor, second, further))),
                    )
        for rule, first in list(derived.get((state, symbol), ())):
            offer((rule.source, rule.top, successor), (rule, (first, edge)))

    logger.debug("pre* saturation: %d rules, %d automaton edges", len(rules), len(in_rel))
    return Saturation(dict(edges), justification)
