"""Graphviz DOT export for region automata, one-counter systems and multistack control graphs."""

from __future__ import annotations

from pathlib import Path
from typing import Hashable, Iterable, Union

from .bmps import Bmps, MultistackSystem, control_graph
from .oca import OneCounterSystem
from .regions import RegionAutomaton

Exportable = Union[RegionAutomaton, OneCounterSystem, MultistackSystem]

HEADER = """\
  rankdir = LR;
  node [shape = box, fontsize = 11];
"""


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render(
    name: str,
    nodes: Iterable[tuple[Hashable, str, bool]],
    edges: Iterable[tuple[Hashable, Hashable, str, bool]],
) -> str:
    ids: dict[Hashable, str] = {}
    lines = [f"digraph {name} {{", HEADER.rstrip("\n")]
    for node, label, initial in nodes:
        ids[node] = f"n{len(ids)}"
        style = ", penwidth = 2" if initial else ""
        lines.append(f"  {ids[node]} [label = {_quote(label)}{style}];")
    for source, target, label, dashed in edges:
        style = ", style = dashed" if dashed else ""
        lines.append(f"  {ids[source]} -> {ids[target]} [label = {_quote(label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def region_to_dot(region: RegionAutomaton) -> str:
    """Ticks are dashed; discrete edges carry their channel operation."""
    initial = set(region.initial)
    return _render(
        "region",
        ((s, str(s), s in initial) for s in region.states),
        ((e.source, e.target, region.label(e), e.is_tick) for e in region.edges),
    )


def oca_to_dot(ocs: OneCounterSystem) -> str:
    initial = set(ocs.initial)

    def label(t) -> str:
        if t.kind == "int":
            return t.rule
        return f"{t.rule} {t.kind} {t.symbol}"

    return _render(
        "oca",
        ((s, s.label(), s in initial) for s in ocs.states),
        ((t.source, t.target, label(t), False) for t in ocs.transitions),
    )


def bmps_to_dot(mps: MultistackSystem, limit: int = 10_000) -> str:
    """Control graph of ``mps`` with stack contents abstracted away."""
    controls, transitions = control_graph(mps, limit)
    known = set(controls)
    initial = set(mps.initial)
    if isinstance(mps, Bmps):
        describe = lambda c: c.label(mps.network)  # noqa: E731
    else:
        describe = str
    return _render(
        "mps",
        ((c, describe(c), c in initial) for c in controls),
        (
            (t.source, t.target, t.label(), t.action == "tick")
            for t in transitions
            if t.target in known
        ),
    )


def to_dot(obj: Exportable) -> str:
    if isinstance(obj, RegionAutomaton):
        return region_to_dot(obj)
    if isinstance(obj, OneCounterSystem):
        return oca_to_dot(obj)
    if isinstance(obj, MultistackSystem):
        return bmps_to_dot(obj)
    raise TypeError(f"Cannot export {type(obj).__name__} as DOT.")


def export_dot(obj: Exportable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_dot(obj), encoding="utf-8")
