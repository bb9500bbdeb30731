"""Model documents and topology analysis for CTA networks.

A model is a JSON object::

    {
      "automata": [{"id": "A", "locations": ["s1", "s2"], "initial": ["s1"],
                    "final": [], "clocks": ["x"],
                    "transitions": [{"from": "s1", "to": "s2",
                                     "guard": [{"clock": "x", "rel": "<", "bound": 1}],
                                     "op": {"write": {"channel": "c", "msg": "a"}},
                                     "resets": []}]}],
      "global_clocks": [],
      "channels": [{"id": "c", "from": "A", "to": "B"}],
      "alphabet": ["a"]
    }

``op`` is ``"nop"`` or one of ``{"write": {channel, msg}}`` and
``{"read": {channel, msg, age}}`` where ``age`` is an interval string such as
``"[1,1]"`` or ``"(0,inf)"``. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .errors import ModelReferenceError, ModelSyntaxError
from .io import load_document, parse_document
from .types import (
    NOP,
    Atom,
    Automaton,
    Channel,
    ChannelOp,
    ClockConstraint,
    Interval,
    Network,
    Nop,
    Read,
    Transition,
    Write,
    normalize_relation,
)

_TOP_KEYS = {"automata", "global_clocks", "channels", "alphabet"}
_AUTOMATON_KEYS = {"id", "locations", "initial", "final", "clocks", "transitions"}
_TRANSITION_KEYS = {"from", "to", "guard", "op", "resets"}
_ATOM_KEYS = {"clock", "rel", "bound"}
_CHANNEL_KEYS = {"id", "from", "to"}


class Classification(Enum):
    TWO_CHAIN_NO_GLOBALS = "two-chain-no-globals"
    POLYFOREST = "polyforest"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class TopologyReport:
    max_constant: int
    underlying_acyclic: bool
    classification: Classification
    has_globals: bool
    fan_in: dict[str, int] = field(default_factory=dict)
    fan_out: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_constant": self.max_constant,
            "underlying_acyclic": self.underlying_acyclic,
            "classification": self.classification.value,
            "has_globals": self.has_globals,
            "fan_in": dict(self.fan_in),
            "fan_out": dict(self.fan_out),
        }


def _object(value: Any, allowed: set[str], where: str, required: tuple[str, ...] = ()) -> dict:
    if not isinstance(value, dict):
        raise ModelSyntaxError(f"Expected an object for {where}.")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ModelSyntaxError(f"Unknown key {unknown[0]!r} in {where}.")
    for key in required:
        if key not in value:
            raise ModelSyntaxError(f"Missing key {key!r} in {where}.")
    return value


def _strings(value: Any, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ModelSyntaxError(f"Expected a list of strings for {where}.")
    return tuple(value)


def _parse_op(raw: Any, where: str) -> ChannelOp:
    if raw is None or raw == "nop":
        return NOP
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ModelSyntaxError(f"Expected 'nop', {{'write': ...}} or {{'read': ...}} for {where}.")
    (kind, body), = raw.items()
    if kind == "nop":
        return NOP
    if kind == "write":
        body = _object(body, {"channel", "msg"}, f"{where}.write", ("channel", "msg"))
        return Write(str(body["channel"]), str(body["msg"]))
    if kind == "read":
        body = _object(body, {"channel", "msg", "age"}, f"{where}.read", ("channel", "msg"))
        try:
            age = Interval.parse(body.get("age", "[0,inf)"))
        except ValueError as exc:
            raise ModelSyntaxError(f"{exc} ({where}.read.age)") from exc
        return Read(str(body["channel"]), str(body["msg"]), age)
    raise ModelSyntaxError(f"Unknown operation {kind!r} in {where}.")


def _parse_guard(raw: Any, where: str) -> ClockConstraint:
    if raw is None:
        return ClockConstraint()
    if not isinstance(raw, list):
        raise ModelSyntaxError(f"Expected a list of constraints for {where}.")
    atoms = []
    for i, item in enumerate(raw):
        item = _object(item, _ATOM_KEYS, f"{where}[{i}]", ("clock", "rel", "bound"))
        bound = item["bound"]
        if not isinstance(bound, int) or isinstance(bound, bool) or bound < 0:
            raise ModelSyntaxError(f"Guard bound must be a natural number in {where}[{i}].")
        try:
            rel = normalize_relation(str(item["rel"]))
        except ValueError as exc:
            raise ModelSyntaxError(f"{exc} ({where}[{i}])") from exc
        atoms.append(Atom(str(item["clock"]), rel, bound))
    return ClockConstraint(tuple(atoms))


def _check_references(net: Network) -> None:
    channels = {c.id: c for c in net.channels}
    automaton_ids = {a.id for a in net.automata}
    for channel in net.channels:
        for end in (channel.source, channel.sink):
            if end not in automaton_ids:
                raise ModelReferenceError(
                    f"Channel {channel.id} refers to unknown automaton {end}.", end
                )
    alphabet = set(net.alphabet)
    for automaton in net.automata:
        locations = set(automaton.locations)
        visible = set(automaton.clocks) | set(net.global_clocks)
        for loc in (*automaton.initial, *automaton.final):
            if loc not in locations:
                raise ModelReferenceError(
                    f"Automaton {automaton.id} refers to unknown location {loc}.", loc
                )
        for index, t in enumerate(automaton.transitions):
            where = f"{automaton.id} transition {index}"
            for loc in (t.source, t.target):
                if loc not in locations:
                    raise ModelReferenceError(f"{where} refers to unknown location {loc}.", loc)
            for clock in sorted(t.guard.clocks | t.resets):
                if clock not in visible:
                    raise ModelReferenceError(f"{where} uses unknown clock {clock}.", clock)
            op = t.op
            if isinstance(op, (Write, Read)):
                channel = channels.get(op.channel)
                if channel is None:
                    raise ModelReferenceError(
                        f"{where} uses unknown channel {op.channel}.", op.channel
                    )
                if isinstance(op, Write) and channel.source != automaton.id:
                    raise ModelReferenceError(
                        f"{where} writes to {op.channel} whose source is {channel.source}.",
                        op.channel,
                    )
                if isinstance(op, Read) and channel.sink != automaton.id:
                    raise ModelReferenceError(
                        f"{where} reads from {op.channel} whose sink is {channel.sink}.",
                        op.channel,
                    )
                if op.message not in alphabet:
                    raise ModelReferenceError(
                        f"{where} uses message {op.message} outside the alphabet.",
                        op.message,
                    )


def network_from_dict(data: Any) -> Network:
    data = _object(data, _TOP_KEYS, "model", ("automata",))
    if not isinstance(data["automata"], list):
        raise ModelSyntaxError("Expected a list for automata.")
    automata = []
    for i, raw in enumerate(data["automata"]):
        where = f"automata[{i}]"
        raw = _object(raw, _AUTOMATON_KEYS, where, ("id", "locations", "initial"))
        transitions = []
        for j, rt in enumerate(raw.get("transitions", [])):
            twhere = f"{where}.transitions[{j}]"
            rt = _object(rt, _TRANSITION_KEYS, twhere, ("from", "to"))
            transitions.append(
                Transition(
                    source=str(rt["from"]),
                    target=str(rt["to"]),
                    guard=_parse_guard(rt.get("guard"), f"{twhere}.guard"),
                    op=_parse_op(rt.get("op"), f"{twhere}.op"),
                    resets=frozenset(_strings(rt.get("resets", []), f"{twhere}.resets")),
                )
            )
        automata.append(
            Automaton(
                id=str(raw["id"]),
                locations=_strings(raw["locations"], f"{where}.locations"),
                initial=_strings(raw["initial"], f"{where}.initial"),
                final=_strings(raw.get("final", []), f"{where}.final"),
                clocks=_strings(raw.get("clocks", []), f"{where}.clocks"),
                transitions=tuple(transitions),
            )
        )
    channels = []
    for i, raw in enumerate(data.get("channels", [])):
        raw = _object(raw, _CHANNEL_KEYS, f"channels[{i}]", ("id", "from", "to"))
        channels.append(Channel(str(raw["id"]), str(raw["from"]), str(raw["to"])))
    net = Network(
        automata=tuple(automata),
        global_clocks=_strings(data.get("global_clocks", []), "global_clocks"),
        channels=tuple(channels),
        alphabet=_strings(data.get("alphabet", []), "alphabet"),
    )
    _check_references(net)
    return net


def parse_model(document: str | Mapping[str, Any]) -> Network:
    """Parse a model document (text or already-decoded object)."""
    data = parse_document(document) if isinstance(document, str) else document
    return network_from_dict(data)


def _op_to_dict(op: ChannelOp) -> Any:
    if isinstance(op, Nop):
        return "nop"
    if isinstance(op, Write):
        return {"write": {"channel": op.channel, "msg": op.message}}
    return {"read": {"channel": op.channel, "msg": op.message, "age": str(op.age)}}


def network_to_dict(net: Network) -> dict[str, Any]:
    return {
        "automata": [
            {
                "id": a.id,
                "locations": list(a.locations),
                "initial": list(a.initial),
                "final": list(a.final),
                "clocks": list(a.clocks),
                "transitions": [
                    {
                        "from": t.source,
                        "to": t.target,
                        "guard": [
                            {"clock": atom.clock, "rel": atom.rel, "bound": atom.bound}
                            for atom in t.guard.atoms
                        ],
                        "op": _op_to_dict(t.op),
                        "resets": sorted(t.resets),
                    }
                    for t in a.transitions
                ],
            }
            for a in net.automata
        ],
        "global_clocks": list(net.global_clocks),
        "channels": [{"id": c.id, "from": c.source, "to": c.sink} for c in net.channels],
        "alphabet": list(net.alphabet),
    }


def serialize_model(net: Network) -> str:
    return json.dumps(network_to_dict(net), indent=2, ensure_ascii=False) + "\n"


def load_model(path: str | Path) -> Network:
    return network_from_dict(load_document(path))


def save_model(path: str | Path, net: Network) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_model(net), encoding="utf-8")


def _underlying_acyclic(net: Network) -> bool:
    parent = {a.id: a.id for a in net.automata}

    def find(node: str) -> str:
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    for channel in net.channels:
        if channel.source not in parent or channel.sink not in parent:
            continue
        left, right = find(channel.source), find(channel.sink)
        if left == right:
            return False
        parent[left] = right
    return True


def analyze_topology(net: Network) -> TopologyReport:
    acyclic = _underlying_acyclic(net)
    has_globals = bool(net.global_clocks)
    if (
        len(net.automata) == 2
        and len(net.channels) == 1
        and net.channels[0].source != net.channels[0].sink
        and not has_globals
    ):
        classification = Classification.TWO_CHAIN_NO_GLOBALS
    elif acyclic:
        classification = Classification.POLYFOREST
    else:
        classification = Classification.CYCLIC
    fan_in = {a.id: 0 for a in net.automata}
    fan_out = {a.id: 0 for a in net.automata}
    for channel in net.channels:
        fan_out[channel.source] = fan_out.get(channel.source, 0) + 1
        fan_in[channel.sink] = fan_in.get(channel.sink, 0) + 1
    return TopologyReport(
        max_constant=net.max_constant,
        underlying_acyclic=acyclic,
        classification=classification,
        has_globals=has_globals,
        fan_in=fan_in,
        fan_out=fan_out,
    )
