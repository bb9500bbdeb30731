"""Static validation of networks and verifier configuration."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .config import VerifierConfig
from .types import Network, Read, Write


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class ConfigWarning:
    message: str


def _duplicates(items) -> list[str]:
    return sorted(item for item, count in Counter(items).items() if count > 1)


def validate_network(net: Network) -> list[Diagnostic]:
    """Return one diagnostic per violated network invariant."""
    out: list[Diagnostic] = []
    automaton_ids = [a.id for a in net.automata]
    for dup in _duplicates(automaton_ids):
        out.append(Diagnostic("duplicate-automaton", f"duplicate automaton id {dup}"))

    globals_ = set(net.global_clocks)
    for dup in _duplicates(net.global_clocks):
        out.append(Diagnostic("duplicate-clock", f"global clock {dup} declared twice"))

    owners: dict[str, list[str]] = {}
    for automaton in net.automata:
        for clock in automaton.clocks:
            owners.setdefault(clock, []).append(automaton.id)
    for clock, who in sorted(owners.items()):
        if len(who) > 1:
            out.append(
                Diagnostic(
                    "shared-clock",
                    f"clock shared across automata: {clock} in {', '.join(who)}",
                )
            )
        if clock in globals_:
            out.append(
                Diagnostic(
                    "shadowed-global",
                    f"local clock {clock} of {who[0]} is also a global clock",
                )
            )

    known = set(automaton_ids)
    channel_ids = [c.id for c in net.channels]
    for dup in _duplicates(channel_ids):
        out.append(Diagnostic("duplicate-channel", f"duplicate channel id {dup}"))
    for dup in _duplicates((c.source, c.sink) for c in net.channels):
        out.append(
            Diagnostic("duplicate-channel-pair", f"duplicate channel pair {dup[0]}->{dup[1]}")
        )
    channels = {c.id: c for c in net.channels}
    for channel in net.channels:
        for end in (channel.source, channel.sink):
            if end not in known:
                out.append(
                    Diagnostic(
                        "unknown-automaton",
                        f"channel {channel.id} refers to unknown automaton {end}",
                    )
                )
        if channel.source == channel.sink:
            out.append(
                Diagnostic(
                    "self-channel",
                    f"channel {channel.id} connects {channel.source} to itself",
                )
            )

    alphabet = set(net.alphabet)
    for automaton in net.automata:
        locations = set(automaton.locations)
        visible = set(automaton.clocks) | globals_
        for dup in _duplicates(automaton.locations):
            out.append(
                Diagnostic("duplicate-location", f"{automaton.id} declares {dup} twice")
            )
        if not automaton.initial:
            out.append(
                Diagnostic("no-initial", f"automaton {automaton.id} has no initial location")
            )
        for loc in (*automaton.initial, *automaton.final):
            if loc not in locations:
                out.append(
                    Diagnostic(
                        "unknown-location",
                        f"{automaton.id} refers to unknown location {loc}",
                    )
                )
        for index, transition in enumerate(automaton.transitions):
            where = f"{automaton.id} transition {index}"
            for loc in (transition.source, transition.target):
                if loc not in locations:
                    out.append(
                        Diagnostic("unknown-location", f"{where} refers to unknown location {loc}")
                    )
            for clock in sorted(transition.guard.clocks | transition.resets):
                if clock not in visible:
                    out.append(
                        Diagnostic("unknown-clock", f"{where} uses unknown clock {clock}")
                    )
            op = transition.op
            if isinstance(op, (Write, Read)):
                channel = channels.get(op.channel)
                if channel is None:
                    out.append(
                        Diagnostic("unknown-channel", f"{where} uses unknown channel {op.channel}")
                    )
                elif isinstance(op, Write) and channel.source != automaton.id:
                    out.append(
                        Diagnostic(
                            "wrong-direction",
                            f"{where} writes to {op.channel} whose source is {channel.source}",
                        )
                    )
                elif isinstance(op, Read) and channel.sink != automaton.id:
                    out.append(
                        Diagnostic(
                            "wrong-direction",
                            f"{where} reads from {op.channel} whose sink is {channel.sink}",
                        )
                    )
                if op.message not in alphabet:
                    out.append(
                        Diagnostic(
                            "unknown-message",
                            f"{where} uses message {op.message} outside the alphabet",
                        )
                    )
    return out


def validate_config(config: VerifierConfig) -> list[ConfigWarning]:
    warnings: list[ConfigWarning] = []
    if config.max_steps < 0:
        raise ValueError("Max steps must be >= 0.")
    if config.max_channel_len < 0:
        raise ValueError("Max channel length must be >= 0.")
    if config.max_delay_per_step < 0:
        raise ValueError("Max delay per step must be >= 0.")
    if config.age_cap is not None and config.age_cap < 0:
        raise ValueError("Age cap must be >= 0.")
    if config.contexts < 0:
        raise ValueError("Context bound must be >= 0.")
    if config.phase_bound is not None and config.phase_bound < 1:
        raise ValueError("Phase bound must be >= 1.")
    if config.max_stack_depth < 1:
        raise ValueError("Max stack depth must be >= 1.")
    if config.threads < 1:
        raise ValueError("Threads must be >= 1.")
    if config.log_level not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
        raise ValueError("Log level must be one of: DEBUG, INFO, WARNING, ERROR.")
    if config.threads > 8:
        warnings.append(
            ConfigWarning("More than 8 search threads rarely helps under the GIL.")
        )
    if config.max_delay_per_step > 1:
        warnings.append(
            ConfigWarning("Delays above 1 add branching without adding reachable states.")
        )
    return warnings
