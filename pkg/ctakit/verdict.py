"""Verdicts emitted by the reachability commands and their JSONL log."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any


class Status(Enum):
    REACHABLE = "reachable"
    UNREACHABLE = "unreachable"
    EXHAUSTED = "exhausted"
    ERROR = "error"


class Method(Enum):
    EXPLORE = "explore"
    OCA = "oca"
    BMPS = "bmps"


@dataclass
class Verdict:
    status: Status
    method: Method
    witness: list[dict[str, Any]] | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    message: str | None = None

    def __post_init__(self) -> None:
        if (self.status is Status.REACHABLE) != (self.witness is not None):
            raise ValueError("A witness is present exactly when the status is reachable.")
        if self.status is Status.UNREACHABLE and self.method is not Method.OCA:
            raise ValueError("Only the one-counter method proves unreachability.")

    def to_dict(self, *, include_timing: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "status": self.status.value,
            "method": self.method.value,
            "witness": self.witness,
            "stats": dict(self.stats),
        }
        if self.message is not None:
            out["message"] = self.message
        if include_timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out

    def to_json(self, *, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing=include_timing), sort_keys=True)


def write_verdict_jsonl(path: str | Path, verdict: Verdict, extra: dict | None = None) -> None:
    entry = verdict.to_dict()
    entry["timestamp"] = int(time.time())
    if extra:
        entry.update(extra)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as handle:
        handle.write(json.dumps(entry, sort_keys=True) + "\n")
