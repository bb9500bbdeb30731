"""Search statistics and logging."""

from __future__ import annotations

import logging
from dataclasses import dataclass


@dataclass
class SearchStats:
    states: int = 0
    transitions: int = 0
    bound_hits: int = 0
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict[str, int | float]:
        return {
            "states": self.states,
            "transitions": self.transitions,
            "bound_hits": self.bound_hits,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def log_search_stats(method: str, stats: SearchStats) -> None:
    logger = logging.getLogger("ctakit.metrics")
    logger.info(
        "method=%s states=%d transitions=%d bound_hits=%d elapsed_ms=%.2f",
        method,
        stats.states,
        stats.transitions,
        stats.bound_hits,
        stats.elapsed_ms,
    )
