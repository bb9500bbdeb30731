"""Configuration for ctakit searches and the command line."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Literal


@dataclass(frozen=True)
class VerifierConfig:
    """Defaults shared by the search backends and the CLI.

    All settings can be overridden via environment variables prefixed with CTA_.
    For example: CTA_THREADS=4

    Attributes:
        max_steps: Depth bound of the explicit exploration.
        max_channel_len: Longest channel word kept by the exploration.
        max_delay_per_step: Largest single time elapse explored.
        age_cap: Ages (and clocks) above this saturate to inf. None uses K.
        contexts: Context-switch bound B of the multistack translation.
        phase_bound: Phase bound of the multistack search. None uses 3 per context.
        max_stack_depth: Stack height budget of the multistack search.
        threads: Worker threads used to expand exploration frontiers.
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR).
        verdicts_jsonl_path: When set, every CLI verdict is appended here.
    """

    # Exploration bounds
    max_steps: int = 40
    max_channel_len: int = 6
    max_delay_per_step: int = 1
    age_cap: int | None = None

    # Multistack search
    contexts: int = 4
    phase_bound: int | None = None
    max_stack_depth: int = 32

    # Runtime
    threads: int = 1
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    verdicts_jsonl_path: Path | None = None

    @property
    def effective_phase_bound(self) -> int:
        if self.phase_bound is not None:
            return self.phase_bound
        return 3 * (self.contexts + 1)

    @classmethod
    def from_env(cls) -> VerifierConfig:
        """Create config from environment variables."""

        def get_env(key: str, default: str) -> str:
            return os.environ.get(f"CTA_{key}", default)

        def get_env_int(key: str, default: int) -> int:
            val = os.environ.get(f"CTA_{key}")
            return int(val) if val else default

        def get_env_optional_int(key: str, default: int | None) -> int | None:
            val = os.environ.get(f"CTA_{key}")
            if val is None:
                return default
            if val.lower() in ("", "none", "null"):
                return None
            return int(val)

        def get_env_path(key: str, default: Path | None) -> Path | None:
            val = os.environ.get(f"CTA_{key}")
            if val is None:
                return default
            if val.lower() in ("", "none", "null", "false"):
                return None
            return Path(val)

        defaults = cls()
        return cls(
            max_steps=get_env_int("MAX_STEPS", defaults.max_steps),
            max_channel_len=get_env_int("MAX_CHANNEL", defaults.max_channel_len),
            max_delay_per_step=get_env_int("MAX_DELAY", defaults.max_delay_per_step),
            age_cap=get_env_optional_int("AGE_CAP", defaults.age_cap),
            contexts=get_env_int("CONTEXTS", defaults.contexts),
            phase_bound=get_env_optional_int("PHASE_BOUND", defaults.phase_bound),
            max_stack_depth=get_env_int("MAX_STACK_DEPTH", defaults.max_stack_depth),
            threads=get_env_int("THREADS", defaults.threads),
            log_level=get_env("LOG_LEVEL", defaults.log_level).upper(),  # type: ignore[arg-type]
            verdicts_jsonl_path=get_env_path(
                "VERDICTS_JSONL", defaults.verdicts_jsonl_path
            ),
        )


def with_overrides(config: VerifierConfig, **changes: object) -> VerifierConfig:
    """Return a copy of ``config`` with the non-None ``changes`` applied."""
    applied = {key: value for key, value in changes.items() if value is not None}
    return replace(config, **applied)
