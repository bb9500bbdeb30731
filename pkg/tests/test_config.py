from pathlib import Path

import pytest

from ctakit.config import VerifierConfig, with_overrides
from ctakit.validation import validate_config


def test_defaults():
    config = VerifierConfig()
    assert config.max_steps == 40
    assert config.age_cap is None
    assert config.effective_phase_bound == 3 * (config.contexts + 1)


def test_from_env(monkeypatch):
    monkeypatch.setenv("CTA_MAX_STEPS", "12")
    monkeypatch.setenv("CTA_CONTEXTS", "2")
    monkeypatch.setenv("CTA_AGE_CAP", "3")
    monkeypatch.setenv("CTA_PHASE_BOUND", "none")
    monkeypatch.setenv("CTA_LOG_LEVEL", "debug")
    monkeypatch.setenv("CTA_VERDICTS_JSONL", "/tmp/verdicts.jsonl")
    config = VerifierConfig.from_env()
    assert config.max_steps == 12
    assert config.contexts == 2
    assert config.age_cap == 3
    assert config.phase_bound is None
    assert config.log_level == "DEBUG"
    assert config.verdicts_jsonl_path == Path("/tmp/verdicts.jsonl")


def test_from_env_disables_jsonl(monkeypatch):
    monkeypatch.setenv("CTA_VERDICTS_JSONL", "false")
    assert VerifierConfig.from_env().verdicts_jsonl_path is None


def test_with_overrides_skips_none():
    config = VerifierConfig()
    updated = with_overrides(config, max_steps=5, contexts=None)
    assert updated.max_steps == 5
    assert updated.contexts == config.contexts
    assert config.max_steps == 40


@pytest.mark.parametrize(
    "changes",
    [
        {"max_steps": -1},
        {"contexts": -1},
        {"phase_bound": 0},
        {"max_stack_depth": 0},
        {"threads": 0},
        {"log_level": "TRACE"},
    ],
)
def test_validate_config_rejects(changes):
    with pytest.raises(ValueError):
        validate_config(VerifierConfig(**changes))


def test_validate_config_warnings():
    assert validate_config(VerifierConfig()) == []
    warnings = validate_config(VerifierConfig(threads=16, max_delay_per_step=2))
    assert len(warnings) == 2
