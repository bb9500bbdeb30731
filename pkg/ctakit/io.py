"""Document loading and saving helpers."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import yaml

from .errors import ModelSyntaxError

YAML_SUFFIXES = {".yml", ".yaml"}


def parse_document(text: str, *, yaml_syntax: bool = False) -> Any:
    """Parse JSON (or YAML) text, reporting syntax errors with a position."""
    if yaml_syntax:
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            if mark is not None:
                raise ModelSyntaxError(
                    f"Invalid YAML: {getattr(exc, 'problem', exc)}",
                    mark.line + 1,
                    mark.column + 1,
                ) from exc
            raise ModelSyntaxError(f"Invalid YAML: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(f"Invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc


def load_document(path: str | Path) -> Any:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_document(text, yaml_syntax=path.suffix.lower() in YAML_SUFFIXES)


def save_json(path: str | Path, data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
