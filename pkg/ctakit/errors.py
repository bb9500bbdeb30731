"""Exception types raised by ctakit."""

from __future__ import annotations


class ModelError(ValueError):
    """A model document could not be turned into a Network."""


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ModelReferenceError(ModelError):
    def __init__(self, message: str, ref: str):
        super().__init__(message)
        self.ref = ref


class TopologyError(ValueError):
    """The network does not belong to the topology class an analysis needs."""


class RegionBoundError(ValueError):
    def __init__(self, constant: int, bound: int):
        super().__init__(
            f"Region bound K={bound} is smaller than the guard constant {constant}."
        )
        self.constant = constant
        self.bound = bound


class ReplayError(ValueError):
    def __init__(self, message: str, step_index: int):
        super().__init__(f"Step {step_index}: {message}")
        self.step_index = step_index


class LiftError(RuntimeError):
    """A witness failed its replay certificate."""
