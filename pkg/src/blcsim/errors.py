"""Exception types shared across the simulator."""

from __future__ import annotations


class GeometryError(ValueError):
    """A geometric construction has no (or a degenerate) solution."""


class InfeasibleError(GeometryError):
    """A scenario's constraints cannot be satisfied by any source placement."""


class StateError(ValueError):
    """A quantum state violates a contract (normalization, product form)."""


class ImpossibleOutcomeError(StateError):
    """A zero-probability outcome was requested."""


class TimelineError(ValueError):
    """Timeline boundaries are misordered or incomplete."""


class ConfigError(ValueError):
    """Scenario configuration is syntactically or semantically invalid.

    ``line`` is the 1-based line number for syntax errors; ``key`` names the
    offending entry for semantic errors.
    """

    def __init__(self, message: str, *, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        prefix = ""
        if line is not None:
            prefix = f"line {line}: "
        if key is not None:
            prefix += f"key '{key}': "
        super().__init__(prefix + message)
