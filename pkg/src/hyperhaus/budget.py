"""Values reported together with a discretization error bound."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ErrorBudget"]


@dataclass(frozen=True)
class ErrorBudget:
    """A computed length ``value`` whose exact counterpart lies within ``slack``."""

    value: float
    slack: float = 0.0

    def __post_init__(self):
        if self.slack < 0:
            raise ValueError("slack must be nonnegative")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "slack", float(self.slack))

    @property
    def lower(self) -> float:
        return self.value - self.slack

    @property
    def upper(self) -> float:
        return self.value + self.slack

    def __float__(self):
        return self.value

    def widen(self, extra: float) -> "ErrorBudget":
        return ErrorBudget(self.value, self.slack + extra)

    def csv(self) -> str:
        return f"{self.value!r},{self.slack!r}"
