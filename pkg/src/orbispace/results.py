"""Three-valued outcomes for checks that may run out of budget."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verified:
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Failed:
    reason: str
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unknown:
    reason: str
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return False
