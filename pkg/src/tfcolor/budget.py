"""Computation budgets for the exact (exponential-time) routines."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_VAR = "TFCOLOR_BUDGET"


@dataclass(frozen=True)
class Budget:
    # vertex cap for chromatic-polynomial counting
    max_vertices: int = 40
    # product of list sizes allowed for backtracking extension counts
    max_extension_space: int = 10**9
    # joint outcomes / colorings allowed for explicit enumeration
    max_enumeration: int = 10**6

    def __post_init__(self):
        for name in ("max_vertices", "max_extension_space", "max_enumeration"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    @classmethod
    def from_string(cls, text: str, base: "Budget | None" = None) -> "Budget":
        """Parse ``"max_vertices=50,max_enumeration=1e7"`` style overrides."""
        base = base or cls()
        updates = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown budget field {key!r}")
            updates[key] = int(float(value))
        return replace(base, **updates)


def default_budget() -> Budget:
    text = os.environ.get(ENV_VAR)
    if text:
        return Budget.from_string(text)
    return Budget()
