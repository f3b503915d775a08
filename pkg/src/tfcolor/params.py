"""Palette size and the default parameter functions l(Delta), t(Delta)."""

from __future__ import annotations

import math
from dataclasses import dataclass


def palette_size(delta: int, eps: float) -> int:
    """``ceil((1 + eps) * delta / ln delta)``."""
    if delta < 2:
        raise ValueError("palette size needs delta >= 2 (ln delta > 0)")
    if eps <= 0:
        raise ValueError("eps must be positive")
    ln = math.log(delta)
    k = math.ceil((1 + eps) * delta / ln)
    # guard against float rounding at the ceiling boundary
    while (k - 1) * ln >= (1 + eps) * delta:
        k -= 1
    while k * ln < (1 + eps) * delta:
        k += 1
    return max(k, 1)


@dataclass(frozen=True)
class Palette:
    k: int
    delta: int | None = None
    eps: float | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("palette needs at least one color")

    @classmethod
    def derived(cls, delta: int, eps: float) -> "Palette":
        return cls(palette_size(delta, eps), delta, eps)


def default_ell(delta: float) -> float:
    return math.log(delta) ** 2


def default_t(delta: float) -> int:
    return max(2, math.ceil(math.sqrt(math.log(delta))))


def loglog_eps(delta: float, c: float = 1.0) -> float:
    """``c * ln ln delta / ln delta``, the slack regime of a delta-dependent eps."""
    ln = math.log(delta)
    return c * math.log(ln) / ln
