"""Independent uniform picks ``X_i`` from color lists ``L_i`` and the uncovered set.

With ``X = [k] \\ {X_1, ..., X_d}``, color j is uncovered with probability
``prod_{i: j in L_i} (1 - 1/|L_i|)`` and a pair j, j' with probability
``prod_i (1 - |{j, j'} & L_i| / |L_i|)``.  Everything here is exact
(Fractions) except :func:`final_bound` and the reported AM-GM value, which
involve real roots and exponentials.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .budget import Budget, default_budget
from .errors import ResourceGuardError
from .params import default_ell, palette_size
from .rng import make_rng


@dataclass(frozen=True)
class CouponInstance:
    k: int
    lists: tuple
    delta: int | None = None

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("palette size must be nonnegative")
        for i, L in enumerate(self.lists):
            if not L:
                raise ValueError(f"list {i} is empty")
            if not all(1 <= c <= self.k for c in L):
                raise ValueError(f"list {i} has colors outside 1..{self.k}")
        if self.delta is not None and self.delta < len(self.lists):
            raise ValueError("more lists than the degree bound allows")

    @classmethod
    def of(cls, k: int, lists, delta: int | None = None) -> "CouponInstance":
        return cls(k, tuple(frozenset(L) for L in lists), delta)

    @property
    def d(self) -> int:
        return len(self.lists)

    def small_lists(self, t: int) -> list[int]:
        """Indices of lists with at most ``t`` colors."""
        return [i for i, L in enumerate(self.lists) if len(L) <= t]

    def to_json(self) -> dict:
        out = {"k": self.k, "lists": [sorted(L) for L in self.lists]}
        if self.delta is not None:
            out["delta"] = self.delta
        return out

    @classmethod
    def from_json(cls, data) -> "CouponInstance":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        return cls.of(int(data["k"]), data["lists"], data.get("delta"))


@dataclass(frozen=True)
class BoundParams:
    """Threshold ``t`` for small lists and the colors ``B`` their picks took."""

    t: int = 0
    B: frozenset = frozenset()
    eps: float | None = None
    ell: float | None = None

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        object.__setattr__(self, "B", frozenset(self.B))


def _check_color(inst, j):
    if not 1 <= j <= inst.k:
        raise ValueError(f"color {j} outside palette 1..{inst.k}")


def uncovered_probability(inst: CouponInstance, j: int) -> Fraction:
    _check_color(inst, j)
    p = Fraction(1)
    for L in inst.lists:
        if j in L:
            p *= 1 - Fraction(1, len(L))
    return p


def pair_uncovered_probability(inst: CouponInstance, j: int, j2: int) -> Fraction:
    _check_color(inst, j)
    _check_color(inst, j2)
    if j == j2:
        raise ValueError("pair probability needs two distinct colors")
    p = Fraction(1)
    for L in inst.lists:
        hit = (j in L) + (j2 in L)
        if hit:
            p *= 1 - Fraction(hit, len(L))
    return p


def _survival_terms(inst, params):
    """``{j: prod over large lists containing j of (1 - 1/|L_i|)}`` for j outside B."""
    large = [L for L in inst.lists if len(L) > params.t]
    out = {}
    for j in range(1, inst.k + 1):
        if j in params.B:
            continue
        p = Fraction(1)
        for L in large:
            if j in L:
                p *= 1 - Fraction(1, len(L))
        out[j] = p
    return out


def exact_uncovered_expectation(inst: CouponInstance, params: BoundParams | None = None) -> Fraction:
    """Expected number of uncovered colors given the small-list picks landed in B.

    With the default ``t=0, B=()`` this is the unconditional ``E|X|``.
    """
    params = params or BoundParams()
    return sum(_survival_terms(inst, params).values(), Fraction(0))


def enumerate_uncovered(inst: CouponInstance, budget: Budget | None = None) -> dict[int, Fraction]:
    """Exact pmf of ``|X|`` by walking every joint outcome."""
    budget = budget or default_budget()
    outcomes = math.prod(len(L) for L in inst.lists)
    if outcomes > budget.max_enumeration:
        raise ResourceGuardError(f"{outcomes} joint outcomes exceed the enumeration budget {budget.max_enumeration}")
    bits = [[1 << (c - 1) for c in sorted(L)] for L in inst.lists]
    tally: Counter = Counter()
    for pick in itertools.product(*bits):
        covered = 0
        for b in pick:
            covered |= b
        tally[inst.k - bin(covered).count("1")] += 1
    return {s: Fraction(n, outcomes) for s, n in sorted(tally.items())}


def pmf_moments(pmf: dict) -> tuple[Fraction, Fraction]:
    mean = sum((s * p for s, p in pmf.items()), Fraction(0))
    second = sum((s * s * p for s, p in pmf.items()), Fraction(0))
    return mean, second - mean * mean


def pairwise_covariances(inst: CouponInstance) -> dict[tuple[int, int], Fraction]:
    single = {j: uncovered_probability(inst, j) for j in range(1, inst.k + 1)}
    return {
        (j, j2): pair_uncovered_probability(inst, j, j2) - single[j] * single[j2]
        for j, j2 in itertools.combinations(range(1, inst.k + 1), 2)
    }


def uncovered_variance(inst: CouponInstance) -> Fraction:
    var = Fraction(0)
    for j in range(1, inst.k + 1):
        p = uncovered_probability(inst, j)
        var += p * (1 - p)
    # each unordered pair counted twice
    return var + 2 * sum(pairwise_covariances(inst).values(), Fraction(0))


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class AmgmBound:
    value: float
    inner_product: Fraction
    m: int
    expectation: Fraction
    holds: bool


def amgm_lower_bound(inst: CouponInstance, params: BoundParams) -> AmgmBound:
    """Geometric-mean lower bound ``m * (prod of survival terms)**(1/m)``, m = k - |B|.

    ``holds`` compares expectation and bound exactly: ``(E/m)**m >= product``.
    """
    if not params.B <= set(range(1, inst.k + 1)):
        raise ValueError("B must be a subset of the palette")
    m = inst.k - len(params.B)
    if m <= 0:
        raise ValueError("|B| must be smaller than k")
    terms = _survival_terms(inst, params)
    inner = math.prod(terms.values(), start=Fraction(1))
    expectation = sum(terms.values(), Fraction(0))
    value = 0.0 if inner == 0 else m * math.exp(_log_fraction(inner) / m)
    holds = (expectation / m) ** m >= inner
    return AmgmBound(value, inner, m, expectation, holds)


@dataclass(frozen=True)
class ReorderingBound:
    lhs: Fraction
    rhs: Fraction
    inner_product: Fraction
    holds: bool

    @property
    def reorder_identity(self) -> bool:
        return self.lhs == self.inner_product


def reordering_lower_bound(inst: CouponInstance, params: BoundParams, delta: int | None = None) -> ReorderingBound:
    """List-major product ``prod_{|L_i|>t} (1-1/|L_i|)**|L_i \\ B|`` against ``(1-1/t)**(t*delta)``."""
    if params.t < 1:
        raise ValueError("t must be at least 1")
    delta = inst.delta if delta is None else delta
    if delta is None:
        delta = inst.d
    if inst.d > delta:
        raise ValueError("number of lists exceeds delta")
    lhs = Fraction(1)
    for L in inst.lists:
        if len(L) > params.t:
            lhs *= (1 - Fraction(1, len(L))) ** len(L - params.B)
    rhs = (1 - Fraction(1, params.t)) ** (params.t * delta)
    inner = math.prod(_survival_terms(inst, params).values(), start=Fraction(1))
    return ReorderingBound(lhs, rhs, inner, lhs >= rhs)


def final_bound(delta: float, eps: float, t: int, b: int = 0) -> float:
    """``(k - b) * (1 - 1/t)**(t*delta/(k - b))`` with ``k = ceil((1+eps) delta / ln delta)``."""
    if delta < 3:
        raise ValueError("delta must be at least 3")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t < 2:
        raise ValueError("t must be at least 2")
    k = palette_size(delta, eps)
    if not 0 <= b < k:
        raise ValueError(f"b must lie in [0, {k})")
    m = k - b
    return math.exp(math.log(m) + (t * delta / m) * math.log1p(-1.0 / t))


def final_bound_ratio(delta: float, eps: float, t: int, b: int = 0) -> float:
    return final_bound(delta, eps, t, b) / default_ell(delta)


@dataclass
class CouponSampleStats:
    samples: int
    mean: float
    variance: float
    histogram: dict

    def to_json(self) -> dict:
        return {
            "samples": str(self.samples),
            "mean": self.mean,
            "variance": self.variance,
            "histogram": {str(s): x for s, x in sorted(self.histogram.items())},
        }


def monte_carlo_uncovered(inst: CouponInstance, samples: int, seed: int) -> CouponSampleStats:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = make_rng(seed)
    lists = [sorted(L) for L in inst.lists]
    tally: Counter = Counter()
    for _ in range(samples):
        covered = {L[rng.randrange(len(L))] for L in lists}
        tally[inst.k - len(covered)] += 1
    mean = sum(s * n for s, n in tally.items()) / samples
    var = sum(n * (s - mean) ** 2 for s, n in tally.items()) / samples
    return CouponSampleStats(samples, mean, var, {s: n / samples for s, n in sorted(tally.items())})
