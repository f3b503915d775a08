"""Uniform proper colorings and the distribution of available-color counts.

The exact sampler uses self-reducibility: vertices are fixed one at a time
(descending degree, ties by index) and color ``c`` is chosen with
probability ``ext(partial + v->c) / ext(partial)``.  Integer weights are fed
to ``rng.randrange`` so every draw is exactly uniform.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .budget import Budget, default_budget
from .chromatic import ExtensionCounter, PartialColoring, available_colors
from .errors import NoColoringError, ResourceGuardError, ZeroDenominatorError
from .graph import Graph, delete_vertex
from .rng import make_rng

Number = Union[Fraction, float]


def sampling_order(g: Graph) -> list[int]:
    return sorted(range(g.n), key=lambda v: (-len(g.adjacency[v]), v))


class UniformSampler:
    """Exact uniform sampler over the proper k-colorings of ``g``."""

    def __init__(self, g: Graph, k: int, budget: Budget | None = None):
        self.g = g
        self.k = k
        self.order = sampling_order(g)
        self.counter = ExtensionCounter(g, k, budget)
        self._weights: dict[tuple, list[int]] = {}
        self.total = self.counter.count({})
        if self.total == 0:
            raise NoColoringError(f"graph has no proper {k}-coloring")

    def _child_weights(self, prefix: tuple) -> list[int]:
        w = self._weights.get(prefix)
        if w is None:
            base = dict(zip(self.order, prefix))
            v = self.order[len(prefix)]
            w = []
            for c in range(1, self.k + 1):
                base[v] = c
                w.append(self.counter.count(base))
            self._weights[prefix] = w
        return w

    def draw(self, rng) -> tuple[PartialColoring, Fraction]:
        """One coloring and its exact probability under the chain of choices."""
        prefix = ()
        prob = Fraction(1)
        for _ in self.order:
            weights = self._child_weights(prefix)
            total = sum(weights)
            r = rng.randrange(total)
            for c, w in enumerate(weights, start=1):
                if r < w:
                    break
                r -= w
            prob *= Fraction(w, total)
            prefix += (c,)
        return PartialColoring.of(self.k, dict(zip(self.order, prefix))), prob

    def probability(self, coloring: PartialColoring) -> Fraction:
        d = coloring.as_dict()
        prefix = ()
        prob = Fraction(1)
        for v in self.order:
            weights = self._child_weights(prefix)
            c = d[v]
            prob *= Fraction(weights[c - 1], sum(weights))
            if prob == 0:
                return prob
            prefix += (c,)
        return prob


def sample_uniform_coloring(g: Graph, k: int, seed: int, budget: Budget | None = None) -> PartialColoring:
    return UniformSampler(g, k, budget).draw(make_rng(seed))[0]


def sample_uniform_colorings(g: Graph, k: int, draws: int, seed: int, budget: Budget | None = None) -> list[PartialColoring]:
    sampler = UniformSampler(g, k, budget)
    rng = make_rng(seed)
    return [sampler.draw(rng)[0] for _ in range(draws)]


def coloring_probability(g: Graph, k: int, coloring: PartialColoring, budget: Budget | None = None) -> Fraction:
    """Probability that the exact sampler outputs ``coloring``, from the ratio chain."""
    return UniformSampler(g, k, budget).probability(coloring)


def _neighborhood_assignments(h: Graph, nbrs: list[int], k: int):
    """Assignments of colors to ``nbrs`` that are proper on the edges among them."""
    adj = h.adjacency
    cur: dict[int, int] = {}

    def rec(i):
        if i == len(nbrs):
            yield dict(cur)
            return
        u = nbrs[i]
        for c in range(1, k + 1):
            if all(cur.get(w) != c for w in adj[u]):
                cur[u] = c
                yield from rec(i + 1)
                del cur[u]

    yield from rec(0)


def available_size_counts(h: Graph, nbrs, k: int, counter: ExtensionCounter | None = None,
                          budget: Budget | None = None) -> Counter:
    """Map ``s -> #{c in C(h) : k - |c(nbrs)| = s}``.

    Enumerates colorings of ``nbrs`` and counts completions of each, so the
    number of available colors for a vertex whose neighbourhood in ``h`` is
    ``nbrs`` can be tabulated without listing all of C(h).
    """
    budget = budget or default_budget()
    nbrs = sorted(nbrs)
    if k ** len(nbrs) > budget.max_enumeration:
        raise ResourceGuardError(f"{k}^{len(nbrs)} neighbourhood assignments exceed the enumeration budget")
    counter = counter or ExtensionCounter(h, k, budget)
    out: Counter = Counter()
    for a in _neighborhood_assignments(h, nbrs, k):
        ext = counter.count(a)
        if ext:
            out[k - len(set(a.values()))] += ext
    return out


def _minus_v(g: Graph, v: int):
    gv, mp = delete_vertex(g, v)
    return gv, mp


def available_distribution(g: Graph, v: int, k: int, budget: Budget | None = None) -> Counter:
    """Counts of ``|L_c(v)|`` over c in C(G - v), with v's neighbours taken in G."""
    gv, mp = _minus_v(g, v)
    return available_size_counts(gv, [mp[u] for u in g.neighbors(v)], k, budget=budget)


def exact_expected_available(g: Graph, v: int, k: int, budget: Budget | None = None) -> Fraction:
    dist = available_distribution(g, v, k, budget)
    total = sum(dist.values())
    if total == 0:
        raise ZeroDenominatorError(f"G - {v} has no proper {k}-coloring")
    return Fraction(sum(s * c for s, c in dist.items()), total)


def neighbor_available_distribution(g: Graph, v: int, u: int, k: int, counter=None,
                                    budget: Budget | None = None) -> Counter:
    """Counts of ``|L_c(u)|`` over c in C(G - v) for a neighbour u of v."""
    if u not in g.neighbors(v):
        raise ValueError(f"{u} is not a neighbour of {v}")
    gv, mp = _minus_v(g, v)
    uu = mp[u]
    return available_size_counts(gv, sorted(gv.adjacency[uu]), k, counter=counter, budget=budget)


def exact_tail_probability(g: Graph, v: int, u: int, k: int, t: int, budget: Budget | None = None) -> Fraction:
    """``P(|L_c(u)| <= t)`` for c uniform in C(G - v)."""
    dist = neighbor_available_distribution(g, v, u, k, budget=budget)
    total = sum(dist.values())
    if total == 0:
        raise ZeroDenominatorError(f"G - {v} has no proper {k}-coloring")
    return Fraction(sum(c for s, c in dist.items() if s <= t), total)


def greedy_coloring(g: Graph, k: int) -> dict[int, int]:
    col: dict[int, int] = {}
    for v in range(g.n):
        used = {col[u] for u in g.adjacency[v] if u in col}
        c = next((c for c in range(1, k + 1) if c not in used), None)
        if c is None:
            raise NoColoringError(f"greedy initialisation failed at vertex {v} with k={k}")
        col[v] = c
    return col


def run_glauber(g: Graph, k: int, steps: int, seed: int) -> PartialColoring:
    """Greedy start followed by ``steps`` heat-bath single-vertex updates."""
    if k < g.max_degree() + 2:
        warnings.warn(f"k={k} < max degree + 2; Glauber dynamics may not be ergodic", RuntimeWarning, stacklevel=2)
    col = greedy_coloring(g, k)
    if g.n == 0:
        return PartialColoring.of(k, col)
    rng = make_rng(seed)
    adj = g.adjacency
    for _ in range(steps):
        v = rng.randrange(g.n)
        used = {col[u] for u in adj[v]}
        avail = [c for c in range(1, k + 1) if c not in used]
        col[v] = avail[rng.randrange(len(avail))]
    return PartialColoring.of(k, col)


def fraction_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


@dataclass
class SampleStats:
    """Statistics of available-color counts around ``v`` under c in C(G - v).

    ``tail_freq[t]`` is the probability that a uniformly chosen neighbour u
    of v has ``|L_c(u)| <= t``; ``small_neighbors_mean[t]`` is the expected
    number of such neighbours.  ``histogram`` is the distribution of
    ``|L_c(v)|``.  Exact runs hold Fractions, sampled runs floats.
    """

    samples: int
    exact: bool
    k: int
    degree: int
    mean_available: Number
    tail_freq: dict = field(default_factory=dict)
    small_neighbors_mean: dict = field(default_factory=dict)
    histogram: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def num(x):
            return fraction_str(x) if isinstance(x, Fraction) else x

        return {
            "samples": str(self.samples),
            "exact": self.exact,
            "k": self.k,
            "degree": self.degree,
            "mean_available": num(self.mean_available),
            "tail_freq": {str(t): num(x) for t, x in sorted(self.tail_freq.items())},
            "small_neighbors_mean": {str(t): num(x) for t, x in sorted(self.small_neighbors_mean.items())},
            "histogram": {str(s): num(x) for s, x in sorted(self.histogram.items())},
        }


def measure_neighborhood(g: Graph, v: int, k: int, samples: int = 0, seed: int = 0, exact: bool = True,
                         sampler: str = "exact", glauber_steps: int | None = None,
                         budget: Budget | None = None) -> SampleStats:
    """Available-color statistics for v and its neighbours under c uniform in C(G - v).

    ``exact=True`` tabulates the distributions exactly by counting; otherwise
    ``samples`` colorings are drawn with the exact sampler or, with
    ``sampler="glauber"``, with independent Glauber runs.
    """
    budget = budget or default_budget()
    nbrs = sorted(g.neighbors(v))
    gv, mp = _minus_v(g, v)
    if exact:
        counter = ExtensionCounter(gv, k, budget)
        vdist = available_size_counts(gv, [mp[u] for u in nbrs], k, counter=counter, budget=budget)
        total = sum(vdist.values())
        if total == 0:
            raise ZeroDenominatorError(f"G - {v} has no proper {k}-coloring")
        hist = {s: Fraction(c, total) for s, c in sorted(vdist.items())}
        mean = sum((s * p for s, p in hist.items()), Fraction(0))
        small = {t: Fraction(0) for t in range(k + 1)}
        for u in nbrs:
            udist = available_size_counts(gv, sorted(gv.adjacency[mp[u]]), k, counter=counter, budget=budget)
            for t in small:
                small[t] += Fraction(sum(c for s, c in udist.items() if s <= t), total)
        tail = {t: x / len(nbrs) for t, x in small.items()} if nbrs else {}
        return SampleStats(total, True, k, len(nbrs), mean, tail, small, hist)

    if samples <= 0:
        raise ValueError("no samples requested")
    rng = make_rng(seed)
    if sampler == "exact":
        smp = UniformSampler(gv, k, budget)
        draws = (smp.draw(rng)[0] for _ in range(samples))
    elif sampler == "glauber":
        steps = glauber_steps if glauber_steps is not None else 50 * max(gv.n, 1)
        draws = (run_glauber(gv, k, steps, rng.getrandbits(64)) for _ in range(samples))
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    vn = [mp[u] for u in nbrs]
    hist_c: Counter = Counter()
    small_c = {t: 0 for t in range(k + 1)}
    for c in draws:
        d = c.as_dict()
        hist_c[k - len({d[u] for u in vn})] += 1
        for u in vn:
            s = len(available_colors(gv, c, u))
            for t in small_c:
                if s <= t:
                    small_c[t] += 1
    hist = {s: n / samples for s, n in sorted(hist_c.items())}
    mean = sum(s * p for s, p in hist.items())
    small = {t: x / samples for t, x in small_c.items()}
    tail = {t: x / len(nbrs) for t, x in small.items()} if nbrs else {}
    return SampleStats(samples, False, k, len(nbrs), mean, tail, small, hist)
