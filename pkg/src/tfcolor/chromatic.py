"""Exact counts of proper colorings and of extensions of partial colorings.

Colors are ``1..k``.  Counts are Python ints, ratios are
:class:`fractions.Fraction` (always in lowest terms).

The polynomial engine works on graphs encoded as tuples of adjacency
bitmasks.  It peels simplicial vertices (a vertex whose neighbourhood is a
clique of size d contributes a factor ``x - d``; this disposes of trees and
cliques), splits connected components, uses the closed form for cycles and
otherwise applies deletion-contraction, or addition-contraction on dense
graphs.  Results are memoized on a relabelling driven by colour refinement:
isomorphic inputs usually share an entry, and distinct keys always describe
the graph exactly, so a miss costs time but never correctness.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Mapping

from .budget import Budget, default_budget
from .errors import NoColoringError, ResourceGuardError, ZeroDenominatorError
from .graph import Graph, delete_vertex

_CACHE_LIMIT = 2_000_000
_poly_cache: dict = {}


@dataclass(frozen=True)
class PartialColoring:
    """A partial map vertex -> color in ``1..k``, stored as sorted pairs."""

    k: int
    items: tuple = ()

    def __post_init__(self):
        seen = set()
        for v, c in self.items:
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} outside palette 1..{self.k}")
            if v in seen:
                raise ValueError(f"vertex {v} assigned twice")
            seen.add(v)

    @classmethod
    def of(cls, k: int, assignments: Mapping[int, int] | None = None) -> "PartialColoring":
        return cls(k, tuple(sorted((int(v), int(c)) for v, c in (assignments or {}).items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def extend(self, v: int, c: int) -> "PartialColoring":
        d = self.as_dict()
        if v in d:
            raise ValueError(f"vertex {v} already colored")
        d[v] = c
        return PartialColoring.of(self.k, d)

    def get(self, v, default=None):
        return self.as_dict().get(v, default)

    def __contains__(self, v):
        return any(u == v for u, _ in self.items)

    def __len__(self):
        return len(self.items)

    def vertices(self) -> list[int]:
        return [v for v, _ in self.items]

    def is_proper(self, g: Graph) -> bool:
        d = self.as_dict()
        return all(not (u in d and v in d and d[u] == d[v]) for u, v in g.edges)

    def is_total(self, g: Graph) -> bool:
        return len(self.items) == g.n

    def restrict(self, vertices) -> "PartialColoring":
        keep = set(vertices)
        return PartialColoring(self.k, tuple(p for p in self.items if p[0] in keep))

    def relabel(self, mapping: Mapping[int, int]) -> "PartialColoring":
        """Rename vertices through ``mapping``; unmapped vertices are dropped."""
        return PartialColoring.of(self.k, {mapping[v]: c for v, c in self.items if v in mapping})

    def to_json(self) -> dict:
        return {"k": self.k, "colors": {str(v): c for v, c in self.items}}


# polynomial arithmetic, coefficients in ascending order

def _mul_linear(p, d):
    """p(x) * (x - d)"""
    out = [0] * (len(p) + 1)
    for i, a in enumerate(p):
        out[i + 1] += a
        out[i] -= d * a
    return out


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _padd(p, q, sign=1):
    n = max(len(p), len(q))
    out = [0] * n
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] += sign * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def evaluate_polynomial(coeffs, x: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def format_polynomial(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        a = coeffs[i]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if i == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + ("x" if i == 1 else f"x^{i}")
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


# bitmask graph helpers

def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _remove(masks, i):
    low = (1 << i) - 1
    out = []
    for j, m in enumerate(masks):
        if j != i:
            out.append((m & low) | ((m >> 1) & ~low))
    return out


def _components(masks, within=None):
    if within is None:
        within = (1 << len(masks)) - 1
    comps = []
    left = within
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= masks[v]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        left &= ~comp
    return comps


def _sub_masks(masks, comp):
    verts = list(_bits(comp))
    pos = {v: i for i, v in enumerate(verts)}
    out = []
    for v in verts:
        m = 0
        for u in _bits(masks[v] & comp):
            m |= 1 << pos[u]
        out.append(m)
    return out, verts


def _canonical_key(masks):
    n = len(masks)
    labels = [m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1") for m in masks]
    for _ in range(2):
        sig = [(labels[i], tuple(sorted(labels[j] for j in _bits(masks[i])))) for i in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(labels)) and _ == 1:
            labels = new
            break
        labels = new
    order = sorted(range(n), key=lambda i: (labels[i], i))
    pos = [0] * n
    for new_i, old in enumerate(order):
        pos[old] = new_i
    out = []
    for old in order:
        m = 0
        for j in _bits(masks[old]):
            m |= 1 << pos[j]
        out.append(m)
    return tuple(out)


def _popcount(m):
    return bin(m).count("1")


def _find_simplicial(masks):
    best = None
    best_deg = None
    for i, nb in enumerate(masks):
        d = _popcount(nb)
        if best_deg is not None and d >= best_deg:
            continue
        if all(nb & ~(masks[j] | (1 << j)) == 0 for j in _bits(nb)):
            best, best_deg = i, d
            if d <= 1:
                break
    return best


def _poly(masks):
    masks = list(masks)
    roots = []
    while masks:
        i = _find_simplicial(masks)
        if i is None:
            break
        roots.append(_popcount(masks[i]))
        masks = _remove(masks, i)
    p = [1] if not masks else _poly_core(masks)
    for d in roots:
        p = _mul_linear(p, d)
    return p


def _poly_core(masks):
    comps = _components(masks)
    if len(comps) > 1:
        p = [1]
        for comp in comps:
            sub, _ = _sub_masks(masks, comp)
            p = _pmul(p, _poly(sub))
        return p
    key = _canonical_key(masks)
    hit = _poly_cache.get(key)
    if hit is not None:
        return list(hit)
    n = len(masks)
    degs = [_popcount(m) for m in masks]
    m_edges = sum(degs) // 2
    if all(d == 2 for d in degs):
        # (x-1)^n + (-1)^n (x-1)
        p = [1]
        for _ in range(n):
            p = _mul_linear(p, 1)
        p = _padd(p, [-1, 1], 1 if n % 2 == 0 else -1)
    elif 4 * m_edges > n * (n - 1):
        # dense: P(G) = P(G + uw) + P(G / uw) for a non-edge uw
        u = max((i for i in range(n) if degs[i] < n - 1), key=lambda i: (degs[i], -i))
        w = max((j for j in range(n) if j != u and not masks[u] >> j & 1), key=lambda j: (degs[j], -j))
        added = list(masks)
        added[u] |= 1 << w
        added[w] |= 1 << u
        p = _padd(_poly(added), _poly(_merge(masks, u, w)))
    else:
        u = min(range(n), key=lambda i: (degs[i], i))
        w = max(_bits(masks[u]), key=lambda j: (degs[j], -j))
        deleted = list(masks)
        deleted[u] &= ~(1 << w)
        deleted[w] &= ~(1 << u)
        p = _padd(_poly(deleted), _poly(_merge(masks, u, w)), -1)
    if len(_poly_cache) > _CACHE_LIMIT:
        _poly_cache.clear()
    _poly_cache[key] = tuple(p)
    return p


def _merge(masks, u, w):
    """Identify w into u (edge or non-edge), dropping loops and parallels."""
    masks = list(masks)
    bu, bw = 1 << u, 1 << w
    merged = (masks[u] | masks[w]) & ~(bu | bw)
    masks[u] = merged
    for x in _bits(masks[w] & ~bu):
        masks[x] = (masks[x] & ~bw) | bu
    return _remove(masks, w)


def _ensure_recursion(n_edges):
    need = 4 * n_edges + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def clear_cache():
    _poly_cache.clear()


# public counting API

def chromatic_polynomial(g: Graph, budget: Budget | None = None) -> list[int]:
    """Coefficients of P(G, x) in ascending powers of x (length n + 1)."""
    budget = budget or default_budget()
    if g.n > budget.max_vertices:
        raise ResourceGuardError(f"{g.n} vertices exceeds the counting cap of {budget.max_vertices}")
    _ensure_recursion(g.n * g.n)
    p = _poly(g.masks)
    return p + [0] * (g.n + 1 - len(p))


def count_colorings(g: Graph, k: int, budget: Budget | None = None) -> int:
    """Number of proper colorings of ``g`` with colors ``1..k``."""
    if k < 0:
        raise ValueError("palette size must be nonnegative")
    if g.n == 0:
        return 1
    if k == 0:
        return 0
    if g.m == 0:
        return k**g.n
    return evaluate_polynomial(chromatic_polynomial(g, budget), k)


def available_colors(g: Graph, partial: PartialColoring, u: int) -> frozenset:
    """Colors in ``1..k`` not used on a neighbour of ``u``; u's own color is ignored."""
    d = partial.as_dict()
    used = {d[w] for w in g.neighbors(u) if w in d}
    return frozenset(c for c in range(1, partial.k + 1) if c not in used)


class ExtensionCounter:
    """Counts proper completions of partial colorings of one fixed graph.

    Restricted parts are counted by backtracking on the vertex with fewest
    remaining colors, splitting into components after each choice; parts
    whose lists are all still full go through the polynomial engine.  When
    the product of restricted list sizes exceeds the budget, the count is
    taken instead from the chromatic polynomial of the graph obtained by
    merging each precolored color class into one vertex and joining the
    classes into a clique, divided by the falling factorial k(k-1)..(k-r+1).
    """

    def __init__(self, g: Graph, k: int, budget: Budget | None = None):
        if k < 0:
            raise ValueError("palette size must be nonnegative")
        self.g = g
        self.k = k
        self.budget = budget or default_budget()
        self.full = (1 << k) - 1
        self._memo: dict = {}

    def count(self, partial: Mapping[int, int] | PartialColoring) -> int:
        if isinstance(partial, PartialColoring):
            if partial.k != self.k:
                raise ValueError("palette mismatch")
            partial = partial.as_dict()
        g, masks = self.g, self.g.masks
        for v, c in partial.items():
            g._check_vertex(v)
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} outside palette 1..{self.k}")
        for v, c in partial.items():
            for u in g.adjacency[v]:
                if partial.get(u) == c:
                    return 0
        colored = 0
        for v in partial:
            colored |= 1 << v
        free = ((1 << g.n) - 1) & ~colored
        if not free:
            return 1
        if self.k == 0:
            return 0
        lists = {}
        for u in _bits(free):
            avail = self.full
            for w in _bits(masks[u] & colored):
                avail &= ~(1 << (partial[w] - 1))
            if not avail:
                return 0
            lists[u] = avail
        total = 1
        restricted = []
        for comp in _components(masks, free):
            verts = list(_bits(comp))
            if all(lists[v] == self.full for v in verts):
                sub, _ = _sub_masks(masks, comp)
                total *= self._free_count(sub)
            else:
                restricted.append((comp, verts))
            if total == 0:
                return 0
        if not restricted:
            return total
        space = prod(_popcount(lists[v]) for _, vs in restricted for v in vs)
        if space > self.budget.max_extension_space:
            return self._by_identification(partial)
        for comp, verts in restricted:
            total *= self._backtrack(comp, tuple(lists[v] for v in verts))
            if total == 0:
                return 0
        return total

    def _free_count(self, sub_masks):
        if len(sub_masks) > self.budget.max_vertices:
            raise ResourceGuardError(f"component of {len(sub_masks)} vertices exceeds the counting cap")
        _ensure_recursion(len(sub_masks) ** 2)
        return evaluate_polynomial(_poly(sub_masks), self.k)

    def _backtrack(self, comp, lists):
        key = (comp, lists)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        masks = self.g.masks
        verts = list(_bits(comp))
        if len(verts) == 1:
            result = _popcount(lists[0])
        elif all(x == self.full for x in lists):
            sub, _ = _sub_masks(masks, comp)
            result = self._free_count(sub)
        else:
            idx = {v: i for i, v in enumerate(verts)}
            parts = _components(masks, comp)
            if len(parts) > 1:
                result = 1
                for part in parts:
                    result *= self._backtrack(part, tuple(lists[idx[v]] for v in _bits(part)))
                    if not result:
                        break
            else:
                pick = min(range(len(verts)), key=lambda i: (_popcount(lists[i]), -_popcount(masks[verts[i]] & comp), i))
                v = verts[pick]
                nbr_idx = [idx[u] for u in _bits(masks[v] & comp)]
                rest = comp & ~(1 << v)
                result = 0
                for cbit in _bits(lists[pick]):
                    b = 1 << cbit
                    new = list(lists)
                    dead = False
                    for i in nbr_idx:
                        new[i] &= ~b
                        if not new[i]:
                            dead = True
                            break
                    if dead:
                        continue
                    del new[pick]
                    result += self._backtrack(rest, tuple(new))
        if len(self._memo) > _CACHE_LIMIT:
            self._memo.clear()
        self._memo[key] = result
        return result

    def _by_identification(self, partial):
        g = self.g
        free = [u for u in range(g.n) if u not in partial]
        classes = sorted(set(partial.values()))
        pos = {u: i for i, u in enumerate(free)}
        r = len(classes)
        cls_index = {c: len(free) + i for i, c in enumerate(classes)}
        edges = set()
        for u, v in g.edges:
            a = pos[u] if u in pos else cls_index[partial[u]]
            b = pos[v] if v in pos else cls_index[partial[v]]
            if a != b:
                edges.add((min(a, b), max(a, b)))
        for i in range(r):
            for j in range(i + 1, r):
                edges.add((len(free) + i, len(free) + j))
        h = Graph(len(free) + r, frozenset(edges))
        falling = prod(range(self.k - r + 1, self.k + 1))
        if falling == 0:
            return 0
        total = count_colorings(h, self.k, self.budget)
        q, rem = divmod(total, falling)
        assert rem == 0
        return q


def count_extensions(g: Graph, partial: PartialColoring, budget: Budget | None = None) -> int:
    return ExtensionCounter(g, partial.k, budget).count(partial)


def coloring_ratio(g: Graph, v: int, k: int, budget: Budget | None = None) -> Fraction:
    """Exact ``|C(G)| / |C(G - v)|``."""
    gv, _ = delete_vertex(g, v)
    den = count_colorings(gv, k, budget)
    if den == 0:
        raise ZeroDenominatorError(f"G - {v} has no proper {k}-coloring")
    return Fraction(count_colorings(g, k, budget), den)


def iter_proper_colorings(g: Graph, k: int, partial: PartialColoring | None = None) -> Iterator[dict[int, int]]:
    """Yield every proper k-coloring of ``g`` extending ``partial`` as a dict.

    Plain backtracking in vertex order; use only where enumeration is intended.
    """
    fixed = partial.as_dict() if partial is not None else {}
    if partial is not None and not partial.is_proper(g):
        return
    adj = g.adjacency
    order = [v for v in range(g.n) if v not in fixed]
    col = dict(fixed)

    def rec(i):
        if i == len(order):
            yield dict(col)
            return
        v = order[i]
        used = {col[u] for u in adj[v] if u in col}
        for c in range(1, k + 1):
            if c not in used:
                col[v] = c
                yield from rec(i + 1)
                del col[v]

    yield from rec(0)


def require_colorable(g: Graph, k: int, budget: Budget | None = None) -> int:
    total = count_colorings(g, k, budget)
    if total == 0:
        raise NoColoringError(f"graph has no proper {k}-coloring")
    return total
