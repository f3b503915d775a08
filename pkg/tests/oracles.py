"""Brute-force oracles, deliberately independent of the library's algorithms."""

import itertools
from fractions import Fraction


def brute_colorings(g, k, fixed=None):
    fixed = fixed or {}
    for col in itertools.product(range(1, k + 1), repeat=g.n):
        if any(col[v] != c for v, c in fixed.items()):
            continue
        if all(col[u] != col[v] for u, v in g.edges):
            yield col


def brute_count(g, k, fixed=None):
    return sum(1 for _ in brute_colorings(g, k, fixed))


def interpolate(points):
    """Lagrange interpolation through (x, y) pairs; ascending integer coefficients."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t in range(n):
            coeffs[t] += yi * basis[t] / denom
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def brute_polynomial(g):
    return interpolate([(x, brute_count(g, x)) for x in range(g.n + 1)])


def is_isomorphic_brute(g, h):
    if g.n != h.n or g.m != h.m:
        return False
    for perm in itertools.permutations(range(g.n)):
        if all(h.has_edge(perm[u], perm[v]) for u, v in g.edges):
            return True
    return False


def brute_has_triangle(g):
    return any(
        g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)
        for a, b, c in itertools.combinations(range(g.n), 3)
    )


def brute_count_np(g, k):
    """Vectorized enumeration of all k**n assignments (for n up to ~12)."""
    import numpy as np

    n = g.n
    if n == 0:
        return 1
    idx = np.arange(k**n, dtype=np.int64)
    cols = [(idx // k**i) % k for i in range(n)]
    ok = np.ones(k**n, dtype=bool)
    for u, v in g.edges:
        ok &= cols[u] != cols[v]
    return int(ok.sum())
