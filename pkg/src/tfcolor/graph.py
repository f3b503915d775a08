"""Simple undirected graphs on vertices ``0..n-1`` and triangle-free families."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import GraphParseError
from .rng import make_rng


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``.  Use
    :meth:`from_edges` to build one from arbitrary pairs.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge {e} is not a normalized pair over 0..{self.n - 1}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(norm))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Adjacency as integer bitmasks."""
        out = [0] * self.n
        for u, v in self.edges:
            out[u] |= 1 << v
            out[v] |= 1 << u
        return tuple(out)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset:
        self._check_vertex(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def _check_vertex(self, v):
        if not (0 <= v < self.n):
            raise IndexError(f"vertex {v} out of range 0..{self.n - 1}")

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])

    def fingerprint(self) -> str:
        """Short stable identifier of the labelled graph."""
        import hashlib

        payload = json.dumps(self.to_json(), separators=(",", ":")).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def is_triangle_free(g: Graph) -> bool:
    masks = g.masks
    for u, v in g.edges:
        if masks[u] & masks[v]:
            return False
    return True


def triangles(g: Graph) -> Iterator[tuple[int, int, int]]:
    """Triangles ``(a, b, c)`` with ``a < b < c`` in lexicographic order."""
    adj = g.adjacency
    for a in range(g.n):
        for b in sorted(x for x in adj[a] if x > a):
            for c in sorted(x for x in adj[a] & adj[b] if x > b):
                yield (a, b, c)


def first_triangle(g: Graph):
    return next(triangles(g), None)


def delete_vertex(g: Graph, v: int) -> tuple[Graph, dict[int, int]]:
    """Return ``G - v`` and the map old index -> new index.

    Remaining vertices keep their relative order.
    """
    return delete_vertices(g, [v])


def delete_vertices(g: Graph, vs: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    drop = set(vs)
    for v in drop:
        g._check_vertex(v)
    keep = [u for u in range(g.n) if u not in drop]
    return induced_subgraph(g, keep)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    keep = sorted(set(keep))
    relabel = {old: new for new, old in enumerate(keep)}
    edges = [(relabel[u], relabel[v]) for u, v in g.edges if u in relabel and v in relabel]
    return Graph.from_edges(len(keep), edges), relabel


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    return Graph.from_edges(g.n + h.n, list(g.edges) + [(u + shift, v + shift) for u, v in h.edges])


def mycielski(g: Graph) -> Graph:
    """Mycielskian: vertices ``0..n-1`` original, ``n..2n-1`` shadows, ``2n`` apex."""
    n = g.n
    edges = list(g.edges)
    for u, v in g.edges:
        edges.append((u, n + v))
        edges.append((v, n + u))
    apex = 2 * n
    edges.extend((n + i, apex) for i in range(n))
    return Graph.from_edges(2 * n + 1, edges)


def mycielski_tower(depth: int) -> Graph:
    """``depth`` Mycielski steps starting from K2 (depth 1 is C5, depth 2 Grotzsch)."""
    g = complete_graph(2)
    for _ in range(depth):
        g = mycielski(g)
    return g


def gen_random_triangle_free(n: int, p: float, seed: int) -> Graph:
    """G(n, p) followed by triangle breaking.

    Pairs are visited in lexicographic order and kept when ``rng.random() < p``.
    Then, while a triangle remains, the lexicographically first one loses a
    uniformly chosen edge among its three.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = make_rng(seed)
    edges = {(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p}
    g = Graph(n, frozenset(edges))
    while True:
        tri = first_triangle(g)
        if tri is None:
            return g
        a, b, c = tri
        victim = [(a, b), (a, c), (b, c)][rng.randrange(3)]
        edges.discard(victim)
        g = Graph(n, frozenset(edges))


def gen_random_graph(n: int, p: float, seed: int) -> Graph:
    rng = make_rng(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


# named graphs

def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to leaves ``1..leaves``."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def grotzsch_graph() -> Graph:
    return mycielski(cycle_graph(5))


def hypercube_graph(d: int) -> Graph:
    n = 1 << d
    return Graph.from_edges(n, [(x, x ^ (1 << i)) for x in range(n) for i in range(d) if x < x ^ (1 << i)])


NAMED_GRAPHS = {
    "k2": lambda: complete_graph(2),
    "k3": lambda: complete_graph(3),
    "p3": lambda: path_graph(3),
    "p4": lambda: path_graph(4),
    "star3": lambda: star_graph(3),
    "c4": lambda: cycle_graph(4),
    "c5": lambda: cycle_graph(5),
    "c6": lambda: cycle_graph(6),
    "c7": lambda: cycle_graph(7),
    "k33": lambda: complete_bipartite(3, 3),
    "cube": lambda: hypercube_graph(3),
    "petersen": petersen_graph,
    "grotzsch": grotzsch_graph,
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED_GRAPHS[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown graph {name!r}; known: {', '.join(sorted(NAMED_GRAPHS))}") from None


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices (edge-subset enumeration, no dedup)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


# DIMACS .col

def parse_dimacs(text: bytes | str) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphParseError(f"malformed header {line!r}", lineno)
            try:
                n, _declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphParseError(f"malformed header {line!r}", lineno) from None
            if n < 0 or _declared < 0:
                raise GraphParseError("negative size in header", lineno)
        elif tag == "e":
            if n is None:
                raise GraphParseError("edge line before header", lineno)
            if len(parts) != 3:
                raise GraphParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(f"malformed edge line {line!r}", lineno) from None
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphParseError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u}", lineno)
            u, v = u - 1, v - 1
            edges.add((min(u, v), max(u, v)))
        else:
            raise GraphParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise GraphParseError("missing 'p edge n m' header")
    return Graph(n, frozenset(edges))


def write_dimacs(g: Graph, comment: str = "generated by tfcolor") -> str:
    lines = [f"c {c}" for c in comment.splitlines()]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> Graph:
    """Load a ``.col`` (DIMACS) or ``.json`` graph file."""
    with open(path, "rb") as fh:
        data = fh.read()
    if path.endswith(".json"):
        return Graph.from_json(data.decode("utf-8"))
    return parse_dimacs(data)
