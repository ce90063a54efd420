"""Properly edge-colored simple graphs.

Vertices are ``0..n-1``. Colors are arbitrary non-negative integers (the
constructions use group-element indices as colors); internally every color
is also given a dense index ``0..palette_size-1`` for the search kernels.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class ImproperColoring(GraphError):
    """Two edges at ``vertex`` share ``color``."""

    def __init__(self, vertex: int, color: int):
        super().__init__(f"vertex {vertex} has two incident edges of color {color}")
        self.vertex = vertex
        self.color = color


class EmptyInput(GraphError):
    pass


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def edge_set(edges: Iterable[Sequence[int]]) -> frozenset[Edge]:
    """Normalize ``(u, v)`` or ``(u, v, c)`` records to unordered keys."""
    return frozenset(edge_key(e[0], e[1]) for e in edges)


class EdgeColoredGraph:
    """Immutable properly edge-colored simple graph.

    Build through :func:`build_graph`, which validates the invariants.
    ``labels`` is optional per-vertex metadata (constructions store the
    group element and side of each vertex there).
    """

    def __init__(self, n, edges, adjacency, color_of, labels=None):
        self.n = n
        self.edges = edges
        self.adjacency = adjacency
        self.labels = labels
        self._color_of = color_of

    def __repr__(self):
        return f"EdgeColoredGraph(n={self.n}, m={len(self.edges)}, palette={self.palette_size})"

    def __eq__(self, other):
        if not isinstance(other, EdgeColoredGraph):
            return NotImplemented
        return self.n == other.n and sorted(self.edges) == sorted(other.edges)

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.edges))))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def colors(self) -> tuple[int, ...]:
        """Distinct colors in increasing order; position is the dense index."""
        return tuple(sorted({c for _, _, c in self.edges}))

    @cached_property
    def color_index(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.colors)}

    @property
    def palette_size(self) -> int:
        return len(self.colors)

    def color(self, u: int, v: int) -> int | None:
        """Color of edge ``uv`` or ``None`` if absent."""
        return self._color_of.get(edge_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._color_of

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edge_keys(self) -> frozenset[Edge]:
        return frozenset(self._color_of)

    @cached_property
    def adjmask(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as a Python-int bitmask."""
        out = []
        for nb in self.adjacency:
            mask = 0
            for w, _ in nb:
                mask |= 1 << w
            out.append(mask)
        return tuple(out)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbor, dense_color)`` arrays, neighbors sorted by id."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v, nb in enumerate(self.adjacency):
            indptr[v + 1] = indptr[v] + len(nb)
        nbr = np.empty(indptr[-1], dtype=np.int64)
        col = np.empty(indptr[-1], dtype=np.int64)
        cidx = self.color_index
        pos = 0
        for nb in self.adjacency:
            for w, c in nb:
                nbr[pos] = w
                col[pos] = cidx[c]
                pos += 1
        return indptr, nbr, col

    def induced(self, vertices: Iterable[int]) -> "EdgeColoredGraph":
        """Induced subgraph, relabelled to ``0..k-1`` in increasing vertex order."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        triples = [(pos[u], pos[v], c) for u, v, c in self.edges if u in pos and v in pos]
        labels = [self.labels[v] for v in vs] if self.labels is not None else None
        return build_graph(len(vs), triples, labels=labels)


def build_graph(n: int, edge_triples: Iterable[Sequence[int]], labels=None) -> EdgeColoredGraph:
    """Validate ``(u, v, c)`` triples and freeze them into a graph."""
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    color_of: dict[Edge, int] = {}
    seen_colors: list[set[int]] = [set() for _ in range(n)]
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    edges = []
    for rec in edge_triples:
        u, v, c = (int(x) for x in rec)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if c < 0:
            raise GraphError(f"negative color {c}")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        key = edge_key(u, v)
        if key in color_of:
            raise DuplicateEdge(f"edge {key} given twice")
        for w in key:
            if c in seen_colors[w]:
                raise ImproperColoring(w, c)
            seen_colors[w].add(c)
        color_of[key] = c
        adjacency[u].append((v, c))
        adjacency[v].append((u, c))
        edges.append((key[0], key[1], c))
    adj = tuple(tuple(sorted(a)) for a in adjacency)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError("labels must have one entry per vertex")
    return EdgeColoredGraph(n, tuple(edges), adj, color_of, labels)


def average_degree(g: EdgeColoredGraph) -> Fraction:
    if g.n < 1:
        raise EmptyInput("average degree of the null graph")
    return Fraction(2 * g.m, g.n)


def neighborhood(g: EdgeColoredGraph, U: Iterable[int], F: Iterable[Sequence[int]] = ()) -> frozenset[int]:
    """Vertices outside ``U`` adjacent to ``U`` in ``g - F``."""
    U = frozenset(U)
    if not U:
        raise EmptyInput("neighborhood of the empty set")
    removed = edge_set(F)
    out = set()
    for u in U:
        for w, _ in g.adjacency[u]:
            if w not in U and edge_key(u, w) not in removed:
                out.add(w)
    return frozenset(out)


def restricted_degree(g: EdgeColoredGraph, v: int, F: Iterable[Sequence[int]]) -> int:
    if not 0 <= v < g.n:
        raise VertexOutOfRange(f"vertex {v}")
    return sum(1 for e in edge_set(F) if v in e and g.has_edge(*e))


def min_degree(g: EdgeColoredGraph) -> int:
    return min(g.degrees()) if g.n else 0
