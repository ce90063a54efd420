"""Edge-colored graphs built from finite groups, plus a few stock families.

Every generator returns a graph whose vertex ``labels`` record
``(side, element)`` so that colors can be traced back to the defining
group equation.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .graph import EdgeColoredGraph, build_graph
from .groups import F2Group, FiniteGroup


class ConstructionError(ValueError):
    pass


class EmptySet(ConstructionError):
    pass


class EmptyConnectionSet(EmptySet):
    pass


def _distinct(group: FiniteGroup, elems: Iterable[int]) -> list[int]:
    return sorted({group.check(x) for x in elems})


def cayley_sum_graph(group: FiniteGroup, S: Iterable[int]) -> EdgeColoredGraph:
    """``x ~ y`` iff ``x + y`` lies in ``S``; the edge gets color ``x + y``.

    Elements with ``2x = s`` would give loops and are skipped.
    """
    group.require_abelian()
    S = _distinct(group, S)
    if not S:
        raise EmptyConnectionSet("connection set is empty")
    triples = []
    for x in group.elements():
        for s in S:
            y = group.sub(s, x)
            if x < y:
                triples.append((x, y, s))
    labels = [("G", x) for x in group.elements()]
    return build_graph(group.order, triples, labels=labels)


def hypercube(k: int) -> EdgeColoredGraph:
    """``Cay(F_2^k, {e_1..e_k})``; the edge along dimension ``i`` has color ``2^(i-1)``."""
    g = F2Group(k)
    return cayley_sum_graph(g, [g.basis(i) for i in range(1, k + 1)])


def sidon_graph(group: FiniteGroup, A: Iterable[int]) -> EdgeColoredGraph:
    """Bipartite graph on two copies of the group, ``x ~ y`` iff ``x - y`` in ``A``.

    ``X`` occupies vertices ``0..n-1`` and ``Y`` vertices ``n..2n-1``.
    """
    group.require_abelian()
    A = _distinct(group, A)
    if not A:
        raise EmptySet("difference set is empty")
    n = group.order
    triples = [(x, n + group.sub(x, a), a) for x in group.elements() for a in A]
    labels = [("X", x) for x in group.elements()] + [("Y", y) for y in group.elements()]
    return build_graph(2 * n, triples, labels=labels)


def bhg_graph(n: int, B: Iterable[int]) -> EdgeColoredGraph:
    """Vertex ``s`` of ``V_1`` joined to ``s + b`` of ``V_2`` with color ``b``.

    ``V_1`` is ``0..n-1`` and ``V_2`` is ``n..2n-1``; the result is ``|B|``-regular.
    """
    if n < 1:
        raise ConstructionError("modulus must be positive")
    B = sorted({int(b) % n for b in B})
    if not B:
        raise EmptySet("B is empty")
    triples = [(s, n + (s + b) % n, b) for s in range(n) for b in B]
    labels = [("V1", s) for s in range(n)] + [("V2", s) for s in range(n)]
    return build_graph(2 * n, triples, labels=labels)


def doubling_graph(group: FiniteGroup, A: Iterable[int], S: Iterable[int]) -> EdgeColoredGraph:
    """Bipartite graph between ``A`` and ``A*S``: ``a ~ a*s`` with color ``s``."""
    A = _distinct(group, A)
    S = _distinct(group, S)
    if not A or not S:
        raise EmptySet("A and S must be non-empty")
    B = sorted({group.op(a, s) for a in A for s in S})
    a_pos = {a: i for i, a in enumerate(A)}
    b_pos = {b: len(A) + i for i, b in enumerate(B)}
    triples = [(a_pos[a], b_pos[group.op(a, s)], s) for a in A for s in S]
    labels = [("A", a) for a in A] + [("B", b) for b in B]
    return build_graph(len(A) + len(B), triples, labels=labels)


def convolution_graph(group: FiniteGroup, A: Iterable[int], B: Iterable[int],
                      L: Iterable[int]) -> EdgeColoredGraph:
    """Bipartite graph between copies of ``A`` and ``B``: ``a ~ b`` with color ``a - b`` when it lies in ``L``."""
    group.require_abelian()
    A = _distinct(group, A)
    B = _distinct(group, B)
    L = set(_distinct(group, L))
    if not L:
        raise EmptySet("color set L is empty")
    b_pos = {b: len(A) + i for i, b in enumerate(B)}
    triples = []
    for i, a in enumerate(A):
        for b in B:
            lam = group.sub(a, b)
            if lam in L:
                triples.append((i, b_pos[b], lam))
    # a - b determines the color, so no pair can be joined twice
    assert len({(u, v) for u, v, _ in triples}) == len(triples)
    labels = [("A", a) for a in A] + [("B", b) for b in B]
    return build_graph(len(A) + len(B), triples, labels=labels)


def complete_graph_1f(n: int) -> EdgeColoredGraph:
    """``K_n`` (``n`` even) with the round-robin 1-factorization, ``n - 1`` colors."""
    if n < 2 or n % 2:
        raise ConstructionError("1-factorization needs an even n >= 2")
    m = n - 1
    triples = []
    for r in range(m):
        triples.append((r, n - 1, r))
        for i in range(1, n // 2):
            triples.append(((r + i) % m, (r - i) % m, r))
    return build_graph(n, triples)


def greedy_coloring(n: int, pairs: Iterable[tuple[int, int]]) -> EdgeColoredGraph:
    """Properly color an uncolored simple graph, each edge taking the least free color."""
    used: list[set[int]] = [set() for _ in range(n)]
    triples = []
    for u, v in pairs:
        c = 0
        while c in used[u] or c in used[v]:
            c += 1
        used[u].add(c)
        used[v].add(c)
        triples.append((u, v, c))
    return build_graph(n, triples)


def random_graph(n: int, p: float, seed: int) -> EdgeColoredGraph:
    """Erdős–Rényi ``G(n, p)`` with a greedy proper edge coloring."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return greedy_coloring(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def random_proper_coloring(n: int, pairs, seed: int) -> EdgeColoredGraph:
    """Greedy proper coloring of ``pairs`` taken in a seeded random order."""
    pairs = list(pairs)
    order = np.random.default_rng(seed).permutation(len(pairs))
    return greedy_coloring(n, [pairs[i] for i in order])


def cliques_with_bridge(k: int) -> EdgeColoredGraph:
    """Two disjoint ``K_k`` on ``0..k-1`` and ``k..2k-1`` joined by the edge ``(k-1, k)``."""
    pairs = [(u, v) for u in range(k) for v in range(u + 1, k)]
    pairs += [(u + k, v + k) for u, v in pairs]
    pairs.append((k - 1, k))
    return greedy_coloring(2 * k, pairs)
