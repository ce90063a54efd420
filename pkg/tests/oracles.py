"""Brute-force reference implementations.

Nothing here calls the package's algorithms; graphs are read only through
``n`` and ``edges`` so that every check is independent of the code under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def adjacency(g):
    adj = {v: {} for v in range(g.n)}
    for u, v, c in g.edges:
        adj[u][v] = c
        adj[v][u] = c
    return adj


def is_proper(g) -> bool:
    adj = adjacency(g)
    return all(len(set(nb.values())) == len(nb) for nb in adj.values())


def simple_rainbow_paths(g, s, colors=None, avoid=(), max_len=None):
    """Every rainbow path from ``s`` as ``(vertices, colors)``, by plain DFS."""
    adj = adjacency(g)
    avoid = set(avoid) - {s}
    out = []

    def go(path, used):
        out.append((tuple(path), tuple(used)))
        if max_len is not None and len(used) >= max_len:
            return
        for w, c in sorted(adj[path[-1]].items()):
            if w in path or w in avoid or c in used:
                continue
            if colors is not None and c not in colors:
                continue
            path.append(w)
            used.append(c)
            go(path, used)
            path.pop()
            used.pop()

    go([s], [])
    return out


def rp_oracle(g, x, colors=None, avoid=()):
    return frozenset(p[-1] for p, _ in simple_rainbow_paths(g, x, colors, avoid))


def rainbow_paths_between(g, s, t, colors=None, avoid=(), max_len=None):
    return [(p, c) for p, c in simple_rainbow_paths(g, s, colors, avoid, max_len) if p[-1] == t]


def rainbow_cycles(g, max_len=None):
    """All rainbow cycles as vertex tuples starting at their minimum vertex."""
    adj = adjacency(g)
    found = []
    for s in range(g.n):
        for p, cs in simple_rainbow_paths(g, s, max_len=max_len):
            if len(p) >= 3 and min(p) == s and s in adj[p[-1]]:
                c = adj[p[-1]][s]
                if c not in cs and (max_len is None or len(p) <= max_len):
                    found.append(p)
    return found


def has_rainbow_c4(g) -> bool:
    adj = adjacency(g)
    for a, b, c, d in itertools.permutations(range(g.n), 4):
        if b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
            cols = {adj[a][b], adj[b][c], adj[c][d], adj[d][a]}
            if len(cols) == 4:
                return True
    return False


def induced_ratio(g, W) -> float:
    W = set(W)
    e = sum(1 for u, v, _ in g.edges if u in W and v in W)
    return (2 * e / len(W)) / math.log(len(W))


def log_maximal_oracle(g):
    """Best induced ratio and every vertex set attaining it (floats, tolerant)."""
    best, arg = -1.0, []
    for k in range(2, g.n + 1):
        for W in itertools.combinations(range(g.n), k):
            r = induced_ratio(g, W)
            if r > best + 1e-12:
                best, arg = r, [W]
            elif abs(r - best) <= 1e-12:
                arg.append(W)
    return best, arg


def robust_violation_oracle(g, U, eps: Fraction):
    """Search every boundary-edge subset ``F`` for a violation at ``(U, eps)``.

    Exponential in the size of the boundary; meant for tiny graphs.
    """
    U = set(U)
    n = g.n
    if len(U) > n ** (1 - float(eps)) + 1e-9:
        return None
    d = Fraction(2 * len(g.edges), n)
    budget = eps / 4 * d * len(U)
    boundary = [(u, v) for u, v, _ in g.edges if (u in U) != (v in U)]
    for k in range(len(boundary) + 1):
        if k > budget:
            break
        for F in itertools.combinations(boundary, k):
            gone = set(F)
            nb = {v if u in U else u for u, v in boundary if (u, v) not in gone}
            if len(nb) < eps / 4 * len(U):
                return F
    return None


def signed_relation_oracle(elems, op, inv, identity):
    """Any choice of a non-empty subset with signs whose product is the identity (abelian use)."""
    k = len(elems)
    for pattern in itertools.product((-1, 0, 1), repeat=k):
        if not any(pattern):
            continue
        acc = identity
        for x, s in zip(elems, pattern):
            if s:
                acc = op(acc, x if s > 0 else inv(x))
        if acc == identity:
            return pattern
    return None


def ordered_relation_oracle(elems, op, inv, identity, max_len=None):
    """Ordered tuples of distinct elements with signs whose product is the identity."""
    top = len(elems) if max_len is None else max_len
    for m in range(1, top + 1):
        for tup in itertools.permutations(elems, m):
            for signs in itertools.product((-1, 1), repeat=m):
                acc = identity
                for x, s in zip(tup, signs):
                    acc = op(acc, x if s > 0 else inv(x))
                if acc == identity:
                    return tup, signs
    return None


def dimension_oracle(A, modulus):
    """Largest subset of ``A`` without a signed zero sum in ``Z_modulus``."""
    A = sorted(set(A))
    for k in range(len(A), 0, -1):
        for S in itertools.combinations(A, k):
            if signed_relation_oracle(S, lambda a, b: (a + b) % modulus, lambda a: (-a) % modulus, 0) is None:
                return k
    return 0


def bh_solutions(n, B, h):
    """Representation counts of ``m`` by strictly increasing ``h``-tuples, via product enumeration."""
    B = sorted(set(b % n for b in B))
    counts = {}
    for tup in itertools.product(B, repeat=h):
        if all(tup[i] < tup[i + 1] for i in range(h - 1)):
            m = sum(tup) % n
            counts[m] = counts.get(m, 0) + 1
    return counts


def is_sidon_mod(A, n) -> bool:
    """Pairwise sums ``a + b`` (``a <= b``) distinct mod ``n``; equivalent to distinct differences."""
    sums = [(a + b) % n for a, b in itertools.combinations_with_replacement(sorted(A), 2)]
    return len(sums) == len(set(sums))


def distinct_differences(A, n) -> bool:
    diffs = [(a - b) % n for a in A for b in A if a != b]
    return len(diffs) == len(set(diffs))
