"""Pure-Python implementations of the search kernels.

Signatures and results match ``_ckernels`` exactly; this module is used when
the extension is not built, when ``RAINBOWSUB_PURE_PYTHON`` is set, and for
color sets wider than 64 bits.
"""

from collections import deque

import numpy as np

COMPLETE, FOUND, EXHAUSTED = 0, 1, 2


def _restricted_bfs(indptr, nbr, col, n, root, allowed, forbidden, exempt):
    """Plain BFS distances from ``root`` through allowed colors, skipping forbidden vertices."""
    dist = [-1] * n
    dist[root] = 0
    q = deque([root])
    while q:
        v = q.popleft()
        for p in range(indptr[v], indptr[v + 1]):
            w = nbr[p]
            if dist[w] >= 0 or allowed[col[p]] < 0:
                continue
            if forbidden[w] and w != exempt:
                continue
            dist[w] = dist[v] + 1
            q.append(w)
    return dist


def rainbow_search(indptr, nbr, col, n, source, target, allowed, forbidden, max_len, max_nodes):
    """Breadth-first search over ``(vertex, used-color set)`` states.

    ``allowed[c]`` is the bit assigned to dense color ``c`` or -1. Vertices with
    ``forbidden[v]`` are never entered (the source is exempt). With
    ``target >= 0`` the search stops at the first state on the target and
    returns the rainbow walk that reached it; otherwise it collects every
    vertex reachable by a rainbow walk.

    Returns ``(status, reached, nodes, walk)``.
    """
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    nbr = nbr.tolist() if hasattr(nbr, "tolist") else nbr
    col = col.tolist() if hasattr(col, "tolist") else col
    allowed = allowed.tolist() if hasattr(allowed, "tolist") else allowed
    forbidden = forbidden.tolist() if hasattr(forbidden, "tolist") else forbidden

    reached = np.zeros(n, dtype=np.uint8)
    reached[source] = 1
    if target == source:
        return FOUND, reached, 0, [source]

    if target >= 0:
        dist = _restricted_bfs(indptr, nbr, col, n, target, allowed, forbidden, source)
        if dist[source] < 0 or (max_len >= 0 and dist[source] > max_len):
            return COMPLETE, reached, 0, []
        upper = -1
    else:
        dist = None
        ub = _restricted_bfs(indptr, nbr, col, n, source, allowed, forbidden, source)
        upper = sum(1 for d in ub if d >= 0)

    parent = [dict() for _ in range(n)]
    parent[source][0] = -1
    queue = deque([(source, 0, 0)])
    nodes = 0
    count = 1
    while queue:
        if upper >= 0 and count == upper:
            return COMPLETE, reached, nodes, []
        v, mask, depth = queue.popleft()
        nodes += 1
        if nodes > max_nodes:
            return EXHAUSTED, reached, nodes, []
        if max_len >= 0 and depth >= max_len:
            continue
        for p in range(indptr[v], indptr[v + 1]):
            bit = allowed[col[p]]
            if bit < 0 or (mask >> bit) & 1:
                continue
            w = nbr[p]
            if forbidden[w] and w != source:
                continue
            if dist is not None:
                if dist[w] < 0 or (max_len >= 0 and depth + 1 + dist[w] > max_len):
                    continue
            nmask = mask | (1 << bit)
            seen = parent[w]
            if nmask in seen:
                continue
            seen[nmask] = v
            if not reached[w]:
                reached[w] = 1
                count += 1
            if w == target:
                return FOUND, reached, nodes, _walk(parent, indptr, nbr, col, allowed, source, w, nmask)
            queue.append((w, nmask, depth + 1))
    return COMPLETE, reached, nodes, []


def _walk(parent, indptr, nbr, col, allowed, source, v, mask):
    out = [v]
    while not (v == source and mask == 0):
        u = parent[v][mask]
        for p in range(indptr[v], indptr[v + 1]):
            if nbr[p] == u:
                mask ^= 1 << allowed[col[p]]
                break
        v = u
        out.append(v)
    out.reverse()
    return out


def induced_edge_counts(adjmask, n):
    """Edge count of ``G[W]`` for every vertex mask ``W`` of ``0..n-1``."""
    adj = [int(a) for a in adjmask]
    counts = np.zeros(1 << n, dtype=np.int32)
    for i in range(n):
        lo = 1 << i
        a = adj[i] & (lo - 1)
        for m in range(lo):
            counts[lo | m] = counts[m] + (a & m).bit_count()
    return counts


def expander_scan(adjmask, n, mask_lo, mask_hi, max_u, max_nbr, budget):
    """First ``(mask, eps_index)`` in ``[mask_lo, mask_hi)`` that violates robust expansion.

    For grid entry ``e`` a set ``U`` of size ``u`` is admissible when
    ``u <= max_u[e]``; it violates when the cheapest way to shrink its
    neighborhood to at most ``max_nbr[e][u]`` vertices deletes at most
    ``budget[e][u]`` edges. Removing neighbor ``w`` costs ``|N(w) & U|`` edges.
    """
    adj = [int(a) for a in adjmask]
    max_u = [int(x) for x in max_u]
    max_nbr = np.asarray(max_nbr).tolist()
    budget = np.asarray(budget).tolist()
    n_eps = len(max_u)
    full = (1 << n) - 1
    for mask in range(max(mask_lo, 1), mask_hi):
        u = mask.bit_count()
        mults = None
        for e in range(n_eps):
            if u > max_u[e] or budget[e][u] < 0:
                continue
            if mults is None:
                nb = 0
                m = mask
                while m:
                    low = m & -m
                    nb |= adj[low.bit_length() - 1]
                    m ^= low
                nb &= full & ~mask
                mults = []
                while nb:
                    low = nb & -nb
                    mults.append((adj[low.bit_length() - 1] & mask).bit_count())
                    nb ^= low
                mults.sort()
            k = len(mults) - max_nbr[e][u]
            if k <= 0 or (k <= len(mults) and sum(mults[:k]) <= budget[e][u]):
                return mask, e
    return -1, -1
