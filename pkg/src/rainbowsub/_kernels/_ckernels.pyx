# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled search kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t, int32_t, uint8_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

cdef enum:
    COMPLETE = 0
    FOUND = 1
    EXHAUSTED = 2


cdef extern from *:
    """
    static inline int rs_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    """
    int rs_popcount(unsigned long long x) nogil
    int __builtin_ctzll(unsigned long long x) nogil


cdef void _restricted_bfs(const int64_t[::1] indptr, const int64_t[::1] nbr, const int64_t[::1] col,
                          int64_t n, int64_t root, const int64_t[::1] allowed,
                          const uint8_t[::1] forbidden, int64_t exempt,
                          int64_t* dist) noexcept nogil:
    cdef vector[int64_t] q
    cdef size_t head = 0
    cdef int64_t v, w, p
    for v in range(n):
        dist[v] = -1
    dist[root] = 0
    q.push_back(root)
    while head < q.size():
        v = q[head]
        head += 1
        for p in range(indptr[v], indptr[v + 1]):
            w = nbr[p]
            if dist[w] >= 0 or allowed[col[p]] < 0:
                continue
            if forbidden[w] and w != exempt:
                continue
            dist[w] = dist[v] + 1
            q.push_back(w)


def rainbow_search(const int64_t[::1] indptr, const int64_t[::1] nbr, const int64_t[::1] col,
                   int64_t n, int64_t source, int64_t target, const int64_t[::1] allowed,
                   const uint8_t[::1] forbidden, int64_t max_len, int64_t max_nodes):
    reached_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] reached = reached_arr
    reached[source] = 1
    if target == source:
        return FOUND, reached_arr, 0, [source]

    cdef vector[int64_t] dist
    dist.resize(n)
    cdef int64_t upper = -1
    cdef int64_t v, w, p, bit, depth, i
    if target >= 0:
        _restricted_bfs(indptr, nbr, col, n, target, allowed, forbidden, source, dist.data())
        if dist[source] < 0 or (max_len >= 0 and dist[source] > max_len):
            return COMPLETE, reached_arr, 0, []
    else:
        _restricted_bfs(indptr, nbr, col, n, source, allowed, forbidden, source, dist.data())
        upper = 0
        for i in range(n):
            if dist[i] >= 0:
                upper += 1

    cdef vector[unordered_map[uint64_t, int64_t]] parent
    parent.resize(n)
    parent[source][0] = -1
    cdef vector[int64_t] qv
    cdef vector[uint64_t] qm
    qv.push_back(source)
    qm.push_back(0)
    cdef size_t head = 0
    cdef int64_t nodes = 0, count = 1, status = COMPLETE, hit = -1
    cdef uint64_t mask, nmask, hit_mask = 0
    cdef bint use_dist = target >= 0

    with nogil:
        while head < qv.size():
            if upper >= 0 and count == upper:
                break
            v = qv[head]
            mask = qm[head]
            head += 1
            nodes += 1
            if nodes > max_nodes:
                status = EXHAUSTED
                break
            depth = rs_popcount(mask)
            if max_len >= 0 and depth >= max_len:
                continue
            for p in range(indptr[v], indptr[v + 1]):
                bit = allowed[col[p]]
                if bit < 0 or (mask >> bit) & 1:
                    continue
                w = nbr[p]
                if forbidden[w] and w != source:
                    continue
                if use_dist:
                    if dist[w] < 0 or (max_len >= 0 and depth + 1 + dist[w] > max_len):
                        continue
                nmask = mask | ((<uint64_t>1) << bit)
                if parent[w].count(nmask):
                    continue
                parent[w][nmask] = v
                if not reached[w]:
                    reached[w] = 1
                    count += 1
                if w == target:
                    status = FOUND
                    hit = w
                    hit_mask = nmask
                    break
                qv.push_back(w)
                qm.push_back(nmask)
            if status == FOUND:
                break

    if status != FOUND:
        return status, reached_arr, nodes, []
    walk = [hit]
    v = hit
    mask = hit_mask
    cdef int64_t u
    while not (v == source and mask == 0):
        u = parent[v][mask]
        for p in range(indptr[v], indptr[v + 1]):
            if nbr[p] == u:
                mask ^= (<uint64_t>1) << allowed[col[p]]
                break
        v = u
        walk.append(v)
    walk.reverse()
    return FOUND, reached_arr, nodes, walk


def induced_edge_counts(adjmask, int64_t n):
    cdef uint64_t[::1] adj = np.ascontiguousarray(adjmask, dtype=np.uint64)
    counts_arr = np.zeros((<int64_t>1) << n, dtype=np.int32)
    cdef int32_t[::1] counts = counts_arr
    cdef int64_t i, m, lo
    cdef uint64_t a
    with nogil:
        for i in range(n):
            lo = (<int64_t>1) << i
            a = adj[i] & <uint64_t>(lo - 1)
            for m in range(lo):
                counts[lo | m] = counts[m] + rs_popcount(a & <uint64_t>m)
    return counts_arr


def expander_scan(adjmask, int64_t n, int64_t mask_lo, int64_t mask_hi, max_u, max_nbr, budget):
    cdef uint64_t[::1] adj = np.ascontiguousarray(adjmask, dtype=np.uint64)
    cdef int64_t[::1] mu = np.ascontiguousarray(max_u, dtype=np.int64)
    cdef int64_t[:, ::1] mn = np.ascontiguousarray(max_nbr, dtype=np.int64)
    cdef int64_t[:, ::1] bd = np.ascontiguousarray(budget, dtype=np.int64)
    cdef int64_t n_eps = mu.shape[0]
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t mask, nb, m, low
    cdef int64_t u, e, k, j, t, cnt, cost, x
    cdef int64_t found_mask = -1, found_e = -1
    cdef int64_t mults[64]
    cdef bint have
    if mask_lo < 1:
        mask_lo = 1
    with nogil:
        for mask in range(<uint64_t>mask_lo, <uint64_t>mask_hi):
            u = rs_popcount(mask)
            have = False
            cnt = 0
            for e in range(n_eps):
                if u > mu[e] or bd[e, u] < 0:
                    continue
                if not have:
                    have = True
                    nb = 0
                    m = mask
                    while m:
                        low = m & (~m + 1)
                        nb |= adj[__builtin_ctzll(low)]
                        m ^= low
                    nb &= full & ~mask
                    cnt = 0
                    while nb:
                        low = nb & (~nb + 1)
                        x = rs_popcount(adj[__builtin_ctzll(low)] & mask)
                        # insertion sort, at most 64 entries
                        j = cnt
                        while j > 0 and mults[j - 1] > x:
                            mults[j] = mults[j - 1]
                            j -= 1
                        mults[j] = x
                        cnt += 1
                        nb ^= low
                k = cnt - mn[e, u]
                if k <= 0:
                    found_mask = mask
                    found_e = e
                    break
                if k > cnt:
                    continue
                cost = 0
                for t in range(k):
                    cost += mults[t]
                if cost <= bd[e, u]:
                    found_mask = mask
                    found_e = e
                    break
            if found_mask >= 0:
                break
    return found_mask, found_e
