"""Log-maximal subgraphs and robust sublinear expansion.

A graph on ``n`` vertices with average degree ``d`` is a robust sublinear
expander when every non-empty ``U`` with ``|U| <= n^(1-eps)`` keeps
``|N_{G-F}(U)| >= (eps/4)|U|`` after deleting any ``F`` of at most
``(eps/4) d |U|`` edges, for every ``0 <= eps <= 1``.

For a fixed ``U`` the cheapest way to shrink ``N(U)`` is to cut the
neighbors with the fewest edges into ``U``; the neighbors are independent,
so that greedy choice is optimal. All falsification below rests on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .graph import EdgeColoredGraph, EmptyInput, average_degree, edge_key, min_degree, neighborhood
from .parallel import derive_seed, resolve_threads, run_chunks

DEFAULT_EXACT_LIMIT = 16
DEFAULT_U_EXACT = 14
MAX_EXACT = 24
DEFAULT_GRID = tuple(Fraction(k, 20) for k in range(21))


class TooLargeForExact(ValueError):
    pass


class DegenerateGraph(ValueError):
    pass


class AlreadyBelowThreshold(Exception):
    pass


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats go through their shortest repr so ``0.05`` is ``1/20``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


# ---------------------------------------------------------------------------
# log-maximal subgraphs


def _ratio_gt(e1: int, w1: int, e2: int, w2: int) -> bool:
    """Exactly decide ``2e1/(w1 log w1) > 2e2/(w2 log w2)`` for ``w1, w2 >= 2``."""
    lhs = e1 * w2 * math.log(w2)
    rhs = e2 * w1 * math.log(w1)
    scale = max(abs(lhs), abs(rhs), 1.0)
    if abs(lhs - rhs) > 1e-9 * scale:
        return lhs > rhs
    # near tie: compare w2^(e1 w2) with w1^(e2 w1) as integers
    return w2 ** (e1 * w2) > w1 ** (e2 * w1)


def _ratio(edges: int, size: int) -> float:
    return 2 * edges / (size * math.log(size))


@dataclass(frozen=True)
class LogMaximalReport:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    ratio: float
    mode: str
    certified: bool

    @property
    def average_degree(self) -> Fraction:
        return Fraction(2 * len(self.edges), len(self.vertices))

    def subgraph(self, g: EdgeColoredGraph) -> EdgeColoredGraph:
        return g.induced(self.vertices)


def _require_exact(g: EdgeColoredGraph, exact_limit: int) -> None:
    if g.n > min(exact_limit, MAX_EXACT):
        raise TooLargeForExact(f"n = {g.n} exceeds exact limit {min(exact_limit, MAX_EXACT)}")


def _edge_counts(g: EdgeColoredGraph) -> np.ndarray:
    adj = np.array(g.adjmask, dtype=np.uint64)
    return _kernels.active.induced_edge_counts(adj, g.n)


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _report(g, vertices, mode, certified):
    vs = set(vertices)
    edges = tuple(e for e in g.edges if e[0] in vs and e[1] in vs)
    return LogMaximalReport(tuple(sorted(vs)), edges, _ratio(len(edges), len(vs)), mode, certified)


def extract_log_maximal(g: EdgeColoredGraph, mode: str = "exact",
                        exact_limit: int = DEFAULT_EXACT_LIMIT) -> LogMaximalReport:
    """Induced subgraph maximizing ``d(H)/log|V(H)|`` over ``|V(H)| >= 2``.

    Ties go to the larger vertex set, then the lexicographically first one.
    ``peel`` mode deletes a minimum-degree vertex (lowest id first) at each
    step and keeps the best ratio seen; it is never certified.
    """
    if g.n < 2 or g.m == 0:
        raise DegenerateGraph("need at least two vertices and one edge")
    if mode == "peel":
        return _peel(g)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    _require_exact(g, exact_limit)
    counts = _edge_counts(g)
    sizes = np.array([int(m).bit_count() for m in range(1 << g.n)], dtype=np.int64)
    ok = sizes >= 2
    ratio = np.zeros(len(counts))
    logs = np.log(np.maximum(sizes, 2))
    ratio[ok] = 2 * counts[ok] / (sizes[ok] * logs[ok])
    top = ratio.max()
    near = np.nonzero(ok & (ratio >= top * (1 - 1e-9)))[0]
    best = None
    for m in near.tolist():
        e, w = int(counts[m]), int(sizes[m])
        key = (e, w, _mask_vertices(m))
        if best is None:
            best = key
            continue
        be, bw, bv = best
        if _ratio_gt(e, w, be, bw):
            best = key
        elif not _ratio_gt(be, bw, e, w):
            if w > bw or (w == bw and key[2] < bv):
                best = key
    return _report(g, best[2], "exact", True)


def _peel(g: EdgeColoredGraph) -> LogMaximalReport:
    alive = set(range(g.n))
    deg = g.degrees()
    edges = g.m
    best = (edges, g.n, tuple(range(g.n)))
    while len(alive) > 2:
        v = min(alive, key=lambda x: (deg[x], x))
        alive.remove(v)
        for w, _ in g.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                edges -= 1
        if _ratio_gt(edges, len(alive), best[0], best[1]):
            best = (edges, len(alive), tuple(sorted(alive)))
    return _report(g, best[2], "peel", False)


def check_log_maximal(g: EdgeColoredGraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> bool:
    """True iff no induced subgraph on two or more vertices beats the whole graph's ratio."""
    _require_exact(g, exact_limit)
    if g.n < 2:
        return True
    counts = _edge_counts(g)
    full_e, full_w = g.m, g.n
    top = _ratio(full_e, full_w)
    for m in range(1 << g.n):
        w = m.bit_count()
        if w < 2:
            continue
        e = int(counts[m])
        if _ratio(e, w) >= top * (1 - 1e-9) and _ratio_gt(e, w, full_e, full_w):
            return False
    return True


class MinDegreeCheck(NamedTuple):
    delta: int
    half_average: Fraction
    passed: bool


def min_degree_check(g: EdgeColoredGraph) -> MinDegreeCheck:
    if g.n < 1:
        raise EmptyInput("graph has no vertices")
    half = average_degree(g) / 2
    delta = min_degree(g)
    return MinDegreeCheck(delta, half, delta >= half)


# ---------------------------------------------------------------------------
# robust expansion


@dataclass(frozen=True)
class ExpanderViolation:
    epsilon: Fraction
    U: frozenset[int]
    F: tuple[tuple[int, int], ...]
    achieved_neighborhood: int
    candidate_index: int = field(default=-1, compare=False)

    def to_json(self) -> dict:
        return {
            "kind": "expander-violation",
            "epsilon": str(self.epsilon),
            "U": sorted(self.U),
            "F": [list(e) for e in self.F],
            "achieved_neighborhood": self.achieved_neighborhood,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExpanderViolation":
        return cls(Fraction(obj["epsilon"]), frozenset(obj["U"]),
                   tuple(edge_key(*e) for e in obj["F"]), int(obj["achieved_neighborhood"]))


def size_admissible(u: int, n: int, eps: Fraction) -> bool:
    """``u <= n^(1-eps)``, exact for small denominators."""
    if u <= 1:
        return True
    if eps >= 1:
        return False
    lhs = math.log(u)
    rhs = (1 - float(eps)) * math.log(n)
    if abs(lhs - rhs) > 1e-9:
        return lhs < rhs
    p, q = eps.numerator, eps.denominator
    if q <= 64:
        return u ** q <= n ** (q - p)
    return lhs <= rhs


def max_admissible_size(n: int, eps: Fraction) -> int:
    u = max(1, int(math.floor(n ** (1 - float(eps)) + 1e-9)))
    while u > 1 and not size_admissible(u, n, eps):
        u -= 1
    while u < n and size_admissible(u + 1, n, eps):
        u += 1
    return u


def neighborhood_target(eps: Fraction, u: int) -> int:
    """Largest integer strictly below ``(eps/4) u``; -1 when no count qualifies."""
    return _ceil_frac(eps * u / 4) - 1


def critical_epsilon(n: int, u: int) -> Fraction:
    """Largest admissible ``eps`` for sets of size ``u``, rounded down to ``1e-9``."""
    if u <= 1:
        return Fraction(1)
    val = 1 - math.log(u) / math.log(n)
    eps = Fraction(math.floor(val * 10**9), 10**9)
    while eps > 0 and not size_admissible(u, n, eps):
        eps -= Fraction(1, 10**9)
    return max(eps, Fraction(0))


class CutResult(NamedTuple):
    edges: tuple[tuple[int, int], ...]
    achieved_neighborhood: int
    already_below: bool


def _neighbor_mults(g: EdgeColoredGraph, U: frozenset[int]) -> dict[int, int]:
    mult: dict[int, int] = {}
    for u in U:
        for w, _ in g.adjacency[u]:
            if w not in U:
                mult[w] = mult.get(w, 0) + 1
    return mult


def optimal_cut_for(g: EdgeColoredGraph, U: Iterable[int], eps) -> CutResult:
    """Fewest edges whose removal pushes ``|N(U)|`` strictly below ``(eps/4)|U|``.

    At ``eps = 0`` no neighborhood size qualifies; the full cut (``|N| = 0``) is
    returned. ``already_below`` is set when no edge needs to be removed.
    """
    U = frozenset(U)
    if not U:
        raise EmptyInput("U is empty")
    eps = as_fraction(eps)
    mult = _neighbor_mults(g, U)
    target = max(neighborhood_target(eps, len(U)), 0)
    excess = len(mult) - target
    if excess <= 0:
        return CutResult((), len(mult), True)
    order = sorted(mult, key=lambda w: (mult[w], w))[:excess]
    cut = set(order)
    F = sorted(edge_key(u, w) for u in U for w, _ in g.adjacency[u] if w in cut)
    return CutResult(tuple(F), len(mult) - excess, False)


def verify_violation(g: EdgeColoredGraph, v: ExpanderViolation) -> bool:
    """Re-check a violation from scratch against the definition."""
    eps = as_fraction(v.epsilon)
    if not (0 <= eps <= 1) or not v.U:
        return False
    if any(not 0 <= x < g.n for x in v.U):
        return False
    if any(not g.has_edge(*e) for e in v.F) or len(set(v.F)) != len(v.F):
        return False
    u = len(v.U)
    if not size_admissible(u, g.n, eps):
        return False
    if len(v.F) > eps / 4 * average_degree(g) * u:
        return False
    nb = len(neighborhood(g, v.U, v.F))
    return nb == v.achieved_neighborhood and nb < eps / 4 * u


def _violation_for(g: EdgeColoredGraph, U: frozenset[int], eps: Fraction, index: int):
    if eps <= 0:
        return None
    cut = optimal_cut_for(g, U, eps)
    if cut.achieved_neighborhood >= eps * len(U) / 4:
        return None
    if len(cut.edges) > eps / 4 * average_degree(g) * len(U):
        return None
    return ExpanderViolation(eps, U, cut.edges, cut.achieved_neighborhood, index)


def _tables(g: EdgeColoredGraph, grid: Sequence[Fraction] | str):
    """Per-(eps, size) limits for the scan kernel.

    Returns ``(eps_values, max_u, max_nbr, budget)``. In ``critical`` mode
    there is one entry per size ``u``, active for that size only.
    """
    n = g.n
    d = average_degree(g)
    if isinstance(grid, str):
        if grid != "critical":
            raise ValueError(f"unknown grid {grid!r}")
        eps_values = [critical_epsilon(n, u) for u in range(1, n + 1)]
        sizes = [[u] for u in range(1, n + 1)]
    else:
        eps_values = [as_fraction(e) for e in grid]
        sizes = [list(range(1, n + 1)) for _ in eps_values]
    max_u = np.zeros(len(eps_values), dtype=np.int64)
    max_nbr = np.full((len(eps_values), n + 1), -(n + 1), dtype=np.int64)
    budget = np.full((len(eps_values), n + 1), -1, dtype=np.int64)
    for i, eps in enumerate(eps_values):
        if not 0 <= eps <= 1:
            raise ValueError(f"epsilon {eps} outside [0, 1]")
        if eps == 0:
            continue  # |N| >= 0 always holds
        top = max_admissible_size(n, eps)
        max_u[i] = top
        for u in sizes[i]:
            if u > top:
                continue
            max_nbr[i, u] = neighborhood_target(eps, u)
            budget[i, u] = _floor_frac(eps * d * u / 4)
    return eps_values, max_u, max_nbr, budget


def falsify_robust_expander(g: EdgeColoredGraph, eps_grid: Sequence | str | None = None,
                            u_budget: int = 20000, seed: int = 0, mode: str = "auto",
                            u_exact: int = DEFAULT_U_EXACT, threads: int | None = None):
    """First violation of robust expansion, or ``None``.

    ``exact`` mode scans every non-empty ``U`` (``n <= u_exact``) in mask order;
    ``sampled`` mode tests ``u_budget`` seeded connected sets. ``eps_grid`` is
    a list of values in ``[0, 1]`` or ``"critical"``, which tests each ``U``
    at the largest admissible ``eps`` for its size. A sampled ``None`` proves
    nothing.
    """
    grid = DEFAULT_GRID if eps_grid is None else eps_grid
    if mode == "auto":
        mode = "exact" if g.n <= u_exact else "sampled"
    if g.n == 0:
        return None
    eps_values, max_u, max_nbr, budget = _tables(g, grid)
    if mode == "exact":
        if g.n > min(u_exact, MAX_EXACT):
            raise TooLargeForExact(f"exact scan needs n <= {min(u_exact, MAX_EXACT)}")
        return _exact_scan(g, eps_values, max_u, max_nbr, budget, threads)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    return _sampled_scan(g, eps_values, max_u, max_nbr, budget, u_budget, seed, threads)


def _exact_scan(g, eps_values, max_u, max_nbr, budget, threads):
    kern = _kernels.active if g.n <= 63 else _kernels.python
    adj = np.array(g.adjmask, dtype=np.uint64)
    total = 1 << g.n
    workers = resolve_threads(threads)
    chunk = max(1024, total // (4 * workers) + 1)
    bounds = [(lo, min(lo + chunk, total)) for lo in range(1, total, chunk)]

    def work(b):
        return kern.expander_scan(adj, g.n, b[0], b[1], max_u, max_nbr, budget)

    for mask, e in run_chunks(work, bounds, workers, stop=lambda r: r[0] >= 0):
        if mask >= 0:
            U = frozenset(_mask_vertices(int(mask)))
            v = _violation_for(g, U, eps_values[e], int(mask))
            assert v is not None and verify_violation(g, v)
            return v
    return None


def sample_connected_set(g: EdgeColoredGraph, size: int, rng: np.random.Generator) -> frozenset[int]:
    """Grow a connected set from a random start by adding random boundary vertices."""
    start = int(rng.integers(g.n))
    chosen = {start}
    frontier = {w for w, _ in g.adjacency[start]}
    while len(chosen) < size and frontier:
        w = sorted(frontier)[int(rng.integers(len(frontier)))]
        chosen.add(w)
        frontier.discard(w)
        frontier.update(x for x, _ in g.adjacency[w] if x not in chosen)
    return frozenset(chosen)


def _sampled_scan(g, eps_values, max_u, max_nbr, budget, u_budget, seed, threads):
    top = int(max(max_u.max(), 1))
    workers = resolve_threads(threads)

    def candidate(i):
        rng = np.random.default_rng(derive_seed(seed, "expander", i))
        size = int(rng.integers(1, top + 1))
        return sample_connected_set(g, size, rng)

    def work(block):
        for i in range(*block):
            U = candidate(i)
            u = len(U)
            mults = sorted(_neighbor_mults(g, U).values())
            for e, eps in enumerate(eps_values):
                if u > max_u[e] or budget[e, u] < 0:
                    continue
                k = len(mults) - int(max_nbr[e, u])
                if k <= 0 or (k <= len(mults) and sum(mults[:k]) <= budget[e, u]):
                    return _violation_for(g, U, eps, i)
        return None

    step = max(64, u_budget // (4 * workers) + 1)
    blocks = [(lo, min(lo + step, u_budget)) for lo in range(0, u_budget, step)]
    for v in run_chunks(work, blocks, workers, stop=lambda r: r is not None):
        if v is not None:
            assert verify_violation(g, v)
            return v
    return None
