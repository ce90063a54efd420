"""Rainbow paths, cycles and clique subdivisions.

Exact searches run a breadth-first search over ``(vertex, used colors)``
states, so a rainbow walk is found whenever one exists within the length
cap; shortcutting the walk at repeated vertices keeps a subset of its
colors and yields a rainbow path. Witness searches keep a single rainbow
path per vertex and are incomplete.

Colors in every public signature are color values as stored in the graph,
not dense indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .graph import EdgeColoredGraph, VertexOutOfRange
from .parallel import derive_seed, resolve_threads, run_chunks

MODES = ("exact", "witness", "hybrid")


class BudgetExhausted(RuntimeError):
    """Exact search hit its node budget; the answer is unknown."""

    def __init__(self, msg: str, nodes: int = 0):
        super().__init__(msg)
        self.nodes = nodes


class NotFound(RuntimeError):
    """Subdivision search gave up; ``completed`` holds the pairs that were joined."""

    def __init__(self, msg: str, completed: Mapping[tuple[int, int], "RainbowPath"] | None = None):
        super().__init__(msg)
        self.completed = dict(completed or {})


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    max_retries: int = 16
    seed: int = 0
    mode: str = "exact"

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_retries < 1:
            raise ValueError("budgets must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class RainbowPath:
    vertices: tuple[int, ...]
    colors: tuple[int, ...]
    is_cycle: bool = False

    def __post_init__(self):
        if self.is_cycle and len(self.colors) < 3:
            raise ValueError("a cycle needs at least three edges")

    @property
    def length(self) -> int:
        return len(self.colors)

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def internal(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    def reversed(self) -> "RainbowPath":
        return RainbowPath(self.vertices[::-1], self.colors[::-1], self.is_cycle)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "colors": list(self.colors), "is_cycle": self.is_cycle}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RainbowPath":
        return cls(tuple(obj["vertices"]), tuple(obj["colors"]), bool(obj.get("is_cycle", False)))


def path_problem(g: EdgeColoredGraph, p: RainbowPath) -> str | None:
    """Reason ``p`` is not a valid rainbow path (or cycle) in ``g``, else ``None``."""
    vs, cs = p.vertices, p.colors
    if len(vs) != len(cs) + 1 or not vs:
        return "ShapeMismatch"
    if any(not 0 <= v < g.n for v in vs):
        return "VertexOutOfRange"
    for i, c in enumerate(cs):
        actual = g.color(vs[i], vs[i + 1])
        if actual is None:
            return "NotAdjacent"
        if actual != c:
            return "WrongColor"
    if len(set(cs)) != len(cs):
        return "ColorReuse"
    body = vs[:-1] if p.is_cycle else vs
    if p.is_cycle and (vs[0] != vs[-1] or len(cs) < 3):
        return "NotACycle"
    if len(set(body)) != len(body):
        return "RepeatedVertex"
    return None


# ---------------------------------------------------------------------------
# kernel plumbing


def _color_bits(g: EdgeColoredGraph, colors: Iterable[int] | None) -> tuple[np.ndarray, int]:
    allowed = np.full(g.palette_size, -1, dtype=np.int64)
    bit = 0
    wanted = None if colors is None else set(colors)
    for i, c in enumerate(g.colors):
        if wanted is None or c in wanted:
            allowed[i] = bit
            bit += 1
    return allowed, bit


def _forbidden(g: EdgeColoredGraph, vertices: Iterable[int]) -> np.ndarray:
    out = np.zeros(g.n, dtype=np.uint8)
    for v in vertices:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v}")
        out[v] = 1
    return out


def _kernel_for(width: int):
    if width <= _kernels.MAX_C_COLORS:
        return _kernels.active
    return _kernels.python


def _run(g, source, target, colors, phi0, max_len, max_nodes):
    allowed, width = _color_bits(g, colors)
    forb = _forbidden(g, phi0)
    ip, nb, col = g.csr
    kern = _kernel_for(width)
    return kern.rainbow_search(ip, nb, col, g.n, source, target, allowed, forb,
                               -1 if max_len is None else max_len, max_nodes)


def shortcut(g: EdgeColoredGraph, walk: Sequence[int]) -> RainbowPath:
    """Cut a rainbow walk down to a rainbow path between the same endpoints."""
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            keep = pos[v] + 1
            for w in out[keep:]:
                del pos[w]
            del out[keep:]
        else:
            pos[v] = len(out)
            out.append(v)
    colors = tuple(g.color(a, b) for a, b in zip(out, out[1:]))
    return RainbowPath(tuple(out), colors)


def _check_vertex(g, v):
    if not 0 <= v < g.n:
        raise VertexOutOfRange(f"vertex {v}")


# ---------------------------------------------------------------------------
# witness trees


class WitnessTree:
    """One rainbow path per reached vertex, stored as parent pointers.

    Growth is breadth-first in discovery order; neighbors are tried in
    increasing id, so the first discovery (and its witness) is deterministic.
    Vertices in ``stop`` may be reached but are never extended.
    """

    def __init__(self, g: EdgeColoredGraph, root: int, colors: Iterable[int] | None,
                 phi0: Iterable[int] = (), stop: Iterable[int] = (), max_nodes: int | None = None):
        _check_vertex(g, root)
        self.g = g
        self.root = root
        allowed = None if colors is None else frozenset(colors)
        blocked = set(phi0) - {root}
        stop = set(stop)
        cidx = g.color_index
        parent = {root: (-1, -1)}
        used = {root: 0}
        order = [root]
        nodes = 0
        self.complete = True
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            if v in stop and v != root:
                continue
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                self.complete = False
                break
            mask = used[v]
            for w, c in g.adjacency[v]:
                if w in parent or w in blocked:
                    continue
                if allowed is not None and c not in allowed:
                    continue
                b = 1 << cidx[c]
                if mask & b:
                    continue
                parent[w] = (v, c)
                used[w] = mask | b
                order.append(w)
        self.parent = parent
        self.order = order

    def reached(self) -> frozenset[int]:
        return frozenset(self.parent)

    def __contains__(self, v) -> bool:
        return v in self.parent

    def path_to(self, v: int) -> RainbowPath:
        """Witness from the root to ``v``."""
        vs, cs = [v], []
        while vs[-1] != self.root:
            p, c = self.parent[vs[-1]]
            vs.append(p)
            cs.append(c)
        return RainbowPath(tuple(reversed(vs)), tuple(reversed(cs)))

    def depth(self, v: int) -> int:
        d = 0
        while v != self.root:
            v = self.parent[v][0]
            d += 1
        return d


# ---------------------------------------------------------------------------
# public search operations


def rainbow_path(g: EdgeColoredGraph, s: int, t: int, A: Iterable[int] | None = None,
                 phi0: Iterable[int] = (), max_len: int | None = None,
                 budget: SearchBudget = DEFAULT_BUDGET) -> RainbowPath | None:
    """Shortest rainbow ``s``-``t`` path with colors in ``A`` avoiding ``phi0``.

    ``None`` from exact mode means no such path exists; from witness mode it
    only means none was found.
    """
    _check_vertex(g, s)
    _check_vertex(g, t)
    phi0 = set(phi0)
    if s in phi0 or t in phi0:
        raise ValueError("endpoints must not be forbidden")
    if s == t:
        raise ValueError("endpoints must differ")
    if budget.mode in ("witness", "hybrid"):
        tree = WitnessTree(g, s, A, phi0, stop={t}, max_nodes=budget.max_nodes)
        if t in tree and (max_len is None or tree.depth(t) <= max_len):
            return tree.path_to(t)
        if budget.mode == "witness":
            return None
    status, _, nodes, walk = _run(g, s, t, A, phi0, max_len, budget.max_nodes)
    if status == _kernels.python.EXHAUSTED:
        raise BudgetExhausted(f"rainbow path search exceeded {budget.max_nodes} nodes", nodes)
    if status == _kernels.python.FOUND:
        return shortcut(g, walk)
    return None


def rp_set(g: EdgeColoredGraph, x: int, A: Iterable[int] | None = None, phi0: Iterable[int] = (),
           phi1: Iterable[int] = (), budget: SearchBudget = DEFAULT_BUDGET) -> frozenset[int]:
    """Vertices reachable from ``x`` by a rainbow path with colors in ``A - phi1``.

    Paths never touch ``phi0``; ``x`` is always included through the empty
    path. Witness mode returns a subset of the exact answer.
    """
    _check_vertex(g, x)
    colors = set(g.colors) if A is None else set(A)
    colors -= set(phi1)
    if budget.mode == "witness":
        return WitnessTree(g, x, colors, phi0, max_nodes=budget.max_nodes).reached()
    status, reached, nodes, _ = _run(g, x, -1, colors, phi0, None, budget.max_nodes)
    if status == _kernels.python.EXHAUSTED:
        if budget.mode == "hybrid":
            return WitnessTree(g, x, colors, phi0, max_nodes=budget.max_nodes).reached()
        raise BudgetExhausted(f"RP search exceeded {budget.max_nodes} nodes", nodes)
    return frozenset(np.nonzero(reached)[0].tolist())


def cycle_from_path(g: EdgeColoredGraph, p: RainbowPath) -> RainbowPath:
    """Close a path whose ends are adjacent into a cycle."""
    u, v = p.ends
    c = g.color(v, u)
    return RainbowPath(p.vertices + (u,), p.colors + (c,), True)


def find_rainbow_cycle(g: EdgeColoredGraph, max_len: int | None = None,
                       budget: SearchBudget = DEFAULT_BUDGET) -> RainbowPath | None:
    """A rainbow cycle of length at most ``max_len``, or ``None``.

    Each cycle is found from its minimum-color edge ``uv``: the search looks
    for a ``u``-``v`` path using only larger colors. The length cap never
    exceeds the palette size.
    """
    cap = g.palette_size if max_len is None else min(max_len, g.palette_size)
    if cap < 3:
        return None
    order = sorted(g.edges, key=lambda e: (g.color_index[e[2]], e[0], e[1]))
    spent = 0
    exhausted = False
    for u, v, c in order:
        higher = g.colors[g.color_index[c] + 1:]
        if len(higher) < 2:
            break
        if budget.mode in ("witness", "hybrid"):
            tree = WitnessTree(g, u, higher, stop={v}, max_nodes=budget.max_nodes)
            if v in tree and tree.depth(v) <= cap - 1:
                return cycle_from_path(g, tree.path_to(v))
            if budget.mode == "witness":
                continue
        remaining = budget.max_nodes - spent
        if remaining <= 0:
            exhausted = True
            break
        status, _, nodes, walk = _run(g, u, v, higher, (), cap - 1, remaining)
        spent += nodes
        if status == _kernels.python.FOUND:
            return cycle_from_path(g, shortcut(g, walk))
        if status == _kernels.python.EXHAUSTED:
            exhausted = True
            break
    if exhausted:
        raise BudgetExhausted(f"cycle search exceeded {budget.max_nodes} nodes", spent)
    return None


# ---------------------------------------------------------------------------
# subdivisions


@dataclass(frozen=True)
class SubdivisionCertificate:
    t: int
    hubs: tuple[int, ...]
    paths: tuple[RainbowPath, ...]  # one per hub pair, in combinations() order
    length_bound: int
    meta: dict = field(default_factory=dict, compare=False)

    def pair_paths(self) -> dict[tuple[int, int], RainbowPath]:
        return dict(zip(combinations(range(self.t), 2), self.paths))

    def to_json(self) -> dict:
        return {
            "kind": "subdivision",
            "t": self.t,
            "hubs": list(self.hubs),
            "length_bound": self.length_bound,
            "paths": [p.to_json() for p in self.paths],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SubdivisionCertificate":
        return cls(int(obj["t"]), tuple(obj["hubs"]),
                   tuple(RainbowPath.from_json(p) for p in obj["paths"]), int(obj["length_bound"]))


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_certificate(cert: SubdivisionCertificate, g: EdgeColoredGraph) -> Validation:
    """Check every subdivision invariant against ``g``; never raises on bad input."""
    t, hubs = cert.t, cert.hubs
    if t < 2 or len(hubs) != t or len(set(hubs)) != t:
        return Validation(False, "HubCount", f"expected {t} distinct hubs")
    if any(not 0 <= h < g.n for h in hubs):
        return Validation(False, "BadHub", "hub outside the vertex range")
    pairs = list(combinations(range(t), 2))
    if len(cert.paths) != len(pairs):
        return Validation(False, "MissingPair", f"{len(cert.paths)} paths for {len(pairs)} pairs")
    hub_set = set(hubs)
    seen_internal: dict[int, tuple[int, int]] = {}
    seen_colors: dict[int, tuple[int, int]] = {}
    for (i, j), p in zip(pairs, cert.paths):
        if p.is_cycle:
            return Validation(False, "ShapeMismatch", f"pair {(i, j)} given as a cycle")
        problem = path_problem(g, p)
        if problem:
            return Validation(False, problem, f"pair {(i, j)}")
        if set(p.ends) != {hubs[i], hubs[j]}:
            return Validation(False, "EndpointMismatch", f"pair {(i, j)}")
        if p.length > cert.length_bound:
            return Validation(False, "TooLong", f"pair {(i, j)} has length {p.length}")
        for v in p.internal:
            if v in hub_set:
                return Validation(False, "HubViolation", f"pair {(i, j)} passes hub {v}")
            if v in seen_internal:
                return Validation(False, "NotDisjoint", f"vertex {v} shared with {seen_internal[v]}")
            seen_internal[v] = (i, j)
        for c in p.colors:
            if c in seen_colors:
                return Validation(False, "ColorReuse", f"color {c} shared with {seen_colors[c]}")
            seen_colors[c] = (i, j)
    return Validation(True)


def default_length_bound(n: int, c: float = 4.0) -> int:
    """``ceil(c log n max(1, log log n))``; the inner clamp keeps tiny graphs sensible."""
    if n < 3:
        return max(1, n - 1)
    ln = math.log(n)
    return max(1, math.ceil(c * ln * max(1.0, math.log(ln))))


def choose_hubs(g: EdgeColoredGraph, t: int, rule: str = "maxdeg", hubs: Sequence[int] | None = None,
                seed: int = 0) -> tuple[int, ...]:
    if rule == "given":
        if hubs is None or len(hubs) != t or len(set(hubs)) != t:
            raise ValueError(f"need {t} distinct hubs")
        for h in hubs:
            _check_vertex(g, h)
        return tuple(hubs)
    if rule == "maxdeg":
        return tuple(sorted(range(g.n), key=lambda v: (-g.degree(v), v))[:t])
    if rule == "random":
        rng = np.random.default_rng(derive_seed(seed, "hubs"))
        return tuple(int(v) for v in rng.choice(g.n, size=t, replace=False))
    raise ValueError(f"unknown hub rule {rule!r}")


def join_witnesses(p1: RainbowPath, p2: RainbowPath) -> RainbowPath:
    """Join ``a -> u`` and ``b -> u`` into an ``a -> b`` path.

    Cuts at the first vertex of ``p1`` that also lies on ``p2``, which keeps
    the result simple; colors stay disjoint when the inputs were.
    """
    on2 = {v: k for k, v in enumerate(p2.vertices)}
    for k, v in enumerate(p1.vertices):
        if v in on2:
            m = on2[v]
            vs = p1.vertices[:k + 1] + p2.vertices[:m][::-1]
            cs = p1.colors[:k] + p2.colors[:m][::-1]
            return RainbowPath(vs, cs)
    raise ValueError("witnesses do not meet")


def _meet(g, a, b, A0, A1, phi0, len_bound, max_nodes):
    t1 = WitnessTree(g, a, A0, phi0, stop={b}, max_nodes=max_nodes)
    t2 = WitnessTree(g, b, A1, phi0, stop={a}, max_nodes=max_nodes)
    common = t1.reached() & t2.reached()
    best = None
    for u in sorted(common, key=lambda u: (t1.depth(u) + t2.depth(u), u)):
        p = join_witnesses(t1.path_to(u), t2.path_to(u))
        assert len(set(p.colors)) == len(p.colors)
        if p.length <= len_bound and (best is None or p.length < best.length):
            best = p
    return best


def find_subdivision(g: EdgeColoredGraph, t: int, hub_rule: str = "maxdeg",
                     hubs: Sequence[int] | None = None, len_bound: int | None = None,
                     budget: SearchBudget = SearchBudget(mode="hybrid"), c: float = 4.0,
                     threads: int | None = None) -> SubdivisionCertificate:
    """Greedily join every hub pair by a rainbow path, keeping paths disjoint.

    Each pair first tries random color splits: colors not yet used go to
    ``A0`` with probability 1/2 and the rest to its complement, one witness
    tree grows from each hub and the two witnesses are joined at a common
    vertex. After ``max_retries`` failed splits the pair falls back to an
    exact bounded search (unless the budget mode is ``witness``).
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    if g.n < t:
        raise ValueError(f"graph has fewer than {t} vertices")
    bound = default_length_bound(g.n, c) if len_bound is None else len_bound
    hub_t = choose_hubs(g, t, hub_rule, hubs, budget.seed)
    workers = resolve_threads(threads)
    used_colors: set[int] = set()
    internal: set[int] = set()
    done: dict[tuple[int, int], RainbowPath] = {}
    stats = {"split": 0, "exact": 0}
    for i, j in combinations(range(t), 2):
        a, b = hub_t[i], hub_t[j]
        phi0 = internal | (set(hub_t) - {a, b})
        free = [col for col in g.colors if col not in used_colors]

        def attempt(r, a=a, b=b, i=i, j=j, phi0=phi0, free=free):
            rng = np.random.default_rng(derive_seed(budget.seed, "pair", i, j, "retry", r))
            keep = rng.random(len(free)) < 0.5
            A0 = [col for col, k in zip(free, keep) if k]
            A1 = [col for col, k in zip(free, keep) if not k]
            return _meet(g, a, b, A0, A1, phi0, bound, budget.max_nodes)

        path = None
        if budget.mode != "exact":
            for p in run_chunks(attempt, list(range(budget.max_retries)), workers,
                                stop=lambda p: p is not None):
                if p is not None:
                    path = p
                    stats["split"] += 1
                    break
        if path is None and budget.mode != "witness":
            try:
                path = rainbow_path(g, a, b, free, phi0, bound,
                                    SearchBudget(budget.max_nodes, 1, budget.seed, "exact"))
            except BudgetExhausted:
                path = None
            if path is not None:
                stats["exact"] += 1
        if path is None:
            continue
        if path.vertices[0] != a:
            path = path.reversed()
        done[(i, j)] = path
        used_colors.update(path.colors)
        internal.update(path.internal)
    pairs = list(combinations(range(t), 2))
    if len(done) < len(pairs):
        raise NotFound(f"joined {len(done)} of {len(pairs)} hub pairs", done)
    cert = SubdivisionCertificate(t, hub_t, tuple(done[p] for p in pairs), bound, stats)
    check = validate_certificate(cert, g)
    assert check.ok, check
    return cert
