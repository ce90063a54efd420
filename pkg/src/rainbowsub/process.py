"""Thinning and sprinkling of random color sets at desk scale.

``A_0`` keeps each color with probability 1/2 and every later step keeps
each surviving color with probability ``p = 1 - 1/T``. A color therefore
has a geometric survival time, which is how the nested sequence is drawn:
``A_l`` is the set of colors in ``A_0`` whose survival time is at least
``l``. This has exactly the law of step-by-step retention and costs
``O(|C|)`` however long the schedule is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import median
from typing import Iterable, Mapping, Sequence

import numpy as np

from .expander import (ExpanderViolation, TooLargeForExact, as_fraction, size_admissible,
                       verify_violation)
from .graph import EdgeColoredGraph, average_degree, edge_key, neighborhood
from .parallel import derive_seed, parallel_map
from .search import BudgetExhausted, RainbowPath, SearchBudget, WitnessTree, path_problem, rp_set

PRESETS = {
    "paper": (10.0, 1e5, 10.0),
    "desk": (2.0, 2.0, 2.0),
}
WILSON_Z99 = 2.576
EXACT_RP_LIMIT = 12


class InvalidOverride(ValueError):
    pass


class Stalled(RuntimeError):
    """Sprinkling stopped growing; ``trace`` holds the rounds so far."""

    def __init__(self, msg: str, trace: "SprinkleTrace"):
        super().__init__(msg)
        self.trace = trace


class HypothesisViolated(ValueError):
    pass


def _ceil(x: float) -> int:
    # absorb float noise so that e.g. 10 * log log e^e gives exactly 10
    return math.ceil(x - 1e-9)


# ---------------------------------------------------------------------------
# schedule


@dataclass(frozen=True)
class ThinningSchedule:
    n: int
    t: int
    kappa: float
    lam: float
    beta: float
    K: int
    L: int
    p: float

    @property
    def T(self) -> int:
        return self.K * self.L

    @property
    def steps(self) -> int:
        """Length of the thinning run, ``(K - 1) L``."""
        return (self.K - 1) * self.L

    def f(self, k: int) -> float:
        return self.n * math.exp(-0.5 * self.beta ** k)

    def eps(self, k: int) -> float:
        """``beta^(k-1) / (2 log n)``, clamped to 1."""
        return min(1.0, self.beta ** (k - 1) / (2 * math.log(self.n)))

    def to_json(self) -> dict:
        return {"n": self.n, "t": self.t, "kappa": self.kappa, "lambda": self.lam,
                "beta": self.beta, "K": self.K, "L": self.L, "T": self.T, "p": self.p}


def make_schedule(n: int, t: int = 2, preset: str = "paper", kappa: float | None = None,
                  lam: float | None = None, beta: float | None = None,
                  retention: float | None = None) -> ThinningSchedule:
    """``K = ceil(kappa log log n)``, ``L = ceil(lam ceil(log n))`` and ``T = KL``.

    ``K`` is at least 1 and ``L`` at least 2; ``retention`` replaces the
    default ``1 - 1/T``.
    """
    if n < 3:
        raise InvalidOverride("schedule needs n >= 3")
    if preset not in PRESETS:
        raise InvalidOverride(f"unknown preset {preset!r}")
    k0, l0, b0 = PRESETS[preset]
    kappa = k0 if kappa is None else kappa
    lam = l0 if lam is None else lam
    beta = b0 if beta is None else beta
    for name, val in (("kappa", kappa), ("lambda", lam), ("beta", beta), ("t", t)):
        if val <= 0:
            raise InvalidOverride(f"{name} must be positive")
    ln = math.log(n)
    K = max(1, _ceil(kappa * math.log(ln)))
    L = max(2, _ceil(lam * _ceil(ln)))
    p = 1 - 1 / (K * L) if retention is None else float(retention)
    if not 0 <= p <= 1:
        raise InvalidOverride("retention must lie in [0, 1]")
    return ThinningSchedule(n, t, float(kappa), float(lam), float(beta), K, L, p)


# ---------------------------------------------------------------------------
# nested color sets


class NestedColors:
    """A nested sequence ``A_0 ⊇ A_1 ⊇ ...`` drawn through survival times."""

    def __init__(self, palette: Sequence[int], p: float, seed: int, a0_prob: float = 0.5):
        self.palette = tuple(sorted(palette))
        rng = np.random.default_rng(seed)
        m = len(self.palette)
        self.in_a0 = rng.random(m) < a0_prob
        if p >= 1:
            self.survival = np.full(m, np.iinfo(np.int64).max, dtype=np.int64)
        elif p <= 0:
            self.survival = np.zeros(m, dtype=np.int64)
        else:
            # failures before the first removal
            self.survival = rng.geometric(1 - p, m).astype(np.int64) - 1

    def at(self, step: int) -> frozenset[int]:
        keep = self.in_a0 & (self.survival >= step)
        return frozenset(c for c, k in zip(self.palette, keep) if k)

    def size_at(self, step: int) -> int:
        return int((self.in_a0 & (self.survival >= step)).sum())


def sample_nested_colors(palette: Iterable[int], schedule: ThinningSchedule, steps: int,
                         seed: int, a0_prob: float = 0.5) -> list[frozenset[int]]:
    """``[A_0, ..., A_steps]`` with ``steps <= (K - 1) L``."""
    if steps < 0 or steps > schedule.steps:
        raise ValueError(f"steps must lie in 0..{schedule.steps}")
    nc = NestedColors(list(palette), schedule.p, seed, a0_prob)
    return [nc.at(l) for l in range(steps + 1)]


@dataclass(frozen=True)
class SizeCheck:
    expected: float
    mean: float
    std_error: float
    z: float

    @property
    def within_3_sigma(self) -> bool:
        return abs(self.z) <= 3


def nested_size_check(palette_size: int, schedule: ThinningSchedule, steps: int, trials: int,
                      seed: int) -> SizeCheck:
    """Compare the mean of ``|A_steps|`` with ``|C| p^steps / 2``."""
    palette = range(palette_size)
    sizes = np.array([
        len(sample_nested_colors(palette, schedule, steps, derive_seed(seed, "nested", i))[-1])
        for i in range(trials)
    ], dtype=float)
    q = 0.5 * schedule.p ** steps
    expected = palette_size * q
    sd = math.sqrt(palette_size * q * (1 - q) / trials)
    mean = float(sizes.mean())
    z = (mean - expected) / sd if sd > 0 else (0.0 if mean == expected else math.inf)
    return SizeCheck(expected, mean, sd, z)


# ---------------------------------------------------------------------------
# thinning


@dataclass(frozen=True)
class CheckpointRecord:
    trial: int
    step: int
    a_size: int
    rp_size: int | None  # None when the exact search ran out of budget
    mode: str
    nodes: int


@dataclass(frozen=True)
class ProcessTrace:
    seed: int
    mode: str
    records: tuple[CheckpointRecord, ...]
    bad_events: Mapping[int, bool | None] = field(default_factory=dict)

    def rp_by_step(self) -> dict[int, int | None]:
        return {r.step: r.rp_size for r in self.records}


def _rp_budget(g: EdgeColoredGraph, budget: SearchBudget | None) -> SearchBudget:
    if budget is not None:
        return budget
    return SearchBudget(mode="exact" if g.n <= EXACT_RP_LIMIT else "witness")


def _rp_size(g, x, colors, phi0, phi1, budget):
    if budget.mode == "witness":
        tree = WitnessTree(g, x, set(colors) - set(phi1), phi0, max_nodes=budget.max_nodes)
        return len(tree.parent), len(tree.order)
    try:
        rp = rp_set(g, x, colors, phi0, phi1, budget)
    except BudgetExhausted as exc:
        return None, exc.nodes
    return len(rp), len(rp)


def default_checkpoints(schedule: ThinningSchedule, limit: int = 256) -> list[int]:
    if schedule.steps <= limit:
        return list(range(schedule.steps + 1))
    return list(range(0, schedule.steps + 1, schedule.L))


def run_thinning(g: EdgeColoredGraph, x: int, schedule: ThinningSchedule,
                 checkpoints: Iterable[int] | None = None, rp_budget: SearchBudget | None = None,
                 seed: int = 0, phi0: Iterable[int] = (), phi1: Iterable[int] = (),
                 trial: int = 0, a0_prob: float = 0.5) -> ProcessTrace:
    """Sample one nested sequence and measure ``|RP_l|`` at the checkpoints.

    The steps ``kL`` are always evaluated so that the bad events
    ``|RP_kL| >= f(k)`` and ``|RP_(k-1)L| < f(k-1)`` can be reported.
    """
    budget = _rp_budget(g, rp_budget)
    phi0, phi1 = frozenset(phi0), frozenset(phi1)
    wanted = set(default_checkpoints(schedule) if checkpoints is None else checkpoints)
    if any(not 0 <= l <= schedule.steps for l in wanted):
        raise ValueError(f"checkpoints must lie in 0..{schedule.steps}")
    wanted.update(range(0, schedule.steps + 1, schedule.L))
    nc = NestedColors(g.colors, schedule.p, seed, a0_prob)
    records = []
    for l in sorted(wanted):
        A = nc.at(l)
        size, nodes = _rp_size(g, x, A, phi0, phi1, budget)
        records.append(CheckpointRecord(trial, l, len(A), size, budget.mode, nodes))
    by_step = {r.step: r.rp_size for r in records}
    bad = {}
    for k in range(1, schedule.K):
        hi, lo = by_step.get(k * schedule.L), by_step.get((k - 1) * schedule.L)
        bad[k] = None if hi is None or lo is None else (hi >= schedule.f(k) and lo < schedule.f(k - 1))
    return ProcessTrace(seed, budget.mode, tuple(records), bad)


@dataclass(frozen=True)
class RatioRow:
    k: int
    j: int
    measured: float
    reference_rate: float


@dataclass(frozen=True)
class ThinningReport:
    schedule: ThinningSchedule
    traces: tuple[ProcessTrace, ...]
    mean_rp: Mapping[int, float]
    median_rp0: float
    bad_event_rate: Mapping[int, float]
    ratios: tuple[RatioRow, ...]


def thinning_experiment(g: EdgeColoredGraph, x: int, schedule: ThinningSchedule, trials: int,
                        seed: int = 0, checkpoints: Iterable[int] | None = None,
                        rp_budget: SearchBudget | None = None, phi0: Iterable[int] = (),
                        phi1: Iterable[int] = (), threads: int | None = None,
                        a0_prob: float = 0.5) -> ThinningReport:
    """Run independent trials and report mean ``|RP_l|`` and expansion ratios.

    For each ``k`` and ``1 <= j < L/2`` the measured ratio
    ``E|RP_(kL-j-1)| / E|RP_(kL-j+1)|`` is listed next to ``1 + eps(k)/528``
    for comparison only.
    """
    checkpoints = None if checkpoints is None else list(checkpoints)

    def one(i):
        return run_thinning(g, x, schedule, checkpoints, rp_budget,
                            derive_seed(seed, "thinning", i), phi0, phi1, i, a0_prob)

    traces = tuple(parallel_map(one, range(trials), threads))
    sums: dict[int, list[int]] = {}
    for tr in traces:
        for r in tr.records:
            if r.rp_size is not None:
                sums.setdefault(r.step, []).append(r.rp_size)
    mean_rp = {l: float(np.mean(v)) for l, v in sorted(sums.items())}
    rp0 = [tr.rp_by_step().get(0) for tr in traces]
    rp0 = [v for v in rp0 if v is not None]
    bad_rate = {}
    for k in range(1, schedule.K):
        vals = [tr.bad_events.get(k) for tr in traces if tr.bad_events.get(k) is not None]
        bad_rate[k] = float(np.mean(vals)) if vals else math.nan
    ratios = []
    L = schedule.L
    for k in range(1, schedule.K):
        for j in range(1, (L + 1) // 2):
            a, b = k * L - j - 1, k * L - j + 1
            if a in mean_rp and b in mean_rp and mean_rp[b] > 0:
                ratios.append(RatioRow(k, j, mean_rp[a] / mean_rp[b], 1 + schedule.eps(k) / 528))
    return ThinningReport(schedule, traces, mean_rp, float(median(rp0)) if rp0 else math.nan,
                          bad_rate, tuple(ratios))


# ---------------------------------------------------------------------------
# sprinkling


def restricted_neighborhood(g: EdgeColoredGraph, X: Iterable[int], Q: Iterable[int],
                            phi_v: Iterable[int] = (), phi_c: Iterable[int] = ()) -> frozenset[int]:
    """``{y not in X : xy in E, c(xy) in Q - phi, y not in phi}``."""
    X = frozenset(X)
    Q = frozenset(Q) - frozenset(phi_c)
    phi_v = frozenset(phi_v)
    out = set()
    for x in X:
        for y, c in g.adjacency[x]:
            if y not in X and y not in phi_v and c in Q:
                out.add(y)
    return frozenset(out)


@dataclass(frozen=True)
class SprinkleRound:
    index: int
    q: float
    q_size: int
    b_size: int
    rn_size: int  # |RN_{Q_i, phi}(B_{i-1} + x)| before the rainbow restriction
    target: float  # |B_{i-1} + x| / log n

    @property
    def ratio(self) -> float:
        return self.rn_size / self.target if self.target > 0 else math.inf


@dataclass
class SprinkleTrace:
    x: int
    seed: int
    rounds: list[SprinkleRound]
    witnesses: dict[int, RainbowPath]
    saturated: bool = False

    @property
    def B(self) -> frozenset[int]:
        return frozenset(self.witnesses) - {self.x}

    @property
    def reached(self) -> frozenset[int]:
        return frozenset(self.witnesses)


def _color_pool(g, colors, phi_c):
    pool = sorted(set(g.colors if colors is None else colors) - set(phi_c))
    return pool


def run_sprinkling(g: EdgeColoredGraph, x: int, round_probs: Sequence[float], seed: int = 0,
                   phi_v: Iterable[int] = (), phi_c: Iterable[int] = (),
                   colors: Iterable[int] | None = None, stall_rounds: int = 3) -> SprinkleTrace:
    """Grow ``B_1 = RN_{Q_1}(x)``, then ``B_(i+1) = B_i ∪ S_(i+1)`` with fresh samples.

    A vertex joins only through an edge whose color is absent from its
    parent's witness, so every vertex of ``B_i`` carries a rainbow path from
    ``x``. Candidates are scanned in increasing id and take the smallest
    eligible parent. ``Stalled`` is raised when ``B_1`` is empty or when
    ``stall_rounds`` consecutive rounds add nothing although eligible edges
    remain; running out of eligible edges ends the run normally.
    """
    if not 0 <= x < g.n:
        raise ValueError(f"vertex {x} out of range")
    phi_v = frozenset(phi_v) - {x}
    pool = _color_pool(g, colors, phi_c)
    pool_set = frozenset(pool)
    rng = np.random.default_rng(seed)
    log_n = math.log(g.n) if g.n > 1 else 1.0
    witness = {x: RainbowPath((x,), ())}
    used = {x: frozenset()}
    trace = SprinkleTrace(x, seed, [], witness)
    quiet = 0
    for i, q in enumerate(round_probs, start=1):
        if not 0 <= q <= 1:
            raise ValueError("round probabilities must lie in [0, 1]")
        Q = frozenset(c for c, keep in zip(pool, rng.random(len(pool)) < q) if keep)
        sources = sorted(witness)
        members = frozenset(sources)
        rn = restricted_neighborhood(g, members, Q, phi_v)
        added = {}
        eligible = False
        for b in sources:
            for y, c in g.adjacency[b]:
                if y in members or y in phi_v or c not in pool_set or c in used[b]:
                    continue
                eligible = True
                if c in Q and y not in added:
                    added[y] = (b, c)
        for y in sorted(added):
            b, c = added[y]
            witness[y] = RainbowPath(witness[b].vertices + (y,), witness[b].colors + (c,))
            used[y] = used[b] | {c}
        trace.rounds.append(SprinkleRound(i, float(q), len(Q), len(witness) - 1, len(rn),
                                          len(members) / log_n))
        if i == 1 and not added:
            raise Stalled("B_1 is empty", trace)
        if not eligible:
            trace.saturated = True
            break
        quiet = 0 if added else quiet + 1
        if quiet >= stall_rounds:
            raise Stalled(f"no growth for {stall_rounds} rounds", trace)
    return trace


def check_witnesses(g: EdgeColoredGraph, trace: SprinkleTrace, phi_v: Iterable[int] = (),
                    phi_c: Iterable[int] = ()) -> bool:
    phi_v, phi_c = set(phi_v), set(phi_c)
    for v, p in trace.witnesses.items():
        if p.vertices[0] != trace.x or p.vertices[-1] != v or path_problem(g, p):
            return False
        if set(p.vertices[1:]) & phi_v or set(p.colors) & phi_c:
            return False
    return True


# ---------------------------------------------------------------------------
# red/blue dichotomy


@dataclass(frozen=True)
class RedBlueResult:
    color: str  # "red" or "blue"
    F: tuple[tuple[int, int], ...]
    branch: str


def _boundary(g, U, phi0):
    out = []
    for v in sorted(U):
        for w, _ in g.adjacency[v]:
            if w not in U and w not in phi0:
                out.append((v, w))
    return out


def red_blue_split(g: EdgeColoredGraph, U: Iterable[int], phi0: Iterable[int], eps,
                   red: Iterable[Sequence[int]]) -> RedBlueResult | ExpanderViolation:
    """Constructive red/blue dichotomy for the boundary of ``U``.

    Boundary edges (``U`` to outside ``U ∪ phi0``) listed in ``red`` are red and
    the rest blue. Returns a red set with ``U``-side degrees at most
    ``ceil(d)``, a blue set with outside degrees at most ``ceil(d)``, each of
    size at least ``(eps/10) d |U|``, or the violation of robust expansion
    that rules both out.
    """
    U = frozenset(U)
    phi0 = frozenset(phi0)
    eps = as_fraction(eps)
    if not U or not 0 < eps <= 1:
        raise HypothesisViolated("need non-empty U and 0 < eps <= 1")
    if U & phi0:
        raise HypothesisViolated("U and phi0 must be disjoint")
    if not size_admissible(len(U), g.n, eps):
        raise HypothesisViolated(f"|U| = {len(U)} exceeds n^(1-eps)")
    if len(phi0) > eps * len(U) / 40:
        raise HypothesisViolated("|phi0| exceeds eps |U| / 40")
    d = average_degree(g)
    D = math.ceil(d)
    need = eps / 10 * d * len(U)
    red_keys = {edge_key(e[0], e[1]) for e in red}
    boundary = _boundary(g, U, phi0)
    e_red = [(v, w) for v, w in boundary if edge_key(v, w) in red_keys]
    e_blue = [(v, w) for v, w in boundary if edge_key(v, w) not in red_keys]
    deg_red: dict[int, int] = {}
    for v, _ in e_red:
        deg_red[v] = deg_red.get(v, 0) + 1
    deg_blue: dict[int, int] = {}
    for _, w in e_blue:
        deg_blue[w] = deg_blue.get(w, 0) + 1
    U_red = sorted(v for v in U if deg_red.get(v, 0) >= d)
    V_blue = sorted(w for w, k in deg_blue.items() if k >= d)
    keys = lambda es: tuple(sorted(edge_key(v, w) for v, w in es))

    if len(U_red) >= eps / 10 * len(U):
        F = []
        for v in U_red:
            F.extend(sorted((e for e in e_red if e[0] == v), key=lambda e: e[1])[:D])
        return RedBlueResult("red", keys(F), "U_red")
    if len(V_blue) >= eps / 10 * len(U):
        F = []
        for w in V_blue:
            F.extend(sorted((e for e in e_blue if e[1] == w), key=lambda e: e[0])[:D])
        return RedBlueResult("blue", keys(F), "V_blue")
    f_red = [e for e in e_red if deg_red[e[0]] <= d]
    f_blue = [e for e in e_blue if deg_blue[e[1]] <= d]
    if len(f_red) >= need:
        return RedBlueResult("red", keys(f_red), "F'_red")
    if len(f_blue) >= need:
        return RedBlueResult("blue", keys(f_blue), "F'_blue")
    U2 = U - set(U_red)
    F = keys(set(f_red) | set(f_blue))
    v = ExpanderViolation(eps, U2, F, len(neighborhood(g, U2, F)))
    assert verify_violation(g, v), "red/blue fallback did not violate expansion"
    return v


def check_red_blue(g: EdgeColoredGraph, U: Iterable[int], phi0: Iterable[int], eps,
                   red: Iterable[Sequence[int]], result: RedBlueResult) -> bool:
    """Independent check that ``result`` meets the size and degree conditions of its branch."""
    U, phi0 = frozenset(U), frozenset(phi0)
    eps = as_fraction(eps)
    red_keys = {edge_key(e[0], e[1]) for e in red}
    d = average_degree(g)
    D = math.ceil(d)
    if len(set(result.F)) != len(result.F) or len(result.F) < eps / 10 * d * len(U):
        return False
    deg: dict[int, int] = {}
    for a, b in result.F:
        if a in U and b not in U:
            inside, outside = a, b
        elif b in U and a not in U:
            inside, outside = b, a
        else:
            return False
        if outside in phi0 or not g.has_edge(a, b):
            return False
        if ((a, b) in red_keys) != (result.color == "red"):
            return False
        key = inside if result.color == "red" else outside
        deg[key] = deg.get(key, 0) + 1
    return all(k <= D for k in deg.values())


# ---------------------------------------------------------------------------
# type-I / type-II edge sets


@dataclass(frozen=True)
class EdgeSetContext:
    x: int
    U: frozenset[int]
    A_current: frozenset[int]  # A_{kL-j}
    A_anchor: frozenset[int]  # A_{(k-1)L}
    eps: float
    L: int
    phi0: frozenset[int] = frozenset()
    phi1: frozenset[int] = frozenset()


@dataclass(frozen=True)
class EdgeSetClass:
    cls: str  # "type-I", "type-II" or "neither"
    F: tuple[tuple[int, int], ...]
    type_i: bool
    type_ii: bool
    reason: str = ""


def classify_edge_set(g: EdgeColoredGraph, F: Iterable[Sequence[int]], ctx: EdgeSetContext,
                      exact_limit: int = 16) -> EdgeSetClass:
    """Decide which of the two boundary-set definitions ``F`` satisfies.

    Type-I is reported when both hold, since its size demand is the larger
    one. Membership ``v in RP(A_{kL-j} - color(vv'))`` is computed exactly.
    """
    if g.n > exact_limit:
        raise TooLargeForExact(f"n = {g.n} exceeds {exact_limit}")
    F = tuple(sorted({edge_key(e[0], e[1]) for e in F}))
    if not F:
        return EdgeSetClass("neither", F, False, False, "empty")
    U, phi0 = ctx.U, ctx.phi0
    eps = as_fraction(ctx.eps)
    budget = SearchBudget(mode="exact")
    rp_cache: dict[int, frozenset[int]] = {}
    deg_out: dict[int, int] = {}
    colors = []
    for a, b in F:
        if not g.has_edge(a, b):
            return EdgeSetClass("neither", F, False, False, f"{(a, b)} is not an edge")
        if a in U and b not in U:
            v, w = a, b
        elif b in U and a not in U:
            v, w = b, a
        else:
            return EdgeSetClass("neither", F, False, False, f"{(a, b)} does not cross U")
        if w in phi0:
            return EdgeSetClass("neither", F, False, False, f"{w} is forbidden")
        c = g.color(a, b)
        if c not in rp_cache:
            rp_cache[c] = rp_set(g, ctx.x, ctx.A_current - {c}, phi0, ctx.phi1, budget)
        if v not in rp_cache[c]:
            return EdgeSetClass("neither", F, False, False, f"{v} not reachable without color {c}")
        deg_out[w] = deg_out.get(w, 0) + 1
        colors.append(c)
    d = average_degree(g)
    top = max(deg_out.values())
    type_i = len(F) >= eps / 10 * d * len(U) and top <= math.ceil(d)
    type_ii = (all(c in ctx.A_anchor for c in colors)
               and len(F) >= eps / 132 * ctx.L * len(U) and top <= 2 * ctx.L)
    cls = "type-I" if type_i else "type-II" if type_ii else "neither"
    return EdgeSetClass(cls, F, type_i, type_ii)


# ---------------------------------------------------------------------------
# conditional retention statistics


def wilson_interval(k: int, n: int, z: float = WILSON_Z99) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    ph = k / n
    denom = 1 + z * z / n
    centre = (ph + z * z / (2 * n)) / denom
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass(frozen=True)
class ConditionalEstimate:
    label: str
    hits: int
    count: int
    closed_form: float
    bound: float | None

    @property
    def estimate(self) -> float:
        return self.hits / self.count if self.count else math.nan

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.hits, self.count)

    @property
    def clears_bound(self) -> bool | None:
        if self.bound is None:
            return None
        return self.ci[0] > self.bound


@dataclass(frozen=True)
class NestedStats:
    T: int
    p: float
    i: int
    j: int
    trials: int
    estimates: tuple[ConditionalEstimate, ...]

    def by_label(self) -> dict[str, ConditionalEstimate]:
        return {e.label: e for e in self.estimates}


def nested_color_stats(schedule, i: int, j: int, trials: int = 100_000, seed: int = 0) -> NestedStats:
    """Monte Carlo estimates of the two conditional retention probabilities.

    ``schedule`` is a :class:`ThinningSchedule` or a ``(T, p)`` pair. One
    trial follows a single color through ``A_0 ... A_T``. Reported:

    * ``i|not j``: ``P[x in A_i | x not in A_j]`` against ``(j-i)(1-p)/6``
    * ``i|j``: ``P[x in A_i | x in A_j]`` (always 1)
    * ``j-1|i,not j``: ``P[x in A_{j-1} | x in A_i, x not in A_j]`` against
      ``(T/(j-i))(1-p)/2`` when ``j - i + 1 <= T/2``
    * ``j-1|i,j``: the same given ``x in A_j`` (always 1)
    """
    if isinstance(schedule, ThinningSchedule):
        T, p = schedule.T, schedule.p
    else:
        T, p = int(schedule[0]), float(schedule[1])
    if not 0 <= i <= j <= T:
        raise ValueError("need 0 <= i <= j <= T")
    if trials < 1000:
        raise ValueError("need at least 1000 trials")
    rng = np.random.default_rng(seed)
    alive = rng.random(trials) < 0.5
    member = [alive.copy()]
    for _ in range(T):
        alive = alive & (rng.random(trials) < p)
        member.append(alive.copy())
    Ai, Aj = member[i], member[j]
    out = []

    not_j = ~Aj
    cf1 = 0.5 * p ** i * (1 - p ** (j - i)) / (1 - 0.5 * p ** j)
    out.append(ConditionalEstimate("i|not j", int((Ai & not_j).sum()), int(not_j.sum()), cf1,
                                   (j - i) * (1 - p) / 6))
    out.append(ConditionalEstimate("i|j", int((Ai & Aj).sum()), int(Aj.sum()), 1.0,
                                   (j - i) * (1 - p) / 6))
    if i < j:
        Ajm = member[j - 1]
        cond = Ai & not_j
        cf2 = p ** (j - 1 - i) * (1 - p) / (1 - p ** (j - i)) if p < 1 else math.nan
        bound = (T / (j - i)) * (1 - p) / 2 if j - i + 1 <= T / 2 else None
        out.append(ConditionalEstimate("j-1|i,not j", int((Ajm & cond).sum()), int(cond.sum()),
                                       cf2, bound))
        cond2 = Ai & Aj
        out.append(ConditionalEstimate("j-1|i,j", int((Ajm & cond2).sum()), int(cond2.sum()), 1.0,
                                       bound))
    return NestedStats(T, p, i, j, trials, tuple(out))
