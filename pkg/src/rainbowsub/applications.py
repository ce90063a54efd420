"""Additive-combinatorics questions answered through rainbow cycles, with brute-force oracles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .constructions import bhg_graph
from .graph import EdgeColoredGraph
from .groups import CyclicGroup, FiniteGroup
from .search import DEFAULT_BUDGET, RainbowPath, SearchBudget, find_rainbow_cycle, path_problem

ABELIAN_LIMIT = 16
NONABELIAN_LIMIT = 8
EXACT_DIMENSION_LIMIT = 20
BHG_CAP = 2_000_000


class TooLarge(ValueError):
    pass


class TooLargeForExact(TooLarge):
    pass


class VerificationFailed(RuntimeError):
    pass


class CombinatorialBlowup(ValueError):
    pass


@dataclass(frozen=True)
class RelationCertificate:
    """A signed product equal to the identity, or an alternating-sum relation mod ``modulus``."""

    kind: str  # "signed-product" or "alternating-sum"
    elements: tuple[int, ...]
    signs: tuple[int, ...] = ()
    modulus: int | None = None

    def verify(self, group: FiniteGroup | None = None) -> bool:
        if len(set(self.elements)) != len(self.elements) or not self.elements:
            return False
        if self.kind == "alternating-sum":
            m = len(self.elements)
            if m % 2 or self.modulus is None:
                return False
            odd = sum(self.elements[0::2])
            even = sum(self.elements[1::2])
            return (odd - even) % self.modulus == 0
        if self.kind != "signed-product" or group is None:
            return False
        if len(self.signs) != len(self.elements) or any(s not in (1, -1) for s in self.signs):
            return False
        return group.product(group.power(x, s) for x, s in zip(self.elements, self.signs)) == group.identity

    def to_json(self) -> dict:
        out = {"kind": self.kind, "elements": list(self.elements)}
        if self.kind == "signed-product":
            out["signs"] = list(self.signs)
        else:
            out["modulus"] = self.modulus
        return out

    @classmethod
    def from_json(cls, obj) -> "RelationCertificate":
        return cls(obj["kind"], tuple(obj["elements"]), tuple(obj.get("signs", ())), obj.get("modulus"))

    def __str__(self):
        if self.kind == "alternating-sum":
            lhs = "+".join(map(str, self.elements[0::2]))
            rhs = "+".join(map(str, self.elements[1::2]))
            return f"{lhs} = {rhs} (mod {self.modulus})"
        return " ".join(f"{x}^{s:+d}" for x, s in zip(self.elements, self.signs)) + " = e"


# ---------------------------------------------------------------------------
# dissociation


def _abelian_relation(group: FiniteGroup, S: Sequence[int]) -> RelationCertificate | None:
    # a signed relation over distinct elements is the same thing as two
    # different subsets with equal sums (drop the common part)
    seen = {group.identity: 0}
    sums = [group.identity]
    for mask in range(1, 1 << len(S)):
        low = (mask & -mask).bit_length() - 1
        s = group.op(sums[mask ^ (1 << low)], S[low])
        sums.append(s)
        if s in seen:
            other = seen[s]
            pos = [S[i] for i in range(len(S)) if (mask >> i) & 1 and not (other >> i) & 1]
            neg = [S[i] for i in range(len(S)) if (other >> i) & 1 and not (mask >> i) & 1]
            terms = sorted([(x, 1) for x in pos] + [(x, -1) for x in neg])
            if terms[0][1] < 0:
                terms = [(x, -e) for x, e in terms]
            return RelationCertificate("signed-product", tuple(x for x, _ in terms),
                                       tuple(e for _, e in terms))
        seen[s] = mask
    return None


def _ordered_relation(group: FiniteGroup, S: Sequence[int]) -> RelationCertificate | None:
    # any relation can be rotated and inverted so that its smallest element
    # comes first with exponent +1
    S = sorted(S)
    for i, first in enumerate(S):
        rest = S[i + 1:]
        stack = [((first,), (1,), first)]
        while stack:
            elems, signs, acc = stack.pop()
            if acc == group.identity:
                return RelationCertificate("signed-product", elems, signs)
            for y in reversed(rest):
                if y in elems:
                    continue
                for s in (-1, 1):
                    stack.append((elems + (y,), signs + (s,), group.op(acc, group.power(y, s))))
    return None


def is_dissociated(group: FiniteGroup, S: Iterable[int], limit: int | None = None):
    """``True``, or a :class:`RelationCertificate` exhibiting a signed relation."""
    S = sorted({group.check(x) for x in S})
    if limit is None:
        limit = ABELIAN_LIMIT if group.abelian else NONABELIAN_LIMIT
    if len(S) > limit:
        raise TooLarge(f"|S| = {len(S)} exceeds the limit {limit}")
    if group.identity in S:
        return RelationCertificate("signed-product", (group.identity,), (1,))
    cert = _abelian_relation(group, S) if group.abelian else _ordered_relation(group, S)
    if cert is None:
        return True
    if not cert.verify(group):
        raise VerificationFailed(f"relation {cert} does not evaluate to the identity")
    return cert


@dataclass(frozen=True)
class DimensionReport:
    size: int
    dimension: int
    witness: tuple[int, ...]
    mode: str
    comparison: float | None = None  # C log|A| (log log|A|)^6 when C is given

    @property
    def lower_bound_only(self) -> bool:
        return self.mode == "greedy"


def _comparison(size: int, C: float | None) -> float | None:
    if C is None or size < 3:
        return None
    ln = math.log(size)
    return C * ln * math.log(ln) ** 6


def _extends(group, sums: frozenset[int], x: int) -> frozenset[int] | None:
    shifted = {group.op(s, x) for s in sums}
    if shifted & sums:
        return None
    return sums | shifted


def additive_dimension(group: FiniteGroup, A: Iterable[int], mode: str = "exact",
                       C: float | None = None) -> DimensionReport:
    """Size of a largest dissociated subset of ``A``.

    Exact mode returns the lexicographically first maximum; greedy mode
    scans ``A`` in increasing order and keeps whatever stays dissociated.
    """
    A = {group.check(x) for x in A}
    size = len(A)
    # the identity never belongs to a dissociated set
    A = sorted(A - {group.identity})
    if mode not in ("exact", "greedy"):
        raise ValueError("mode must be exact or greedy")
    if not group.abelian:
        return _nonabelian_dimension(group, A, size, mode, C)
    base = frozenset({group.identity})
    if mode == "greedy":
        sums, chosen = base, []
        for x in A:
            nxt = _extends(group, sums, x)
            if nxt is not None:
                sums, chosen = nxt, chosen + [x]
        return DimensionReport(size, len(chosen), tuple(chosen), "greedy", _comparison(size, C))
    if len(A) > EXACT_DIMENSION_LIMIT:
        raise TooLargeForExact(f"|A| = {len(A)} exceeds {EXACT_DIMENSION_LIMIT}")
    best: list[int] = []

    def dfs(i, chosen, sums):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if i == len(A) or len(chosen) + len(A) - i <= len(best):
            return
        nxt = _extends(group, sums, A[i])
        if nxt is not None:
            chosen.append(A[i])
            dfs(i + 1, chosen, nxt)
            chosen.pop()
        dfs(i + 1, chosen, sums)

    dfs(0, [], base)
    return DimensionReport(size, len(best), tuple(best), "exact", _comparison(size, C))


def _nonabelian_dimension(group, A, size, mode, C):
    if mode == "greedy":
        chosen: list[int] = []
        for x in A:
            if len(chosen) < NONABELIAN_LIMIT and is_dissociated(group, chosen + [x]) is True:
                chosen.append(x)
        return DimensionReport(size, len(chosen), tuple(chosen), "greedy", _comparison(size, C))
    best: tuple[int, ...] = ()
    for k in range(1, min(len(A), NONABELIAN_LIMIT) + 1):
        hit = next((c for c in itertools.combinations(A, k) if is_dissociated(group, c) is True), None)
        if hit is None:
            break
        best = hit
    if len(A) > NONABELIAN_LIMIT and len(best) == NONABELIAN_LIMIT:
        raise TooLargeForExact("dimension reaches the nonabelian enumeration limit")
    return DimensionReport(size, len(best), best, "exact", _comparison(size, C))


# ---------------------------------------------------------------------------
# rainbow cycles to relations


def _left_side(label) -> bool:
    return label[0] in ("A", "X", "V1")


def rainbow_cycle_to_relation(g: EdgeColoredGraph, cycle: RainbowPath,
                              group: FiniteGroup) -> RelationCertificate:
    """Read a rainbow cycle of a bipartite group construction as a signed relation.

    Vertex labels are ``(side, element)``. Along an edge of color ``c`` the
    element changes by right multiplication with ``c`` or ``c^-1``, and the
    changes telescope to the identity around the cycle.
    """
    if not cycle.is_cycle or path_problem(g, cycle):
        raise VerificationFailed("input is not a rainbow cycle of g")
    if cycle.length % 2 or g.labels is None:
        raise VerificationFailed("need an even cycle in a labelled bipartite construction")
    vs, cs = list(cycle.vertices[:-1]), list(cycle.colors)
    start = next((i for i, v in enumerate(vs) if _left_side(g.labels[v])), None)
    if start is None:
        raise VerificationFailed("cycle has no vertex on the left side")
    vs = vs[start:] + vs[:start]
    cs = cs[start:] + cs[:start]
    vs.append(vs[0])
    signs = []
    for i, c in enumerate(cs):
        a, b = g.labels[vs[i]][1], g.labels[vs[i + 1]][1]
        if group.op(a, c) == b:
            signs.append(1)
        elif group.op(a, group.inv(c)) == b:
            signs.append(-1)
        else:
            raise VerificationFailed(f"edge {vs[i]}-{vs[i + 1]} does not follow the group law")
    cert = RelationCertificate("signed-product", tuple(cs), tuple(signs))
    if not cert.verify(group):
        raise VerificationFailed(f"relation {cert} does not evaluate to the identity")
    return cert


# ---------------------------------------------------------------------------
# sums, products and convolutions


def doubling_constant(group: FiniteGroup, A: Iterable[int]) -> Fraction:
    A = sorted({group.check(x) for x in A})
    if not A:
        raise ValueError("A must be non-empty")
    return Fraction(len({group.op(a, b) for a in A for b in A}), len(A))


@dataclass(frozen=True)
class ConvolutionResult:
    S: tuple[int, ...]
    counts: dict[int, int] = field(compare=True)


def convolution_threshold_set(group: FiniteGroup, A: Iterable[int], B: Iterable[int],
                              sigma: int) -> ConvolutionResult:
    """Representation counts of ``x = a - b`` and the set where they reach ``sigma``."""
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    A = sorted({group.check(x) for x in A})
    B = sorted({group.check(x) for x in B})
    counts: dict[int, int] = {}
    for a in A:
        for b in B:
            x = group.sub(a, b)
            counts[x] = counts.get(x, 0) + 1
    counts = dict(sorted(counts.items()))
    return ConvolutionResult(tuple(x for x, k in counts.items() if k >= sigma), counts)


def is_bhg(n: int, B: Iterable[int], h: int, g: int, cap: int = BHG_CAP):
    """``True``, or ``(m, solutions)`` for the smallest ``m`` with more than ``g`` representations.

    Representations are strictly increasing ``h``-tuples from ``B`` summing
    to ``m`` modulo ``n``.
    """
    if h < 2 or g < 1:
        raise ValueError("need h >= 2 and g >= 1")
    B = sorted({int(b) % n for b in B})
    if math.comb(len(B), h) > cap:
        raise CombinatorialBlowup(f"C({len(B)}, {h}) exceeds the cap {cap}")
    reps: dict[int, list[tuple[int, ...]]] = {}
    for tup in itertools.combinations(B, h):
        reps.setdefault(sum(tup) % n, []).append(tup)
    bad = sorted(m for m, sols in reps.items() if len(sols) > g)
    if not bad:
        return True
    return bad[0], reps[bad[0]]


@dataclass(frozen=True)
class SmallReport:
    n: int
    size: int
    log_n: float
    proven_absent: bool

    @property
    def ratio(self) -> float:
        return self.size / self.log_n if self.log_n > 0 else math.inf


@dataclass(frozen=True)
class BhgWitness:
    h0: int
    B_prime: tuple[int, ...]
    certificate: RelationCertificate
    cycle: RainbowPath


def bhg_dichotomy(n: int, B: Iterable[int], budget: SearchBudget = DEFAULT_BUDGET):
    """A rainbow cycle in the ``B`` construction gives ``B' ⊆ B`` that is not ``B_{h0}[1]``.

    Returns :class:`BhgWitness` or, when no cycle is found, a
    :class:`SmallReport`; ``proven_absent`` holds only for exact searches.
    ``BudgetExhausted`` propagates from the search.
    """
    B = sorted({int(b) % n for b in B})
    g = bhg_graph(n, B)
    cycle = find_rainbow_cycle(g, budget=budget)
    if cycle is None:
        return SmallReport(n, len(B), math.log(n) if n > 1 else 0.0, budget.mode == "exact")
    vs, cs = list(cycle.vertices[:-1]), list(cycle.colors)
    start = next(i for i, v in enumerate(vs) if v < n)
    cs = cs[start:] + cs[:start]
    cert = RelationCertificate("alternating-sum", tuple(cs), modulus=n)
    if not cert.verify():
        raise VerificationFailed(f"relation {cert} does not hold")
    h0 = len(cs) // 2
    B_prime = tuple(sorted(cs))
    if is_bhg(n, B_prime, h0, 1) is True:
        raise VerificationFailed(f"{B_prime} unexpectedly is a B_{h0}[1] set")
    return BhgWitness(h0, B_prime, cert, cycle)


def cyclic_embedding(values: Iterable[int]) -> tuple[CyclicGroup, list[int]]:
    """Embed non-negative integers in ``Z_N`` with ``N`` large enough that signed sums never wrap."""
    values = sorted({int(v) for v in values})
    if values and values[0] < 0:
        raise ValueError("values must be non-negative")
    top = values[-1] if values else 0
    N = 2 * top * max(1, len(values)) + 1
    return CyclicGroup(N), values
