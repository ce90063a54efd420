"""Small finite groups with elements encoded as integer indices.

Supported kinds:

* ``Z:n``            cyclic group, element ``i`` is the residue ``i``
* ``F2:k``           elementary abelian 2-group, element is a ``k``-bit mask
* ``prod:Z3xZ4``     product of cyclic groups, mixed-radix index (first factor
                     is the most significant digit)
* table file         JSON ``{"table": [[...], ...], "labels": [...]}`` with
                     a full Cayley table, order at most ``MAX_TABLE_ORDER``
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_TABLE_ORDER = 512


class GroupError(ValueError):
    pass


class NonAbelianGroup(GroupError):
    pass


class FiniteGroup:
    """Base class; subclasses implement ``op``, ``inv`` and ``identity``."""

    kind = "abstract"
    order: int
    abelian: bool
    identity: int = 0

    def op(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        """``a * b^{-1}`` (``a - b`` in additive notation)."""
        return self.op(a, self.inv(b))

    def power(self, a: int, sign: int) -> int:
        return a if sign > 0 else self.inv(a)

    def product(self, elems: Iterable[int]) -> int:
        acc = self.identity
        for x in elems:
            acc = self.op(acc, x)
        return acc

    def elements(self) -> range:
        return range(self.order)

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise GroupError(f"{a} is not an element of {self}")
        return a

    def parse_element(self, text: str) -> int:
        return self.check(int(text))

    def format_element(self, a: int) -> str:
        return str(a)

    def require_abelian(self) -> None:
        if not self.abelian:
            raise NonAbelianGroup(f"{self} is not abelian")


class CyclicGroup(FiniteGroup):
    kind = "cyclic"
    abelian = True

    def __init__(self, n: int):
        if n < 1:
            raise GroupError("cyclic group order must be positive")
        self.order = n

    def __repr__(self):
        return f"Z:{self.order}"

    def op(self, a, b):
        return (a + b) % self.order

    def inv(self, a):
        return (-a) % self.order

    def parse_element(self, text):
        return int(text) % self.order


class F2Group(FiniteGroup):
    """``F_2^k`` with XOR; ``e1`` is bit 0."""

    kind = "vector"
    abelian = True

    def __init__(self, k: int):
        if k < 0 or k > 24:
            raise GroupError("F2 dimension must be in 0..24")
        self.k = k
        self.order = 1 << k

    def __repr__(self):
        return f"F2:{self.k}"

    def op(self, a, b):
        return a ^ b

    def inv(self, a):
        return a

    def basis(self, i: int) -> int:
        """The unit vector ``e_i`` (1-based)."""
        if not 1 <= i <= self.k:
            raise GroupError(f"e{i} outside F2:{self.k}")
        return 1 << (i - 1)

    def parse_element(self, text):
        text = text.strip()
        if text.startswith("e"):
            return self.basis(int(text[1:]))
        return self.check(int(text))

    def format_element(self, a):
        return format(a, f"0{self.k}b")[::-1] if self.k else "0"


class ProductGroup(FiniteGroup):
    """``Z_{n1} x ... x Z_{nk}`` with mixed-radix element indices."""

    kind = "product"
    abelian = True

    def __init__(self, moduli: Sequence[int]):
        if not moduli or any(m < 1 for m in moduli):
            raise GroupError("product needs positive moduli")
        self.moduli = tuple(int(m) for m in moduli)
        order = 1
        for m in self.moduli:
            order *= m
        self.order = order

    def __repr__(self):
        return "prod:" + "x".join(f"Z{m}" for m in self.moduli)

    def decode(self, a: int) -> tuple[int, ...]:
        digits = []
        for m in reversed(self.moduli):
            digits.append(a % m)
            a //= m
        return tuple(reversed(digits))

    def encode(self, digits: Sequence[int]) -> int:
        a = 0
        for d, m in zip(digits, self.moduli):
            a = a * m + d % m
        return a

    def op(self, a, b):
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def inv(self, a):
        return self.encode([-x for x in self.decode(a)])

    def parse_element(self, text):
        """Either a plain index or dotted coordinates like ``1.3``."""
        if "." in text:
            digits = [int(x) for x in text.split(".")]
            if len(digits) != len(self.moduli):
                raise GroupError(f"{text!r} has wrong number of coordinates")
            return self.encode(digits)
        return self.check(int(text))

    def format_element(self, a):
        return ".".join(str(d) for d in self.decode(a))


class TableGroup(FiniteGroup):
    """Group given by a full Cayley table; axioms verified on construction."""

    kind = "table"

    def __init__(self, table, labels: Sequence[str] | None = None):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = t.shape[0]
        if n > MAX_TABLE_ORDER:
            raise GroupError(f"table groups are capped at order {MAX_TABLE_ORDER}")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries must be element indices")
        self.table = t
        self.order = n
        self.labels = tuple(labels) if labels is not None else None
        self._verify()
        self._inverse = np.argmax(t == self.identity, axis=1)
        self.abelian = bool((t == t.T).all())
        self._list = t.tolist()
        self._inv_list = self._inverse.tolist()

    def __repr__(self):
        return f"table:{self.order}"

    def _verify(self) -> None:
        t, n = self.table, self.order
        ar = np.arange(n)
        ids = [e for e in range(n) if (t[e] == ar).all() and (t[:, e] == ar).all()]
        if not ids:
            raise GroupError("table has no identity")
        self.identity = int(ids[0])
        # Latin square rows/columns give unique solvability, hence inverses.
        for axis in (0, 1):
            if not (np.sort(t, axis=axis) == (ar[:, None] if axis == 0 else ar[None, :])).all():
                raise GroupError("table is not a Latin square")
        # associativity, chunked to bound memory
        for lo in range(0, n, 8):
            a = ar[lo:lo + 8]
            left = t[t[a][:, :, None], ar[None, None, :]]  # (ab)c
            right = t[a[:, None, None], t[None, :, :]]  # a(bc)
            if not np.array_equal(left, right):
                raise GroupError("table operation is not associative")

    def op(self, a, b):
        return self._list[a][b]

    def inv(self, a):
        return self._inv_list[a]

    def parse_element(self, text):
        if self.labels is not None and text in self.labels:
            return self.labels.index(text)
        return self.check(int(text))

    def format_element(self, a):
        return self.labels[a] if self.labels is not None else str(a)


def symmetric_group(k: int) -> TableGroup:
    """``S_k`` as a table group, permutations in lexicographic order."""
    from itertools import permutations

    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return TableGroup(table, labels)


def dihedral_group(m: int) -> TableGroup:
    """Dihedral group of order ``2m``; element ``r^i s^j`` has index ``2i + j``."""
    elems = [(i, j) for i in range(m) for j in range(2)]
    index = {e: n for n, e in enumerate(elems)}

    def mul(a, b):
        (i1, j1), (i2, j2) = a, b
        # r^i1 s^j1 r^i2 s^j2 = r^(i1 + (-1)^j1 i2) s^(j1 + j2)
        return ((i1 + (i2 if j1 == 0 else -i2)) % m, (j1 + j2) % 2)

    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return TableGroup(table, [f"r{i}s{j}" for i, j in elems])


def parse_group(spec: str) -> FiniteGroup:
    """Parse ``Z:15``, ``F2:4``, ``prod:Z3xZ4``, ``table:<path>`` or a path to a table file."""
    spec = spec.strip()
    if spec.startswith("Z:"):
        return CyclicGroup(int(spec[2:]))
    if spec.startswith("F2:"):
        return F2Group(int(spec[3:]))
    if spec.startswith("prod:"):
        factors = spec[5:].split("x")
        try:
            moduli = [int(f[1:]) for f in factors if f.startswith("Z")]
        except ValueError:
            raise GroupError(f"bad product spec {spec!r}") from None
        if len(moduli) != len(factors):
            raise GroupError(f"bad product spec {spec!r}")
        return ProductGroup(moduli)
    if spec.startswith("S:"):
        return symmetric_group(int(spec[2:]))
    if spec.startswith("D:"):
        return dihedral_group(int(spec[2:]))
    path = Path(spec[6:] if spec.startswith("table:") else spec)
    if path.exists():
        obj = json.loads(path.read_text())
        return TableGroup(obj["table"], obj.get("labels"))
    raise GroupError(f"cannot parse group spec {spec!r}")


def parse_elements(group: FiniteGroup, text: str) -> list[int]:
    """Comma-separated element list, or ``@path`` to read one from a file."""
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text().replace("\n", ",")
    if text.lower() in ("", "none", "{}"):
        return []
    if text.lower() == "all":
        return list(group.elements())
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ".." in tok and group.kind in ("cyclic",):
            lo, hi = tok.split("..")
            out.extend(group.parse_element(str(x)) for x in range(int(lo), int(hi) + 1))
        else:
            out.append(group.parse_element(tok))
    return out
