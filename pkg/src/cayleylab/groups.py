"""Concrete finite groups on the element set {0, ..., n-1}, with 0 the identity.

Groups are described structurally (modular addition, XOR, the quaternion
rules, mixed-radix direct products) so that multiplication vectorizes over
numpy arrays at any order.  Small groups also expose an explicit
multiplication table, which is what axiom verification and the exhaustive
oracles work from.

Compact text specs such as ``"Z12"``, ``"Z2^5"``, ``"Q8"`` or
``"Q8xZ2^2"`` are understood by :func:`parse_group`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .errors import GroupSpecError, PreconditionError

TABLE_MAX_ORDER = 256


class FiniteGroup:
    """Base class.  Subclasses implement vectorized ``multiply`` and ``inverse``."""

    identity = 0

    def __init__(self, order: int, name: str):
        if order < 1:
            raise GroupSpecError(f"group order must be positive, got {order}")
        self.order = order
        self.name = name

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} (order {self.order})>"

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def table(self) -> np.ndarray:
        """Full multiplication table; ``table[a, b] == a*b``."""
        if self.order > TABLE_MAX_ORDER:
            raise PreconditionError(
                f"multiplication table only materialized for order <= {TABLE_MAX_ORDER}"
            )
        e = self.elements()
        return np.asarray(self.multiply(e[:, None], e[None, :]), dtype=np.int64)

    @cached_property
    def squares(self) -> np.ndarray:
        e = self.elements()
        return np.asarray(self.multiply(e, e), dtype=np.int64)

    @cached_property
    def is_abelian(self) -> bool:
        tbl = self.table
        return bool(np.array_equal(tbl, tbl.T))

    def is_elementary_abelian_2(self) -> bool:
        return bool(np.all(self.squares == self.identity))

    def verify(self) -> None:
        """Check closure, identity, inverse and associativity exhaustively."""
        n = self.order
        tbl = self.table
        if tbl.shape != (n, n) or tbl.min() < 0 or tbl.max() >= n:
            raise GroupSpecError(f"{self.name}: table is not a closed operation on 0..{n - 1}")
        e = self.elements()
        if not (np.array_equal(tbl[0], e) and np.array_equal(tbl[:, 0], e)):
            raise GroupSpecError(f"{self.name}: element 0 is not a two-sided identity")
        inv = np.asarray(self.inverse(e), dtype=np.int64)
        if not (np.all(tbl[e, inv] == 0) and np.all(tbl[inv, e] == 0)):
            raise GroupSpecError(f"{self.name}: inverse map is wrong")
        # (ab)c == a(bc) for all triples, row by row to bound memory
        for a in range(n):
            if not np.array_equal(tbl[tbl[a]], tbl[a][tbl]):
                raise GroupSpecError(f"{self.name}: multiplication is not associative")


class TableGroup(FiniteGroup):
    """Group given by a raw multiplication table (verified on construction)."""

    def __init__(self, table, name: str = "table"):
        tbl = np.asarray(table, dtype=np.int64)
        if tbl.ndim != 2 or tbl.shape[0] != tbl.shape[1]:
            raise GroupSpecError("multiplication table must be square")
        super().__init__(tbl.shape[0], name)
        if self.order > TABLE_MAX_ORDER:
            raise GroupSpecError(f"raw tables limited to order <= {TABLE_MAX_ORDER}")
        self.__dict__["table"] = tbl
        if tbl.min() < 0 or tbl.max() >= self.order:
            raise GroupSpecError(f"{name}: table entries outside 0..{self.order - 1}")
        rows_with_identity = np.argmax(tbl == 0, axis=1)
        self._inv = rows_with_identity.astype(np.int64)
        self.verify()

    def multiply(self, a, b):
        return self.table[a, b]

    def inverse(self, a):
        return self._inv[a]


class CyclicGroup(FiniteGroup):
    def __init__(self, m: int):
        if m < 1:
            raise GroupSpecError(f"cyclic group needs m >= 1, got {m}")
        super().__init__(m, f"Z{m}")
        self.m = m

    def multiply(self, a, b):
        return (a + b) % self.m

    def inverse(self, a):
        return (-a) % self.m


class ElemAbelian2Group(FiniteGroup):
    """Z_2^d with elements as bit vectors and XOR as the operation."""

    def __init__(self, d: int):
        if d < 0:
            raise GroupSpecError(f"elementary abelian 2-group needs d >= 0, got {d}")
        super().__init__(1 << d, f"Z2^{d}")
        self.d = d

    def multiply(self, a, b):
        return a ^ b

    def inverse(self, a):
        return a


# Q8 encoding: index = 2*unit + sign with unit 0..3 for 1, i, j, k and sign 1 for minus.
_Q_UNIT_PRODUCT = [
    # (sign, unit) of unit_u * unit_v
    [(0, 0), (0, 1), (0, 2), (0, 3)],
    [(0, 1), (1, 0), (0, 3), (1, 2)],
    [(0, 2), (1, 3), (1, 0), (0, 1)],
    [(0, 3), (0, 2), (1, 1), (1, 0)],
]
Q8_LABELS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
Q8_MINUS_ONE = 1


def _quaternion_table() -> np.ndarray:
    tbl = np.zeros((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sign, unit = _Q_UNIT_PRODUCT[a // 2][b // 2]
            tbl[a, b] = 2 * unit + (sign ^ (a % 2) ^ (b % 2))
    return tbl


class QuaternionGroup(FiniteGroup):
    def __init__(self):
        super().__init__(8, "Q8")
        self._tbl = _quaternion_table()
        self._inv = np.array([0, 1, 3, 2, 5, 4, 7, 6], dtype=np.int64)

    def multiply(self, a, b):
        return self._tbl[a, b]

    def inverse(self, a):
        return self._inv[a]


class DirectProduct(FiniteGroup):
    """Mixed-radix product: element index = sum_i c_i * stride_i, first factor fastest."""

    def __init__(self, factors, name: str | None = None):
        factors = list(factors)
        if not factors:
            raise GroupSpecError("direct product needs at least one factor")
        order = reduce(lambda x, g: x * g.order, factors, 1)
        super().__init__(order, name or "x".join(g.name for g in factors))
        self.factors = factors
        strides, s = [], 1
        for g in factors:
            strides.append(s)
            s *= g.order
        self.strides = strides

    def _split(self, a):
        a = np.asarray(a)
        return [(a // s) % g.order for g, s in zip(self.factors, self.strides)]

    def _join(self, comps):
        return sum(c * s for c, s in zip(comps, self.strides))

    def multiply(self, a, b):
        ca, cb = self._split(a), self._split(b)
        return self._join([g.multiply(x, y) for g, x, y in zip(self.factors, ca, cb)])

    def inverse(self, a):
        return self._join([g.inverse(x) for g, x in zip(self.factors, self._split(a))])


# -- constructors --------------------------------------------------------------

def cyclic(m: int) -> FiniteGroup:
    return CyclicGroup(m)


def elem_abelian_2(d: int) -> FiniteGroup:
    return ElemAbelian2Group(d)


def quaternion() -> FiniteGroup:
    return QuaternionGroup()


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    if len(groups) == 1:
        return groups[0]
    return DirectProduct(groups)


_TOKEN = re.compile(r"^(Z(\d+)|Q8)(?:\^(\d+))?$")


def parse_group(text: str) -> FiniteGroup:
    """Build a group from a compact spec like ``"Q8xZ2^2"`` or ``"Z3xZ4"``.

    All ``Z2`` factors are merged into a single XOR factor placed after the
    others, so ``"Z2xZ3xZ2"`` is the product ``Z3 x Z2^2``.
    """
    raw = text.strip()
    if not raw:
        raise GroupSpecError("empty group spec")
    others: list[FiniteGroup] = []
    twos = 0
    for tok in raw.split("x"):
        m = _TOKEN.match(tok.strip())
        if not m:
            raise GroupSpecError(f"cannot parse group factor {tok!r} in {text!r}")
        power = int(m.group(3)) if m.group(3) is not None else 1
        if m.group(1) == "Q8":
            others.extend(QuaternionGroup() for _ in range(power))
            continue
        order = int(m.group(2))
        if order < 1:
            raise GroupSpecError(f"cyclic factor needs order >= 1 in {text!r}")
        if order == 2:
            twos += power
        elif order > 1:
            others.extend(CyclicGroup(order) for _ in range(power))
    factors = others + ([ElemAbelian2Group(twos)] if twos or not others else [])
    g = factors[0] if len(factors) == 1 else DirectProduct(factors)
    g.name = raw
    return g


def make_group(spec) -> FiniteGroup:
    """Accept a text spec, a raw multiplication table, or an existing group."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return parse_group(spec)
    return TableGroup(spec)


def catalog(max_order: int = TABLE_MAX_ORDER) -> list[str]:
    """Specs of every direct product of Z_m (2 <= m <= 64) and Q8 factors up to ``max_order``.

    Factors are taken as multisets, so each product appears once; the list
    includes all cyclic groups, all Z2^d and all Q8 x Z2^q in range.
    """
    bases = [("Q8", 8)] + [(f"Z{m}", m) for m in range(2, 65)]
    out: list[tuple[int, str]] = []

    def extend(start, order, chosen):
        if chosen:
            out.append((order, _spec_name(chosen)))
        for i in range(start, len(bases)):
            name, m = bases[i]
            if order * m > max_order:
                continue
            extend(i, order * m, chosen + [name])

    extend(0, 1, [])
    return [name for _, name in sorted(out)]


def _spec_name(factors: list[str]) -> str:
    parts = []
    for name in dict.fromkeys(factors):
        c = factors.count(name)
        parts.append(name if c == 1 else f"{name}^{c}")
    return "x".join(parts)


# -- square roots and pair sets ------------------------------------------------

def square_root_count(G: FiniteGroup, y: int) -> int:
    """Number of x in G with x*x == y."""
    if not 0 <= y < G.order:
        raise PreconditionError(f"element {y} outside 0..{G.order - 1}")
    return int(np.count_nonzero(G.squares == y))


def max_sqrt_ratio(G: FiniteGroup) -> Fraction:
    """max over non-identity y of |sigma(y)| / |G|."""
    if G.order < 2:
        raise PreconditionError("max_sqrt_ratio needs |G| >= 2")
    counts = np.bincount(G.squares, minlength=G.order)
    return Fraction(int(counts[1:].max()), G.order)


@dataclass(frozen=True)
class PairSetJ:
    """Elements x whose 2-sets {x, x^-1 y} are pairwise disjoint."""

    y: int
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def pairs(self, G: FiniteGroup) -> list[tuple[int, int]]:
        return [(x, int(G.multiply(G.inverse(x), self.y))) for x in self.members]


def check_pair_set(G: FiniteGroup, J: PairSetJ) -> None:
    """Raise ``ValueError`` unless J satisfies the pair-set invariants in G.

    Partners x^-1 y are recomputed from the group operations, independently
    of whatever bookkeeping produced J.
    """
    xs = np.asarray(J.members, dtype=np.int64)
    if xs.size == 0:
        return
    if np.any(xs == G.identity) or np.any(xs == J.y):
        raise ValueError(f"a member equals the identity or y={J.y}")
    partners = np.asarray(G.multiply(G.inverse(xs), J.y), dtype=np.int64)
    if np.any(partners == xs):
        raise ValueError("some pair has size 1 (member is a square root of y)")
    everything = np.concatenate([xs, partners])
    if np.unique(everything).size != everything.size:
        raise ValueError("pairs {x, x^-1 y} are not pairwise disjoint")


def _require_nonidentity(G: FiniteGroup, y: int) -> None:
    if not 0 < y < G.order:
        raise PreconditionError(f"y must be a non-identity element of {G.name}, got {y}")


def build_disjoint_pair_set(G: FiniteGroup, y: int, size: int | None = None) -> PairSetJ:
    """Greedy pair set: repeatedly take the lowest x in C \\ K.

    C is G* minus y and the square roots of y; K collects x, y x^-1 and
    x^-1 y for every chosen x.  Without ``size`` the greedy runs until C \\ K
    is empty, which is at least floor((n-1-sigma(y))/3) members.
    """
    _require_nonidentity(G, y)
    e = G.elements()
    inv = np.asarray(G.inverse(e))
    right = np.asarray(G.multiply(y, inv)).tolist()    # y x^-1
    left = np.asarray(G.multiply(inv, y)).tolist()     # x^-1 y
    candidates = (e != G.identity) & (e != y) & (G.squares != y)
    blocked = [False] * G.order
    members: list[int] = []
    for x in np.flatnonzero(candidates).tolist():
        if size is not None and len(members) >= size:
            break
        if blocked[x]:
            continue
        members.append(x)
        blocked[x] = blocked[right[x]] = blocked[left[x]] = True
    if size is not None and len(members) < size:
        raise PreconditionError(f"greedy pair set reached only {len(members)} < {size} members")
    return PairSetJ(y, tuple(members))


def build_transversal_pair_set(G: FiniteGroup, y: int) -> PairSetJ:
    """Lowest-index representative of each coset of <y> except {1, y}; needs G = Z2^d."""
    _require_nonidentity(G, y)
    if not G.is_elementary_abelian_2():
        raise PreconditionError(f"{G.name} is not an elementary abelian 2-group")
    e = G.elements()
    partner = np.asarray(G.multiply(e, y))
    reps = [int(x) for x in e if x < partner[x] and x != G.identity]
    return PairSetJ(y, tuple(reps))
