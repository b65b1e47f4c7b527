"""Finite abelian groups, the heaps they induce, retracts and translations.

Every finite heap in this package is ``H(G)`` for a finite abelian group
``G = Z_{n_1} + ... + Z_{n_r}``.  Elements are integers in ``[0, |G|)``
obtained by mixed-radix encoding of the component tuple, first component
most significant, so index order is lexicographic order of tuples.

Heap maps are held as numpy tables.  A map ``G^n -> G`` is an array of shape
``(|G|,) * n`` whose entry at ``(x_1, ..., x_n)`` is the index of the image.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CapacityError, InputError, StructureError

# |G| guard for heap endomorphism enumeration
MAX_ENDO_ORDER = 64
# |G|^n guard for a single cochain table
MAX_TABLE_SIZE = 4096
# number of tables a single enumeration may materialise
MAX_ENUMERATION = 1 << 22


class FiniteAbelianGroup:
    """Direct sum of cyclic groups ``Z_{n_1} + ... + Z_{n_r}``."""

    def __init__(self, cyclic_orders: Sequence[int]):
        orders = tuple(int(n) for n in cyclic_orders)
        if not orders:
            raise InputError("a group needs at least one cyclic factor (empty heaps are not supported)")
        if any(n < 2 for n in orders):
            raise InputError(f"cyclic orders must be >= 2, got {list(orders)}")
        self.cyclic_orders = orders
        self.order = math.prod(orders)
        self.rank = len(orders)
        strides = []
        s = 1
        for n in reversed(orders):
            strides.append(s)
            s *= n
        self._strides = np.array(strides[::-1], dtype=np.int64)
        self._orders = np.array(orders, dtype=np.int64)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.cyclic_orders)})"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and other.cyclic_orders == self.cyclic_orders

    def __hash__(self):
        return hash(("FiniteAbelianGroup", self.cyclic_orders))

    def __len__(self):
        return self.order

    # encoding

    def to_tuple(self, index: int) -> tuple[int, ...]:
        return tuple(int(d) for d in self.digits[index])

    def from_tuple(self, digits: Sequence[int]) -> int:
        if len(digits) != self.rank:
            raise InputError(f"expected {self.rank} components, got {len(digits)}")
        return int(self.encode(np.asarray(digits, dtype=np.int64)))

    def encode(self, digits: np.ndarray) -> np.ndarray:
        """Encode digit vectors (last axis) to indices, reducing modulo the orders."""
        return ((np.asarray(digits) % self._orders) * self._strides).sum(axis=-1)

    @cached_property
    def digits(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        return (idx[:, None] // self._strides) % self._orders

    # arithmetic tables

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        return self.encode(d[:, None, :] + d[None, :, :]).astype(np.intp)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.digits).astype(np.intp)

    @cached_property
    def sub_table(self) -> np.ndarray:
        d = self.digits
        return self.encode(d[:, None, :] - d[None, :, :]).astype(np.intp)

    @property
    def zero(self) -> int:
        return 0

    def add(self, x, y):
        return self.add_table[x, y]

    def sub(self, x, y):
        return self.sub_table[x, y]

    def neg(self, x):
        return self.neg_table[x]

    def heap(self, a, b, c):
        """``[a, b, c] = a - b + c``; works elementwise on index arrays."""
        return self.add_table[self.sub_table[a, b], c]

    def scale(self, m, x: int):
        """``m * x`` for an integer (array) ``m`` and a single element ``x``."""
        m = np.asarray(m, dtype=np.int64)
        return self.encode(m[..., None] * self.digits[x]).astype(np.intp)

    def element_order(self, x: int) -> int:
        return math.lcm(*(n // math.gcd(n, int(d)) for n, d in zip(self.cyclic_orders, self.digits[x])))

    def killed_by(self, m: int) -> list[int]:
        """Elements ``x`` with ``m * x = 0``."""
        ok = ((m * self.digits) % self._orders == 0).all(axis=1)
        return [int(i) for i in np.flatnonzero(ok)]

    def elements(self):
        return [GroupElement(self, i) for i in range(self.order)]

    def element(self, index: int) -> "GroupElement":
        return GroupElement(self, index)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise InputError(f"index {self.index} out of range for {self.group!r}")

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise StructureError(f"cannot combine elements of {self.group!r} and {getattr(other, 'group', other)!r}")

    def __add__(self, other):
        self._check(other)
        return GroupElement(self.group, int(self.group.add_table[self.index, other.index]))

    def __sub__(self, other):
        self._check(other)
        return GroupElement(self.group, int(self.group.sub_table[self.index, other.index]))

    def __neg__(self):
        return GroupElement(self.group, int(self.group.neg_table[self.index]))

    def as_tuple(self):
        return self.group.to_tuple(self.index)

    def __repr__(self):
        return f"GroupElement({self.as_tuple()})"


def heap_op(a: GroupElement, b: GroupElement, c: GroupElement) -> GroupElement:
    """The heap bracket ``[a, b, c] = a - b + c`` of ``H(G)``."""
    a._check(b)
    a._check(c)
    return a - b + c


class RetractOps(NamedTuple):
    add: object
    neg: object
    zero: GroupElement


def retract_ops(e: GroupElement) -> RetractOps:
    """Group operations of the retract at ``e``: ``x + y = [x, e, y]``, ``-x = [e, x, e]``."""

    def add(x, y):
        return heap_op(x, e, y)

    def neg(x):
        return heap_op(e, x, e)

    return RetractOps(add, neg, e)


@dataclass(frozen=True)
class Translation:
    from_base: GroupElement
    to_base: GroupElement

    def __post_init__(self):
        self.from_base._check(self.to_base)

    def inverse(self) -> "Translation":
        return Translation(self.to_base, self.from_base)

    def __call__(self, a: GroupElement) -> GroupElement:
        return translate(self, a)


def translate(t: Translation, a: GroupElement) -> GroupElement:
    """``a -> [a, to_base, from_base]``.

    This sends ``to_base`` to ``from_base`` and is a group isomorphism from
    the retract at ``to_base`` onto the retract at ``from_base``.
    """
    return heap_op(a, t.to_base, t.from_base)


# enumeration of heap maps


def _multi_additive_tables(G: FiniteAbelianGroup, k: int) -> np.ndarray:
    """All maps ``G^k -> G`` additive in every argument, as ``(count, |G|**k)``.

    Such a map is fixed by its values on tuples of generators; the value on
    ``(g_{i_1}, ..., g_{i_k})`` may be any element killed by
    ``gcd(n_{i_1}, ..., n_{i_k})``.  ``k = 0`` gives the constants.
    """
    size = G.order ** k
    grid = np.indices((G.order,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.intp)
    tables = np.zeros((1, size), dtype=np.intp)
    for gens in itertools.product(range(G.rank), repeat=k):
        coeff = np.ones(size, dtype=np.int64)
        for j, i in enumerate(gens):
            coeff = coeff * G.digits[grid[j], i]
        g = math.gcd(*(G.cyclic_orders[i] for i in gens)) if gens else 0
        contrib = np.stack([G.scale(coeff, v) for v in G.killed_by(g)])
        tables = G.add_table[tables[:, None, :], contrib[None, :, :]].reshape(-1, size)
    return tables


def _count_multi_additive(G: FiniteAbelianGroup, k: int) -> int:
    total = 1
    for gens in itertools.product(range(G.rank), repeat=k):
        g = math.gcd(*(G.cyclic_orders[i] for i in gens)) if gens else 0
        total *= len(G.killed_by(g))
    return total


def count_multi_heap_maps(G: FiniteAbelianGroup, n: int) -> int:
    return math.prod(_count_multi_additive(G, len(S)) for S in _subsets(n))


def _subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def enumerate_multi_heap_maps(G: FiniteAbelianGroup, n: int) -> np.ndarray:
    """Every map ``G^n -> G`` that is a heap morphism in each argument.

    Such a map splits uniquely as a sum, over subsets ``S`` of the argument
    positions, of maps additive in the ``S``-arguments and independent of
    the rest (the empty subset contributing a constant).  The enumeration
    walks that decomposition, so the tables come out distinct.

    Returns an array of shape ``(count,) + (|G|,) * n``.
    """
    if n < 0:
        raise InputError("arity must be non-negative")
    if G.order ** n > MAX_TABLE_SIZE:
        raise CapacityError(f"|G|^n = {G.order ** n} exceeds the table guard {MAX_TABLE_SIZE}")
    count = count_multi_heap_maps(G, n)
    if count > MAX_ENUMERATION:
        raise CapacityError(f"{count} multi-heap maps exceed the enumeration budget {MAX_ENUMERATION}")
    size = G.order ** n
    full = (G.order,) * n
    tables = np.zeros((1, size), dtype=np.intp)
    for S in _subsets(n):
        part = _multi_additive_tables(G, len(S))
        shape = (part.shape[0],) + tuple(G.order if i in S else 1 for i in range(n))
        part = np.broadcast_to(part.reshape(shape), (part.shape[0],) + full).reshape(part.shape[0], size)
        tables = G.add_table[tables[:, None, :], part[None, :, :]].reshape(-1, size)
    return tables.reshape((-1,) + full)


def enumerate_heap_endos(G: FiniteAbelianGroup) -> np.ndarray:
    """All heap endomorphisms ``x -> g(x) + c`` of ``H(G)``, shape ``(|End G| * |G|, |G|)``."""
    if G.order > MAX_ENDO_ORDER:
        raise CapacityError(f"|G| = {G.order} exceeds the endomorphism guard {MAX_ENDO_ORDER}")
    endos = _multi_additive_tables(G, 1)
    consts = np.arange(G.order, dtype=np.intp)
    return G.add_table[endos[:, None, :], consts[None, :, None]].reshape(-1, G.order)


def group_endomorphisms(G: FiniteAbelianGroup) -> np.ndarray:
    if G.order > MAX_ENDO_ORDER:
        raise CapacityError(f"|G| = {G.order} exceeds the endomorphism guard {MAX_ENDO_ORDER}")
    return _multi_additive_tables(G, 1)


def group_automorphisms(G: FiniteAbelianGroup) -> np.ndarray:
    endos = group_endomorphisms(G)
    bij = np.array([len(np.unique(row)) == G.order for row in endos])
    return endos[bij]


def heap_automorphisms(G: FiniteAbelianGroup) -> np.ndarray:
    """Bijections ``x -> phi(x) + t`` with ``phi`` a group automorphism; these are all heap automorphisms of ``H(G)``."""
    auts = group_automorphisms(G)
    t = np.arange(G.order, dtype=np.intp)
    return G.add_table[auts[:, None, :], t[None, :, None]].reshape(-1, G.order)


def is_multi_heap_map(G: FiniteAbelianGroup, table: np.ndarray) -> bool:
    return multi_heap_violation(G, table) is None


def multi_heap_violation(G: FiniteAbelianGroup, table: np.ndarray):
    """First ``(slot, x, y, z, rest)`` where ``table`` fails to be a heap map in one slot, else ``None``."""
    table = np.asarray(table)
    n = table.ndim
    k = G.order
    h = G.heap(*np.indices((k, k, k)))
    for slot in range(n):
        t = np.moveaxis(table, slot, 0).reshape(k, -1)
        lhs = t[h]
        rhs = G.heap(t[:, None, None, :], t[None, :, None, :], t[None, None, :, :])
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, y, z, r = (int(v) for v in bad[0])
            rest = np.unravel_index(r, (k,) * (n - 1)) if n > 1 else ()
            return slot, x, y, z, tuple(int(v) for v in rest)
    return None


def is_heap_endo(G: FiniteAbelianGroup, table) -> bool:
    table = np.asarray(table)
    return table.shape == (G.order,) and is_multi_heap_map(G, table)
