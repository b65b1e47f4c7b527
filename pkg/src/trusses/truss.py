"""Trusses: finite multiplication tables, the family T(Z; a, b, c) and coset trusses.

All truss carriers share a small duck-typed surface used by the cohomology
and Nijenhuis code:

``heap(a, b, c)``, ``mul(a, b)``, ``heap_many(xs)``
    the ternary operation, the product, and the alternating bracket
    ``[x_1, x_2, ..., x_{2k+1}] = x_1 - x_2 + x_3 - ...``;
``points()``, ``pairs()``, ``triples()``
    the elements over which identities are checked: everything for finite
    trusses, a fixed integer grid for ``ZTruss``, seeded random samples for
    coset trusses;
``exhaustive``
    whether those checks cover the whole carrier.
"""
from __future__ import annotations

import itertools
import operator
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import (
    FiniteAbelianGroup,
    MAX_ENUMERATION,
    enumerate_multi_heap_maps,
    group_automorphisms,
    heap_automorphisms,
)
from .errors import (
    ArithmeticOverflow,
    AssocViolation,
    CapacityError,
    ClosureViolation,
    ConstraintViolation,
    InputError,
    LeftDistribViolation,
    NotIdempotent,
    RightDistribViolation,
)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

Z_GRID = tuple(range(-5, 6))
MAX_ENUM_TRUSS_ORDER = 4


class FiniteTruss:
    """A finite abelian heap ``H(G)`` with a validated multiplication table.

    Use :func:`validate_truss` or the constructors below; ``FiniteTruss(...)``
    with ``check=False`` skips the axiom scan.
    """

    exhaustive = True
    default_basepoint = 0

    def __init__(self, group: FiniteAbelianGroup, mult, name: Optional[str] = None, check=True):
        mult = np.asarray(mult, dtype=np.intp)
        k = group.order
        if mult.shape == (k * k,):
            mult = mult.reshape(k, k)
        if mult.shape != (k, k):
            raise InputError(f"multiplication table must have {k * k} entries, got shape {mult.shape}")
        if mult.size and (mult.min() < 0 or mult.max() >= k):
            raise InputError("multiplication table entries must be element indices")
        self.group = group
        self.mult = mult
        self.mult.setflags(write=False)
        self.name = name
        if check:
            _check_axioms(group, mult)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteTruss{label} on {list(self.group.cyclic_orders)}>"

    def __eq__(self, other):
        return isinstance(other, FiniteTruss) and self.group == other.group and np.array_equal(self.mult, other.mult)

    def __hash__(self):
        return hash((self.group, self.mult.tobytes()))

    @property
    def order(self):
        return self.group.order

    def heap(self, a, b, c):
        return int(self.group.heap(a, b, c))

    def mul(self, a, b):
        return int(self.mult[a, b])

    def heap_many(self, xs):
        acc = xs[0]
        for i in range(1, len(xs) - 1, 2):
            acc = self.group.heap(acc, xs[i], xs[i + 1])
        return int(acc) if np.ndim(acc) == 0 else acc

    def points(self):
        return range(self.order)

    def pairs(self):
        return itertools.product(range(self.order), repeat=2)

    def triples(self):
        return itertools.product(range(self.order), repeat=3)

    def is_commutative(self):
        return bool(np.array_equal(self.mult, self.mult.T))

    def idempotents(self):
        return [i for i in range(self.order) if self.mult[i, i] == i]

    def to_json(self):
        d = {"group": list(self.group.cyclic_orders), "mult": [int(v) for v in self.mult.ravel()]}
        if self.name:
            d["name"] = self.name
        return d


def _check_axioms(G: FiniteAbelianGroup, mult: np.ndarray):
    """Raise on the first violated axiom.

    Distributivity is scanned before associativity, left before right; each
    scan reports the lexicographically first witness.
    """
    k = G.order
    a, b, c, d = np.indices((k, k, k, k))
    h = G.heap(b, c, d)
    left = mult[a, h] != G.heap(mult[a, b], mult[a, c], mult[a, d])
    if left.any():
        w = tuple(int(v) for v in np.argwhere(left)[0])
        raise LeftDistribViolation(f"a[b,c,d] != [ab,ac,ad] at (a,b,c,d)={w}", witness=w)
    # right law written with a as the multiplier on the right
    right = mult[h, a] != G.heap(mult[b, a], mult[c, a], mult[d, a])
    if right.any():
        w = tuple(int(v) for v in np.argwhere(right)[0])
        # report in the order (a, b, c, d) of "[b,c,d]a"
        raise RightDistribViolation(f"[b,c,d]a != [ba,ca,da] at (a,b,c,d)={w}", witness=w)
    x, y, z = np.indices((k, k, k))
    bad = mult[mult[x, y], z] != mult[x, mult[y, z]]
    if bad.any():
        w = tuple(int(v) for v in np.argwhere(bad)[0])
        raise AssocViolation(f"(ab)c != a(bc) at (a,b,c)={w}", witness=w)


def validate_truss(group: FiniteAbelianGroup, mult_table, name: Optional[str] = None) -> FiniteTruss:
    return FiniteTruss(group, mult_table, name=name, check=True)


def product_zero(G: FiniteAbelianGroup) -> FiniteTruss:
    k = G.order
    return FiniteTruss(G, np.zeros((k, k), dtype=np.intp), name="ab=0")


def product_left(G: FiniteAbelianGroup) -> FiniteTruss:
    """The left projection ``ab = a``."""
    k = G.order
    return FiniteTruss(G, np.repeat(np.arange(k)[:, None], k, axis=1), name="ab=a")


def product_right(G: FiniteAbelianGroup) -> FiniteTruss:
    k = G.order
    return FiniteTruss(G, np.repeat(np.arange(k)[None, :], k, axis=0), name="ab=b")


def product_sum(G: FiniteAbelianGroup) -> FiniteTruss:
    return FiniteTruss(G, G.add_table.copy(), name="ab=a+b")


def standard_products(G: FiniteAbelianGroup) -> tuple[FiniteTruss, FiniteTruss, FiniteTruss, FiniteTruss]:
    """The products ``ab = 0``, ``ab = a``, ``ab = b`` and ``ab = a + b`` on ``H(G)``."""
    if G.order < 2:
        raise InputError("standard products need |G| >= 2")
    return product_zero(G), product_left(G), product_right(G), product_sum(G)


# trusses on Z


def checked(x: int) -> int:
    if not INT64_MIN <= x <= INT64_MAX:
        raise ArithmeticOverflow(f"{x} does not fit in 64 bits")
    return x


@dataclass(frozen=True)
class ZTrussParams:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a * self.c != self.b * (self.b - 1):
            raise ConstraintViolation(
                f"(a,b,c)=({self.a},{self.b},{self.c}) violates ac = b(b-1): {self.a * self.c} != {self.b * (self.b - 1)}"
            )


def z_truss_mult(params: ZTrussParams, m: int, n: int) -> int:
    """``m.n = a m n + b (m + n) + c`` with 64-bit overflow checks."""
    a, b, c = params.a, params.b, params.c
    mn = checked(m * n)
    return checked(checked(checked(a * mn) + checked(b * checked(m + n))) + c)


class ZTruss:
    """``T(Z; a, b, c)``; identities are checked on the grid ``[-5, 5]``."""

    exhaustive = False
    default_basepoint = 0

    def __init__(self, params: ZTrussParams, grid: Sequence[int] = Z_GRID):
        self.params = params
        self.grid = tuple(grid)

    def __repr__(self):
        p = self.params
        return f"<ZTruss a={p.a} b={p.b} c={p.c}>"

    def heap(self, a, b, c):
        return checked(a - b + c)

    def heap_many(self, xs):
        return checked(sum(x if i % 2 == 0 else -x for i, x in enumerate(xs)))

    def mul(self, m, n):
        return z_truss_mult(self.params, m, n)

    def points(self):
        return self.grid

    def pairs(self):
        return itertools.product(self.grid, repeat=2)

    def triples(self):
        return itertools.product(self.grid, repeat=3)


# coset trusses


class CosetTruss:
    """``T(I; q) = q + I`` inside an associative ring.

    ``sample_ideal(rng)`` draws an element of ``I``; samples are drawn from a
    ``random.Random(seed)`` so every run sees the same points.
    """

    exhaustive = False

    def __init__(
        self,
        q,
        sample_ideal: Callable[[random.Random], object],
        in_ideal: Callable[[object], bool],
        ring_mult: Callable = operator.matmul,
        samples: int = 64,
        seed: int = 0,
    ):
        self.q = q
        self.sample_ideal = sample_ideal
        self.in_ideal = in_ideal
        self.ring_mult = ring_mult
        self.samples = samples
        self.seed = seed

    @property
    def default_basepoint(self):
        return self.q

    def heap(self, a, b, c):
        return a - b + c

    def heap_many(self, xs):
        acc = xs[0]
        for i in range(1, len(xs) - 1, 2):
            acc = acc - xs[i] + xs[i + 1]
        return acc

    def mul(self, a, b):
        return self.ring_mult(a, b)

    def contains(self, a) -> bool:
        return self.in_ideal(a - self.q)

    def _rng(self, salt):
        return random.Random(f"{self.seed}:{salt}")

    def random_points(self, count, salt="points"):
        rng = self._rng(salt)
        return [self.q + self.sample_ideal(rng) for _ in range(count)]

    def random_vectors(self, count, salt="vectors"):
        rng = self._rng(salt)
        return [self.sample_ideal(rng) for _ in range(count)]

    def points(self):
        return self.random_points(self.samples)

    def pairs(self):
        pts = self.random_points(2 * self.samples, "pairs")
        return list(zip(pts[0::2], pts[1::2]))

    def triples(self):
        pts = self.random_points(3 * self.samples, "triples")
        return list(zip(pts[0::3], pts[1::3], pts[2::3]))


def coset_truss_check(ring_mult, ideal, q, samples: int = 64, seed: int = 0) -> CosetTruss:
    """Check ``q`` is idempotent and ``q + I`` closed under the product, then return the truss.

    ``ideal`` is a pair ``(sample_ideal, in_ideal)``.
    """
    sample_ideal, in_ideal = ideal
    if ring_mult(q, q) != q:
        raise NotIdempotent("q*q != q", witness=q)
    T = CosetTruss(q, sample_ideal, in_ideal, ring_mult=ring_mult, samples=samples, seed=seed)
    for a, b in T.pairs():
        p = ring_mult(a, b)
        if not in_ideal(p - q):
            raise ClosureViolation("(q+x)(q+y) - q is not in I", witness=(a, b))
    return T


# enumeration of truss structures on small groups


@dataclass
class IsoClassReport:
    group: FiniteAbelianGroup
    candidates: int
    total_valid: int
    class_count: int
    ring_total: int
    ring_class_count: int
    representatives: list = field(default_factory=list)
    ring_representatives: list = field(default_factory=list)

    def to_json(self):
        return {
            "group": list(self.group.cyclic_orders),
            "candidates": self.candidates,
            "total_valid": self.total_valid,
            "class_count": self.class_count,
            "ring_total": self.ring_total,
            "ring_class_count": self.ring_class_count,
            "representatives": [[int(v) for v in t.mult.ravel()] for t in self.representatives],
            "ring_representatives": [[int(v) for v in t.mult.ravel()] for t in self.ring_representatives],
        }


def _associative_mask(tables: np.ndarray, chunk: int = 1 << 14) -> np.ndarray:
    n, k, _ = tables.shape
    x, y, z = (v.ravel() for v in np.indices((k, k, k)))
    out = np.empty(n, dtype=bool)
    for start in range(0, n, chunk):
        t = tables[start:start + chunk]
        r = np.arange(len(t))[:, None]
        lhs = t[r, t[:, x, y], z]
        rhs = t[r, x, t[:, y, z]]
        out[start:start + chunk] = (lhs == rhs).all(axis=1)
    return out


def _pack(tables: np.ndarray, k: int) -> np.ndarray:
    """Integer key per table; key order is lexicographic table order."""
    flat = tables.reshape(len(tables), -1).astype(np.int64)
    key = np.zeros(len(flat), dtype=np.int64)
    for j in range(flat.shape[1]):
        key = key * k + flat[:, j]
    return key


def _unpack(key: int, k: int) -> np.ndarray:
    out = []
    for _ in range(k * k):
        out.append(key % k)
        key //= k
    return np.array(out[::-1], dtype=np.intp).reshape(k, k)


def canonical_keys(tables: np.ndarray, maps: np.ndarray) -> np.ndarray:
    """Least packed key over all conjugates ``s(mu(s^-1 x, s^-1 y))`` for ``s`` in ``maps``."""
    k = tables.shape[1]
    best = None
    for s in maps:
        inv = np.argsort(s)
        conj = s[tables[:, inv[:, None], inv[None, :]]]
        key = _pack(conj, k)
        best = key if best is None else np.minimum(best, key)
    return best


def enumerate_truss_structures(G: FiniteAbelianGroup) -> IsoClassReport:
    """Count truss multiplications on ``H(G)`` and their isomorphism classes.

    Candidates are the bi-affine maps ``beta(x, y) + f(x) + g(y) + c``,
    which are exactly the binary operations distributing over the heap.
    Survivors of the associativity filter are grouped into orbits of heap
    automorphisms; the bi-additive survivors are separately grouped into
    orbits of group automorphisms to count ring structures.
    """
    k = G.order
    if k > MAX_ENUM_TRUSS_ORDER:
        raise CapacityError(f"truss enumeration is limited to |G| <= {MAX_ENUM_TRUSS_ORDER}")
    cands = enumerate_multi_heap_maps(G, 2)
    valid = cands[_associative_mask(cands)]
    keys = canonical_keys(valid, heap_automorphisms(G))
    classes = sorted(set(int(v) for v in keys))

    bi_additive = (valid[:, :, 0] == 0).all(axis=1) & (valid[:, 0, :] == 0).all(axis=1)
    rings = valid[bi_additive]
    rkeys = canonical_keys(rings, group_automorphisms(G))
    rclasses = sorted(set(int(v) for v in rkeys))
    return IsoClassReport(
        group=G,
        candidates=len(cands),
        total_valid=len(valid),
        class_count=len(classes),
        ring_total=len(rings),
        ring_class_count=len(rclasses),
        representatives=[FiniteTruss(G, _unpack(c, k), check=False) for c in classes],
        ring_representatives=[FiniteTruss(G, _unpack(c, k), check=False) for c in rclasses],
    )
