"""Exact rational block matrices ``A(a, b, alpha) = [[a, b], [0, alpha]]``.

``a`` is ``n x n``, ``b`` an ``n``-column, ``alpha`` a scalar; entries are
:class:`fractions.Fraction`.  These matrices form an associative algebra
``R`` with

    A(a, b, alpha) A(a', b', alpha') = A(a a', a b' + alpha' b, alpha alpha').

The ``alpha = 0`` slice is an ideal ``I`` and ``q = A(0, 0, 1)`` is
idempotent, so ``q + I`` (the ``alpha = 1`` slice) is a coset truss.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError

MAX_SIZE = 6


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _zeros(n):
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


@dataclass(frozen=True)
class BlockMatrix:
    a: tuple
    b: tuple
    alpha: Fraction

    def __post_init__(self):
        n = len(self.a)
        if any(len(row) != n for row in self.a) or len(self.b) != n:
            raise InputError("block shapes do not match")
        object.__setattr__(self, "a", tuple(tuple(_frac(x) for x in row) for row in self.a))
        object.__setattr__(self, "b", tuple(_frac(x) for x in self.b))
        object.__setattr__(self, "alpha", _frac(self.alpha))

    @property
    def n(self) -> int:
        return len(self.a)

    @classmethod
    def zero(cls, n):
        return cls(_zeros(n), (0,) * n, 0)

    @classmethod
    def q(cls, n):
        return cls(_zeros(n), (0,) * n, 1)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n, 1)

    # vector space structure

    def __add__(self, other):
        return BlockMatrix(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
            self.alpha + other.alpha,
        )

    def __sub__(self, other):
        return BlockMatrix(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.a, other.a)),
            tuple(x - y for x, y in zip(self.b, other.b)),
            self.alpha - other.alpha,
        )

    def __neg__(self):
        return BlockMatrix(tuple(tuple(-x for x in r) for r in self.a), tuple(-x for x in self.b), -self.alpha)

    def __rmul__(self, lam):
        lam = _frac(lam)
        return BlockMatrix(tuple(tuple(lam * x for x in r) for r in self.a), tuple(lam * x for x in self.b), lam * self.alpha)

    # algebra structure

    def __matmul__(self, other):
        n = self.n
        a, b, al = self.a, self.b, self.alpha
        a2, b2, al2 = other.a, other.b, other.alpha
        cols = list(zip(*a2))
        aa = tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)
        bb = tuple(sum(x * y for x, y in zip(a[i], b2)) + al2 * b[i] for i in range(n))
        return BlockMatrix(aa, bb, al * al2)

    # views

    def is_point(self) -> bool:
        return self.alpha == 1

    def is_vector(self) -> bool:
        return self.alpha == 0

    def vec(self) -> tuple:
        return tuple(x for row in self.a for x in row) + self.b + (self.alpha,)

    @classmethod
    def from_vec(cls, n, v: Sequence):
        v = tuple(v)
        if len(v) != n * n + n + 1:
            raise InputError("vector length does not match block size")
        a = tuple(v[i * n:(i + 1) * n] for i in range(n))
        return cls(a, v[n * n:n * n + n], v[-1])

    def to_full(self) -> list:
        n = self.n
        rows = [list(self.a[i]) + [self.b[i]] for i in range(n)]
        rows.append([Fraction(0)] * n + [self.alpha])
        return rows

    @classmethod
    def from_full(cls, m):
        n = len(m) - 1
        if any(m[n][j] != 0 for j in range(n)):
            raise InputError("not block upper-triangular")
        return cls(tuple(tuple(m[i][:n]) for i in range(n)), tuple(m[i][n] for i in range(n)), m[n][n])

    def to_json(self):
        from .serialize import format_rational

        return {
            "a": [[format_rational(x) for x in r] for r in self.a],
            "b": [format_rational(x) for x in self.b],
            "alpha": format_rational(self.alpha),
        }

    def __repr__(self):
        fmt = lambda x: str(x)  # noqa: E731
        return f"A(a={[[fmt(x) for x in r] for r in self.a]}, b={[fmt(x) for x in self.b]}, alpha={self.alpha})"


def full_matmul(x, y):
    """Plain product of square matrices given as lists of rows."""
    cols = list(zip(*y))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in x]


def random_rational(rng: random.Random, span: int = 9) -> Fraction:
    num = rng.randint(-span, span)
    den = 0
    while den == 0:
        den = rng.randint(-span, span)
    return Fraction(num, den)


def random_block(rng: random.Random, n: int, alpha=None) -> BlockMatrix:
    a = tuple(tuple(random_rational(rng) for _ in range(n)) for _ in range(n))
    b = tuple(random_rational(rng) for _ in range(n))
    return BlockMatrix(a, b, random_rational(rng) if alpha is None else alpha)


def upper(a) -> tuple:
    """Projection onto upper-triangular matrices (diagonal included)."""
    n = len(a)
    return tuple(tuple(a[i][j] if j >= i else Fraction(0) for j in range(n)) for i in range(n))


def strict_lower(a) -> tuple:
    n = len(a)
    return tuple(tuple(a[i][j] if j < i else Fraction(0) for j in range(n)) for i in range(n))


def transpose(a) -> tuple:
    return tuple(zip(*a))


def check_size(n: int) -> int:
    if not 1 <= n <= MAX_SIZE:
        raise InputError(f"block size must lie in [1, {MAX_SIZE}]")
    return n
