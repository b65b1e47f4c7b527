"""The e-relative Hochschild cochain complex of a truss.

For a finite truss a cochain of arity ``n`` is a table ``T^n -> T`` that is
a heap morphism in every slot.  The coboundary is evaluated in the retract
group at ``e``, where, writing the retract sum through ``G`` as
``e + sum(s_i * (x_i - e))``,

    d f(a_0..a_n) = -a_0 e + a_0 f(a_1..a_n)
                    + sum_j (-1)^j f(a_0, .., a_{j-1} a_j, .., a_n)
                    + (-1)^(n+1) f(a_0..a_{n-1}) a_n + (-1)^n e a_n.

:func:`coboundary_value` evaluates the same operator as one alternating
heap bracket and works on any truss carrier; it is the cross-check for the
vectorised table path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import MAX_TABLE_SIZE, enumerate_heap_endos, enumerate_multi_heap_maps, multi_heap_violation
from .errors import CapacityError, InputError, NotMultiHeapMap
from .truss import FiniteTruss


class Cochain:
    """A multi-heap map ``T^n -> T`` on a finite truss (``n = 0``: an element)."""

    def __init__(self, truss: FiniteTruss, table, check=True):
        table = np.asarray(table, dtype=np.intp)
        k = truss.order
        if table.ndim == 1 and table.size != k and table.size > 1:
            # flat mixed-radix table
            n = round(np.log(table.size) / np.log(k))
            if k ** n != table.size:
                raise InputError(f"table of size {table.size} is not |T|^n for |T|={k}")
            table = table.reshape((k,) * n)
        if any(s != k for s in table.shape):
            raise InputError(f"cochain table shape {table.shape} does not match |T|={k}")
        if table.size and (table.min() < 0 or table.max() >= k):
            raise InputError("cochain values must be element indices")
        self.truss = truss
        self.table = table
        self.table.setflags(write=False)
        if check:
            w = multi_heap_violation(truss.group, table)
            if w is not None:
                raise NotMultiHeapMap(f"not a heap morphism in slot {w[0]}", witness=w)

    @classmethod
    def from_flat(cls, truss, arity, values, check=True):
        k = truss.order
        values = np.asarray(values, dtype=np.intp)
        if values.size != k ** arity:
            raise InputError(f"arity {arity} cochain needs {k ** arity} values, got {values.size}")
        return cls(truss, values.reshape((k,) * arity), check=check)

    @classmethod
    def constant(cls, truss, arity, value):
        return cls(truss, np.full((truss.order,) * arity, value, dtype=np.intp), check=False)

    @property
    def arity(self) -> int:
        return self.table.ndim

    def __call__(self, *args):
        return int(self.table[args])

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.truss == other.truss and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.arity, self.table.tobytes()))

    def __repr__(self):
        return f"Cochain(arity={self.arity}, table={self.table.ravel().tolist()})"

    def is_constant(self, value) -> bool:
        return bool((self.table == value).all())

    def to_json(self):
        return {"arity": self.arity, "table": [int(v) for v in self.table.ravel()]}


def coboundary_tables(truss: FiniteTruss, e: int, tables: np.ndarray, n: int) -> np.ndarray:
    """Vectorised coboundary of a batch of arity-``n`` tables, shape ``(B,) + (k,)*n``."""
    k = truss.order
    if k ** (n + 1) > MAX_TABLE_SIZE:
        raise CapacityError(f"|T|^{n + 1} = {k ** (n + 1)} exceeds the table guard {MAX_TABLE_SIZE}")
    G, M = truss.group, truss.mult
    tables = np.asarray(tables, dtype=np.intp)
    B = tables.shape[0]
    a = np.indices((k,) * (n + 1))  # a[i] is a_i over the (n+1)-grid
    grid = a.shape[1:]

    def f(args):
        if n == 0:
            return np.broadcast_to(tables.reshape((B,) + (1,) * (n + 1)), (B,) + grid)
        return tables[(slice(None),) + tuple(args)]

    terms = [
        (-1, np.broadcast_to(M[a[0], e], (B,) + grid)),
        (+1, M[a[0], f(a[1:])]),
    ]
    for j in range(1, n + 1):
        args = list(a[:j - 1]) + [M[a[j - 1], a[j]]] + list(a[j + 1:])
        terms.append(((-1) ** j, f(args)))
    terms.append(((-1) ** (n + 1), M[f(a[:n]), a[n]]))
    terms.append(((-1) ** n, np.broadcast_to(M[e, a[n]], (B,) + grid)))

    acc = np.full((B,) + grid, e, dtype=np.intp)
    for sign, x in terms:
        dx = G.sub_table[x, e]
        acc = G.add_table[acc, dx] if sign > 0 else G.sub_table[acc, dx]
    return acc


def coboundary(e: int, f: Cochain) -> Cochain:
    """``d^n_e f`` as a cochain of arity ``n + 1``."""
    out = coboundary_tables(f.truss, e, f.table[None], f.arity)[0]
    return Cochain(f.truss, out, check=False)


def coboundary_value(truss, e, f, n: int, args: Sequence):
    """``d^n_e f(a_0..a_n)`` as one alternating heap bracket.

    ``f`` is any callable of ``n`` arguments; works on every carrier.  For
    even ``n`` the bracket has ``n + 5`` entries, for odd ``n`` an extra
    trailing ``e`` keeps the length odd.
    """
    a = list(args)
    if len(a) != n + 1:
        raise InputError(f"expected {n + 1} arguments")
    mul = truss.mul
    xs = [e, mul(a[0], e), mul(a[0], f(*a[1:]))]
    for j in range(1, n + 1):
        xs.append(f(*(a[:j - 1] + [mul(a[j - 1], a[j])] + a[j + 1:])))
    xs.append(mul(f(*a[:n]), a[n]))
    xs.append(mul(e, a[n]))
    if n % 2 == 1:
        xs.append(e)
    return truss.heap_many(xs)


def coboundary_bracket(e: int, f: Cochain) -> Cochain:
    """Table of ``d^n_e f`` computed entry by entry with :func:`coboundary_value`."""
    T, n = f.truss, f.arity
    k = T.order
    out = np.empty((k,) * (n + 1), dtype=np.intp)
    for args in np.ndindex(out.shape):
        out[args] = coboundary_value(T, e, f, n, args)
    return Cochain(T, out, check=False)


def cochains(truss: FiniteTruss, n: int) -> np.ndarray:
    """All arity-``n`` cochain tables of a finite truss."""
    return enumerate_multi_heap_maps(truss.group, n)


def coboundary_squared_check(truss: FiniteTruss, e: int, n: int, tables=None) -> bool:
    """``d^{n+1}_e(d^n_e f)`` is the constant ``e`` for every ``f`` (all cochains by default)."""
    if tables is None:
        tables = cochains(truss, n)
    d1 = coboundary_tables(truss, e, tables, n)
    d2 = coboundary_tables(truss, e, d1, n + 1)
    return bool((d2 == e).all())


@dataclass
class CohomologyReport:
    degree: int
    basepoint: int
    cochain_count: int
    cocycle_count: int
    coboundary_count: int
    class_count: int
    class_representatives: list = field(default_factory=list)

    def to_json(self):
        return {
            "degree": self.degree,
            "basepoint": self.basepoint,
            "cochain_count": self.cochain_count,
            "cocycle_count": self.cocycle_count,
            "coboundary_count": self.coboundary_count,
            "class_count": self.class_count,
            "class_representatives": [[int(v) for v in r.ravel()] for r in self.class_representatives],
        }


def _unique_rows(tables):
    flat = tables.reshape(len(tables), -1)
    if flat.shape[1] == 0:
        return flat[:1]
    return np.unique(flat, axis=0)


def cocycles(truss: FiniteTruss, e: int, n: int) -> np.ndarray:
    """``Z^n_e`` as sorted flat tables."""
    C = cochains(truss, n)
    d = coboundary_tables(truss, e, C, n)
    mask = (d.reshape(len(d), -1) == e).all(axis=1)
    return _unique_rows(C[mask])


def coboundaries(truss: FiniteTruss, e: int, n: int) -> np.ndarray:
    """``B^n_e`` as sorted flat tables; ``B^0_e = {e}`` by convention."""
    k = truss.order
    if n == 0:
        return np.array([[e]], dtype=np.intp)
    C = cochains(truss, n - 1)
    d = coboundary_tables(truss, e, C, n - 1)
    return _unique_rows(d.reshape(len(d), k ** n))


def cohomology(truss: FiniteTruss, e: int, n: int) -> CohomologyReport:
    """``H^n_e = Z^n_e / B^n_e`` computed as cosets in the retract group at the constant ``e``.

    Two cocycles ``f, g`` are in one class iff ``f - g + e`` (pointwise) is a
    coboundary.  The representative of a class is its least table.
    """
    G = truss.group
    k = truss.order
    Z = cocycles(truss, e, n)
    B = coboundaries(truss, e, n)
    if n == 0:
        Z = Z.reshape(-1, 1)
    zkeys = {row.tobytes(): i for i, row in enumerate(Z)}
    assigned = np.zeros(len(Z), dtype=bool)
    reps = []
    Bshift = G.sub_table[B, e]  # b - e
    for i, z in enumerate(Z):  # rows are sorted, so the first unassigned row is least in its coset
        if assigned[i]:
            continue
        reps.append(z.reshape((k,) * n) if n else z.reshape(()))
        coset = G.add_table[z[None, :], Bshift]
        for row in coset:
            j = zkeys.get(row.tobytes())
            if j is None:
                raise AssertionError("coboundary outside the cocycles")
            assigned[j] = True
    return CohomologyReport(
        degree=n,
        basepoint=e,
        cochain_count=len(cochains(truss, n)),
        cocycle_count=len(Z),
        coboundary_count=len(B),
        class_count=len(reps),
        class_representatives=reps,
    )


# base point transport


def transport_table(truss: FiniteTruss, table, e: int, e2: int) -> np.ndarray:
    """``f -> [f, e, e2]`` pointwise: the translation taking the constant ``e`` to ``e2``."""
    return truss.group.heap(np.asarray(table), e, e2)


def transport(f: Cochain, e: int, e2: int) -> Cochain:
    return Cochain(f.truss, transport_table(f.truss, f.table, e, e2), check=False)


# derivations


def is_derivation(truss: FiniteTruss, D) -> bool:
    """``D(ab) = [D(a) b, ab, a D(b)]`` for all ``a, b``."""
    D = np.asarray(D, dtype=np.intp)
    M = truss.mult
    a, b = np.indices((truss.order,) * 2)
    return bool((D[M] == truss.group.heap(M[D[a], b], M, M[a, D[b]])).all())


def derivations(truss: FiniteTruss) -> np.ndarray:
    endos = enumerate_heap_endos(truss.group)
    return _unique_rows(endos[[is_derivation(truss, D) for D in endos]])


def theta(truss: FiniteTruss, D, e: int) -> np.ndarray:
    """``a -> [D(a), a, e]``."""
    x = np.arange(truss.order)
    return truss.group.heap(np.asarray(D), x, e)


def theta_inverse(truss: FiniteTruss, f, e: int) -> np.ndarray:
    """``a -> [f(a), e, a]``."""
    x = np.arange(truss.order)
    return truss.group.heap(np.asarray(f), e, x)


@dataclass
class DerivationIso:
    basepoint: int
    derivation_count: int
    cocycle_count: int
    forward: dict
    backward: dict

    @property
    def ok(self):
        return self.derivation_count == self.cocycle_count


def derivation_iso(truss: FiniteTruss, e: int) -> DerivationIso:
    """Materialise ``Der(T) <-> Z^1_e(T)`` and check both maps land where claimed and are mutually inverse."""
    ders = derivations(truss)
    Z = cocycles(truss, e, 1)
    zset = {row.tobytes() for row in Z}
    dset = {row.tobytes() for row in ders}
    fwd, bwd = {}, {}
    for D in ders:
        f = theta(truss, D, e)
        if f.tobytes() not in zset:
            raise AssertionError(f"theta({D.tolist()}) is not a cocycle")
        if not np.array_equal(theta_inverse(truss, f, e), D):
            raise AssertionError("theta_inverse o theta != id")
        fwd[tuple(D.tolist())] = tuple(f.tolist())
    for f in Z:
        D = theta_inverse(truss, f, e)
        if D.tobytes() not in dset:
            raise AssertionError(f"theta_inverse({f.tolist()}) is not a derivation")
        if not np.array_equal(theta(truss, D, e), f):
            raise AssertionError("theta o theta_inverse != id")
        bwd[tuple(f.tolist())] = tuple(D.tolist())
    if len(set(fwd.values())) != len(fwd) or len(set(bwd.values())) != len(bwd):
        raise AssertionError("theta is not injective")
    return DerivationIso(e, len(ders), len(Z), fwd, bwd)
