"""Nijenhuis products, torsion and operators on trusses.

For a heap endomorphism ``N`` of a truss the deformed product is

    a o_N b = [N(a) b, N(ab), a N(b)]

and the ``e``-torsion is ``[N(a o_N b), N(a) N(b), e]``.  ``N`` is a
Nijenhuis operator when the torsion is the constant ``e``.

Operators are plain callables.  On finite trusses they are
:class:`HeapEndo` tables and every check is exhaustive and vectorised; on
``T(Z; a, b, c)`` they are :class:`AffineIntMap` and checks run over the
truss grid; on coset trusses they are any callable on points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import enumerate_heap_endos, is_heap_endo
from .cohomology import Cochain, coboundary_tables, coboundary_value
from .errors import (
    CapacityError,
    ConditionNEViolated,
    ConstraintViolation,
    EvenArity,
    InputError,
    NotAssociative,
    NotMultiHeapMap,
    NotNijenhuis,
)
from .truss import FiniteTruss, ZTruss, ZTrussParams, checked

MAX_POWER = 8
MAX_CLASSIFY_BOUND = 10_000


class HeapEndo:
    """A heap endomorphism of a finite truss, stored as a table."""

    def __init__(self, truss: FiniteTruss, table, check=True):
        table = np.asarray(table, dtype=np.intp)
        if table.shape != (truss.order,):
            raise InputError(f"endomorphism table must have {truss.order} entries")
        if table.min() < 0 or table.max() >= truss.order:
            raise InputError("endomorphism values must be element indices")
        if check and not is_heap_endo(truss.group, table):
            raise NotMultiHeapMap("table is not a heap endomorphism", witness=table.tolist())
        self.truss = truss
        self.table = table
        self.table.setflags(write=False)

    def __call__(self, a):
        return self.table[a] if isinstance(a, np.ndarray) else int(self.table[a])

    def __eq__(self, other):
        return isinstance(other, HeapEndo) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"HeapEndo({self.table.tolist()})"

    def compose(self, other: "HeapEndo") -> "HeapEndo":
        return HeapEndo(self.truss, self.table[other.table], check=False)

    def power(self, k: int) -> "HeapEndo":
        t = np.arange(self.truss.order, dtype=np.intp)
        for _ in range(k):
            t = self.table[t]
        return HeapEndo(self.truss, t, check=False)

    @classmethod
    def identity(cls, truss):
        return cls(truss, np.arange(truss.order), check=False)

    @classmethod
    def constant(cls, truss, value):
        return cls(truss, np.full(truss.order, value), check=False)


@dataclass(frozen=True)
class AffineIntMap:
    """``m -> p m + q`` on the integers."""

    p: int
    q: int

    def __call__(self, m):
        return checked(checked(self.p * m) + self.q)

    def compose(self, other: "AffineIntMap") -> "AffineIntMap":
        return AffineIntMap(checked(self.p * other.p), checked(self.p * other.q + self.q))

    def power(self, k: int) -> "AffineIntMap":
        out = AffineIntMap(1, 0)
        for _ in range(k):
            out = self.compose(out)
        return out


def power(N, k: int):
    if hasattr(N, "power"):
        return N.power(k)

    def Nk(a):
        for _ in range(k):
            a = N(a)
        return a

    return Nk


# pointwise operations, any carrier


def nijenhuis_product(truss, N, a, b):
    """``[N(a) b, N(ab), a N(b)]``."""
    mul = truss.mul
    return truss.heap(mul(N(a), b), N(mul(a, b)), mul(a, N(b)))


def torsion(truss, N, e, a, b):
    """``[N(a o_N b), N(a) N(b), e]``."""
    return truss.heap(N(nijenhuis_product(truss, N, a, b)), truss.mul(N(a), N(b)), e)


class DeformedTruss:
    """The carrier of ``truss`` with the product replaced by ``o_N``; nests for ``T[N][M]``."""

    def __init__(self, truss, N):
        self.base = truss
        self.N = N
        self.exhaustive = truss.exhaustive
        self.default_basepoint = truss.default_basepoint

    def heap(self, a, b, c):
        return self.base.heap(a, b, c)

    def heap_many(self, xs):
        return self.base.heap_many(xs)

    def mul(self, a, b):
        return nijenhuis_product(self.base, self.N, a, b)

    def points(self):
        return self.base.points()

    def pairs(self):
        return self.base.pairs()

    def triples(self):
        return self.base.triples()


# finite, vectorised


def product_table(truss: FiniteTruss, N) -> np.ndarray:
    Nt = np.asarray(N.table if isinstance(N, HeapEndo) else N, dtype=np.intp)
    M = truss.mult
    a, b = np.indices((truss.order,) * 2)
    return truss.group.heap(M[Nt[a], b], Nt[M], M[a, Nt[b]])


def torsion_table(truss: FiniteTruss, N, e: int) -> np.ndarray:
    Nt = np.asarray(N.table if isinstance(N, HeapEndo) else N, dtype=np.intp)
    P = product_table(truss, Nt)
    a, b = np.indices((truss.order,) * 2)
    return truss.group.heap(Nt[P], truss.mult[Nt[a], Nt[b]], e)


def _first_assoc_failure(P: np.ndarray):
    k = P.shape[0]
    x, y, z = np.indices((k, k, k))
    bad = P[P[x, y], z] != P[x, P[y, z]]
    if bad.any():
        return tuple(int(v) for v in np.argwhere(bad)[0])
    return None


@dataclass
class NijenhuisReport:
    is_heap_endo: bool
    torsion_trivial: bool
    product_associative: bool
    torsion_is_2cocycle: bool
    basepoint: object = None
    exhaustive: bool = True
    witness: Optional[dict] = None

    @property
    def ok(self):
        return self.is_heap_endo and self.torsion_trivial

    def to_json(self):
        from .serialize import to_jsonable

        return to_jsonable(
            {
                "is_heap_endo": self.is_heap_endo,
                "torsion_trivial": self.torsion_trivial,
                "product_associative": self.product_associative,
                "torsion_is_2cocycle": self.torsion_is_2cocycle,
                "basepoint": self.basepoint,
                "exhaustive": self.exhaustive,
                "witness": self.witness,
            }
        )


def _check_finite(truss: FiniteTruss, N, e: int) -> NijenhuisReport:
    Nt = np.asarray(N.table if isinstance(N, HeapEndo) else N, dtype=np.intp)
    endo = is_heap_endo(truss.group, Nt)
    tor = torsion_table(truss, Nt, e)
    trivial = bool((tor == e).all())
    P = product_table(truss, Nt)
    assoc_fail = _first_assoc_failure(P)
    d2 = coboundary_tables(truss, e, tor[None], 2)[0]
    cocycle = bool((d2 == e).all())
    witness = None
    if not trivial:
        w = tuple(int(v) for v in np.argwhere(tor != e)[0])
        witness = {"torsion": {"args": list(w), "value": int(tor[w])}}
    if assoc_fail is not None:
        witness = dict(witness or {}, associativity=list(assoc_fail))
    report = NijenhuisReport(endo, trivial, assoc_fail is None, cocycle, e, True, witness)
    if endo and report.product_associative != report.torsion_is_2cocycle:
        raise AssertionError(f"associativity and the 2-cocycle condition disagree for N={Nt.tolist()}, e={e}")
    return report


def _check_sampled(truss, N, e) -> NijenhuisReport:
    endo = True
    endo_w = None
    for a, b, c in truss.triples():
        if N(truss.heap(a, b, c)) != truss.heap(N(a), N(b), N(c)):
            endo, endo_w = False, (a, b, c)
            break
    trivial, tor_w = True, None
    for a, b in truss.pairs():
        t = torsion(truss, N, e, a, b)
        if t != e:
            trivial, tor_w = False, {"args": [a, b], "value": t}
            break
    deformed = DeformedTruss(truss, N)
    assoc, assoc_w = True, None
    cocycle, cocycle_w = True, None
    tor = lambda x, y: torsion(truss, N, e, x, y)  # noqa: E731
    for a, b, c in truss.triples():
        m = deformed.mul
        if assoc and m(m(a, b), c) != m(a, m(b, c)):
            assoc, assoc_w = False, [a, b, c]
        if cocycle and coboundary_value(truss, e, tor, 2, (a, b, c)) != e:
            cocycle, cocycle_w = False, [a, b, c]
    witness = {}
    if endo_w is not None:
        witness["heap_endo"] = list(endo_w)
    if tor_w is not None:
        witness["torsion"] = tor_w
    if assoc_w is not None:
        witness["associativity"] = assoc_w
    if cocycle_w is not None:
        witness["cocycle"] = cocycle_w
    report = NijenhuisReport(endo, trivial, assoc, cocycle, e, False, witness or None)
    if endo and assoc != cocycle:
        raise AssertionError(f"associativity and the 2-cocycle condition disagree at {assoc_w or cocycle_w}")
    return report


def check_nijenhuis(truss, N, e=None) -> NijenhuisReport:
    """Fill a :class:`NijenhuisReport` for ``N`` on ``truss`` at base point ``e``.

    Associativity of ``o_N`` is checked directly and, independently, the
    torsion is pushed through ``d^2_e``; the two verdicts must agree.
    """
    if isinstance(truss, FiniteTruss):
        return _check_finite(truss, N, 0 if e is None else e)
    if e is None:
        e = truss.default_basepoint
    return _check_sampled(truss, N, e)


def is_nijenhuis(truss, N) -> bool:
    if isinstance(truss, FiniteTruss):
        Nt = np.asarray(N.table if isinstance(N, HeapEndo) else N)
        return bool((torsion_table(truss, Nt, 0) == 0).all())
    return all(N(nijenhuis_product(truss, N, a, b)) == truss.mul(N(a), N(b)) for a, b in truss.pairs())


def deformed_truss(truss, N):
    """``T[N]``: same heap, product ``o_N``.  Raises ``NotAssociative`` if ``o_N`` is not associative."""
    if isinstance(truss, FiniteTruss):
        P = product_table(truss, N)
        w = _first_assoc_failure(P)
        if w is not None:
            raise NotAssociative("the Nijenhuis product is not associative", witness=w)
        base = f"{truss.name}" if truss.name else "T"
        return FiniteTruss(truss.group, P, name=f"{base}[N]", check=True)
    m = nijenhuis_product
    for a, b, c in truss.triples():
        if m(truss, N, m(truss, N, a, b), c) != m(truss, N, a, m(truss, N, b, c)):
            raise NotAssociative("the Nijenhuis product is not associative", witness=(a, b, c))
    return DeformedTruss(truss, N)


# powers and compatibility


def power_laws_check(truss, N, k: int, l: int) -> bool:
    """Check ``N^k`` Nijenhuis, ``T[N^k][N^l] = T[N^(k+l)]``, ``N^l`` Nijenhuis on ``T[N^k]``
    and the power identities relating ``N^k`` and ``N``.
    """
    if not (0 <= k <= MAX_POWER and 0 <= l <= MAX_POWER):
        raise InputError(f"powers must lie in [0, {MAX_POWER}]")
    if not is_nijenhuis(truss, N):
        raise NotNijenhuis("N is not a Nijenhuis operator")
    return not _power_law_failures(truss, N, k, l)


def _power_law_failures(truss, N, k, l):
    Nk, Nl, Nkl, Nk1 = power(N, k), power(N, l), power(N, k + l), power(N, k + 1)
    fails = []
    if not is_nijenhuis(truss, Nk):
        fails.append("N^k not Nijenhuis")
    Tk = DeformedTruss(truss, Nk)
    Tkl = DeformedTruss(Tk, Nl)
    mul, heap = truss.mul, truss.heap
    for a, b in truss.pairs():
        if Tkl.mul(a, b) != nijenhuis_product(truss, Nkl, a, b):
            fails.append(("T[N^k][N^l] != T[N^(k+l)]", a, b))
            break
        # N^l is Nijenhuis on T[N^k]
        if Nl(nijenhuis_product(Tk, Nl, a, b)) != Tk.mul(Nl(a), Nl(b)):
            fails.append(("N^l not Nijenhuis on T[N^k]", a, b))
            break
        # N^k(a)N(b) = [N(N^k(a)b), N^(k+1)(ab), N^k(aN(b))]
        if mul(Nk(a), N(b)) != heap(N(mul(Nk(a), b)), Nk1(mul(a, b)), Nk(mul(a, N(b)))):
            fails.append(("k-power left identity", a, b))
            break
        if mul(N(a), Nk(b)) != heap(N(mul(a, Nk(b))), Nk1(mul(a, b)), Nk(mul(N(a), b))):
            fails.append(("k-power right identity", a, b))
            break
        lhs = Nk1(mul(a, b))
        if lhs != heap(N(mul(Nk(a), b)), mul(Nk(a), N(b)), Nk(mul(a, N(b)))) or lhs != heap(
            Nk(mul(N(a), b)), mul(N(a), Nk(b)), N(mul(a, Nk(b)))
        ):
            fails.append(("N^(k+1)(ab) identity", a, b))
            break
    return fails


def compatible(truss, N1, N2) -> bool:
    """``N1(a) N2(b) = [N1(a o_N2 b), N2(a) N1(b), N2(a o_N1 b)]`` on all checked pairs."""
    return compatibility_witness(truss, N1, N2) is None


def compatibility_witness(truss, N1, N2):
    mul = truss.mul
    for a, b in truss.pairs():
        lhs = mul(N1(a), N2(b))
        rhs = truss.heap(
            N1(nijenhuis_product(truss, N2, a, b)),
            mul(N2(a), N1(b)),
            N2(nijenhuis_product(truss, N1, a, b)),
        )
        if lhs != rhs:
            return (a, b)
    return None


class HeapCombination:
    """``a -> [N_1(a), N_2(a), ..., N_{2n+1}(a)]``."""

    def __init__(self, truss, operators: Sequence[Callable]):
        if len(operators) % 2 == 0:
            raise EvenArity(f"heap combinations need an odd number of operators, got {len(operators)}")
        self.truss = truss
        self.operators = list(operators)

    def __call__(self, a):
        return self.truss.heap_many([N(a) for N in self.operators])


def heap_combination(truss, operators):
    """Pointwise heap bracket of an odd number of operators.

    On a finite truss returns a :class:`HeapEndo`; for ``AffineIntMap``
    inputs an ``AffineIntMap``; otherwise a callable.
    """
    combo = HeapCombination(truss, operators)
    if isinstance(truss, FiniteTruss):
        return HeapEndo(truss, [combo(a) for a in range(truss.order)], check=False)
    if all(isinstance(N, AffineIntMap) for N in operators):
        sgn = [1 if i % 2 == 0 else -1 for i in range(len(operators))]
        return AffineIntMap(sum(s * N.p for s, N in zip(sgn, operators)), sum(s * N.q for s, N in zip(sgn, operators)))
    return combo


# classification on Z


def torsion_polynomial(params: ZTrussParams, p: int, q: int) -> int:
    """Constant 0-torsion of ``m -> p m + q`` on ``T(Z; a, b, c)``."""
    a, b, c = params.a, params.b, params.c
    return -c * p * p + ((2 * b - 1) * q + 2 * c) * p - a * q * q - (2 * b - 1) * q - c


def nijenhuis_product_z(params: ZTrussParams, N: AffineIntMap, m: int, n: int) -> int:
    """Closed form ``a p m n + (a q + b)(m + n) + 2 b q + 2 c - q - c p``."""
    a, b, c = params.a, params.b, params.c
    p, q = N.p, N.q
    return a * p * m * n + (a * q + b) * (m + n) + 2 * b * q + 2 * c - q - c * p


def _gcd0(x, c):
    # gcd(0, c) = |c|
    return math.gcd(x, c)


def closed_form_families(params: ZTrussParams, bound: int) -> dict:
    """The closed-form operator families, each restricted to ``|p|, |q| <= bound``."""
    a, b, c = params.a, params.b, params.c
    fams = {}
    if c != 0:
        for name, num in (("b", b), ("b-1", b - 1)):
            g = _gcd0(num, c)
            sp, sq = num // g, c // g
            tmax = bound // abs(sq)
            pts = {(sp * t + 1, sq * t) for t in range(-tmax, tmax + 1)}
            fams[f"p=({name})/gcd*t+1, q=c/gcd*t"] = sorted((p, q) for p, q in pts if abs(p) <= bound and abs(q) <= bound)
    else:
        fams["N(m)=pm"] = [(p, 0) for p in range(-bound, bound + 1)]
        if 2 * b - 1 not in (1, -1):
            raise ConstraintViolation("c = 0 forces b in {0, 1}")
        s = a * (2 * b - 1)  # a / (2b-1) with 2b-1 = +-1
        pts = [(s * q + 1, q) for q in range(-bound, bound + 1)]
        fams["p=a/(2b-1)*q+1"] = sorted((p, q) for p, q in pts if abs(p) <= bound)
    return fams


@dataclass
class ZClassification:
    params: ZTrussParams
    bound: int
    brute_force: list
    families: dict
    agreement: bool
    associative_only: list = field(default_factory=list)

    def to_json(self):
        return {
            "a": self.params.a,
            "b": self.params.b,
            "c": self.params.c,
            "bound": self.bound,
            "brute_force": [list(x) for x in self.brute_force],
            "families": {k: [list(x) for x in v] for k, v in sorted(self.families.items())},
            "agreement": self.agreement,
            "associative_not_nijenhuis": [list(x) for x in self.associative_only],
        }


def _assoc_z(params, p, q) -> bool:
    # associativity of the closed-form Nijenhuis product on Z
    a, b, c = params.a, params.b, params.c
    A = a * p
    B = a * q + b
    C = 2 * b * q + 2 * c - q - c * p
    return A * C == B * (B - 1)


def classify_z(params: ZTrussParams, bound: int) -> ZClassification:
    """All ``m -> p m + q`` with ``|p|, |q| <= bound`` that are Nijenhuis on ``T(Z; a, b, c)``.

    The brute-force pass scans the torsion polynomial; the closed-form pass
    lists the known families.  Operators whose product is associative but
    whose torsion does not vanish (only possible when ``a = 0``) are
    reported separately.
    """
    if not 0 <= bound <= MAX_CLASSIFY_BOUND:
        raise CapacityError(f"bound must lie in [0, {MAX_CLASSIFY_BOUND}]")
    rng = range(-bound, bound + 1)
    brute = sorted((p, q) for p in rng for q in rng if torsion_polynomial(params, p, q) == 0)
    fams = closed_form_families(params, bound)
    union = sorted(set().union(*map(set, fams.values())))
    assoc_only = []
    if params.a == 0:
        assoc_only = sorted((p, q) for p in rng for q in rng if _assoc_z(params, p, q) and torsion_polynomial(params, p, q) != 0)
    return ZClassification(params, bound, brute, fams, brute == union, assoc_only)


# lifting to coset trusses


def check_condition_ne(Nbar, q, vectors, mul=None):
    """``Nbar(x q) = Nbar(x) q`` and ``Nbar(q x) = q Nbar(x)`` on the given ideal elements."""
    mul = mul or (lambda x, y: x @ y)
    for x in vectors:
        if Nbar(mul(x, q)) != mul(Nbar(x), q):
            raise ConditionNEViolated("Nbar(xq) != Nbar(x)q", witness=x)
        if Nbar(mul(q, x)) != mul(q, Nbar(x)):
            raise ConditionNEViolated("Nbar(qx) != qNbar(x)", witness=x)
    return True


class LiftedOperator:
    """``q + x -> q + Nbar(x)`` on ``T(I; q)``."""

    def __init__(self, Nbar, q):
        self.Nbar = Nbar
        self.q = q

    def __call__(self, a):
        return self.q + self.Nbar(a - self.q)


def lift_to_coset(Nbar, truss, check=True) -> LiftedOperator:
    """Lift a Nijenhuis operator on the ideal to the coset truss ``truss = T(I; q)``.

    With ``check`` the condition on ``q``, the Nijenhuis property of ``Nbar``
    on the ideal and the Nijenhuis property of the lift are all verified on
    the truss samples.
    """
    q = truss.q
    N = LiftedOperator(Nbar, q)
    if check:
        mul = truss.mul
        vecs = truss.random_vectors(truss.samples, "lift")
        check_condition_ne(Nbar, q, vecs, mul)
        for x, y in zip(vecs, vecs[1:] + vecs[:1]):
            prod = mul(Nbar(x), y) - Nbar(mul(x, y)) + mul(x, Nbar(y))
            if Nbar(prod) != mul(Nbar(x), Nbar(y)):
                raise NotNijenhuis("Nbar is not Nijenhuis on the ideal", witness=(x, y))
        for a, b in truss.pairs():
            if torsion(truss, N, q, a, b) != q:
                raise NotNijenhuis("the lifted operator has non-trivial torsion", witness=(a, b))
    return N


def all_heap_endos(truss: FiniteTruss) -> list[HeapEndo]:
    return [HeapEndo(truss, t, check=False) for t in enumerate_heap_endos(truss.group)]
