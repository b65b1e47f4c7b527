"""End-to-end verification suites over the bundled objects.

Each suite returns a :class:`SuiteResult`; the ``suite`` CLI subcommand and
the acceptance tests both go through here, so every criterion is one
command.  Results contain no timings, so reruns serialize identically.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .affine import verify_affine_suite
from .algebra import FiniteAbelianGroup
from .cohomology import (
    coboundaries,
    coboundary_squared_check,
    coboundary_tables,
    cochains,
    cocycles,
    cohomology,
    derivation_iso,
    transport_table,
)
from .nijenhuis import (
    AffineIntMap,
    HeapEndo,
    _check_finite,
    all_heap_endos,
    compatible,
    heap_combination,
    is_nijenhuis,
    power,
    power_laws_check,
    classify_z,
    torsion,
    torsion_polynomial,
)
from .truss import FiniteTruss, ZTruss, ZTrussParams, product_left, standard_products

BUNDLED_GROUPS = ((2,), (3,), (4,), (2, 2))
Z_TRIPLES = ((1, 0, 0), (1, 1, 0), (2, 3, 3), (6, 3, 1))


@dataclass
class SuiteResult:
    name: str
    passed: bool
    result: dict
    witness: object = None
    config: dict = field(default_factory=dict)


def workers() -> int:
    """Worker cap from ``NIJ_THREADS``; defaults to the machine's CPU count."""
    env = os.environ.get("NIJ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _pmap(fn, items):
    items = list(items)
    n = min(workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(fn, items))


def bundled_trusses(max_order: int = 4) -> list[FiniteTruss]:
    """The four standard products on each bundled group, in a fixed order."""
    out = []
    for orders in BUNDLED_GROUPS:
        G = FiniteAbelianGroup(orders)
        if G.order <= max_order:
            out.extend(standard_products(G))
    return out


def _label(T: FiniteTruss) -> str:
    return f"{'x'.join(f'Z{o}' for o in T.group.cyclic_orders)} {T.name}"


# coboundary complex


def _complex_one(T: FiniteTruss):
    rows, first_bad = [], None
    degrees = (0, 1, 2) if T.order <= 3 else (0, 1)
    for e in range(T.order):
        for n in degrees:
            sq = coboundary_squared_check(T, e, n)
            const = coboundary_tables(T, e, np.full((1,) + (T.order,) * n, e), n)
            ce = bool((const == e).all())
            rows.append({"truss": _label(T), "basepoint": e, "degree": n, "dd_is_e": sq, "d_const_is_e": ce})
            if first_bad is None and not (sq and ce):
                first_bad = rows[-1]
    return rows, first_bad


def suite_complex() -> SuiteResult:
    parts = _pmap(_complex_one, bundled_trusses())
    rows = [r for rs, _ in parts for r in rs]
    witness = next((w for _, w in parts if w is not None), None)
    return SuiteResult(
        "complex", witness is None, {"checks": len(rows), "failures": sum(not (r["dd_is_e"] and r["d_const_is_e"]) for r in rows)}, witness
    )


# cohomology of left-projection trusses


def suite_lzp(primes=(2, 3), basepoints="all") -> SuiteResult:
    out, witness = [], None
    for p in primes:
        T = product_left(FiniteAbelianGroup([p]))
        es = range(p) if basepoints == "all" else [0]
        for e in es:
            counts = {n: cohomology(T, e, n).class_count for n in (0, 1, 2)}
            expected = {0: 1, 1: p, 2: 1}
            out.append({"p": p, "basepoint": e, "H0": counts[0], "H1": counts[1], "H2": counts[2]})
            if witness is None and counts != expected:
                witness = out[-1]
    return SuiteResult("lzp", witness is None, {"groups": out}, witness, {"primes": list(primes), "basepoints": basepoints})


# base point independence


def _transport_witness(T, e, e2, n):
    for kind, src, dst in (
        ("Z", cocycles(T, e, n), cocycles(T, e2, n)),
        ("B", coboundaries(T, e, n), coboundaries(T, e2, n)),
    ):
        img = transport_table(T, src, e, e2)
        img_set = {r.tobytes() for r in img}
        if len(img_set) != len(src) or img_set != {r.tobytes() for r in dst}:
            return {"set": kind, "from": e, "to": e2, "degree": n}
    return None


def suite_basepoint() -> SuiteResult:
    G = FiniteAbelianGroup([3])
    from .truss import product_sum

    trusses = [product_left(G), product_sum(G)]
    rows, witness = [], None
    for T in trusses:
        for n in (0, 1):
            counts = [cohomology(T, e, n).class_count for e in range(T.order)]
            ok_counts = len(set(counts)) == 1
            if witness is None and not ok_counts:
                witness = {"truss": _label(T), "degree": n, "class_counts": counts}
            for e in range(T.order):
                for e2 in range(T.order):
                    w = _transport_witness(T, e, e2, n)
                    if witness is None and w is not None:
                        witness = dict(w, truss=_label(T))
            rows.append({"truss": _label(T), "degree": n, "class_counts": counts})
    return SuiteResult("basepoint", witness is None, {"trusses": rows}, witness)


# derivations


def _derivations_one(T):
    rows, bad = [], None
    for e in range(T.order):
        try:
            iso = derivation_iso(T, e)
            ok = iso.ok
            rows.append({"truss": _label(T), "basepoint": e, "derivations": iso.derivation_count, "cocycles": iso.cocycle_count})
        except AssertionError as exc:
            ok = False
            rows.append({"truss": _label(T), "basepoint": e, "error": str(exc)})
        if bad is None and not ok:
            bad = rows[-1]
    return rows, bad


def suite_derivations() -> SuiteResult:
    parts = _pmap(_derivations_one, bundled_trusses())
    rows = [r for rs, _ in parts for r in rs]
    witness = next((w for _, w in parts if w is not None), None)
    return SuiteResult("derivations", witness is None, {"checks": len(rows), "rows": rows}, witness)


# associativity versus the 2-cocycle condition


def _second_one(T):
    stats = {"truss": _label(T), "pairs": 0, "associative": 0, "cocycle": 0, "nijenhuis": 0, "mismatches": 0}
    bad = None
    for N in all_heap_endos(T):
        for e in range(T.order):
            stats["pairs"] += 1
            try:
                rep = _check_finite(T, N, e)
            except AssertionError:
                stats["mismatches"] += 1
                if bad is None:
                    bad = {"truss": _label(T), "N": N.table.tolist(), "basepoint": e}
                continue
            stats["associative"] += rep.product_associative
            stats["cocycle"] += rep.torsion_is_2cocycle
            stats["nijenhuis"] += rep.torsion_trivial
    return stats, bad


def suite_second(include_classes=True) -> SuiteResult:
    """Every heap endo and base point of every bundled truss.

    The standard products only produce associative deformations, so by
    default the isomorphism-class representatives on the bundled groups are
    scanned too; they supply the non-associative side of the equivalence.
    """
    from .truss import enumerate_truss_structures

    trusses = bundled_trusses()
    if include_classes:
        for orders in BUNDLED_GROUPS:
            for i, T in enumerate(enumerate_truss_structures(FiniteAbelianGroup(list(orders))).representatives):
                trusses.append(FiniteTruss(T.group, T.mult, name=f"class {i}", check=False))
    parts = _pmap(_second_one, trusses)
    rows = [s for s, _ in parts]
    witness = next((w for _, w in parts if w is not None), None)
    totals = {k: sum(r[k] for r in rows) for k in ("pairs", "associative", "cocycle", "nijenhuis", "mismatches")}
    return SuiteResult("second", witness is None, dict(totals, rows=rows), witness, {"include_classes": include_classes})


# classification on Z


def suite_classify_z(triples=Z_TRIPLES, bound=50) -> SuiteResult:
    rows, witness = [], None
    for a, b, c in triples:
        cl = classify_z(ZTrussParams(a, b, c), bound)
        rows.append({"params": [a, b, c], "agreement": cl.agreement, "operators": len(cl.brute_force)})
        if witness is None and not cl.agreement:
            witness = {"params": [a, b, c]}
        if (a, b, c) == (1, 0, 0):
            brute = set(cl.brute_force)
            rng = range(-bound, bound + 1)
            linear = all((p, 0) in brute for p in rng)
            one_minus = all((1 - q, q) in brute for q in rng if abs(1 - q) <= bound)
            expected = {(p, 0) for p in rng} | {(1 - q, q) for q in rng if abs(1 - q) <= bound}
            rows[-1].update(linear_family=linear, one_minus_q_family=one_minus, exact_union=brute == expected)
            if witness is None and not (linear and one_minus and brute == expected):
                witness = {"params": [a, b, c], "family_check": "failed"}
    # torsion of m -> 2m + 3 on T(Z; 1, 0, 0) by two routes
    params = ZTrussParams(1, 0, 0)
    T = ZTruss(params)
    N = AffineIntMap(2, 3)
    direct = sorted({torsion(T, N, 0, m, n) for m, n in T.pairs()})
    poly = torsion_polynomial(params, 2, 3)
    tor = {"direct_values": direct, "polynomial": poly}
    if witness is None and not (direct == [-12] and poly == -12):
        witness = {"torsion": tor}
    return SuiteResult("classify-z", witness is None, {"triples": rows, "torsion_2m_plus_3": tor}, witness, {"bound": bound})


# powers and compatibility


def _powers_block(T, N, label, kmax):
    bad = None
    checked = 0
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            checked += 1
            if not power_laws_check(T, N, k, l):
                bad = bad or {"operator": label, "k": k, "l": l, "law": "power laws"}
            if not compatible(T, power(N, k), power(N, l)):
                bad = bad or {"operator": label, "k": k, "l": l, "law": "compatibility"}
    combos = [[power(N, 1), power(N, 2), power(N, 3)], [power(N, 2), N, power(N, 4), power(N, 3), N]]
    for i, ops in enumerate(combos):
        if not is_nijenhuis(T, heap_combination(T, ops)):
            bad = bad or {"operator": label, "combination": i}
    return checked, bad


def suite_powers(kmax=4) -> SuiteResult:
    rows, witness = [], None
    Tz = ZTruss(ZTrussParams(1, 0, 0))
    n, w = _powers_block(Tz, AffineIntMap(3, 0), "3m on T(Z;1,0,0)", kmax)
    rows.append({"operator": "3m on T(Z;1,0,0)", "checks": n})
    witness = witness or w
    # 2m and 3m are compatible and odd combinations of them are Nijenhuis
    N1, N2 = AffineIntMap(2, 0), AffineIntMap(3, 0)
    comp = compatible(Tz, N1, N2) and compatible(Tz, N2, N1)
    combo = heap_combination(Tz, [N1, N2, N1])
    combo_ok = is_nijenhuis(Tz, combo) and combo == AffineIntMap(1, 0)
    rows.append({"operator": "[2m, 3m, 2m] on T(Z;1,0,0)", "compatible": comp, "combination": [combo.p, combo.q], "nijenhuis": combo_ok})
    if not (comp and combo_ok):
        witness = witness or {"operator": "[2m, 3m, 2m]"}
    for T in standard_products(FiniteAbelianGroup([4])):
        for q in T.idempotents():
            label = f"constant {q} on {_label(T)}"
            P = HeapEndo.constant(T, q)
            n, w = _powers_block(T, P, label, kmax)
            rows.append({"operator": label, "checks": n})
            witness = witness or w
    return SuiteResult("powers", witness is None, {"operators": rows}, witness, {"kmax": kmax})


# affine


def suite_affine(n=3, lambda1=Fraction(2), lambda2=Fraction(-1, 2), trials=64, seed=0) -> SuiteResult:
    checks = verify_affine_suite(n, lambda1, lambda2, trials, seed)
    failed = next((c for c in checks if not c.passed), None)
    return SuiteResult(
        "affine",
        failed is None,
        {"checks": {c.name: c.passed for c in checks}},
        None if failed is None else {"check": failed.name, "witness": failed.witness},
        {"size": n, "lambda1": Fraction(lambda1), "lambda2": Fraction(lambda2), "trials": trials, "seed": seed},
    )


# enumeration


def suite_enumerate(orders=(2, 2), classes=23, ring_classes=8) -> SuiteResult:
    from .truss import enumerate_truss_structures

    rep = enumerate_truss_structures(FiniteAbelianGroup(list(orders)))
    ok = rep.class_count == classes and rep.ring_class_count == ring_classes
    res = {k: v for k, v in rep.to_json().items() if k not in ("representatives", "ring_representatives")}
    return SuiteResult(
        "enumerate",
        ok,
        res,
        None if ok else {"class_count": rep.class_count, "ring_class_count": rep.ring_class_count},
        {"group": list(orders), "expected_classes": classes, "expected_ring_classes": ring_classes},
    )


SUITES = {
    "complex": suite_complex,
    "lzp": suite_lzp,
    "basepoint": suite_basepoint,
    "derivations": suite_derivations,
    "second": suite_second,
    "classify-z": suite_classify_z,
    "powers": suite_powers,
    "affine": suite_affine,
    "enumerate": suite_enumerate,
}
