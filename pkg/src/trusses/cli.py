"""Command-line front end.

Every command prints one canonical JSON report::

    {"subcommand": ..., "config": ..., "result": ..., "pass": ..., "witness": ...}

Exit status: 0 pass, 2 a mathematical check failed, 3 bad input, 4 a
capacity guard tripped.  ``--timing`` adds a ``wall_time`` field; it is off
by default so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import affine as aff
from .algebra import FiniteAbelianGroup
from .cohomology import cohomology
from .errors import CapacityError, CheckFailure, InputError, TrussAxiomError, TrussError
from .nijenhuis import (
    AffineIntMap,
    HeapEndo,
    check_nijenhuis,
    classify_z,
    compatibility_witness,
    heap_combination,
    is_nijenhuis,
    power_laws_check,
    torsion,
    torsion_table,
)
from .serialize import dumps, parse_rational
from .suites import SUITES
from .truss import FiniteTruss, ZTruss, ZTrussParams, enumerate_truss_structures, standard_products

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAPACITY = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for failed checks
    def error(self, message):
        raise InputError(f"usage: {message}")


# file loading


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from exc


def _int_list(obj, what):
    if not isinstance(obj, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
        raise InputError(f"{what} must be a list of integers")
    return obj


def load_truss(path, check=True):
    """A truss file: ``{"group": [...], "mult": [...]}`` or ``{"a": .., "b": .., "c": ..}``."""
    d = _read_json(path)
    if not isinstance(d, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "group" in d:
        G = FiniteAbelianGroup(_int_list(d["group"], "group"))
        return FiniteTruss(G, _int_list(d.get("mult"), "mult"), name=d.get("name"), check=check)
    if {"a", "b", "c"} <= d.keys():
        return ZTruss(ZTrussParams(*(int(d[k]) for k in "abc")))
    raise InputError(f"{path}: need either group/mult or a/b/c")


def load_map(path, truss):
    d = _read_json(path)
    if not isinstance(d, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "table" in d:
        if not isinstance(truss, FiniteTruss):
            raise InputError("table maps need a finite truss")
        return HeapEndo(truss, _int_list(d["table"], "table"))
    if {"p", "q"} <= d.keys():
        if not isinstance(truss, ZTruss):
            raise InputError("p/q maps need a truss on Z")
        return AffineIntMap(int(d["p"]), int(d["q"]))
    raise InputError(f"{path}: need either table or p/q")


def _group_arg(s):
    try:
        orders = json.loads(s) if s.strip().startswith("[") else [int(x) for x in s.split(",")]
    except ValueError as exc:
        raise InputError(f"bad group literal {s!r}") from exc
    return FiniteAbelianGroup(_int_list(orders, "group"))


def _basepoint(truss, e):
    if e is None:
        return truss.default_basepoint
    if isinstance(truss, FiniteTruss) and not 0 <= e < truss.order:
        raise InputError(f"basepoint {e} out of range")
    return e


def _map_json(N):
    if isinstance(N, HeapEndo):
        return {"table": N.table.tolist()}
    return {"p": N.p, "q": N.q}


# commands; each returns (result, passed, witness)


def cmd_truss_validate(args):
    try:
        T = load_truss(args.file)
    except TrussAxiomError as exc:
        return {"valid": False, "axiom": exc.axiom, "message": str(exc)}, False, exc.witness
    if isinstance(T, ZTruss):
        p = T.params
        return {"valid": True, "a": p.a, "b": p.b, "c": p.c}, True, None
    return {"valid": True, "truss": T, "commutative": T.is_commutative(), "idempotents": T.idempotents()}, True, None


def cmd_truss_enumerate(args):
    rep = enumerate_truss_structures(_group_arg(args.group))
    ok = True
    if args.expect_classes is not None:
        ok = ok and rep.class_count == args.expect_classes
    if args.expect_ring_classes is not None:
        ok = ok and rep.ring_class_count == args.expect_ring_classes
    return rep, ok, None if ok else {"class_count": rep.class_count, "ring_class_count": rep.ring_class_count}


def cmd_truss_standard(args):
    return {"trusses": list(standard_products(_group_arg(args.group)))}, True, None


def cmd_cohomology(args):
    T = load_truss(args.truss)
    if not isinstance(T, FiniteTruss):
        raise InputError("cohomology needs a finite truss")
    if args.degree < 0:
        raise InputError("degree must be non-negative")
    return cohomology(T, _basepoint(T, args.basepoint), args.degree), True, None


def cmd_nij_check(args):
    T = load_truss(args.truss)
    N = load_map(args.map, T)
    rep = check_nijenhuis(T, N, _basepoint(T, args.basepoint))
    return rep, rep.ok, rep.witness


def cmd_nij_torsion(args):
    T = load_truss(args.truss)
    N = load_map(args.map, T)
    e = _basepoint(T, args.basepoint)
    if isinstance(T, FiniteTruss):
        tab = torsion_table(T, N.table, e)
        trivial = bool((tab == e).all())
        return {"basepoint": e, "table": tab.ravel().tolist(), "trivial": trivial}, trivial, None
    values = {(m, n): torsion(T, N, e, m, n) for m, n in T.pairs()}
    distinct = sorted(set(values.values()))
    trivial = distinct == [e]
    w = None if trivial else next([m, n, v] for (m, n), v in values.items() if v != e)
    return {"basepoint": e, "grid": list(T.grid), "values": distinct, "trivial": trivial}, trivial, w


def cmd_classify_z(args):
    cl = classify_z(ZTrussParams(args.a, args.b, args.c), args.bound)
    return cl, cl.agreement, None


def cmd_powers(args):
    T = load_truss(args.truss)
    N = load_map(args.map, T)
    rows, w = [], None
    for k in range(args.kmax + 1):
        for l in range(args.kmax + 1):
            ok = power_laws_check(T, N, k, l)
            rows.append({"k": k, "l": l, "ok": ok})
            if not ok and w is None:
                w = {"k": k, "l": l}
    return {"checks": rows}, w is None, w


def cmd_compat(args):
    T = load_truss(args.truss)
    ops = [load_map(p, T) for p in args.map]
    pairs, w = [], None
    for i in range(len(ops)):
        for j in range(len(ops)):
            if i != j:
                bad = compatibility_witness(T, ops[i], ops[j])
                pairs.append({"i": i, "j": j, "compatible": bad is None})
                if bad is not None and w is None:
                    w = {"i": i, "j": j, "args": list(bad)}
    result = {"pairs": pairs, "nijenhuis": [is_nijenhuis(T, N) for N in ops]}
    if len(ops) % 2 == 1:
        combo = heap_combination(T, ops)
        result["combination"] = _map_json(combo)
        result["combination_nijenhuis"] = is_nijenhuis(T, combo)
    ok = w is None and all(result["nijenhuis"]) and result.get("combination_nijenhuis", True)
    return result, ok, w


def cmd_affine_verify(args):
    checks = aff.verify_affine_suite(args.size, args.lambda1, args.lambda2, args.trials, args.seed)
    failed = next((c for c in checks if not c.passed), None)
    return {"checks": checks}, failed is None, None if failed is None else {"check": failed.name, "witness": failed.witness}


def cmd_affine_bracket(args):
    checks = aff.bracket_suite(args.size, args.trials, args.seed)
    failed = next((c for c in checks if not c.passed), None)
    return {"checks": checks}, failed is None, None if failed is None else {"check": failed.name, "witness": failed.witness}


def cmd_suite(args):
    r = SUITES[args.name]()
    return {"suite": r.name, "config": r.config, "result": r.result}, r.passed, r.witness


def cmd_examples_emit(args):
    written = emit_examples(args.directory)
    return {"directory": str(args.directory), "files": written}, True, None


# bundled example inputs


def example_files() -> dict:
    """File name to JSON content for every bundled example input."""
    files = {}
    short = {"ab=0": "zero", "ab=a": "leftproj", "ab=b": "rightproj", "ab=a+b": "addition"}
    for orders in ([2], [3], [4], [2, 2]):
        stem = "z" + "z".join(str(o) for o in orders)
        for T in standard_products(FiniteAbelianGroup(orders)):
            files[f"{stem}_{short[T.name]}.json"] = T.to_json()
    for a, b, c in ((1, 0, 0), (1, 1, 0), (2, 3, 3), (6, 3, 1), (0, 0, 5), (0, 1, -3)):
        files[f"ztruss_{a}_{b}_{c}.json".replace("-", "m")] = {"a": a, "b": b, "c": c}
    files["map_z_2m_plus_3.json"] = {"p": 2, "q": 3}
    files["map_z_3m.json"] = {"p": 3, "q": 0}
    files["map_z_2m.json"] = {"p": 2, "q": 0}
    files["map_z4_const0.json"] = {"table": [0, 0, 0, 0]}
    files["map_z4_identity.json"] = {"table": [0, 1, 2, 3]}
    files["upper_projection_lift.json"] = {
        "size": 3,
        "operator": "A(a, b, 1) -> A(P+(a), b, 1)",
        "ideal_operator": "A(a, b, 0) -> A(P+(a), b, 0)",
        "idempotent": "A(0, 0, 1)",
        "lambda1": "2/1",
        "lambda2": "-1/2",
        "trials": 64,
        "seed": 0,
    }
    return files


def emit_examples(directory) -> list:
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
        names = []
        for name, content in sorted(example_files().items()):
            (d / name).write_text(dumps(content))
            names.append(name)
    except OSError as exc:
        raise InputError(f"cannot write to {d}: {exc.strerror}") from exc
    return names


# parser


def _rational(s):
    return parse_rational(s)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trusses", description="Trusses, their cohomology and Nijenhuis operators.")
    p.add_argument("--output", "-o", help="write the report here instead of standard output")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("truss", help="validate, enumerate or list trusses")
    ts = t.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = ts.add_parser("validate")
    v.add_argument("file")
    v.set_defaults(func=cmd_truss_validate)
    e = ts.add_parser("enumerate")
    e.add_argument("--group", required=True, help="cyclic orders, e.g. 2,2 or [2,2]")
    e.add_argument("--expect-classes", type=int)
    e.add_argument("--expect-ring-classes", type=int)
    e.set_defaults(func=cmd_truss_enumerate)
    s = ts.add_parser("standard")
    s.add_argument("--group", required=True)
    s.set_defaults(func=cmd_truss_standard)

    c = sub.add_parser("cohomology", help="cohomology of a finite truss")
    c.add_argument("--truss", required=True)
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--basepoint", type=int)
    c.set_defaults(func=cmd_cohomology)

    n = sub.add_parser("nijenhuis", help="Nijenhuis operators")
    ns = n.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, fn in (("check", cmd_nij_check), ("torsion", cmd_nij_torsion)):
        q = ns.add_parser(name)
        q.add_argument("--truss", required=True)
        q.add_argument("--map", required=True)
        q.add_argument("--basepoint", type=int)
        q.set_defaults(func=fn)
    q = ns.add_parser("classify-z")
    for k in ("a", "b", "c"):
        q.add_argument(f"--{k}", type=int, required=True)
    q.add_argument("--bound", type=int, default=50)
    q.set_defaults(func=cmd_classify_z)
    q = ns.add_parser("powers")
    q.add_argument("--truss", required=True)
    q.add_argument("--map", required=True)
    q.add_argument("--kmax", type=int, default=4)
    q.set_defaults(func=cmd_powers)
    q = ns.add_parser("compat")
    q.add_argument("--truss", required=True)
    q.add_argument("--map", action="append", required=True, help="repeat for each operator")
    q.set_defaults(func=cmd_compat)

    a = sub.add_parser("affine", help="affine Nijenhuis operators on block matrices")
    as_ = a.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = as_.add_parser("verify")
    q.add_argument("--size", type=int, default=3)
    q.add_argument("--lambda1", type=_rational, default=Fraction(2))
    q.add_argument("--lambda2", type=_rational, default=Fraction(-1, 2))
    q.add_argument("--trials", type=int, default=aff.DEFAULT_SAMPLES)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_affine_verify)
    q = as_.add_parser("bracket")
    q.add_argument("--size", type=int, default=3)
    q.add_argument("--trials", type=int, default=aff.DEFAULT_SAMPLES)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_affine_bracket)

    q = sub.add_parser("suite", help="run one bundled verification suite")
    q.add_argument("name", choices=sorted(SUITES))
    q.set_defaults(func=cmd_suite)

    x = sub.add_parser("examples", help="bundled example inputs")
    xs = x.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = xs.add_parser("emit")
    q.add_argument("directory")
    q.set_defaults(func=cmd_examples_emit)
    return p


def _config(args) -> dict:
    skip = {"func", "output", "timing", "command", "action"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _exit_code(exc) -> int:
    if isinstance(exc, CheckFailure):
        return EXIT_CHECK
    if isinstance(exc, CapacityError):
        return EXIT_CAPACITY
    return EXIT_INPUT


_NEG_RATIONAL = re.compile(r"^-\d+/\d+$")


def _attach_negative_rationals(argv: list[str]) -> list[str]:
    """Join ``--opt -p/q`` into ``--opt=-p/q``; argparse would read ``-p/q`` as a flag."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG_RATIONAL.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = _attach_negative_rationals(sys.argv[1:] if argv is None else list(argv))
    report = {"subcommand": " ".join(a for a in argv[:2] if not a.startswith("-")), "config": {}}
    code = EXIT_OK
    output = None
    start = time.perf_counter()
    timing = False
    try:
        args = build_parser().parse_args(argv)
        output, timing = args.output, args.timing
        report["subcommand"] = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
        report["config"] = _config(args)
        result, passed, witness = args.func(args)
        report.update(result=result, witness=witness)
        report["pass"] = bool(passed)
        code = EXIT_OK if passed else EXIT_CHECK
    except TrussError as exc:
        code = _exit_code(exc)
        report.update(
            result=None,
            witness=exc.witness,
            error={"type": type(exc).__name__, "message": str(exc)},
        )
        report["pass"] = False
    except (OverflowError, ValueError) as exc:
        code = EXIT_INPUT
        report.update(result=None, witness=None, error={"type": type(exc).__name__, "message": str(exc)})
        report["pass"] = False
    if timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    text = dumps(report)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
