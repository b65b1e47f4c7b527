"""Nijenhuis operators ``m -> p m + q`` on the integer trusses ``m n = a m n + b (m + n) + c``.

    python3 demos/nijenhuis_on_integers.py [bound]
"""
import sys

from trusses import AffineIntMap, ZTruss, ZTrussParams, classify_z, torsion
from trusses.nijenhuis import torsion_polynomial

bound = int(sys.argv[1]) if len(sys.argv) > 1 else 6

for abc in [(1, 0, 0), (1, 1, 0), (2, 3, 3), (6, 3, 1), (0, 1, -3)]:
    cl = classify_z(ZTrussParams(*abc), bound)
    ops = ", ".join(f"{p}m{q:+d}" for p, q in cl.brute_force)
    print(f"{abc}: {len(cl.brute_force)} operators, closed forms agree: {cl.agreement}")
    print(f"  {ops}")

T = ZTruss(ZTrussParams(1, 0, 0))
N = AffineIntMap(2, 3)
sampled = {torsion(T, N, 0, m, n) for m, n in T.pairs()}
print("torsion of 2m+3 on ordinary multiplication:", torsion_polynomial(T.params, 2, 3), "sampled:", sampled)
