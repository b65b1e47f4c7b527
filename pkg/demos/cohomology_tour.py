"""Cohomology of the standard products on small cyclic groups.

Prints cocycle, coboundary and class counts in degrees 0 to 2 at every base
point, then the derivation correspondence in degree one.

    python3 demos/cohomology_tour.py
"""
from trusses import FiniteAbelianGroup, cohomology, derivation_iso, standard_products

for order in (2, 3):
    G = FiniteAbelianGroup([order])
    for T in standard_products(G):
        print(f"Z{order}  {T.name}")
        for e in range(T.order):
            counts = []
            for n in (0, 1, 2):
                r = cohomology(T, e, n)
                counts.append(f"H{n}: {r.cocycle_count}/{r.coboundary_count}={r.class_count}")
            iso = derivation_iso(T, e)
            print(f"  e={e}  " + "  ".join(counts) + f"  derivations={iso.derivation_count}")
