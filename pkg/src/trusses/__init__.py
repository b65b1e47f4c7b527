"""Exact computations with heaps, trusses, truss cohomology and Nijenhuis operators."""
from .algebra import FiniteAbelianGroup, enumerate_heap_endos, enumerate_multi_heap_maps, heap_automorphisms, translate
from .cohomology import Cochain, coboundary, cocycles, coboundaries, cohomology, derivation_iso, transport
from .errors import TrussError
from .nijenhuis import (
    AffineIntMap,
    HeapEndo,
    check_nijenhuis,
    classify_z,
    compatible,
    deformed_truss,
    heap_combination,
    is_nijenhuis,
    nijenhuis_product,
    torsion,
)
from .truss import (
    CosetTruss,
    FiniteTruss,
    ZTruss,
    ZTrussParams,
    enumerate_truss_structures,
    standard_products,
    validate_truss,
)

__version__ = "0.1.0"

__all__ = [
    "AffineIntMap",
    "Cochain",
    "CosetTruss",
    "FiniteAbelianGroup",
    "FiniteTruss",
    "HeapEndo",
    "TrussError",
    "ZTruss",
    "ZTrussParams",
    "check_nijenhuis",
    "classify_z",
    "coboundaries",
    "coboundary",
    "cocycles",
    "cohomology",
    "compatible",
    "deformed_truss",
    "derivation_iso",
    "enumerate_heap_endos",
    "enumerate_multi_heap_maps",
    "enumerate_truss_structures",
    "heap_automorphisms",
    "heap_combination",
    "is_nijenhuis",
    "nijenhuis_product",
    "standard_products",
    "torsion",
    "translate",
    "transport",
    "validate_truss",
]
