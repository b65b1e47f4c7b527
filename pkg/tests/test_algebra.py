import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trusses.algebra import (
    FiniteAbelianGroup,
    GroupElement,
    Translation,
    count_multi_heap_maps,
    enumerate_heap_endos,
    enumerate_multi_heap_maps,
    group_automorphisms,
    heap_automorphisms,
    heap_op,
    is_multi_heap_map,
    retract_ops,
    translate,
)
from trusses.errors import CapacityError, InputError, StructureError

GROUPS = [[2], [3], [4], [5], [6], [2, 2], [2, 3], [2, 4], [2, 2, 2]]


def brute_force_multi_heap_maps(G, n):
    """Filter every table G^n -> G by the per-slot heap law."""
    k = G.order
    out = []
    for values in itertools.product(range(k), repeat=k ** n):
        t = np.array(values).reshape((k,) * n)
        if is_multi_heap_map(G, t):
            out.append(values)
    return sorted(out)


def structured(G, n):
    t = enumerate_multi_heap_maps(G, n)
    return sorted(tuple(int(v) for v in row.ravel()) for row in t)


class TestGroup:
    def test_mixed_radix_roundtrip(self):
        G = FiniteAbelianGroup([2, 3])
        assert [G.to_tuple(i) for i in range(6)] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
        assert all(G.from_tuple(G.to_tuple(i)) == i for i in range(6))

    @pytest.mark.parametrize("orders", [[], [1], [3, 0]])
    def test_rejects_degenerate(self, orders):
        with pytest.raises(InputError):
            FiniteAbelianGroup(orders)

    def test_heap_example(self):
        G = FiniteAbelianGroup([5])
        assert heap_op(G.element(3), G.element(1), G.element(4)).index == 1

    def test_mismatched_groups(self):
        with pytest.raises(StructureError):
            heap_op(FiniteAbelianGroup([5]).element(1), FiniteAbelianGroup([6]).element(1), FiniteAbelianGroup([5]).element(1))

    def test_element_range(self):
        with pytest.raises(InputError):
            GroupElement(FiniteAbelianGroup([3]), 3)

    @pytest.mark.parametrize("orders", GROUPS)
    def test_heap_axioms_exhaustive(self, orders):
        G = FiniteAbelianGroup(orders)
        a, b, c, d, e = np.indices((G.order,) * 5)
        assert (G.heap(G.heap(a, b, c), d, e) == G.heap(a, b, G.heap(c, d, e))).all()
        x, y = np.indices((G.order,) * 2)
        assert (G.heap(x, x, y) == y).all() and (G.heap(y, x, x) == y).all()
        x, y, z = np.indices((G.order,) * 3)
        assert (G.heap(x, y, z) == G.heap(z, y, x)).all()

    def test_malcev_z6(self):
        G = FiniteAbelianGroup([6])
        for a, b in itertools.product(G.elements(), repeat=2):
            assert heap_op(a, a, b) == b == heap_op(b, a, a)

    def test_scale_and_orders(self):
        G = FiniteAbelianGroup([2, 4])
        x = G.from_tuple((1, 1))
        assert G.element_order(x) == 4
        assert int(G.scale(4, x)) == 0
        assert G.killed_by(2) == [G.from_tuple(t) for t in [(0, 0), (0, 2), (1, 0), (1, 2)]]


class TestRetract:
    def test_examples(self):
        G = FiniteAbelianGroup([4])
        ops = retract_ops(G.element(1))
        assert ops.add(G.element(2), G.element(3)).index == 0
        H = FiniteAbelianGroup([5])
        assert retract_ops(H.element(2)).neg(H.element(4)).index == 0

    @pytest.mark.parametrize("orders", [[3], [4], [2, 2], [6]])
    def test_group_axioms_every_basepoint(self, orders):
        G = FiniteAbelianGroup(orders)
        els = G.elements()
        for e in els:
            add, neg, zero = retract_ops(e)
            for x in els:
                assert add(zero, x) == x and add(x, neg(x)) == zero
                for y in els:
                    assert add(x, y) == add(y, x)
                    for z in els:
                        assert add(add(x, y), z) == add(x, add(y, z))


class TestTranslation:
    def test_example(self):
        G = FiniteAbelianGroup([6])
        assert translate(Translation(G.element(0), G.element(2)), G.element(5)).index == 3

    def test_identity_and_inverse(self):
        G = FiniteAbelianGroup([3])
        for e, e2 in itertools.product(G.elements(), repeat=2):
            t = Translation(e, e2)
            for a in G.elements():
                assert t.inverse()(t(a)) == a
                if e == e2:
                    assert t(a) == a

    @pytest.mark.parametrize("orders", [[4], [2, 2], [5]])
    def test_isomorphism_between_retracts(self, orders):
        G = FiniteAbelianGroup(orders)
        els = G.elements()
        for e, e2 in itertools.product(els, repeat=2):
            t = Translation(e, e2)
            src, dst = retract_ops(e2), retract_ops(e)
            assert t(e2) == e
            assert len({t(a) for a in els}) == len(els)
            for x, y in itertools.product(els, repeat=2):
                assert t(src.add(x, y)) == dst.add(t(x), t(y))


class TestEnumeration:
    @pytest.mark.parametrize("orders,n,count", [([2], 1, 4), ([3], 1, 9), ([2], 2, 16), ([3], 2, 81), ([2, 2], 1, 64), ([4], 2, 256)])
    def test_counts(self, orders, n, count):
        G = FiniteAbelianGroup(orders)
        assert count_multi_heap_maps(G, n) == count
        assert len(enumerate_multi_heap_maps(G, n)) == count

    @pytest.mark.parametrize("orders,n", [([2], 1), ([2], 2), ([3], 1), ([4], 1), ([2, 2], 1)])
    def test_matches_brute_force(self, orders, n):
        G = FiniteAbelianGroup(orders)
        s = structured(G, n)
        assert len(set(s)) == len(s)
        assert s == brute_force_multi_heap_maps(G, n)

    def test_arity_zero_is_constants(self):
        G = FiniteAbelianGroup([3])
        assert sorted(int(t) for t in enumerate_multi_heap_maps(G, 0)) == [0, 1, 2]

    def test_endos_equal_arity_one(self):
        G = FiniteAbelianGroup([3])
        a = sorted(map(tuple, enumerate_heap_endos(G).tolist()))
        assert a == structured(G, 1)

    @pytest.mark.parametrize("orders", GROUPS)
    def test_endos_include_constants(self, orders):
        G = FiniteAbelianGroup(orders)
        endos = {tuple(r) for r in enumerate_heap_endos(G).tolist()}
        assert all((c,) * G.order in endos for c in range(G.order))

    @pytest.mark.parametrize("orders,auts", [([2], 1), ([3], 2), ([4], 2), ([5], 4), ([2, 2], 6), ([2, 4], 8)])
    def test_automorphisms(self, orders, auts):
        G = FiniteAbelianGroup(orders)
        assert len(group_automorphisms(G)) == auts
        H = heap_automorphisms(G)
        assert len(H) == auts * G.order
        assert len({tuple(r) for r in H.tolist()}) == len(H)

    def test_guards(self):
        with pytest.raises(CapacityError):
            enumerate_multi_heap_maps(FiniteAbelianGroup([5]), 6)
        with pytest.raises(CapacityError):
            enumerate_heap_endos(FiniteAbelianGroup([5, 13]))
        with pytest.raises(InputError):
            enumerate_multi_heap_maps(FiniteAbelianGroup([2]), -1)


@given(st.sampled_from(GROUPS), st.data())
def test_heap_bracket_properties(orders, data):
    G = FiniteAbelianGroup(orders)
    idx = st.integers(0, G.order - 1)
    a, b, c, d, e = (G.element(data.draw(idx)) for _ in range(5))
    assert heap_op(heap_op(a, b, c), d, e) == heap_op(a, b, heap_op(c, d, e))
    assert heap_op(a, b, c) == heap_op(c, b, a)
    assert heap_op(a, a, b) == b


@given(st.sampled_from([[3], [4], [2, 2], [6]]), st.data())
def test_random_endo_is_heap_map(orders, data):
    G = FiniteAbelianGroup(orders)
    endos = enumerate_heap_endos(G)
    f = endos[data.draw(st.integers(0, len(endos) - 1))]
    x, y, z = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert f[G.heap(x, y, z)] == G.heap(f[x], f[y], f[z])
