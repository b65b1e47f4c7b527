import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trusses.algebra import FiniteAbelianGroup, enumerate_multi_heap_maps, heap_automorphisms
from trusses.errors import (
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
from trusses.matrices import BlockMatrix, full_matmul, random_block
from trusses.truss import (
    CosetTruss,
    FiniteTruss,
    ZTruss,
    ZTrussParams,
    coset_truss_check,
    enumerate_truss_structures,
    product_left,
    standard_products,
    validate_truss,
    z_truss_mult,
)

Z2, Z3, Z4, V4 = (FiniteAbelianGroup(o) for o in ([2], [3], [4], [2, 2]))


def is_truss_naive(G, mult):
    """Plain-loop axiom check, independent of the vectorised validator."""
    k = G.order
    h = lambda a, b, c: int(G.heap(a, b, c))  # noqa: E731
    for a, b, c in itertools.product(range(k), repeat=3):
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            return False
        for d in range(k):
            if mult[a][h(b, c, d)] != h(mult[a][b], mult[a][c], mult[a][d]):
                return False
            if mult[h(b, c, d)][a] != h(mult[b][a], mult[c][a], mult[d][a]):
                return False
    return True


def orbits_naive(G, tables):
    """Orbit count under heap automorphisms by explicit relabelling of tables."""
    perms = heap_automorphisms(G).tolist()
    seen, count = set(), 0
    for t in tables:
        key = tuple(map(tuple, t))
        if key in seen:
            continue
        count += 1
        for s in perms:
            inv = [0] * len(s)
            for i, v in enumerate(s):
                inv[v] = i
            img = tuple(tuple(s[t[inv[x]][inv[y]]] for y in range(len(s))) for x in range(len(s)))
            seen.add(img)
    return count


class TestValidate:
    @pytest.mark.parametrize("G", [Z2, Z3, Z4, V4, FiniteAbelianGroup([6])])
    def test_standard_products_valid(self, G):
        ts = standard_products(G)
        assert [t.name for t in ts] == ["ab=0", "ab=a", "ab=b", "ab=a+b"]
        for t in ts:
            assert is_truss_naive(G, t.mult.tolist())

    def test_xor_valid(self):
        T = validate_truss(Z2, [0, 1, 1, 0])
        assert T == standard_products(Z2)[3]

    def test_every_table_on_z2_distributes(self):
        # every map Z2 x Z2 -> Z2 is bi-affine, so no mutation breaks distributivity
        for values in itertools.product(range(2), repeat=4):
            t = np.array(values).reshape(2, 2)
            try:
                validate_truss(Z2, t)
            except AssocViolation:
                pass

    def test_mutation_breaks_left_distributivity(self):
        t = Z3.add_table.copy()
        t[0, 0] = 1
        with pytest.raises(LeftDistribViolation) as exc:
            validate_truss(Z3, t)
        a, b, c, d = exc.value.witness
        h = lambda x, y, z: int(Z3.heap(x, y, z))  # noqa: E731
        assert t[a, h(b, c, d)] != h(t[a, b], t[a, c], t[a, d])

    def test_right_distributivity_witness(self):
        # 0b = b and ab = a otherwise: left-distributive, not right-distributive
        t = np.array([[0, 1, 2], [1, 1, 1], [2, 2, 2]])
        with pytest.raises(RightDistribViolation) as exc:
            validate_truss(Z3, t)
        a, b, c, d = exc.value.witness
        h = lambda x, y, z: int(Z3.heap(x, y, z))  # noqa: E731
        assert t[h(b, c, d), a] != h(t[b, a], t[c, a], t[d, a])

    def test_associativity_violation(self):
        # ab = 2a + b on Z4 is bi-affine but not associative
        t = Z4.add_table[Z4.add_table[np.arange(4)[:, None], np.arange(4)[:, None]], np.arange(4)[None, :]]
        with pytest.raises(AssocViolation) as exc:
            validate_truss(Z4, t)
        a, b, c = exc.value.witness
        assert t[t[a, b], c] != t[a, t[b, c]]

    def test_bad_shapes(self):
        with pytest.raises(InputError):
            FiniteTruss(Z2, [0, 1, 1])
        with pytest.raises(InputError):
            FiniteTruss(Z2, [0, 1, 1, 2])

    def test_flat_and_square_tables_agree(self):
        assert FiniteTruss(Z2, [0, 0, 1, 1]) == FiniteTruss(Z2, [[0, 0], [1, 1]])
        assert product_left(Z2).mult.ravel().tolist() == [0, 0, 1, 1]

    def test_to_json(self):
        assert product_left(Z2).to_json() == {"group": [2], "mult": [0, 0, 1, 1], "name": "ab=a"}


class TestZTruss:
    def test_examples(self):
        assert z_truss_mult(ZTrussParams(1, 0, 0), 3, 4) == 12
        assert z_truss_mult(ZTrussParams(2, 3, 3), 1, 2) == 16
        with pytest.raises(ConstraintViolation):
            ZTrussParams(1, 1, 1)

    @pytest.mark.parametrize("abc", [(1, 0, 0), (1, 1, 0), (2, 3, 3), (6, 3, 1), (0, 0, 5), (0, 1, -3), (-2, -1, -1)])
    def test_associative_commutative_distributive_on_grid(self, abc):
        T = ZTruss(ZTrussParams(*abc))
        for m, n, k in T.triples():
            assert T.mul(m, n) == T.mul(n, m)
            assert T.mul(T.mul(m, n), k) == T.mul(m, T.mul(n, k))
            for d in (-2, 3):
                assert T.mul(m, T.heap(n, k, d)) == T.heap(T.mul(m, n), T.mul(m, k), T.mul(m, d))

    def test_overflow(self):
        with pytest.raises(ArithmeticOverflow):
            z_truss_mult(ZTrussParams(1, 0, 0), 1 << 40, 1 << 40)


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_z_truss_family_is_associative(b, a_seed, m, n, k):
    # choose (a, c) with ac = b(b - 1): a divides b(b - 1)
    target = b * (b - 1)
    divisors = [d for d in range(1, abs(target) + 1) if target % d == 0] if target else [a_seed or 1]
    a = divisors[abs(a_seed) % len(divisors)] * (1 if a_seed >= 0 else -1)
    c = target // a if a else 0
    p = ZTrussParams(a, b, c)
    f = lambda x, y: z_truss_mult(p, x, y)  # noqa: E731
    assert f(f(m, n), k) == f(m, f(n, k))


class TestCosetTruss:
    def _ideal(self, n):
        return (lambda rng: random_block(rng, n, alpha=0), lambda x: x.alpha == 0)

    def test_block_matrix_coset(self):
        T = coset_truss_check(lambda x, y: x @ y, self._ideal(3), BlockMatrix.q(3))
        assert T.mul(T.q, T.q) == T.q
        for x, y in T.pairs():
            assert T.contains(T.mul(x, y))
            assert T.heap(x, y, x) - T.q == (x - y + x) - T.q

    def test_product_rule_matches_full_matrices(self):
        rng = random.Random(1)
        for _ in range(32):
            x, y = random_block(rng, 3), random_block(rng, 3)
            assert (x @ y).to_full() == full_matmul(x.to_full(), y.to_full())

    def test_not_idempotent(self):
        two = 2 * BlockMatrix.q(2)
        with pytest.raises(NotIdempotent):
            coset_truss_check(lambda x, y: x @ y, self._ideal(2), two)

    def test_closure_violation(self):
        # membership claims b = 0, which products of sampled points do not respect
        sampler = (lambda rng: random_block(rng, 2, alpha=0), lambda x: x.alpha == 0 and x.b == (0, 0))
        with pytest.raises(ClosureViolation):
            coset_truss_check(lambda x, y: x @ y, sampler, BlockMatrix.q(2))

    def test_samples_are_deterministic(self):
        a = CosetTruss(BlockMatrix.q(2), *self._ideal(2), seed=5)
        b = CosetTruss(BlockMatrix.q(2), *self._ideal(2), seed=5)
        assert a.points() == b.points() and a.triples() == b.triples()
        assert a.points() != CosetTruss(BlockMatrix.q(2), *self._ideal(2), seed=6).points()

    def test_rational_entries(self):
        T = CosetTruss(BlockMatrix.q(2), *self._ideal(2))
        assert all(isinstance(v, Fraction) for p in T.points() for v in p.vec())


class TestEnumeration:
    @pytest.mark.parametrize(
        "G,valid,classes,rings,ring_classes",
        [(Z2, 8, 5, 2, 2), (Z3, 14, 5, 3, 2), (Z4, 26, 7, 4, 3), (V4, 280, 23, 28, 8)],
    )
    def test_counts(self, G, valid, classes, rings, ring_classes):
        rep = enumerate_truss_structures(G)
        assert (rep.total_valid, rep.class_count, rep.ring_total, rep.ring_class_count) == (valid, classes, rings, ring_classes)
        assert rep.class_count <= rep.total_valid
        for t in rep.representatives:
            validate_truss(G, t.mult)

    @pytest.mark.parametrize("G", [Z2, Z3])
    def test_brute_force_oracle(self, G):
        k = G.order
        tables = np.array(list(itertools.product(range(k), repeat=k * k))).reshape(-1, k, k)
        ok = [t.tolist() for t in tables if is_truss_naive(G, t.tolist())]
        rep = enumerate_truss_structures(G)
        assert len(ok) == rep.total_valid
        assert orbits_naive(G, ok) == rep.class_count

    def test_v4_orbits_by_relabelling(self):
        cands = enumerate_multi_heap_maps(V4, 2)
        ok = [t.tolist() for t in cands if is_truss_naive(V4, t.tolist())]
        assert len(ok) == 280
        assert orbits_naive(V4, ok) == 23

    def test_standard_products_distinct_classes(self):
        rep = enumerate_truss_structures(Z2)
        reps = {tuple(t.mult.ravel()) for t in rep.representatives}
        # canonical forms of ab=0, ab=a, ab=b, ab=a+b
        canon = set()
        for t in standard_products(Z2):
            forms = []
            for s in heap_automorphisms(Z2).tolist():
                inv = np.argsort(s)
                forms.append(tuple(np.array(s)[t.mult[np.ix_(inv, inv)]].ravel()))
            canon.add(min(forms))
        assert len(canon) == 4 and canon <= reps

    def test_deterministic(self):
        a = enumerate_truss_structures(V4).to_json()
        b = enumerate_truss_structures(V4).to_json()
        assert a == b

    def test_guard(self):
        with pytest.raises(CapacityError):
            enumerate_truss_structures(FiniteAbelianGroup([5]))
