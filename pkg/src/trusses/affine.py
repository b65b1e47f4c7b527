"""Affine Nijenhuis operators on rational matrix affgebras.

The working model is the algebra ``R`` of block matrices from
:mod:`trusses.matrices`.  Points of the affgebra are the ``alpha = 1``
matrices ``q + I``; free vectors are the ``alpha = 0`` matrices ``I``; the
vector from ``a`` to ``b`` is ``b - a`` and ``[a, b, c] = a + (c - b)``.

An :class:`AffineOperator` is ``x -> L x + t`` on the flattened entries of
``R``.  Everything is exact, so sampled identities are checked with ``==``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    CompatibilityFailure,
    NotAffine,
    NotCosetPreserving,
    NotNijenhuis,
    WeightsNotBarycentric,
)
from .matrices import BlockMatrix, check_size, random_block, random_rational, strict_lower, transpose, upper
from .nijenhuis import compatibility_witness, nijenhuis_product, torsion
from .truss import CosetTruss, coset_truss_check

DEFAULT_SAMPLES = 64


class AffineOperator:
    """``x -> L x + t`` on block matrices of size ``n``."""

    def __init__(self, n: int, linear: Sequence[Sequence], translation: Sequence):
        d = n * n + n + 1
        self.n = n
        self.linear = tuple(tuple(Fraction(x) for x in row) for row in linear)
        self.translation = tuple(Fraction(x) for x in translation)
        if len(self.linear) != d or any(len(r) != d for r in self.linear) or len(self.translation) != d:
            raise ValueError(f"linear part must be {d} x {d}")

    @classmethod
    def from_function(cls, f: Callable[[BlockMatrix], BlockMatrix], n: int) -> "AffineOperator":
        """Read off ``L`` and ``t`` from an affine ``f``: ``t = f(0)``, columns ``f(e_i) - t``."""
        d = n * n + n + 1
        t = f(BlockMatrix.zero(n)).vec()
        cols = []
        for i in range(d):
            e = BlockMatrix.from_vec(n, [int(i == j) for j in range(d)])
            cols.append([x - y for x, y in zip(f(e).vec(), t)])
        return cls(n, [list(r) for r in zip(*cols)], t)

    @classmethod
    def identity(cls, n):
        d = n * n + n + 1
        return cls(n, [[int(i == j) for j in range(d)] for i in range(d)], [0] * d)

    @classmethod
    def constant(cls, value: BlockMatrix):
        n = value.n
        d = n * n + n + 1
        return cls(n, [[0] * d for _ in range(d)], value.vec())

    def linear_part(self, v: BlockMatrix) -> BlockMatrix:
        """The linearisation applied to a vector."""
        x = v.vec()
        return BlockMatrix.from_vec(self.n, [sum(l * y for l, y in zip(row, x) if l) for row in self.linear])

    def __call__(self, a: BlockMatrix) -> BlockMatrix:
        x = a.vec()
        return BlockMatrix.from_vec(
            self.n, [sum(l * y for l, y in zip(row, x) if l) + t for row, t in zip(self.linear, self.translation)]
        )

    def __eq__(self, other):
        return (
            isinstance(other, AffineOperator)
            and self.linear == other.linear
            and self.translation == other.translation
        )

    def __hash__(self):
        return hash((self.linear, self.translation))

    def __repr__(self):
        return f"AffineOperator(n={self.n})"


def check_affine(N: AffineOperator, points, vectors, scalars) -> bool:
    """``N(a + lam v) = N(a) + lam N_lin(v)`` on the samples."""
    for a, v, lam in zip(points, vectors, scalars):
        if N(a + lam * v) != N(a) + lam * N.linear_part(v):
            raise NotAffine("affine law fails", witness=(a, v, lam))
    return True


# carriers


def affgebra(n: int = 3, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CosetTruss:
    """The coset truss ``q + I`` of ``alpha = 1`` block matrices."""
    check_size(n)
    return coset_truss_check(
        lambda x, y: x @ y,
        (lambda rng: random_block(rng, n, alpha=0), lambda x: x.alpha == 0),
        BlockMatrix.q(n),
        samples=samples,
        seed=seed,
    )


def algebra_truss(n: int = 3, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CosetTruss:
    """The whole algebra ``R`` as a truss ``T(R) = 0 + R``."""
    check_size(n)
    return CosetTruss(
        BlockMatrix.zero(n),
        lambda rng: random_block(rng, n),
        lambda x: True,
        ring_mult=lambda x, y: x @ y,
        samples=samples,
        seed=seed,
    )


# named operators


def upper_projection(n: int) -> AffineOperator:
    """``A(a, b, alpha) -> A(P+(a), b, alpha)`` with ``P+`` the upper-triangular projection."""
    return AffineOperator.from_function(lambda x: BlockMatrix(upper(x.a), x.b, x.alpha), n)


def transpose_block(n: int) -> AffineOperator:
    return AffineOperator.from_function(lambda x: BlockMatrix(transpose(x.a), x.b, x.alpha), n)


def constant_q(n: int) -> AffineOperator:
    return AffineOperator.constant(BlockMatrix.q(n))


def upper_part(n: int) -> AffineOperator:
    """``q + x -> q + P_1(x)`` where ``P_1`` keeps the upper-triangular ``a`` and ``b``.

    On the coset this is the same map as :func:`upper_projection`.
    """
    return upper_projection(n)


def strict_lower_part(n: int) -> AffineOperator:
    """``q + x -> q + P_2(x)`` where ``P_2`` keeps the strictly lower ``a`` and drops ``b``."""
    return AffineOperator.from_function(lambda x: BlockMatrix(strict_lower(x.a), (0,) * n, x.alpha), n)


def drop_column(n: int) -> AffineOperator:
    """``A(a, b, alpha) -> A(a, 0, alpha)``: affine, idempotent and multiplicative."""
    return AffineOperator.from_function(lambda x: BlockMatrix(x.a, (0,) * n, x.alpha), n)


def triangular_mix(n: int, lam1, lam2) -> AffineOperator:
    """``A(a, b, 1) -> A(lam1 P+(a) + lam2 P-(a), lam1 b, 1)``, built directly."""
    lam1, lam2 = Fraction(lam1), Fraction(lam2)

    def f(x):
        up, lo = upper(x.a), strict_lower(x.a)
        a = tuple(tuple(lam1 * u + lam2 * v for u, v in zip(r, s)) for r, s in zip(up, lo))
        # alpha row: keep the coset; the (1 - lam1 - lam2) share comes from the constant q
        return BlockMatrix(a, tuple(lam1 * y for y in x.b), x.alpha)

    return AffineOperator.from_function(f, n)


# affine Nijenhuis operators


def coset_witness(N, truss: CosetTruss):
    for a in truss.points():
        if not truss.contains(N(a)):
            return a
    return None


def affine_nijenhuis_witness(N, truss: CosetTruss):
    """First sampled pair with ``N(a o_N b) != N(a) N(b)``, else ``None``."""
    a = coset_witness(N, truss)
    if a is not None:
        raise NotCosetPreserving("N leaves the coset", witness=a)
    for a, b in truss.pairs():
        if N(nijenhuis_product(truss, N, a, b)) != truss.mul(N(a), N(b)):
            return (a, b)
    return None


def is_affine_nijenhuis(N, truss: CosetTruss) -> bool:
    return affine_nijenhuis_witness(N, truss) is None


class ScaledOperator:
    """``a -> lam N(a)``: a heap endomorphism of ``T(A)`` though not affine unless ``lam = 1``."""

    def __init__(self, N, lam):
        self.N = N
        self.lam = Fraction(lam)

    def __call__(self, a):
        return self.lam * self.N(a)


def scale_operator(N, lam, truss: CosetTruss = None, check=True) -> ScaledOperator:
    """``lam N`` on an algebra truss ``T(A)``; with ``check`` verify it is Nijenhuis and compatible with ``N``."""
    S = ScaledOperator(N, lam)
    if check:
        truss = truss or algebra_truss(N.n)
        w = affine_nijenhuis_witness(S, truss)
        if w is not None:
            raise NotNijenhuis("lam N is not Nijenhuis", witness=w)
        w = compatibility_witness(truss, S, N)
        if w is not None:
            raise CompatibilityFailure("lam N is not compatible with N", witness=w)
    return S


def barycentric_combination(operators: Sequence[AffineOperator], weights: Sequence, truss: CosetTruss = None, check=True):
    """``sum lam_i N_i`` for weights summing to one.

    With ``check`` (and a truss to sample from) the operators must be
    pairwise compatible affine Nijenhuis operators and the result is
    verified to be one.
    """
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(operators) or not operators:
        raise WeightsNotBarycentric("one weight per operator is required")
    if sum(weights) != 1:
        raise WeightsNotBarycentric(f"weights sum to {sum(weights)}, not 1")
    n = operators[0].n
    d = n * n + n + 1
    lin = [[sum(w * N.linear[i][j] for w, N in zip(weights, operators)) for j in range(d)] for i in range(d)]
    tr = [sum(w * N.translation[i] for w, N in zip(weights, operators)) for i in range(d)]
    out = AffineOperator(n, lin, tr)
    if check and truss is not None:
        for i, N in enumerate(operators):
            w = affine_nijenhuis_witness(N, truss)
            if w is not None:
                raise NotNijenhuis(f"operator {i} is not affine Nijenhuis", witness=w)
        for i in range(len(operators)):
            for j in range(i + 1, len(operators)):
                w = compatibility_witness(truss, operators[i], operators[j])
                if w is not None:
                    raise CompatibilityFailure(f"operators {i} and {j} are not compatible", witness=(i, j) + w)
        w = affine_nijenhuis_witness(out, truss)
        if w is not None:
            raise NotNijenhuis("barycentric combination is not affine Nijenhuis", witness=w)
    return out


# brackets


def commutator_bracket(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """The vector from ``b a`` to ``a b``."""
    return a @ b - b @ a


def deformed_product(N, a, b):
    """``a o_N b = N(a) b - N(ab) + a N(b)``."""
    return N(a) @ b - N(a @ b) + a @ N(b)


def deformed_bracket(N: AffineOperator, a, b) -> BlockMatrix:
    """``[N(a), b] - N_lin([a, b]) + [a, N(b)]``."""
    return commutator_bracket(N(a), b) - N.linear_part(commutator_bracket(a, b)) + commutator_bracket(a, N(b))


def lie_bracket_for(N: AffineOperator, truss: CosetTruss) -> Callable:
    """The deformed bracket of a verified affine Nijenhuis operator."""
    w = affine_nijenhuis_witness(N, truss)
    if w is not None:
        raise NotNijenhuis("N is not an affine Nijenhuis operator", witness=w)
    return lambda a, b: deformed_bracket(N, a, b)


def linearised(bracket, v: BlockMatrix, c, anchor):
    """Linearisation of ``x -> [x, c]`` applied to the vector ``v``, computed at ``anchor``."""
    return bracket(anchor + v, c) - bracket(anchor, c)


def jacobi_defect(bracket, a, b, c, anchor) -> BlockMatrix:
    """Cyclic sum of ``lin([a, b], c)``; zero for a Lie bracket."""
    return (
        linearised(bracket, bracket(a, b), c, anchor)
        + linearised(bracket, bracket(b, c), a, anchor)
        + linearised(bracket, bracket(c, a), b, anchor)
    )


def biaffine_witness(op, triples, lams):
    """First failure of
    ``op(a + lam (b - a), c) = op(a, c) + lam (op(b, c) - op(a, c))`` or its right-slot analogue.

    ``op`` may be point- or vector-valued; in both cases the vector between
    outputs is their difference.
    """
    for (a, b, c), lam in zip(triples, lams):
        x = a + lam * (b - a)
        if op(x, c) != op(a, c) + lam * (op(b, c) - op(a, c)):
            return ("left", a, b, c, lam)
        if op(c, x) != op(c, a) + lam * (op(c, b) - op(c, a)):
            return ("right", a, b, c, lam)
    return None


def biaffine_check(op, triples, lams) -> bool:
    return biaffine_witness(op, triples, lams) is None


def sample_scalars(count, seed, salt="scalars"):
    rng = random.Random(f"{seed}:{salt}")
    return [random_rational(rng) for _ in range(count)]


# reports


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None

    def to_json(self):
        from .serialize import to_jsonable

        return {"name": self.name, "passed": self.passed, "witness": to_jsonable(self.witness)}


def _result(name, witness):
    return CheckResult(name, witness is None, witness)


def verify_affine_suite(n=3, lambda1=2, lambda2=Fraction(-1, 2), trials=DEFAULT_SAMPLES, seed=0) -> list:
    """Run every affine-side check on seeded exact samples; one :class:`CheckResult` each."""
    check_size(n)
    T = affgebra(n, samples=trials, seed=seed)
    R = algebra_truss(n, samples=trials, seed=seed)
    q = T.q
    lam1, lam2 = Fraction(lambda1), Fraction(lambda2)
    out = []

    up = upper_projection(n)
    vecs = T.random_vectors(trials, "ne")

    def ne_witness():
        for x in vecs:
            if up(x @ q) != up(x) @ q or up(q @ x) != q @ up(x):
                return x
        return None

    out.append(_result("condition_ne_upper_projection", ne_witness()))
    lift_w = None
    for a, b in T.pairs():
        if torsion(T, up, q, a, b) != q:
            lift_w = (a, b)
            break
    out.append(_result("upper_projection_lift_torsion_trivial", lift_w))

    pts = T.random_points(trials, "affine")
    scal = sample_scalars(trials, seed)
    aff_w = None
    for N in (up, constant_q(n), upper_part(n), strict_lower_part(n)):
        try:
            check_affine(N, pts, vecs, scal)
        except NotAffine as exc:
            aff_w = exc.witness
            break
    out.append(_result("operators_affine", aff_w))

    parts = [constant_q(n), upper_part(n), strict_lower_part(n)]
    weights = [1 - lam1 - lam2, lam1, lam2]
    try:
        mix = barycentric_combination(parts, weights, truss=T, check=True)
        bw = None
    except (CompatibilityFailure, NotNijenhuis, NotCosetPreserving) as exc:
        mix, bw = None, {"error": type(exc).__name__, "witness": exc.witness}
    out.append(_result("triangular_mix_barycentric_nijenhuis", bw))
    direct = triangular_mix(n, lam1, lam2)
    # the two agree on the coset though not on all of R (the alpha row differs)
    mw = None
    if mix is not None:
        mw = next((a for a in T.points() if mix(a) != direct(a)), None)
    out.append(_result("triangular_mix_matches_combination", mw))
    out.append(_result("triangular_mix_affine_nijenhuis", affine_nijenhuis_witness(direct, T)))

    half = Fraction(1, 2)
    P = drop_column(n)
    cor = barycentric_combination([P, AffineOperator.identity(n)], [1 - half, half], truss=T, check=True)
    out.append(_result("idempotent_identity_combination_nijenhuis", affine_nijenhuis_witness(cor, T)))

    S = ScaledOperator(up, Fraction(2, 3))
    sw = affine_nijenhuis_witness(S, R) or compatibility_witness(R, S, up)
    lin_w = None
    for a, b in R.pairs():
        if nijenhuis_product(R, S, a, b) != S.lam * nijenhuis_product(R, up, a, b):
            lin_w = (a, b)
            break
    out.append(_result("scaled_operator_nijenhuis_and_compatible", sw))
    out.append(_result("scaled_product_linear", lin_w))

    triples = T.triples()
    lams = sample_scalars(len(triples), seed, "biaffine")
    out.append(_result("deformed_product_biaffine", biaffine_witness(lambda a, b: deformed_product(direct, a, b), triples, lams)))
    out.append(_result("matrix_product_biaffine", biaffine_witness(lambda a, b: a @ b, triples, lams)))

    for name, N in (("triangular_mix", direct), ("upper_projection", up)):
        br = lie_bracket_for(N, T)
        w_comm = w_anti = w_jac = w_hom = None
        for a, b in T.pairs():
            v = br(a, b)
            if w_comm is None and v != deformed_product(N, a, b) - deformed_product(N, b, a):
                w_comm = (a, b)
            if w_anti is None and v != -br(b, a):
                w_anti = (a, b)
            if w_hom is None and N.linear_part(v) != commutator_bracket(N(a), N(b)):
                w_hom = (a, b)
        for a, b, c in triples:
            if jacobi_defect(br, a, b, c, q) != BlockMatrix.zero(n):
                w_jac = (a, b, c)
                break
        out.append(_result(f"{name}_bracket_is_product_commutator", w_comm))
        out.append(_result(f"{name}_bracket_antisymmetric", w_anti))
        out.append(_result(f"{name}_bracket_jacobi", w_jac))
        out.append(_result(f"{name}_bracket_intertwines", w_hom))
        out.append(_result(f"{name}_bracket_biaffine", biaffine_witness(br, triples, lams)))
    return out


def bracket_suite(n=3, trials=DEFAULT_SAMPLES, seed=0) -> list:
    """Checks on the commutator bracket itself."""
    check_size(n)
    T = affgebra(n, samples=trials, seed=seed)
    q = T.q
    out = []
    w = None
    for a, b in T.pairs():
        if commutator_bracket(a, b) != -commutator_bracket(b, a) or commutator_bracket(a, a) != BlockMatrix.zero(n):
            w = (a, b)
            break
    out.append(_result("antisymmetric", w))
    w = None
    for a, b in T.pairs():
        if not commutator_bracket(a, b).is_vector():
            w = (a, b)
            break
    out.append(_result("values_are_vectors", w))
    rng = random.Random(f"{seed}:diagonal")
    w = None
    for _ in range(trials):
        x, y = (
            BlockMatrix(tuple(tuple(random_rational(rng) if i == j else 0 for j in range(n)) for i in range(n)),
                        tuple(random_rational(rng) for _ in range(n)), 1)
            for _ in range(2)
        )
        if any(v != 0 for row in commutator_bracket(x, y).a for v in row):
            w = (x, y)
            break
    out.append(_result("diagonal_blocks_commute", w))
    triples = T.triples()
    w = None
    for a, b, c in triples:
        if jacobi_defect(commutator_bracket, a, b, c, q) != BlockMatrix.zero(n):
            w = (a, b, c)
            break
    out.append(_result("jacobi", w))
    anchors = T.random_points(len(triples), "anchors")
    w = None
    for (a, b, c), anchor in zip(triples, anchors):
        v = commutator_bracket(a, b)
        if linearised(commutator_bracket, v, c, q) != linearised(commutator_bracket, v, c, anchor):
            w = (a, b, c)
            break
    out.append(_result("linearisation_anchor_independent", w))
    lams = sample_scalars(len(triples), seed, "biaffine")
    out.append(_result("biaffine", biaffine_witness(commutator_bracket, triples, lams)))
    w = None
    for a, b, c in triples:
        if T.heap(a, b, c) != a + (c - b):
            w = (a, b, c)
            break
    out.append(_result("heap_is_translation", w))
    return out
