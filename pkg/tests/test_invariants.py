import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.exterior import ExteriorContext, exterior_power
from extpow.invariants import (
    InvariantError,
    WeightPoly,
    build_form,
    build_partition_ideal,
    build_pluecker,
    canonical_systems,
    congruence_membership,
    count_partitions,
    gram_matrix,
    pluecker_vector,
    set_partitions,
    span_membership,
    span_rank,
    stabilizer_check,
    substitute_linear,
)
from extpow.linalg import Matrix, det, random_invertible
from extpow.rings import Integers, IntegersMod, PrimeField, ideal_generate

F7 = PrimeField(7)
Z = Integers()


def test_form_strings():
    assert str(build_form(ExteriorContext(4, 2))) == "x12*x34 - x13*x24 + x14*x23"
    assert str(build_form(ExteriorContext(2, 1))) == "x1^x2"
    assert len(list(build_form(ExteriorContext(6, 2)).terms())) == 15


@pytest.mark.parametrize("n,m", [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (8, 4)])
def test_partition_count(n, m):
    parts = list(set_partitions(range(1, n + 1), m))
    assert len(parts) == count_partitions(n, m)
    assert all(sorted(x for b in p for x in b) == list(range(1, n + 1)) for p in parts)


def test_pluecker_counts():
    assert len(build_pluecker(ExteriorContext(4, 2)).generators) == 1
    assert len(build_pluecker(ExteriorContext(5, 2)).generators) == 5
    assert len(build_pluecker(ExteriorContext(5, 1)).generators) == 0
    sys_ = build_pluecker(ExteriorContext(6, 3))
    assert len(sys_.generators) == 45
    assert span_rank(sys_, 7) == 35


def test_form_requires_divisibility():
    with pytest.raises(InvariantError):
        build_form(ExteriorContext(5, 2))
    with pytest.raises(InvariantError):
        build_partition_ideal(ExteriorContext(6, 2))


@given(st.integers(0, 2**32 - 1), st.sampled_from([(4, 2), (5, 2), (6, 3), (6, 2), (5, 3)]))
@settings(max_examples=40, deadline=None)
def test_pluecker_vanishes_on_grassmann_points(seed, nm):
    n, m = nm
    ctx = ExteriorContext(n, m)
    rng = random.Random(seed)
    M = Matrix(F7, [[rng.randrange(7) for _ in range(m)] for _ in range(n)])
    v = pluecker_vector(ctx, M)
    for g in build_pluecker(ctx, F7).generators:
        assert not g.evaluate(v)


def test_pluecker_detects_non_decomposable_vector():
    ctx = ExteriorContext(4, 2)
    g = build_pluecker(ctx, F7).generators[0]
    v = [F7(0)] * 6
    v[ctx.rank((1, 2))] = F7(1)
    v[ctx.rank((3, 4))] = F7(1)  # e1^e2 + e3^e4
    assert g.evaluate(v)


@given(st.integers(0, 2**32 - 1), st.sampled_from([(4, 2), (6, 2), (6, 3), (2, 1)]))
@settings(max_examples=30, deadline=None)
def test_torus_scales_form_by_det(seed, nm):
    n, m = nm
    ctx = ExteriorContext(n, m)
    rng = random.Random(seed)
    h = Matrix(F7, [[rng.randrange(1, 7) if i == j else 0 for j in range(n)] for i in range(n)])
    f = build_form(ctx, F7)
    assert substitute_linear(f, exterior_power(ctx, h)) == f.scale(det(h))


@pytest.mark.parametrize("n,m", [(4, 2), (6, 2)])
def test_form_multiplier_is_det_on_images(n, m):
    ctx = ExteriorContext(n, m)
    f = build_form(ctx, F7)
    rng = random.Random(n)
    for _ in range(5):
        h = random_invertible(F7, n, rng)
        rep = stabilizer_check(exterior_power(ctx, h), f)
        assert rep.member and rep.multiplier == det(h)


def _image(ctx, spec, rng):
    return exterior_power(ctx, random_invertible(spec, ctx.n, rng))


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (6, 3), (6, 2)])
def test_canonical_systems_accept_images_and_reject_random(n, m):
    ctx = ExteriorContext(n, m)
    systems = canonical_systems(ctx, F7)
    rng = random.Random(100 + n + m)
    for _ in range(3):
        assert stabilizer_check(_image(ctx, F7, rng), systems)
    rejected = sum(not stabilizer_check(random_invertible(F7, ctx.N, rng), systems) for _ in range(5))
    assert rejected == 5


def test_form_refused_for_n_equal_2m_with_m_at_least_3():
    ctx = ExteriorContext(6, 3)
    g = Matrix.identity(F7, 20)
    with pytest.raises(InvariantError, match="Pluecker"):
        stabilizer_check(g, build_form(ctx, F7))


def test_form_stabilizer_is_larger_for_six_three():
    # a symplectic transvection e + c v v^T B of the form's Gram matrix B preserves
    # the (6,3) form but is not in the image, so the Pluecker system rejects it
    ctx = ExteriorContext(6, 3)
    f = build_form(ctx, F7)
    B = gram_matrix(f)
    rng = random.Random(11)
    v = [rng.randrange(7) for _ in range(ctx.N)]
    vB = [sum(v[k] * B.rows[k][j] for k in range(ctx.N)) % 7 for j in range(ctx.N)]
    g = Matrix(F7, [[(int(i == j) + 3 * v[i] * vB[j]) % 7 for j in range(ctx.N)] for i in range(ctx.N)])
    assert substitute_linear(f, g) == f
    assert not stabilizer_check(g, build_pluecker(ctx, F7))


def test_span_membership():
    sys_ = build_pluecker(ExteriorContext(5, 2), F7)
    a, b = sys_.generators[:2]
    assert span_membership(a.scale(F7(3)) + b, sys_)
    x = WeightPoly.from_terms(sys_.ctx, F7, [([(1, 2), (1, 2)], 1)])
    assert not span_membership(x, sys_)


def test_stabilizer_check_rejects_singular():
    from extpow.linalg import NotInvertible

    with pytest.raises(NotInvertible):
        stabilizer_check(Matrix.zeros(F7, 6, 6), build_form(ExteriorContext(4, 2), F7))


def test_congruence_membership():
    Z9 = IntegersMod(9)
    ctx = ExteriorContext(4, 2)
    A = ideal_generate(Z9, [3])
    rng = random.Random(7)
    for _ in range(5):
        h = random_invertible(Z9, 4, rng)
        u = Matrix(Z9, [[3 * rng.randrange(3) for _ in range(6)] for _ in range(6)])
        g = exterior_power(ctx, h) * (Matrix.identity(Z9, 6) + u)
        assert congruence_membership(ctx, g, A)
    g = Matrix.identity(Z9, 6)
    rows = g.copy_rows()
    rows[0][5] = 1
    assert not congruence_membership(ctx, Matrix(Z9, rows), A)
    assert congruence_membership(ctx, Matrix(Z9, rows), ideal_generate(Z9, [1]))


@pytest.mark.parametrize("n,m", [(4, 2), (5, 3), (6, 3)])
def test_alternating_pluecker_variant_spans_whole_exterior_square(n, m):
    # so every matrix preserves it; the canonical systems use the symmetric variant
    ctx = ExteriorContext(n, m)
    sys_ = build_pluecker(ctx, F7, alternating=True)
    assert sys_.alternating
    assert span_rank(sys_, 7) == ctx.N * (ctx.N - 1) // 2
    assert all(not s.alternating for s in canonical_systems(ctx, F7) if s.provenance.startswith("pluecker"))
