import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.exterior import (
    ExtGen,
    ExteriorContext,
    ExtTransvection,
    WeightIndex,
    brute_commutator,
    classify_commutator,
    det_exponent,
    ext_transvection_decomposition,
    ext_transvection_factors,
    exterior_power,
    height,
    pair_sign,
    parse_index,
    weight_sign,
)
from extpow.linalg import LinalgError, Matrix, Transvection, det, random_invertible, word_evaluate
from extpow.rings import Integers, IntegersMod, PolynomialRing, PrimeField

Z = Integers()
P = PolynomialRing(Z, ("xi", "zeta"))
XI, ZETA = P.gens()


def _leibniz(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= rows[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def test_context_ranking_is_lexicographic():
    ctx = ExteriorContext(5, 2)
    assert ctx.N == 10
    assert [str(I) for I in ctx.index_table[:4]] == ["1,2", "1,3", "1,4", "1,5"]
    for r in range(ctx.N):
        assert ctx.rank(ctx.unrank(r)) == r
    with pytest.raises(LinalgError):
        ctx.index((1, 6))


def test_weight_index_parsing_and_labels():
    assert parse_index("135") == (1, 3, 5)
    assert parse_index("1,10,11") == (1, 10, 11)
    assert WeightIndex("3,1") == (1, 3)
    assert str(WeightIndex((1, 3, 5))) == "1,3,5"
    with pytest.raises(LinalgError):
        WeightIndex((1, 1))
    c = ExteriorContext(12, 4)
    t = ExtTransvection(c, (4, 9, 10, 11), (4, 5, 6, 7), XI)
    assert str(t) == "t_{4,9,10,11|4,5,6,7}(xi)"


@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_exterior_power_entries_are_minors(n, m, seed):
    m = min(m, n)
    ctx = ExteriorContext(n, m)
    rng = random.Random(seed)
    rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    img = exterior_power(ctx, Matrix(Z, rows))
    for r, I in enumerate(ctx.index_table):
        for s, J in enumerate(ctx.index_table):
            assert img.rows[r][s] == _leibniz([[rows[i - 1][j - 1] for j in J] for i in I])


@pytest.mark.parametrize("spec", [PrimeField(7), IntegersMod(9)])
def test_modular_fast_path_agrees_with_generic(spec):
    rng = random.Random(1)
    ctx = ExteriorContext(6, 3)
    g = random_invertible(spec, 6, rng)
    fast = exterior_power(ctx, g)
    lifted = exterior_power(ctx, Matrix(Z, g.copy_rows()))
    assert fast == lifted.reduce_to(spec)


@given(st.lists(st.integers(1, 9), min_size=0, max_size=4, unique=True), st.integers(1, 12), st.integers(1, 12))
def test_weight_sign_is_inversion_parity(L, i, j):
    if i == j or i in L or j in L:
        return
    seq = sorted(L) + [i, j]
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    assert weight_sign(L, i, j) == (-1) ** inv
    assert pair_sign(L, i, j) == pair_sign(L, j, i)


def test_weight_sign_examples():
    assert weight_sign([2], 1, 3) == -1
    assert weight_sign([3, 5], 1, 2) == 1


def test_height():
    assert height((1, 2), (3, 4)) == 0
    assert height((1, 3, 5), (1, 2, 4)) == 1


@given(st.integers(3, 7), st.integers(1, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_decomposition_equals_image(n, m, data):
    m = min(m, n - 1)
    ctx = ExteriorContext(n, m)
    i, j = data.draw(st.sampled_from([(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]))
    w = ext_transvection_decomposition(ctx, i, j, XI)
    assert word_evaluate(w, P) == exterior_power(ctx, Transvection(n, i, j, XI).matrix())
    assert len(list(w.letters())) == comb(n - 2, m - 1)


def test_factor_lists():
    c = ExteriorContext(4, 2)
    assert [str(f) for f in ext_transvection_factors(c, 1, 2, XI)] == ["t_{13,23}(xi)", "t_{14,24}(xi)"]
    assert [str(f) for f in ext_transvection_factors(c, 1, 3, XI)] == ["t_{12,23}(-xi)", "t_{14,34}(xi)"]


def test_ext_gen_matrix_and_inverse():
    c = ExteriorContext(5, 2)
    g = ExtGen(c, 4, 2, ZETA)
    assert g.matrix() == exterior_power(c, Transvection(5, 4, 2, ZETA).matrix())
    assert (g.matrix() * g.inverse().matrix()).is_identity()
    assert str(g) == "^2t_{4,2}(zeta)"


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (6, 3)])
def test_det_exponent(n, m):
    rng = random.Random(n * 10 + m)
    F = PrimeField(11)
    for _ in range(3):
        g = random_invertible(F, n, rng)
        assert det(exterior_power(ExteriorContext(n, m), g)) == det(g) ** det_exponent(n, m)
    assert det_exponent(n, m) == comb(n - 1, m - 1)


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_classifier_matches_brute_force(data):
    n = data.draw(st.integers(3, 6))
    m = data.draw(st.integers(1, min(3, n - 1)))
    ctx = ExteriorContext(n, m)
    I = data.draw(st.sampled_from(ctx.index_table))
    J = data.draw(st.sampled_from([K for K in ctx.index_table if K != I]))
    i, j = data.draw(st.sampled_from([(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]))
    t = ExtTransvection(ctx, I, J, XI)
    r = classify_commutator(ctx, t, i, j, ZETA)
    assert r.evaluate(P) == brute_commutator(ctx, t, i, j, ZETA)
    if i not in I and j not in J:
        assert r.kind == "identity"
    elif r.kind == "single":
        assert len(r.factors) == 1
    elif r.kind == "triple":
        keys = [(ctx.rank(f.I), ctx.rank(f.J)) for f in r.factors]
        assert keys == sorted(keys) and len(keys) == 3


def test_displayed_commutators():
    c7 = ExteriorContext(7, 3)
    t = ExtTransvection(c7, (1, 3, 5), (1, 2, 4), XI)
    assert classify_commutator(c7, t, 6, 7, ZETA).kind == "identity"
    assert str(classify_commutator(c7, t, 6, 4, ZETA)) == "t_{135,126}(xi*zeta)"
    assert (
        str(classify_commutator(c7, t, 3, 4, ZETA))
        == "t_{135,123}(xi*zeta)*t_{145,123}(xi*zeta^2)*t_{145,124}(-xi*zeta)"
    )


def test_weight_diagram_cases():
    c5 = ExteriorContext(5, 2)

    def comm(I, J):
        return classify_commutator(c5, ExtTransvection(c5, I, J, XI), 3, 2, ZETA)

    assert comm((1, 4), (1, 5)).kind == "identity"
    assert str(comm((1, 3), (3, 5))) == "t_{12,35}(-xi*zeta)"
    assert str(comm((1, 3), (2, 4))) == "t_{12,24}(-xi*zeta)*t_{12,34}(xi*zeta^2)*t_{13,34}(xi*zeta)"


def test_irreducible_case():
    # I \ i == J \ j: the commutator is [t_{I,J}, t_{J,I}] and is returned as a matrix
    c = ExteriorContext(4, 2)
    t = ExtTransvection(c, (1, 2), (1, 3), XI)
    r = classify_commutator(c, t, 2, 3, ZETA)
    assert r.kind == "irreducible"
    assert r.evaluate(P) == brute_commutator(c, t, 2, 3, ZETA)


def test_bad_transvection_rejected():
    c = ExteriorContext(4, 2)
    with pytest.raises(LinalgError):
        ExtTransvection(c, (1, 2), (1, 2), XI)
    with pytest.raises(LinalgError):
        ExtGen(c, 2, 2, XI)
