import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.linalg import (
    GroupWord,
    LinalgError,
    Matrix,
    MatrixLetter,
    NotInvertible,
    Transvection,
    chevalley_commutator,
    commutator,
    conjugate,
    det,
    hall_witt_check,
    mat_inverse,
    minor,
    random_elementary_word,
    random_invertible,
    word_evaluate,
)
from extpow.rings import Integers, IntegersMod, PolynomialRing, PrimeField

Z = Integers()


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


def _dense_product(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out * m
    return out


@given(st.integers(1, 6), st.data())
@settings(max_examples=60, deadline=None)
def test_det_over_z_matches_leibniz(n, data):
    rows = [[data.draw(st.integers(-5, 5)) for _ in range(n)] for _ in range(n)]
    assert det(Matrix(Z, rows)).payload == _leibniz(rows)


@pytest.mark.parametrize("k", [4, 7, 9, 12])
def test_det_mod_k_matches_leibniz(k):
    R = PrimeField(k) if k == 7 else IntegersMod(k)
    rng = random.Random(k)
    for n in (1, 3, 5, 6, 7):
        for _ in range(5):
            rows = [[rng.randrange(k) for _ in range(n)] for _ in range(n)]
            assert det(Matrix(R, rows)).payload == _leibniz(rows) % k


def test_det_over_polynomials():
    P = PolynomialRing(Z, ("x", "y"))
    x, y = P.gens()
    M = Matrix.from_rows(P, [[x, y, 1], [0, x, y], [y, 0, x]])
    assert det(M) == x**3 + y**3 - x * y


def test_det_over_polynomials_with_modular_base():
    # oracle: determinant over Z[x] of the lifted matrix, coefficients reduced mod 6
    Pz = PolynomialRing(Z, ("x",))
    P6 = PolynomialRing(IntegersMod(6), ("x",))
    (x,) = Pz.gens()
    rows = [[x, 2, 0, 1, 0], [3, x, 1, 0, 0], [0, 0, x, 2, 1], [1, 0, 0, x, 4], [0, 5, 0, 0, x]]
    expect = det(Matrix.from_rows(Pz, rows)).payload
    lifted = [[P6.var("x") if v is x else v for v in r] for r in rows]
    got = det(Matrix.from_rows(P6, lifted)).payload
    assert got == {e: c % 6 for e, c in expect.items() if c % 6}


def test_minor_and_indexing():
    M = Matrix(Z, [[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert minor(M, [1, 2], [1, 2]).payload == -3
    assert M.entry(3, 3).payload == 10
    assert M.submatrix([1, 3], [2, 3]).to_lists() == [[2, 3], [8, 10]]


@pytest.mark.parametrize("spec", [PrimeField(7), IntegersMod(9), IntegersMod(12)])
def test_inverse_modular(spec):
    rng = random.Random(3)
    for n in (2, 4, 7):
        for _ in range(5):
            g = random_invertible(spec, n, rng)
            assert (g * mat_inverse(g)).is_identity()
            assert (mat_inverse(g) * g).is_identity()


def test_inverse_over_z_uses_exact_rationals():
    rng = random.Random(5)
    w = random_elementary_word(Z, 4, 12, rng)
    g = word_evaluate(w)
    assert (g * mat_inverse(g)).is_identity()
    with pytest.raises(NotInvertible):
        mat_inverse(Matrix(Z, [[2, 0], [0, 1]]))


def test_inverse_over_polynomials():
    P = PolynomialRing(Z, ("x",))
    (x,) = P.gens()
    g = Transvection(3, 1, 2, x).matrix() * Transvection(3, 2, 3, x * x).matrix()
    assert (g * mat_inverse(g)).is_identity()


def test_not_invertible_message():
    with pytest.raises(NotInvertible, match="not invertible over this ring"):
        mat_inverse(Matrix(IntegersMod(9), [[3, 0], [0, 1]]))


def test_shape_and_ring_mismatch():
    with pytest.raises(LinalgError):
        Matrix(Z, [[1, 2]]) * Matrix(Z, [[1, 2]])
    with pytest.raises(LinalgError):
        Matrix(Z, [[1]]) * Matrix(IntegersMod(5), [[1]])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_word_evaluation_matches_dense_product(seed):
    rng = random.Random(seed)
    R = IntegersMod(8)
    n = rng.randint(2, 5)
    w = random_elementary_word(R, n, rng.randint(1, 10), rng)
    dense = _dense_product([letter.matrix(R) for letter in w.letters()])
    assert word_evaluate(w, R) == dense


def test_word_structure_commutator_and_inverse():
    R = PrimeField(5)
    rng = random.Random(2)
    a, b = random_invertible(R, 3, rng), random_invertible(R, 3, rng)
    wa, wb = GroupWord.gen(MatrixLetter(a)), GroupWord.gen(MatrixLetter(b))
    assert word_evaluate(GroupWord.comm(wa, wb), R) == a * b * mat_inverse(a) * mat_inverse(b)
    assert word_evaluate(GroupWord.conj(wa, wb), R) == conjugate(a, b)
    assert word_evaluate(GroupWord.comm(wa, wb).inv(), R) == commutator(b, a)


def test_chevalley_formula_exhaustive_small():
    P = PolynomialRing(Z, ("x", "y"))
    x, y = P.gens()
    n = 4
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    for (i, j), (h, k) in itertools.product(pairs, pairs):
        t1, t2 = Transvection(n, i, j, x), Transvection(n, h, k, y)
        r = chevalley_commutator(t1, t2)
        assert r.evaluate(P) == commutator(t1.matrix(), t2.matrix())
        if j == h and i != k:
            assert str(r) == f"t_{{{i},{k}}}(x*y)"


def test_chevalley_named_cases():
    R = Z
    assert chevalley_commutator(Transvection(3, 1, 2, R(2)), Transvection(3, 2, 3, R(5))).kind == "transvection"
    assert chevalley_commutator(Transvection(3, 1, 2, R(2)), Transvection(3, 1, 3, R(5))).kind == "identity"
    assert chevalley_commutator(Transvection(3, 1, 2, R(2)), Transvection(3, 2, 1, R(5))).kind == "irreducible"


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_hall_witt(seed):
    rng = random.Random(seed)
    R = IntegersMod(rng.choice([5, 8, 9]))
    x, y, z = (random_invertible(R, 3, rng) for _ in range(3))
    assert hall_witt_check(x, y, z)


def test_hall_witt_is_not_vacuous():
    # replacing one factor's conjugation breaks the identity for a non-abelian triple
    R = PrimeField(5)
    x = Transvection(3, 1, 2, R(1)).matrix()
    y = Transvection(3, 2, 3, R(1)).matrix()
    z = Transvection(3, 3, 1, R(1)).matrix()
    assert hall_witt_check(x, y, z)
    assert not commutator(commutator(x, mat_inverse(y)), mat_inverse(z)).is_identity()


def test_rational_inverse_oracle():
    rows = [[2, 1, 0], [1, 1, 0], [0, 3, 1]]
    inv = mat_inverse(Matrix(Z, rows)).to_lists()
    # Cramer's rule with fractions
    d = Fraction(_leibniz(rows))
    for i in range(3):
        for j in range(3):
            sub = [[rows[r][c] for c in range(3) if c != i] for r in range(3) if r != j]
            cof = (-1) ** (i + j) * _leibniz(sub)
            assert inv[i][j].payload == cof / d
