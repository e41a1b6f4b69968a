import random

import pytest

from extpow.exterior import ExtGen, ExteriorContext, ExtTransvection, height
from extpow.level import (
    GIVEN,
    NET_OF_IDEALS,
    SCALE_BY_HALF,
    Derivation,
    LevelError,
    LevelGenerator,
    RelativeGenerator,
    Step,
    compute_level,
    conjugators_in_elementary,
    equalize_witness,
    factorization_word,
    generators_e_ext,
    lower_height_witness,
    perfectness_witness,
    raise_height_witness,
    relative_generator_factorization,
    validate_derivation,
)
from extpow.linalg import word_evaluate
from extpow.rings import Integers, IntegersMod, PolynomialRing, PrimeField, ideal_generate, ideal_membership

Z = Integers()
F101 = PolynomialRing(PrimeField(101), ("xi", "zeta", "zeta1"))
XI, ZETA, ZETA1 = F101.gens()


def test_equalize_four_two():
    d = equalize_witness(ExteriorContext(4, 2), ((1, 2), (3, 4)), ((1, 4), (2, 3)), XI)
    assert validate_derivation(d)
    assert str(d.conclusion) == "t_{14,23}(-xi)"
    assert any(s.kind == SCALE_BY_HALF for s in d.steps)
    claims = [str(s.claim[0]) for s in d.steps if s.claim and len(s.claim) == 1]
    assert "t_{14,23}(-2*xi)" in claims


def test_equalize_needs_halving_when_two_is_not_a_unit():
    P = PolynomialRing(Z, ("xi",))
    with pytest.raises(LevelError, match="2 is not invertible"):
        equalize_witness(ExteriorContext(4, 2), ((1, 2), (3, 4)), ((1, 4), (2, 3)), P.var("xi"))


def test_equalize_single_commutation():
    d = equalize_witness(ExteriorContext(7, 3), ((1, 2, 3), (4, 5, 6)), ((1, 2, 3), (4, 5, 7)), XI)
    assert [s.kind for s in d.steps] == ["GIVEN", "EXT_GEN", "COMMUTE"]
    assert d.steps[1].gen.i == 6 and d.steps[1].gen.j == 7
    assert validate_derivation(d)


def test_equalize_trivial():
    c = ExteriorContext(6, 2)
    d = equalize_witness(c, ((1, 2), (3, 4)), ((1, 2), (3, 4)), XI)
    assert d.steps == [] and validate_derivation(d)


def test_equalize_rejects_different_heights():
    with pytest.raises(LevelError, match="heights differ"):
        equalize_witness(ExteriorContext(6, 2), ((1, 2), (3, 4)), ((1, 2), (1, 3)), XI)


def test_lower_height():
    c = ExteriorContext(6, 2)
    d = lower_height_witness(c, ((1, 2), (2, 3)), ((1, 4), (2, 3)), XI)
    assert validate_derivation(d)
    assert str(d.conclusion) == "t_{14,23}(-xi)"
    assert str(d.steps[1].gen) == "^2t_{4,2}(1)"


@pytest.mark.parametrize(
    "n,m,k,text",
    [
        (12, 4, 0, "t_{4,9,10,11|4,5,6,7}(xi^2*zeta*zeta1)"),
        (10, 4, 1, "t_{1,4,8,9|1,4,5,6}(-xi^2*zeta*zeta1)"),
        (8, 4, 2, "t_{1248,1245}(xi^2*zeta*zeta1)"),
    ],
)
def test_raise_height_walkthrough(n, m, k, text):
    d = raise_height_witness(ExteriorContext(n, m), k, XI, ZETA, ZETA1)
    assert validate_derivation(d)
    assert str(d.conclusion) == text
    assert height(d.conclusion.I, d.conclusion.J) == k + 1


def test_raise_row_variant_four_two_step():
    d = raise_height_witness(ExteriorContext(6, 2), 0, XI, ZETA, ZETA1, side="row")
    assert validate_derivation(d)
    assert str(d.conclusion) == "t_{45,34}(-xi^2*zeta*zeta1)"
    claims = {str(f) for s in d.steps if s.claim for f in s.claim}
    assert "t_{56,14}(-2*xi*zeta1^2)" in claims


def test_raise_preconditions():
    with pytest.raises(LevelError, match="n >= 3m - 2k"):
        raise_height_witness(ExteriorContext(8, 3), 0, XI)
    with pytest.raises(LevelError):
        raise_height_witness(ExteriorContext(9, 3), 2, XI)
    Z9 = IntegersMod(9)
    with pytest.raises(LevelError, match="identity"):
        raise_height_witness(ExteriorContext(6, 2), 0, Z9(3))


@pytest.mark.parametrize("spec", [PrimeField(5), PrimeField(11), IntegersMod(9)])
def test_witnesses_validate_over_finite_rings(spec):
    rng = random.Random(str(spec))
    c6 = ExteriorContext(6, 2)
    for _ in range(10):
        x = spec(rng.randrange(1, spec.modulus))
        assert validate_derivation(equalize_witness(c6, ((1, 2), (3, 4)), ((5, 6), (1, 3)), x))
        assert validate_derivation(lower_height_witness(c6, ((1, 2), (1, 3)), ((4, 5), (2, 6)), x))


def test_tampered_derivation_is_rejected():
    d = equalize_witness(ExteriorContext(4, 2), ((1, 2), (3, 4)), ((1, 4), (2, 3)), XI)
    bad_steps = list(d.steps)
    s = bad_steps[2]
    f = s.claim[0]
    bad_steps[2] = Step(s.kind, s.refs, s.given, s.gen, (f.with_arg(f.arg + 1),) + s.claim[1:], s.note)
    res = validate_derivation(Derivation(d.ctx, bad_steps, d.conclusion, d.unit, "", d.premise))
    assert not res and res.step == 2


def test_wrong_conclusion_is_rejected():
    d = equalize_witness(ExteriorContext(4, 2), ((1, 2), (3, 4)), ((1, 4), (2, 3)), XI)
    wrong = LevelGenerator(d.ctx, (1, 4), (2, 3), XI)
    assert not validate_derivation(Derivation(d.ctx, d.steps, wrong, d.unit, "", d.premise))


def test_halving_over_z_is_refused():
    c = ExteriorContext(4, 2)
    d = equalize_witness(c, ((1, 2), (3, 4)), ((1, 4), (2, 3)), XI)
    with pytest.raises(LevelError, match="2 not invertible"):
        validate_derivation(d, IntegersMod(8))


def test_compute_level():
    c6 = ExteriorContext(6, 2)
    A = compute_level(c6, [LevelGenerator(c6, (1, 2), (3, 4), Z(4)), LevelGenerator(c6, (1, 3), (1, 4), Z(6))])
    assert A.normal_form == Z(2)
    F7 = PrimeField(7)
    assert compute_level(c6, [LevelGenerator(c6, (1, 2), (3, 4), F7(3))]).normal_form == F7(1)
    with pytest.raises(LevelError, match=NET_OF_IDEALS):
        compute_level(ExteriorContext(5, 2), [])


def test_level_generator_rejects_equal_indices():
    with pytest.raises(LevelError):
        LevelGenerator(ExteriorContext(6, 2), (1, 2), (1, 2), XI)


def test_z_factorization_six_two_exhaustive():
    P = PolynomialRing(Z, ("xi", "zeta"))
    xi, zeta = P.gens()
    c6 = ExteriorContext(6, 2)
    for I in c6.index_table:
        for J in c6.index_table:
            if I == J:
                continue
            z = RelativeGenerator(c6, I, J, xi, zeta)
            items = relative_generator_factorization(c6, z)
            assert word_evaluate(factorization_word(items), P) == z.matrix()
            assert conjugators_in_elementary(items)
            # every base argument is a multiple of xi
            assert all(e[0] >= 1 for it in items for e in it.base.arg.payload)


def test_z_factorization_nine_three_sampled():
    F7 = PrimeField(7)
    c9 = ExteriorContext(9, 3)
    rng = random.Random(0)
    for _ in range(10):
        I, J = rng.sample(c9.index_table, 2)
        z = RelativeGenerator(c9, I, J, F7(rng.randrange(1, 7)), F7(rng.randrange(7)))
        items = relative_generator_factorization(c9, z)
        assert word_evaluate(factorization_word(items), F7) == z.matrix()


def test_z_factorization_requires_n_at_least_3m():
    c = ExteriorContext(5, 2)
    with pytest.raises(LevelError):
        relative_generator_factorization(c, RelativeGenerator(c, (1, 2), (3, 4), XI, ZETA))


def test_perfectness_six_two_over_z9():
    Z9 = IntegersMod(9)
    c6 = ExteriorContext(6, 2)
    A = ideal_generate(Z9, [3])
    gens = generators_e_ext(c6, Z9, range(9), (0, 3, 6))
    assert len(gens) == 30 * 9 + 15 * 14 * 3
    for g in gens:
        w = perfectness_witness(c6, g)
        assert w.op == "comm"
        assert word_evaluate(w, Z9) == g.matrix()
        for letter in w.generators():
            assert isinstance(letter, (ExtGen, ExtTransvection))
            if isinstance(letter, ExtTransvection):
                assert ideal_membership(A, letter.arg)
