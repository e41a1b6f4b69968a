"""Exterior powers of GL_n over commutative rings: exact arithmetic and checkers."""

from .exterior import (
    ExtGen,
    ExteriorContext,
    ExtTransvection,
    WeightIndex,
    classify_commutator,
    ext_transvection_decomposition,
    exterior_power,
    height,
    weight_sign,
)
from .invariants import (
    build_form,
    build_partition_ideal,
    build_pluecker,
    congruence_membership,
    span_membership,
    stabilizer_check,
    substitute_linear,
)
from .level import (
    Derivation,
    LevelGenerator,
    compute_level,
    equalize_witness,
    lower_height_witness,
    perfectness_witness,
    raise_height_witness,
    relative_generator_factorization,
    validate_derivation,
)
from .linalg import (
    GroupWord,
    Matrix,
    Transvection,
    chevalley_commutator,
    det,
    hall_witt_check,
    mat_inverse,
    minor,
    word_evaluate,
)
from .rings import (
    Integers,
    IntegersMod,
    PolynomialRing,
    PrimeField,
    RingElem,
    RingSpec,
    ideal_generate,
    ideal_membership,
    is_unit,
    solve_linear,
)

__version__ = "0.1.0"
