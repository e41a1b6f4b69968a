"""Bundled verification suites (the ``extpow verify`` command).

Each suite returns a :class:`SuiteResult` with deterministic counters; the
``all`` run additionally asserts that every public operation was exercised.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations

from .exterior import (
    ExtGen,
    ExteriorContext,
    ExtTransvection,
    brute_commutator,
    det_exponent,
    classify_commutator,
    ext_transvection_decomposition,
    ext_transvection_factors,
    exterior_power,
    height,
    weight_sign,
)
from .invariants import (
    build_form,
    build_partition_ideal,
    build_pluecker,
    congruence_membership,
    pluecker_vector,
    span_membership,
    stabilizer_check,
    substitute_linear,
)
from .level import (
    RelativeGenerator,
    compute_level,
    conjugators_in_elementary,
    equalize_witness,
    factorization_word,
    lower_height_witness,
    perfectness_witness,
    raise_height_witness,
    relative_generator_factorization,
    validate_derivation,
    LevelError,
    LevelGenerator,
)
from .linalg import (
    GroupWord,
    Matrix,
    Transvection,
    chevalley_commutator,
    commutator,
    det,
    hall_witt_check,
    mat_inverse,
    minor,
    random_invertible,
    word_evaluate,
)
from .rings import (
    Integers,
    IntegersMod,
    PolynomialRing,
    PrimeField,
    RingElem,
    ideal_generate,
    ideal_membership,
    is_unit,
    solve_linear,
)

DEFAULT_SEED = 42

PUBLIC_OPERATIONS = (
    "ideal_generate",
    "ideal_membership",
    "solve_linear",
    "is_unit",
    "det",
    "minor",
    "mat_inverse",
    "word_evaluate",
    "chevalley_commutator",
    "hall_witt_check",
    "weight_sign",
    "exterior_power",
    "ext_transvection_decomposition",
    "height",
    "classify_commutator",
    "compute_level",
    "equalize_witness",
    "lower_height_witness",
    "raise_height_witness",
    "relative_generator_factorization",
    "perfectness_witness",
    "validate_derivation",
    "build_form",
    "build_partition_ideal",
    "build_pluecker",
    "substitute_linear",
    "span_membership",
    "stabilizer_check",
    "congruence_membership",
)


@dataclass
class SuiteResult:
    name: str
    checks: dict = field(default_factory=dict)  # label -> [passed, total]
    failures: list = field(default_factory=list)
    covered: set = field(default_factory=set)

    def record(self, label: str, ok: bool, detail: str = ""):
        c = self.checks.setdefault(label, [0, 0])
        c[1] += 1
        if ok:
            c[0] += 1
        elif len(self.failures) < 20:
            self.failures.append(f"{label}: {detail}")

    def use(self, *ops):
        self.covered.update(ops)

    @property
    def ok(self) -> bool:
        return all(p == t for p, t in self.checks.values())

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": {k: {"passed": v[0], "total": v[1]} for k, v in sorted(self.checks.items())},
            "failures": list(self.failures),
        }


def _poly(names=("xi", "zeta"), base=None):
    return PolynomialRing(base or Integers(), tuple(names))


# ---------------------------------------------------------------------------
# functoriality of the minor map


def suite_functorial(seed: int = DEFAULT_SEED, pairs: int = 200) -> SuiteResult:
    res = SuiteResult("functorial")
    rng = random.Random(seed)
    res.use("exterior_power", "det", "minor", "mat_inverse")
    for spec in (PrimeField(7), IntegersMod(9)):
        for n, m in ((4, 2), (5, 2), (6, 2), (6, 3)):
            ctx = ExteriorContext(n, m)
            label = f"functor {n},{m} {spec}"
            for _ in range(pairs):
                a = random_invertible(spec, n, rng)
                b = random_invertible(spec, n, rng)
                lhs = exterior_power(ctx, a * b)
                rhs = exterior_power(ctx, a) * exterior_power(ctx, b)
                res.record(label, lhs == rhs, "image of a product differs")
            # determinant exponent and inverse compatibility on a few samples
            for _ in range(5):
                g = random_invertible(spec, n, rng)
                wg = exterior_power(ctx, g)
                ok = det(wg) == det(g) ** det_exponent(n, m)
                res.record(f"det exponent {n},{m} {spec}", ok, "det power mismatch")
                res.record(
                    f"inverse {n},{m} {spec}",
                    exterior_power(ctx, mat_inverse(g)) == mat_inverse(wg),
                    "inverse mismatch",
                )
                I, J = sorted(rng.sample(range(1, n + 1), m)), sorted(rng.sample(range(1, n + 1), m))
                res.record(
                    f"entry is minor {n},{m} {spec}",
                    wg.entry(ctx.rank(I) + 1, ctx.rank(J) + 1) == minor(g, I, J),
                    "entry mismatch",
                )
    return res


# ---------------------------------------------------------------------------
# transvection images


def suite_formula_m(seed: int = DEFAULT_SEED, max_n: int = 7, max_m: int = 3) -> SuiteResult:
    res = SuiteResult("formula-m")
    P = _poly(("xi",))
    xi = P.var("xi")
    res.use("ext_transvection_decomposition", "exterior_power", "word_evaluate", "weight_sign", "height")
    for n in range(2, max_n + 1):
        for m in range(1, min(max_m, n - 1) + 1):
            ctx = ExteriorContext(n, m)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i == j:
                        continue
                    w = ext_transvection_decomposition(ctx, i, j, xi)
                    img = exterior_power(ctx, Transvection(n, i, j, xi).matrix())
                    res.record("decomposition equals image", word_evaluate(w, P) == img, f"n={n} m={m} ({i},{j})")
            if n <= 5:
                for i, j in ((1, 2), (n, 1)):
                    fs = ext_transvection_factors(ctx, i, j, xi)
                    ok = all(
                        commutator(f.matrix(), g.matrix()).is_identity() for f, g in combinations(fs, 2)
                    )
                    res.record("factors commute", ok, f"n={n} m={m} ({i},{j})")
    res.record("weight_sign examples", weight_sign([2], 1, 3) == -1 and weight_sign([3, 5], 1, 2) == 1)
    res.record("height examples", height((1, 2), (3, 4)) == 0 and height((1, 3, 5), (1, 2, 4)) == 1)
    for label, ok in displayed_commutators():
        res.record("displayed commutator", ok, label)
    return res


def displayed_commutators():
    """Worked commutator examples with their expected right-hand sides.

    Labels use the CLI convention: ``^m t_{a,b}`` is classify(..., i=b, j=a).
    """
    P = _poly()
    xi, zeta = P.gens()
    out = []
    c7 = ExteriorContext(7, 3)
    t = ExtTransvection(c7, (1, 3, 5), (1, 2, 4), xi)
    cases7 = [
        ("[t135,124, ^3t7,6]", 6, 7, "e"),
        ("[t135,124, ^3t4,6]", 6, 4, "t_{135,126}(xi*zeta)"),
        ("[t135,124, ^3t4,3]", 3, 4, "t_{135,123}(xi*zeta)*t_{145,123}(xi*zeta^2)*t_{145,124}(-xi*zeta)"),
    ]
    for label, i, j, text in cases7:
        out.append((label, _render(classify_commutator(c7, t, i, j, zeta)) == text))
    c5 = ExteriorContext(5, 2)
    cases5 = [
        ("[t14,15, ^2t2,3]", (1, 4), (1, 5), "e"),
        ("[t13,35, ^2t2,3]", (1, 3), (3, 5), "t_{12,35}(-xi*zeta)"),
        ("[t13,24, ^2t2,3]", (1, 3), (2, 4), "t_{12,24}(-xi*zeta)*t_{12,34}(xi*zeta^2)*t_{13,34}(xi*zeta)"),
    ]
    for label, I, J, text in cases5:
        r = classify_commutator(c5, ExtTransvection(c5, I, J, xi), 3, 2, zeta)
        out.append((label, _render(r) == text))
    c4 = ExteriorContext(4, 2)
    fs = ext_transvection_factors(c4, 1, 2, xi)
    out.append(("^2t1,2 factors", [str(f) for f in fs] == ["t_{13,23}(xi)", "t_{14,24}(xi)"]))
    fs = ext_transvection_factors(c4, 1, 3, xi)
    out.append(("^2t1,3 factors", [str(f) for f in fs] == ["t_{12,23}(-xi)", "t_{14,34}(xi)"]))
    return out


def _render(r) -> str:
    return "e" if r.kind == "identity" else str(r)


# ---------------------------------------------------------------------------
# commutators


def four_two_steps():
    """The five (4,2)/(6,2) commutator calculations used to equalize levels."""
    P = _poly(("xi", "zeta", "zeta1"))
    xi, zeta, zeta1 = P.gens()
    c4 = ExteriorContext(4, 2)
    out = []
    t = ExtTransvection(c4, (1, 2), (3, 4), xi)
    r = classify_commutator(c4, t, 2, 4, zeta)
    ok = str(r) == "t_{12,23}(-xi*zeta)*t_{14,23}(-xi*zeta^2)*t_{14,34}(-xi*zeta)"
    r2 = classify_commutator(c4, t, 2, 4, -zeta)
    prod = word_evaluate(GroupWord.prod(r.word(), r2.word()), P)
    ok2 = prod == ExtTransvection(c4, (1, 4), (2, 3), xi * zeta * zeta * (-2)).matrix()
    out.append(("step 1: t14,23(-2 xi zeta^2)", ok and ok2))
    c6 = ExteriorContext(6, 2)
    t = ExtTransvection(c6, (1, 2), (3, 4), xi)
    out.append(("step 2: t12,35(xi zeta)", str(classify_commutator(c6, t, 5, 4, zeta)) == "t_{12,35}(xi*zeta)"))
    t = ExtTransvection(c4, (1, 2), (1, 3), xi)
    r = classify_commutator(c4, t, 4, 1, zeta)
    ok = str(r) == "t_{12,34}(-xi*zeta)"
    # commute t_{12,34}(-xi zeta) with ^2 t_{4,1}(+-zeta1)
    s_ = r.factors[0]
    cp = classify_commutator(c4, s_, 1, 4, zeta1)
    cm = classify_commutator(c4, s_, 1, 4, -zeta1)
    quad = word_evaluate(GroupWord.prod(cp.word(), cm.word()), P)
    # the quadratic factor is reached up to inversion, which H absorbs
    ok = ok and quad == ExtTransvection(c4, (2, 4), (1, 3), -2 * xi * zeta * zeta1 * zeta1).matrix()
    ok = ok and [str(f) for f in cm.factors if f.I != (2, 4) or f.J != (1, 3)] == [
        "t_{12,13}(-xi*zeta*zeta1)",
        "t_{24,34}(xi*zeta*zeta1)",
    ]
    out.append(("step 3: t24,34(zeta1 xi zeta)", ok))
    t = ExtTransvection(c4, (1, 2), (2, 3), xi)
    r = classify_commutator(c4, t, 2, 4, zeta)
    out.append(("step 4: t14,23(-zeta xi)", str(r) == "t_{14,23}(-xi*zeta)"))
    F = PolynomialRing(PrimeField(101), ("xi", "zeta", "zeta1"))
    d = raise_height_witness(c6, 0, F.var("xi"), F.var("zeta"), F.var("zeta1"), side="row")
    out.append(("step 5: t45,34(-xi^2 zeta1 zeta)", bool(validate_derivation(d)) and str(d.conclusion) == "t_{45,34}(-xi^2*zeta*zeta1)"))
    return out


def suite_commutators(seed: int = DEFAULT_SEED, max_n: int = 6, max_m: int = 3, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("commutators")
    rng = random.Random(seed)
    P = _poly()
    xi, zeta = P.gens()
    res.use("classify_commutator", "chevalley_commutator", "hall_witt_check", "word_evaluate")
    for n in range(2, max_n + 1):
        for m in range(1, min(max_m, n - 1) + 1):
            ctx = ExteriorContext(n, m)
            for I in ctx.index_table:
                for J in ctx.index_table:
                    if I == J:
                        continue
                    t = ExtTransvection(ctx, I, J, xi)
                    for i in range(1, n + 1):
                        for j in range(1, n + 1):
                            if i == j:
                                continue
                            r = classify_commutator(ctx, t, i, j, zeta)
                            ok = r.evaluate(P) == brute_commutator(ctx, t, i, j, zeta)
                            res.record("classifier vs brute force", ok, f"n={n} m={m} {I} {J} ({i},{j})")
    # degree-n commutator formula, symbolic, all index patterns for n <= 5
    for n in range(2, 6):
        for i, j, h, k in ((a, b, c, d) for a in range(1, n + 1) for b in range(1, n + 1) for c in range(1, n + 1) for d in range(1, n + 1)):
            if i == j or h == k:
                continue
            t1, t2 = Transvection(n, i, j, xi), Transvection(n, h, k, zeta)
            r = chevalley_commutator(t1, t2)
            ok = r.evaluate(P) == commutator(t1.matrix(), t2.matrix())
            res.record("degree-n commutator formula (exhaustive)", ok, f"{i}{j},{h}{k}")
    F7 = PrimeField(7)
    for _ in range(samples):
        n = rng.randint(3, 6)
        i, j = rng.sample(range(1, n + 1), 2)
        h, k = rng.sample(range(1, n + 1), 2)
        t1 = Transvection(n, i, j, F7(rng.randrange(7)))
        t2 = Transvection(n, h, k, F7(rng.randrange(7)))
        r = chevalley_commutator(t1, t2)
        res.record("degree-n commutator formula (random)", r.evaluate(F7) == commutator(t1.matrix(), t2.matrix()))
    Z8 = IntegersMod(8)
    for _ in range(samples):
        n = rng.randint(2, 4)
        spec = F7 if rng.random() < 0.5 else Z8
        x, y, z = (random_invertible(spec, n, rng) for _ in range(3))
        res.record("Hall-Witt identity", hall_witt_check(x, y, z))
    for label, ok in four_two_steps():
        res.record("(4,2) step calculations", ok, label)
    return res


# ---------------------------------------------------------------------------
# level


def _random_pair(ctx, rng, h):
    while True:
        I = ctx.unrank(rng.randrange(ctx.N))
        J = ctx.unrank(rng.randrange(ctx.N))
        if I != J and height(I, J) == h:
            return I, J


def witness_cases():
    """(ctx, kind, args) instances exercised over every test ring."""
    cases = []
    c4 = ExteriorContext(4, 2)
    cases.append((c4, "equalize", ((1, 2), (3, 4)), ((1, 4), (2, 3))))
    c6 = ExteriorContext(6, 2)
    cases.append((c6, "equalize", ((1, 2), (3, 4)), ((5, 6), (1, 3))))
    cases.append((c6, "equalize", ((1, 2), (1, 3)), ((4, 5), (4, 6))))
    cases.append((c6, "lower", ((1, 2), (2, 3)), ((1, 4), (2, 3))))
    cases.append((c6, "lower", ((1, 2), (1, 3)), ((4, 5), (2, 6))))
    c7 = ExteriorContext(7, 3)
    cases.append((c7, "equalize", ((1, 2, 3), (4, 5, 6)), ((1, 2, 3), (4, 5, 7))))
    cases.append((c7, "lower", ((1, 2, 3), (1, 2, 4)), ((1, 5, 6), (2, 3, 4))))
    c9 = ExteriorContext(9, 3)
    cases.append((c9, "equalize", ((1, 2, 3), (1, 4, 5)), ((2, 6, 7), (2, 8, 9))))
    cases.append((c9, "raise", 0, "col"))
    cases.append((c9, "raise", 1, "col"))
    cases.append((c6, "raise", 0, "row"))
    cases.append((ExteriorContext(8, 4), "raise", 2, "col"))
    return cases


def build_witness(case, xi, zeta=1, zeta1=1):
    ctx, kind, a, b = case
    if kind == "equalize":
        return equalize_witness(ctx, a, b, xi)
    if kind == "lower":
        return lower_height_witness(ctx, a, b, xi)
    return raise_height_witness(ctx, a, xi, zeta, zeta1, side=b)


def walkthrough_conclusions():
    P = PolynomialRing(PrimeField(101), ("xi", "zeta", "zeta1"))
    xi, zeta, zeta1 = P.gens()
    expected = [
        ((12, 4, 0), "t_{4,9,10,11|4,5,6,7}(xi^2*zeta*zeta1)"),
        ((10, 4, 1), "t_{1,4,8,9|1,4,5,6}(-xi^2*zeta*zeta1)"),
        ((8, 4, 2), "t_{1248,1245}(xi^2*zeta*zeta1)"),
    ]
    out = []
    for (n, m, k), text in expected:
        d = raise_height_witness(ExteriorContext(n, m), k, xi, zeta, zeta1)
        out.append((f"n={n} k={k}", bool(validate_derivation(d)) and str(d.conclusion) == text))
    return out


def suite_level(seed: int = DEFAULT_SEED, samples: int = 50, sampled_93: int = 100) -> SuiteResult:
    res = SuiteResult("level")
    rng = random.Random(seed)
    res.use(
        "equalize_witness",
        "lower_height_witness",
        "raise_height_witness",
        "validate_derivation",
        "compute_level",
        "relative_generator_factorization",
        "perfectness_witness",
        "ideal_generate",
        "ideal_membership",
        "is_unit",
        "solve_linear",
    )
    cases = witness_cases()
    for spec in (PrimeField(5), PrimeField(7), PrimeField(11), IntegersMod(9)):
        for case in cases:
            # the construction is ring-uniform: build once, validate for each xi
            for _ in range(samples):
                x = spec(rng.randrange(1, spec.modulus))
                if case[1] == "raise" and not x * x:
                    x = spec(1)
                d = build_witness(case, x)
                ok = bool(validate_derivation(d, spec))
                res.record(f"witnesses validate over {spec}", ok, f"{case[1]} {case[2]}->{case[3]}")
    for label, ok in walkthrough_conclusions():
        res.record("height-raising walkthrough", ok, label)
    # level ideal
    c6 = ExteriorContext(6, 2)
    Z = Integers()
    A = compute_level(c6, [LevelGenerator(c6, (1, 2), (3, 4), Z(4)), LevelGenerator(c6, (1, 3), (1, 4), Z(6))])
    res.record("level over Z", A.normal_form == Z(2) and all(ideal_membership(A, x) for x in (4, 6)))
    F7 = PrimeField(7)
    for v in range(1, 7):
        A = compute_level(c6, [LevelGenerator(c6, (1, 2), (3, 4), F7(v))])
        res.record("level over F7", A.normal_form == F7(1) and is_unit(A.normal_form))
    try:
        compute_level(ExteriorContext(5, 2), [])
        res.record("n < 3m rejected", False)
    except LevelError as exc:
        res.record("n < 3m rejected", "net of ideals" in str(exc))
    g = ideal_generate(Z, [4, 6])
    res.record("ideal gcd", g.normal_form == Z(2) and solve_linear(Z, [[4, 6]], [2]) is not None)
    # z-factorization
    P = _poly()
    xi, zeta = P.gens()
    for I in c6.index_table:
        for J in c6.index_table:
            if I == J:
                continue
            z = RelativeGenerator(c6, I, J, xi, zeta)
            items = relative_generator_factorization(c6, z)
            ok = word_evaluate(factorization_word(items), P) == z.matrix()
            ok = ok and conjugators_in_elementary(items) and all(_divisible_by(it.base.arg, 0) for it in items)
            res.record("z-factorization (6,2) exhaustive", ok, f"{I} {J}")
    c9 = ExteriorContext(9, 3)
    F7 = PrimeField(7)
    for _ in range(sampled_93):
        I = c9.unrank(rng.randrange(c9.N))
        J = c9.unrank(rng.randrange(c9.N))
        if I == J:
            J = c9.unrank((c9.rank(I) + 1) % c9.N)
        z = RelativeGenerator(c9, I, J, F7(rng.randrange(1, 7)), F7(rng.randrange(7)))
        items = relative_generator_factorization(c9, z)
        A = ideal_generate(F7, [z.xi])
        ok = word_evaluate(factorization_word(items), F7) == z.matrix() and conjugators_in_elementary(items)
        ok = ok and all(ideal_membership(A, it.base.arg) for it in items)
        res.record("z-factorization (9,3) sampled", ok, f"{I} {J}")
    # perfectness over Z/9 with A = (3)
    Z9 = IntegersMod(9)
    A3 = ideal_generate(Z9, [3])
    for I in c6.index_table:
        for J in c6.index_table:
            if I == J:
                continue
            for x in (0, 3, 6):
                g = ExtTransvection(c6, I, J, Z9(x))
                w = perfectness_witness(c6, g)
                ok = word_evaluate(w, Z9) == g.matrix() and _witness_in_generators(w, A3)
                res.record("perfectness (6,2) over Z/9", ok, f"{I} {J} {x}")
    for i in range(1, 7):
        for j in range(1, 7):
            if i != j:
                for zv in range(9):
                    g = ExtGen(c6, i, j, Z9(zv))
                    w = perfectness_witness(c6, g)
                    res.record("perfectness (6,2) over Z/9", word_evaluate(w, Z9) == g.matrix(), f"{i} {j}")
    return res


def _divisible_by(arg: RingElem, var_index: int) -> bool:
    """Every monomial of ``arg`` contains the given variable."""
    return all(e[var_index] >= 1 for e in arg.payload)


def _witness_in_generators(w: GroupWord, A) -> bool:
    for g in w.generators():
        if isinstance(g, ExtTransvection) and not ideal_membership(A, g.arg):
            return False
    return True


# ---------------------------------------------------------------------------
# stabilizers


def suite_stabilizer(seed: int = DEFAULT_SEED, samples: int = 100, points: int = 500, congruence: int = 50) -> SuiteResult:
    res = SuiteResult("stabilizer")
    rng = random.Random(seed)
    res.use(
        "build_form",
        "build_partition_ideal",
        "build_pluecker",
        "stabilizer_check",
        "substitute_linear",
        "span_membership",
        "congruence_membership",
    )
    F7 = PrimeField(7)
    configs = [
        ("(4,2) form", ExteriorContext(4, 2), lambda c: build_form(c, F7)),
        ("(5,2) partition ideal + Pluecker", ExteriorContext(5, 2), lambda c: [build_partition_ideal(c, F7), build_pluecker(c, F7)]),
        ("(6,3) Pluecker", ExteriorContext(6, 3), lambda c: build_pluecker(c, F7)),
    ]
    for label, ctx, make in configs:
        system = make(ctx)
        for _ in range(samples):
            h = random_invertible(F7, ctx.n, rng)
            rep = stabilizer_check(exterior_power(ctx, h), system)
            ok = bool(rep)
            if ok and rep.multiplier is not None:
                ok = is_unit(rep.multiplier)
            res.record(f"image passes: {label}", ok)
        rejected = 0
        for _ in range(samples):
            g = random_invertible(F7, ctx.N, rng)
            rejected += not stabilizer_check(g, system)
        res.record(f"random matrices rejected (>=95%): {label}", rejected >= 0.95 * samples, f"{rejected}/{samples}")
    # Grassmann points
    for n, m in ((4, 2), (5, 2), (6, 3), (6, 2)):
        ctx = ExteriorContext(n, m)
        sys_ = build_pluecker(ctx, F7)
        for _ in range(points // 4):
            while True:
                M = Matrix(F7, [[rng.randrange(7) for _ in range(m)] for _ in range(n)])
                v = pluecker_vector(ctx, M)
                if any(v):
                    break
            ok = all(not g.evaluate(v) for g in sys_.generators)
            res.record("Pluecker quadrics vanish on Grassmann points", ok, f"{n},{m}")
    # form scales by det on the image
    c42 = ExteriorContext(4, 2)
    f = build_form(c42, F7)
    h = random_invertible(F7, 4, rng)
    res.record("form multiplier is det", substitute_linear(f, exterior_power(c42, h)) == f.scale(det(h)))
    res.record("span membership of generators", all(span_membership(g, build_pluecker(ExteriorContext(5, 2), F7)) for g in build_pluecker(ExteriorContext(5, 2), F7).generators))
    # congruence over Z/9, A = (3)
    Z9 = IntegersMod(9)
    A = ideal_generate(Z9, [3])
    for _ in range(congruence):
        h = random_invertible(Z9, 4, rng)
        u = Matrix(Z9, [[3 * rng.randrange(3) for _ in range(6)] for _ in range(6)])
        g = exterior_power(c42, h) * (Matrix.identity(Z9, 6) + u)
        res.record("congruence accepts image times level-A matrix", congruence_membership(c42, g, A))
    for _ in range(congruence):
        h = random_invertible(Z9, 4, rng)
        g = perturb_off_pattern(exterior_power(c42, h), rng)
        res.record("congruence rejects unit perturbation", not congruence_membership(c42, g, A))
    return res


def perturb_off_pattern(g: Matrix, rng) -> Matrix:
    """Add a unit (mod the level) to one random entry."""
    spec = g.spec
    rows = g.copy_rows()
    r, c = rng.randrange(g.nrows), rng.randrange(g.ncols)
    rows[r][c] = spec.add(rows[r][c], spec.from_int(rng.choice([1, 2, 4, 5, 7, 8])))
    return Matrix(spec, rows, g.nrows, g.ncols)


# ---------------------------------------------------------------------------


SUITES = {
    "functorial": suite_functorial,
    "formula-m": suite_formula_m,
    "commutators": suite_commutators,
    "level": suite_level,
    "stabilizer": suite_stabilizer,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, log=None) -> list:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    results = []
    for n in names:
        t0 = time.perf_counter()
        r = SUITES[n](seed)
        if log is not None:
            print(f"[{n}] {time.perf_counter() - t0:.1f}s", file=log)
        results.append(r)
    return results


def coverage_gaps(results) -> list:
    covered = set().union(*(r.covered for r in results)) if results else set()
    return [op for op in PUBLIC_OPERATIONS if op not in covered]


def report(results, require_coverage: bool) -> dict:
    out = {"suites": [r.summary() for r in results]}
    gaps = coverage_gaps(results) if require_coverage else []
    if require_coverage:
        out["coverage"] = {"operations": len(PUBLIC_OPERATIONS), "missing": gaps}
    out["ok"] = all(r.ok for r in results) and not gaps
    return out
