"""Invariant forms, partition ideals and Pluecker quadrics in the weight
variables x_I, plus stabilizer and congruence membership tests.

Polynomials live in a :class:`~extpow.rings.PolynomialRing` with one variable
per weight index.  Odd-m forms are *alternating*: a monomial with exponents
in {0, 1} stands for the exterior product of its variables taken in table
(lexicographic) order, and substitution follows exterior-algebra rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .exterior import ExteriorContext, WeightIndex, exterior_power
from .linalg import LinalgError, Matrix, NotInvertible, det_payload, mat_inverse
from .rings import (
    Ideal,
    Integers,
    IntegersMod,
    PolynomialRing,
    PrimeField,
    RingElem,
    RingSpec,
    format_payload,
    quotient_ring,
    solve_linear,
)


class InvariantError(ValueError):
    pass


def _var_name(I, n):
    return "x" + ("".join(map(str, I)) if n < 10 else "_".join(map(str, I)))


_ring_cache: dict = {}


def weight_ring(ctx: ExteriorContext, base: RingSpec) -> PolynomialRing:
    key = (ctx.n, ctx.m, base)
    r = _ring_cache.get(key)
    if r is None:
        r = PolynomialRing(base, tuple(_var_name(I, ctx.n) for I in ctx.index_table))
        _ring_cache[key] = r
    return r


def _perm_parity(seq) -> int:
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


class WeightPoly:
    """Polynomial in the variables x_I of an exterior context.

    ``payload`` is a canonical ``{exponent-tuple: coefficient}`` dict over
    ``ring``; ``alternating`` switches to exterior-algebra semantics.
    """

    __slots__ = ("ctx", "ring", "payload", "alternating")

    def __init__(self, ctx: ExteriorContext, ring: PolynomialRing, payload: dict, alternating: bool = False):
        self.ctx = ctx
        self.ring = ring
        self.payload = payload
        self.alternating = alternating
        if alternating and any(e > 1 for mono in payload for e in mono):
            raise InvariantError("alternating monomials are square-free")

    @property
    def base(self) -> RingSpec:
        return self.ring.base

    @classmethod
    def from_terms(cls, ctx, base, terms, alternating=False) -> "WeightPoly":
        """``terms``: iterable of (list of weight indices, coefficient).

        Alternating terms are reordered into table order with the matching sign.
        """
        ring = weight_ring(ctx, base)
        N = ctx.N
        out: dict = {}
        for idxs, c in terms:
            ranks = [ctx.rank(WeightIndex(I)) for I in idxs]
            c = base.coerce_payload(c)
            if alternating:
                if len(set(ranks)) != len(ranks):
                    continue
                if _perm_parity(ranks) < 0:
                    c = base.neg(c)
            exp = [0] * N
            for r in ranks:
                exp[r] += 1
            exp = tuple(exp)
            v = base.add(out.get(exp, base.zero()), c)
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return cls(ctx, ring, out, alternating)

    def terms(self):
        """Sorted list of (tuple of WeightIndex, coefficient RingElem)."""
        out = []
        for exp in sorted(self.payload, reverse=True):
            idxs = []
            for r, e in enumerate(exp):
                idxs += [self.ctx.unrank(r)] * e
            out.append((tuple(idxs), RingElem(self.base, self.payload[exp])))
        return out

    def degree(self) -> int | None:
        degs = {sum(e) for e in self.payload}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.payload}) <= 1

    def is_zero(self) -> bool:
        return not self.payload

    def __eq__(self, other):
        if not isinstance(other, WeightPoly):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.base == other.base
            and self.alternating == other.alternating
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.payload.items()))))

    def scale(self, c) -> "WeightPoly":
        c = self.base.coerce_payload(c)
        return WeightPoly(self.ctx, self.ring, self.ring.scale(self.payload, c), self.alternating)

    def __add__(self, other):
        self._check(other)
        return WeightPoly(self.ctx, self.ring, self.ring.add(self.payload, other.payload), self.alternating)

    def __sub__(self, other):
        self._check(other)
        return WeightPoly(self.ctx, self.ring, self.ring.sub(self.payload, other.payload), self.alternating)

    def __neg__(self):
        return WeightPoly(self.ctx, self.ring, self.ring.neg(self.payload), self.alternating)

    def _check(self, other):
        if self.ctx != other.ctx or self.base != other.base or self.alternating != other.alternating:
            raise InvariantError("incompatible weight polynomials")

    def coefficient(self, idxs) -> RingElem:
        exp = [0] * self.ctx.N
        for I in idxs:
            exp[self.ctx.rank(WeightIndex(I))] += 1
        return RingElem(self.base, self.payload.get(tuple(exp), self.base.zero()))

    def change_ring(self, base: RingSpec) -> "WeightPoly":
        ring = weight_ring(self.ctx, base)
        out = {}
        for e, c in self.payload.items():
            v = base.coerce_payload(RingElem(self.base, c))
            if v:
                out[e] = v
        return WeightPoly(self.ctx, ring, out, self.alternating)

    def evaluate(self, values) -> RingElem:
        """Value at a point (commutative polynomials only)."""
        if self.alternating:
            raise InvariantError("alternating polynomials have no point values")
        return self.ring.evaluate(self.payload, values)

    def __str__(self):
        if not self.payload:
            return "0"
        joiner = "^" if self.alternating else "*"
        parts = []
        for idxs, c in self.terms():
            names = [_var_name(I, self.ctx.n) for I in idxs]
            mono = joiner.join(names)
            cs = str(c)
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass
class QuadricSystem:
    """Homogeneous generators of one degree with their provenance
    (``form``, ``partition-ideal``, ``pluecker-sym`` or ``pluecker-alt``)."""

    ctx: ExteriorContext
    generators: list
    degree: int
    provenance: str
    _basis: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for g in self.generators:
            if g.degree() not in (self.degree, 0) or not g.is_homogeneous():
                raise InvariantError("generators must be homogeneous of the declared degree")

    @property
    def alternating(self) -> bool:
        return bool(self.generators) and self.generators[0].alternating

    def __len__(self):
        return len(self.generators)

    def change_ring(self, base) -> "QuadricSystem":
        return QuadricSystem(self.ctx, [g.change_ring(base) for g in self.generators], self.degree, self.provenance)


# ---------------------------------------------------------------------------
# constructions


def set_partitions(elements, m):
    """Unordered partitions of ``elements`` into m-blocks, blocks ordered by least element."""
    elements = list(elements)
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for others in combinations(rest, m - 1):
        block = (first,) + others
        remaining = [x for x in rest if x not in others]
        for tail in set_partitions(remaining, m):
            yield [block] + tail


def _form_terms(support, m):
    support = sorted(support)
    for part in set_partitions(support, m):
        seq = [x for block in part for x in block]
        yield part, _perm_parity(seq)


def build_form(ctx: ExteriorContext, base: RingSpec | None = None) -> WeightPoly:
    """Signed sum over partitions of [n] into m-blocks of the block variables."""
    n, m = ctx.n, ctx.m
    if n % m:
        raise InvariantError(f"m={m} does not divide n={n}")
    base = base or Integers()
    return WeightPoly.from_terms(ctx, base, _form_terms(range(1, n + 1), m), alternating=(m % 2 == 1))


def build_partition_ideal(ctx: ExteriorContext, base: RingSpec | None = None) -> QuadricSystem:
    """Copies of the (ml, m) form on every ml-subset of [n] (when m does not divide n)."""
    n, m = ctx.n, ctx.m
    if n % m == 0:
        raise InvariantError(f"m={m} divides n={n}; use build_form")
    base = base or Integers()
    l = n // m
    if l == 0:
        return QuadricSystem(ctx, [], 0, "partition-ideal")
    gens = [
        WeightPoly.from_terms(ctx, base, _form_terms(S, m), alternating=(m % 2 == 1))
        for S in combinations(range(1, n + 1), m * l)
    ]
    return QuadricSystem(ctx, gens, l, "partition-ideal")


def build_pluecker(ctx: ExteriorContext, base: RingSpec | None = None, alternating: bool = False) -> QuadricSystem:
    """Quadrics sum_k (-1)^k x_{S+t_k} x_{T-t_k} over (m-1)-sets S and (m+1)-sets T.

    Zero quadrics are dropped and duplicates (up to sign) removed; each is
    normalized so that its leading coefficient is positive.  With
    ``alternating=True`` the products are taken in the exterior square; that
    span turns out to be the whole exterior square, so only the symmetric
    system is useful for membership tests.
    """
    n, m = ctx.n, ctx.m
    if m >= n:
        raise InvariantError(f"need m < n, got n={n}, m={m}")
    base = base or Integers()
    zctx_base = Integers()
    seen = set()
    gens = []
    for S in combinations(range(1, n + 1), m - 1):
        Sset = set(S)
        for T in combinations(range(1, n + 1), m + 1):
            terms = []
            for k, t in enumerate(T):
                if t in Sset:
                    continue
                A = tuple(sorted(S + (t,)))
                sign = -1 if sum(1 for s in S if s > t) % 2 else 1
                B = T[:k] + T[k + 1:]
                terms.append(([A, B], sign * (-1) ** k))
            p = WeightPoly.from_terms(ctx, zctx_base, terms, alternating)
            if p.is_zero():
                continue
            lead = max(p.payload)
            if p.payload[lead] < 0:
                p = -p
            key = tuple(sorted(p.payload.items()))
            if key in seen:
                continue
            seen.add(key)
            gens.append(p.change_ring(base) if base != zctx_base else p)
    gens = [g for g in gens if not g.is_zero()]
    return QuadricSystem(ctx, gens, 2, "pluecker-alt" if alternating else "pluecker-sym")


# ---------------------------------------------------------------------------
# substitution


def _linear_forms(g: Matrix):
    return [{c: v for c, v in enumerate(row) if v} for row in g.rows]


def substitute_linear(p: WeightPoly, g: Matrix) -> WeightPoly:
    """p(g x) where (g x)_J = sum_K g_{JK} x_K."""
    N = p.ctx.N
    if g.nrows != N or g.ncols != N:
        raise InvariantError(f"expected a {N}x{N} matrix, got {g.nrows}x{g.ncols}")
    base = p.base
    if g.spec != base:
        g = g.reduce_to(base)
    if p.degree() == 2 and isinstance(base, IntegersMod) and kernels.fits(base.modulus, N):
        return _substitute_quadric_mod(p, g)
    add, mul = base.add, base.mul
    forms = _linear_forms(g)
    result: dict = {}
    for exp, c in p.payload.items():
        ranks = [r for r, e in enumerate(exp) for _ in range(e)]
        # expand the product of linear forms; keys are sorted rank tuples
        acc = {(): c}
        for r in ranks:
            nxt: dict = {}
            for key, v in acc.items():
                for col, a in forms[r].items():
                    if p.alternating:
                        if col in key:
                            continue
                        flips = sum(1 for x in key if x > col)
                        w = mul(v, a)
                        if flips % 2:
                            w = base.neg(w)
                    else:
                        w = mul(v, a)
                    new = tuple(sorted(key + (col,)))
                    s = add(nxt.get(new, base.zero()), w)
                    if s:
                        nxt[new] = s
                    else:
                        nxt.pop(new, None)
            acc = nxt
        for key, v in acc.items():
            e = [0] * N
            for x in key:
                e[x] += 1
            e = tuple(e)
            s = add(result.get(e, base.zero()), v)
            if s:
                result[e] = s
            else:
                result.pop(e, None)
    return WeightPoly(p.ctx, p.ring, result, p.alternating)


def quadric_matrix(p: WeightPoly) -> np.ndarray:
    """Upper-triangular U with p = x^T U x (commutative) or p = sum_{K<L} U_KL x_K^x_L."""
    N = p.ctx.N
    U = np.zeros((N, N), dtype=np.int64)
    for exp, c in p.payload.items():
        idx = [r for r, e in enumerate(exp) for _ in range(e)]
        if len(idx) != 2:
            raise InvariantError("not a quadric")
        U[idx[0], idx[1]] = c
    return U


def _quadric_from_matrix(ctx, ring, M, p, alternating):
    N = ctx.N
    out = {}
    for K in range(N):
        if not alternating and M[K, K]:
            e = [0] * N
            e[K] = 2
            out[tuple(e)] = int(M[K, K])
        for L in range(K + 1, N):
            v = (int(M[K, L]) - int(M[L, K])) if alternating else (int(M[K, L]) + int(M[L, K]))
            v %= p
            if v:
                e = [0] * N
                e[K] = e[L] = 1
                out[tuple(e)] = v
    return out


def _substitute_quadric_mod(p: WeightPoly, g: Matrix) -> WeightPoly:
    k = p.base.modulus
    U = quadric_matrix(p)
    M = kernels.congruence_mod(g.to_array(), U, k)
    payload = _quadric_from_matrix(p.ctx, p.ring, M, k, p.alternating)
    return WeightPoly(p.ctx, p.ring, payload, p.alternating)


# ---------------------------------------------------------------------------
# span membership


def _monomial_index(polys):
    monos = sorted({e for q in polys for e in q.payload})
    return {e: i for i, e in enumerate(monos)}


class _FieldBasis:
    """RREF basis of a generator span over F_p, keyed by monomial."""

    def __init__(self, gens, p):
        self.p = p
        self.index = _monomial_index(gens)
        A = np.zeros((max(len(gens), 1), len(self.index)), dtype=np.int64)
        for r, g in enumerate(gens):
            for e, c in g.payload.items():
                A[r, self.index[e]] = c
        self.rref, self.pivots = kernels.rref_mod_p(A, p)
        self.rank = len(self.pivots)

    def contains(self, q: WeightPoly) -> bool:
        v = np.zeros(len(self.index), dtype=np.int64)
        for e, c in q.payload.items():
            j = self.index.get(e)
            if j is None:
                return False
            v[j] = c
        return kernels.in_row_span_mod_p(self.rref, self.pivots, v, self.p)

    def basis_polys(self, ctx, ring, alternating):
        inv = {i: e for e, i in self.index.items()}
        out = []
        for r in range(self.rank):
            row = self.rref[r]
            payload = {inv[j]: int(row[j]) for j in np.nonzero(row)[0]}
            out.append(WeightPoly(ctx, ring, payload, alternating))
        return out


def _basis_for(sys: QuadricSystem):
    base = sys.generators[0].base if sys.generators else None
    if isinstance(base, PrimeField):
        if sys._basis is None:
            sys._basis = _FieldBasis(sys.generators, base.modulus)
        return sys._basis
    return None


def span_membership(p: WeightPoly, sys: QuadricSystem) -> bool:
    """Is ``p`` an R-linear combination of the generators of ``sys``?"""
    if not p.is_homogeneous():
        raise InvariantError("span membership needs a homogeneous polynomial")
    if p.is_zero():
        return True
    if p.degree() != sys.degree:
        return False
    if not sys.generators:
        return False
    if p.alternating != sys.alternating:
        raise InvariantError("mixing alternating and commutative polynomials")
    base = sys.generators[0].base
    if p.base != base:
        p = p.change_ring(base)
    if isinstance(base, PolynomialRing):
        raise InvariantError("span membership supports Z, Z/k and prime fields only")
    fb = _basis_for(sys)
    if fb is not None:
        return fb.contains(p)
    index = _monomial_index(sys.generators + [p])
    A = [[base.zero()] * len(sys.generators) for _ in index]
    for c, g in enumerate(sys.generators):
        for e, v in g.payload.items():
            A[index[e]][c] = v
    b = [base.zero()] * len(index)
    for e, v in p.payload.items():
        b[index[e]] = v
    return solve_linear(base, A, b) is not None


# ---------------------------------------------------------------------------
# stabilizers


@dataclass
class StabilizerReport:
    member: bool
    multiplier: RingElem | None = None
    failing_generator: int | None = None
    direction: str | None = None

    def __bool__(self):
        return self.member


def _ensure_invertible(g: Matrix):
    if g.nrows != g.ncols:
        raise LinalgError("stabilizer test needs a square matrix")
    d = det_payload(g.spec, g.rows)
    if not g.spec.unit_p(d):
        raise NotInvertible()


def _form_report(g: Matrix, f: WeightPoly) -> StabilizerReport:
    base = f.base
    gf = substitute_linear(f, g)
    lead = max(f.payload)
    c0 = f.payload[lead]
    if not base.unit_p(c0):
        raise InvariantError("form needs a unit leading coefficient")
    lam = base.mul(gf.payload.get(lead, base.zero()), base.inv(c0))
    if not base.unit_p(lam):
        return StabilizerReport(False, RingElem(base, lam), 0)
    if gf.payload != f.ring.scale(f.payload, lam):
        return StabilizerReport(False, RingElem(base, lam), 0)
    return StabilizerReport(True, RingElem(base, lam))


def _system_report(g: Matrix, sys: QuadricSystem) -> StabilizerReport:
    fb = _basis_for(sys)
    ginv = mat_inverse(g)
    for direction, h in (("forward", g), ("inverse", ginv)):
        if fb is not None:
            base = sys.generators[0].base
            polys = fb.basis_polys(sys.ctx, sys.generators[0].ring, sys.alternating)
        else:
            polys = sys.generators
        for idx, q in enumerate(polys):
            if not span_membership(substitute_linear(q, h), sys):
                return StabilizerReport(False, None, idx, direction)
    return StabilizerReport(True)


def stabilizer_check(g: Matrix, system) -> StabilizerReport:
    """Does ``g`` preserve the form up to a unit (or the generator span of a system)?

    For a single form the multiplier lambda(g) with g.f = lambda f is reported.
    The form for n = 2m with m >= 3 is refused: it only certifies the
    orthogonal/symplectic similitude group; use the Pluecker system there.
    """
    _ensure_invertible(g)
    if isinstance(system, WeightPoly):
        ctx = system.ctx
        if ctx.n == 2 * ctx.m and ctx.m >= 3:
            raise InvariantError(
                "the form for n = 2m, m >= 3 is stabilized by a larger similitude group; use the Pluecker system"
            )
        if g.nrows != ctx.N:
            raise InvariantError("size mismatch")
        f = system if system.base == g.spec else system.change_ring(g.spec)
        return _form_report(g, f)
    if isinstance(system, QuadricSystem):
        if g.nrows != system.ctx.N:
            raise InvariantError("size mismatch")
        sys = system
        if sys.generators and sys.generators[0].base != g.spec:
            sys = sys.change_ring(g.spec)
        return _system_report(g, sys)
    if isinstance(system, (list, tuple)):
        for s in system:
            rep = stabilizer_check(g, s)
            if not rep:
                return rep
        return StabilizerReport(True)
    raise InvariantError(f"unsupported system {system!r}")


def canonical_systems(ctx: ExteriorContext, base: RingSpec) -> list:
    """The invariants whose joint stabilizer is /\\^m GL_n for this (n, m)."""
    n, m = ctx.n, ctx.m
    if n % m == 0 and n != 2 * m:
        return [build_form(ctx, base)]
    if n == 2 * m:
        return [build_pluecker(ctx, base)]
    return [build_partition_ideal(ctx, base), build_pluecker(ctx, base)]


def congruence_membership(ctx: ExteriorContext, g: Matrix, A: Ideal) -> bool:
    """Is the reduction of ``g`` modulo ``A`` in /\\^m GL_n(R/A)?"""
    spec = g.spec
    if isinstance(spec, PolynomialRing) or A.normal_form is None:
        raise InvariantError("quotient not representable")
    if A.spec != spec:
        raise InvariantError("ideal and matrix live in different rings")
    if g.nrows != ctx.N or g.ncols != ctx.N:
        raise InvariantError("size mismatch")
    q = quotient_ring(A)
    if q is None:
        return True
    gq = g.reduce_to(q) if q != spec else g
    try:
        _ensure_invertible(gq)
    except NotInvertible:
        return False
    return bool(stabilizer_check(gq, canonical_systems(ctx, q)))


# ---------------------------------------------------------------------------
# helpers for tests and suites


def pluecker_vector(ctx: ExteriorContext, M: Matrix) -> list:
    """Maximal minors of an n x m matrix: the point of the Grassmannian it spans."""
    if M.nrows != ctx.n or M.ncols != ctx.m:
        raise InvariantError("expected an n x m matrix")
    spec = M.spec
    return [RingElem(spec, det_payload(spec, [M.rows[i - 1] for i in I])) for I in ctx.index_table]


def gram_matrix(f: WeightPoly) -> Matrix:
    """Symmetric (or skew) Gram matrix B with f(x) = 1/2 x^T B x-style pairing
    B_KL = coefficient of x_K x_L for K != L, 2*coefficient on the diagonal."""
    N = f.ctx.N
    base = f.base
    rows = [[base.zero()] * N for _ in range(N)]
    for exp, c in f.payload.items():
        idx = [r for r, e in enumerate(exp) for _ in range(e)]
        if len(idx) != 2:
            raise InvariantError("not a quadric")
        a, b = idx
        if a == b:
            rows[a][a] = base.add(rows[a][a], base.add(c, c))
        else:
            rows[a][b] = base.add(rows[a][b], c)
            rows[b][a] = base.add(rows[b][a], base.neg(c) if f.alternating else c)
    return Matrix(base, rows, N, N)


def span_rank(sys: QuadricSystem, p: int) -> int:
    return _FieldBasis([g.change_ring(PrimeField(p)) for g in sys.generators], p).rank


def count_partitions(n: int, m: int) -> int:
    """Number of unordered partitions of [n] into m-blocks."""
    if n % m:
        return 0
    total = 1
    rest = n
    while rest:
        total *= comb(rest - 1, m - 1)
        rest -= m
    return total


def image_of(ctx: ExteriorContext, h: Matrix) -> Matrix:
    return exterior_power(ctx, h)
