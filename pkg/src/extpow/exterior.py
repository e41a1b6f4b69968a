"""Exterior powers: weight indices, the minor map, transvection images and
the commutator classifier for ``[t_{I,J}(xi), /\\^m t_{j,i}(zeta)]``.

Weight indices are ascending tuples of 1-based integers; rows and columns of
an exterior-power matrix are ordered lexicographically on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from . import kernels
from .linalg import (
    CommutatorResult,
    GroupWord,
    Letter,
    LinalgError,
    Matrix,
    Transvection,
    _modular_fast,
    det_payload,
    word_evaluate,
)
from .rings import IntegersMod, RingElem, RingSpec


class WeightIndex(tuple):
    """Ascending tuple of distinct indices; prints as ``1,3,5``."""

    def __new__(cls, items: Iterable[int] | str):
        if isinstance(items, str):
            items = parse_index(items)
        vals = tuple(int(x) for x in items)
        if any(a >= b for a, b in zip(vals, vals[1:])):
            vals2 = tuple(sorted(vals))
            if len(set(vals2)) != len(vals2):
                raise LinalgError(f"repeated index in {vals}")
            vals = vals2
        return super().__new__(cls, vals)

    def __str__(self):
        return ",".join(map(str, self))

    def label(self, n: int | None = None) -> str:
        if n is not None and n < 10:
            return "".join(map(str, self))
        return ",".join(map(str, self))


def parse_index(text: str) -> tuple:
    text = text.strip()
    if "," in text or " " in text:
        return tuple(int(x) for x in text.replace(" ", ",").split(",") if x)
    return tuple(int(ch) for ch in text) if len(text) > 1 else (int(text),) if text else ()


class ExteriorContext:
    """The pair (n, m) with the lexicographic table of m-subsets of [n]."""

    def __init__(self, n: int, m: int):
        if m < 1 or n < 1 or m > n:
            raise LinalgError(f"need 1 <= m <= n, got n={n}, m={m}")
        self.n = n
        self.m = m
        self.index_table = [WeightIndex(c) for c in combinations(range(1, n + 1), m)]
        self._rank = {I: r for r, I in enumerate(self.index_table)}

    @property
    def N(self) -> int:
        return len(self.index_table)

    def rank(self, I) -> int:
        """0-based position of ``I`` in the lexicographic table."""
        try:
            return self._rank[tuple(I)]
        except KeyError:
            raise LinalgError(f"{tuple(I)} is not an {self.m}-subset of [1..{self.n}]") from None

    def unrank(self, r: int) -> WeightIndex:
        return self.index_table[r]

    def index(self, I) -> WeightIndex:
        W = WeightIndex(I)
        self.rank(W)
        return W

    @cached_property
    def combos_array(self) -> np.ndarray:
        return np.array([[x - 1 for x in I] for I in self.index_table], dtype=np.int64).reshape(self.N, self.m)

    def label(self, I) -> str:
        return WeightIndex(I).label(self.n)

    def __eq__(self, other):
        return isinstance(other, ExteriorContext) and (self.n, self.m) == (other.n, other.m)

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self):
        return f"ExteriorContext(n={self.n}, m={self.m})"


def weight_sign(L: Iterable[int], i: int, j: int) -> int:
    """Sign of the permutation sorting the sequence (L ascending, i, j)."""
    L = sorted(L)
    if i in L or j in L:
        raise LinalgError(f"indices {i}, {j} must not lie in {tuple(L)}")
    if i == j:
        raise LinalgError("weight_sign needs i != j")
    seq = L + [i, j]
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def pair_sign(L: Iterable[int], i: int, j: int) -> int:
    """Entry of /\\^m t_{i,j}(1) at (L+i, L+j); equals weight_sign on sorted (i, j)."""
    return weight_sign(L, min(i, j), max(i, j))


def height(I, J) -> int:
    return len(set(I) & set(J))


def _swap(I, out, inn) -> WeightIndex:
    s = set(I)
    s.discard(out)
    s.add(inn)
    return WeightIndex(s)


# ---------------------------------------------------------------------------
# letters over GL_N


@dataclass(frozen=True)
class ExtTransvection(Letter):
    """t_{I,J}(arg) in GL_N, N = C(n, m)."""

    ctx: ExteriorContext
    I: WeightIndex
    J: WeightIndex
    arg: RingElem

    def __post_init__(self):
        object.__setattr__(self, "I", self.ctx.index(self.I))
        object.__setattr__(self, "J", self.ctx.index(self.J))
        if self.I == self.J:
            raise LinalgError("t_{I,J} needs I != J")

    @property
    def size(self):
        return self.ctx.N

    @property
    def height(self):
        return height(self.I, self.J)

    def ring(self):
        return self.arg.spec

    def matrix(self, spec=None) -> Matrix:
        spec = spec or self.arg.spec
        m = Matrix.identity(spec, self.size)
        m.rows[self.ctx.rank(self.I)][self.ctx.rank(self.J)] = spec.coerce_payload(self.arg)
        return m

    def inverse(self):
        return ExtTransvection(self.ctx, self.I, self.J, -self.arg)

    def with_arg(self, arg):
        return ExtTransvection(self.ctx, self.I, self.J, arg)

    def right_act(self, M, spec):
        x = spec.coerce_payload(self.arg)
        if not x:
            return M
        r, c = self.ctx.rank(self.I), self.ctx.rank(self.J)
        add, mul = spec.add, spec.mul
        out = []
        for row in M:
            v = row[r]
            if v:
                row = list(row)
                row[c] = add(row[c], mul(v, x))
            out.append(row)
        return out

    def elementary_ops(self, spec):
        return [(self.ctx.rank(self.I), self.ctx.rank(self.J), spec.coerce_payload(self.arg))]

    def key(self):
        return (self.I, self.J, self.arg)

    def __str__(self):
        n = self.ctx.n
        sep = "," if n < 10 else "|"
        return f"t_{{{self.I.label(n)}{sep}{self.J.label(n)}}}({self.arg})"

    __repr__ = __str__


@dataclass(frozen=True)
class ExtGen(Letter):
    """/\\^m t_{i,j}(arg): the image of an elementary generator of E(n)."""

    ctx: ExteriorContext
    i: int
    j: int
    arg: RingElem

    def __post_init__(self):
        n = self.ctx.n
        if self.i == self.j or not (1 <= self.i <= n and 1 <= self.j <= n):
            raise LinalgError(f"bad generator indices ({self.i},{self.j}) for n={n}")

    @property
    def size(self):
        return self.ctx.N

    def ring(self):
        return self.arg.spec

    def factors(self):
        return ext_transvection_factors(self.ctx, self.i, self.j, self.arg)

    def matrix(self, spec=None) -> Matrix:
        spec = spec or self.arg.spec
        m = Matrix.identity(spec, self.size)
        for f in self.factors():
            m.rows[self.ctx.rank(f.I)][self.ctx.rank(f.J)] = spec.coerce_payload(f.arg)
        return m

    def inverse(self):
        return ExtGen(self.ctx, self.i, self.j, -self.arg)

    def right_act(self, M, spec):
        # the factors commute pairwise, so apply them one at a time
        for f in self.factors():
            M = f.right_act(M, spec)
        return M

    def elementary_ops(self, spec):
        ops = []
        for f in self.factors():
            ops.extend(f.elementary_ops(spec))
        return ops

    def base(self) -> Transvection:
        return Transvection(self.ctx.n, self.i, self.j, self.arg)

    def __str__(self):
        return f"^{self.ctx.m}t_{{{self.i},{self.j}}}({self.arg})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# the exterior-power map


def exterior_power(ctx: ExteriorContext, a: Matrix) -> Matrix:
    """The N x N matrix of m x m minors of ``a``, lexicographically indexed."""
    if a.nrows != ctx.n or a.ncols != ctx.n:
        raise LinalgError(f"expected a {ctx.n}x{ctx.n} matrix, got {a.nrows}x{a.ncols}")
    spec = a.spec
    if isinstance(spec, IntegersMod) and _modular_fast(spec, ctx.N) and kernels.fits(spec.modulus, 720):
        out = kernels.compound_mod(a.to_array(), ctx.combos_array, spec.modulus)
        return Matrix.from_array(spec, out)
    rows = a.rows
    table = ctx.index_table
    zero = spec.zero()
    result = []
    for I in table:
        sub_rows = [rows[i - 1] for i in I]
        out = []
        for J in table:
            block = [[r[j - 1] for j in J] for r in sub_rows]
            if any(not any(r) for r in block):
                out.append(zero)
            else:
                out.append(det_payload(spec, block))
        result.append(out)
    return Matrix(spec, result, ctx.N, ctx.N)


def ext_transvection_factors(ctx: ExteriorContext, i: int, j: int, xi) -> list:
    """Factors t_{L+i, L+j}(+-xi) of /\\^m t_{i,j}(xi), L over (m-1)-subsets avoiding i, j."""
    if i == j:
        raise LinalgError("transvection needs i != j")
    if not isinstance(xi, RingElem):
        raise LinalgError("argument must be a ring element")
    rest = [x for x in range(1, ctx.n + 1) if x not in (i, j)]
    out = []
    for L in combinations(rest, ctx.m - 1):
        s = pair_sign(L, i, j)
        out.append(ExtTransvection(ctx, WeightIndex(L + (i,)), WeightIndex(L + (j,)), xi if s > 0 else -xi))
    return out


def ext_transvection_decomposition(ctx: ExteriorContext, i: int, j: int, xi) -> GroupWord:
    """/\\^m t_{i,j}(xi) as a product of pairwise commuting transvections of GL_N."""
    return GroupWord.prod(*[GroupWord.gen(f) for f in ext_transvection_factors(ctx, i, j, xi)])


def ext_gen_matrix(ctx: ExteriorContext, i: int, j: int, zeta) -> Matrix:
    return ExtGen(ctx, i, j, zeta).matrix()


# ---------------------------------------------------------------------------
# commutator classifier


def classify_commutator(ctx: ExteriorContext, t: ExtTransvection, i: int, j: int, zeta) -> CommutatorResult:
    """Symbolic value of ``[t_{I,J}(xi), /\\^m t_{j,i}(zeta)]``.

    Writing /\\^m t_{j,i}(zeta) = e + zeta*X and t = e + Y, the commutator is
    e + zeta*YX - zeta*XY + zeta^2*XYX unless I\\i = J\\j, where it is the
    irreducible [t_{I,J}(xi), t_{J,I}(+-zeta)].
    """
    if i == j:
        raise LinalgError("classify_commutator needs i != j")
    xi = t.arg
    spec = xi.spec
    zeta = spec(zeta)
    I, J = t.I, t.J
    N = ctx.N
    i_in, j_in = i in I, j in J
    if i_in and j_in and set(I) - {i} == set(J) - {j}:
        w = GroupWord.comm(t, ExtGen(ctx, j, i, zeta))
        return CommutatorResult("irreducible", matrix=word_evaluate(w, spec), size=N)
    factors = []
    s = s2 = None
    if j in J and i not in J:
        Jt = _swap(J, j, i)
        s = pair_sign(set(J) - {j}, j, i)
        factors.append(ExtTransvection(ctx, I, Jt, xi * zeta if s > 0 else -(xi * zeta)))
    if i in I and j not in I:
        It = _swap(I, i, j)
        s2 = pair_sign(set(I) - {i}, j, i)
        factors.append(ExtTransvection(ctx, It, J, -(xi * zeta) if s2 > 0 else xi * zeta))
    if not factors:
        return CommutatorResult("identity", size=N)
    if len(factors) == 1:
        return CommutatorResult("single", tuple(factors), size=N)
    c = xi * zeta * zeta
    factors.append(ExtTransvection(ctx, _swap(I, i, j), _swap(J, j, i), c if s * s2 > 0 else -c))
    factors.sort(key=lambda f: (ctx.rank(f.I), ctx.rank(f.J)))
    return CommutatorResult("triple", tuple(factors), size=N)


def brute_commutator(ctx: ExteriorContext, t: ExtTransvection, i: int, j: int, zeta) -> Matrix:
    """The same commutator computed by plain matrix multiplication."""
    spec = t.arg.spec
    w = GroupWord.comm(t, ExtGen(ctx, j, i, spec(zeta)))
    return word_evaluate(w, spec)


def random_weight_pair(ctx: ExteriorContext, rng, h: int | None = None):
    """Random (I, J), I != J, optionally of prescribed height."""
    while True:
        I = ctx.unrank(rng.randrange(ctx.N))
        J = ctx.unrank(rng.randrange(ctx.N))
        if I != J and (h is None or height(I, J) == h):
            return I, J


def det_exponent(n: int, m: int) -> int:
    """det(/\\^m g) = det(g)^C(n-1, m-1)."""
    return comb(n - 1, m - 1)


def as_matrix_spec(spec: RingSpec, rows) -> Matrix:
    return Matrix.from_rows(spec, rows)
