"""Exact dense matrices, transvections and group words.

Indices are 1-based in every public signature (``entry(i, j)``,
``Transvection(n, i, j, arg)``); storage is a 0-based list of rows of ring
payloads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import kernels
from .rings import (
    Integers,
    IntegersMod,
    PolynomialRing,
    RingElem,
    RingError,
    RingSpec,
)


class LinalgError(ValueError):
    pass


class NotInvertible(LinalgError):
    def __init__(self, msg="not invertible over this ring"):
        super().__init__(msg)


def _modular_fast(spec: RingSpec, size: int) -> bool:
    return isinstance(spec, IntegersMod) and size >= 6 and kernels.fits(spec.modulus, size)


class Matrix:
    """Dense matrix over a :class:`RingSpec`; treat instances as immutable."""

    __slots__ = ("spec", "nrows", "ncols", "rows")

    def __init__(self, spec: RingSpec, rows: list, nrows=None, ncols=None):
        self.spec = spec
        self.rows = rows
        self.nrows = len(rows) if nrows is None else nrows
        self.ncols = (len(rows[0]) if rows else 0) if ncols is None else ncols

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, spec: RingSpec, rows: Sequence[Sequence]) -> "Matrix":
        data = [[spec.coerce_payload(x) for x in row] for row in rows]
        if data and any(len(r) != len(data[0]) for r in data):
            raise LinalgError("ragged rows")
        return cls(spec, data)

    @classmethod
    def identity(cls, spec: RingSpec, n: int) -> "Matrix":
        z, o = spec.zero(), spec.one()
        return cls(spec, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def zeros(cls, spec: RingSpec, r: int, c: int) -> "Matrix":
        z = spec.zero()
        return cls(spec, [[z] * c for _ in range(r)], r, c)

    @classmethod
    def from_array(cls, spec: IntegersMod, arr) -> "Matrix":
        return cls(spec, [[int(x) for x in row] for row in arr.tolist()])

    # -- access ------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> RingElem:
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise LinalgError(f"index ({i},{j}) out of range for {self.nrows}x{self.ncols}")
        return RingElem(self.spec, self.rows[i - 1][j - 1])

    def to_lists(self) -> list:
        return [[RingElem(self.spec, x) for x in row] for row in self.rows]

    def to_array(self):
        return kernels.as_array(self.rows)

    def copy_rows(self) -> list:
        return [list(r) for r in self.rows]

    def submatrix(self, I: Sequence[int], J: Sequence[int]) -> "Matrix":
        for i in I:
            if not 1 <= i <= self.nrows:
                raise LinalgError(f"row index {i} out of range")
        for j in J:
            if not 1 <= j <= self.ncols:
                raise LinalgError(f"column index {j} out of range")
        return Matrix(self.spec, [[self.rows[i - 1][j - 1] for j in J] for i in I], len(I), len(J))

    def transpose(self) -> "Matrix":
        return Matrix(self.spec, [list(c) for c in zip(*self.rows)], self.ncols, self.nrows)

    def is_identity(self) -> bool:
        o = self.spec.one()
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if (x != o) if i == j else x:
                    return False
        return self.nrows == self.ncols

    def map(self, fn, spec: RingSpec | None = None) -> "Matrix":
        return Matrix(spec or self.spec, [[fn(x) for x in row] for row in self.rows], self.nrows, self.ncols)

    def reduce_to(self, target: RingSpec) -> "Matrix":
        """Entrywise image in ``target`` (e.g. Z/9 -> Z/3)."""
        return self.map(lambda x: target.coerce_payload(RingElem(self.spec, x)), target)

    # -- arithmetic --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.spec == other.spec and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.spec, self.shape))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        add = self.spec.add
        return Matrix(
            self.spec,
            [[add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.nrows,
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        sub = self.spec.sub
        return Matrix(
            self.spec,
            [[sub(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.nrows,
            self.ncols,
        )

    def scale(self, c) -> "Matrix":
        c = self.spec.coerce_payload(c)
        mul = self.spec.mul
        return self.map(lambda x: mul(x, c))

    def _check_same(self, other):
        if self.spec != other.spec:
            raise LinalgError(f"ring mismatch: {self.spec} vs {other.spec}")
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.__mul__(other)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.spec != other.spec:
            raise LinalgError(f"ring mismatch: {self.spec} vs {other.spec}")
        if self.ncols != other.nrows:
            raise LinalgError(f"shape mismatch: {self.shape} @ {other.shape}")
        spec = self.spec
        if _modular_fast(spec, self.ncols):
            out = kernels.matmul_mod(self.to_array(), other.to_array(), spec.modulus)
            return Matrix.from_array(spec, out)
        if type(spec) is Integers or isinstance(spec, IntegersMod):
            return self._mul_int(other)
        add, mul, zero = spec.add, spec.mul, spec.zero()
        brows = other.rows
        result = []
        for row in self.rows:
            acc = [zero] * other.ncols
            for t, x in enumerate(row):
                if not x:
                    continue
                for j, y in enumerate(brows[t]):
                    if y:
                        acc[j] = add(acc[j], mul(x, y))
            result.append(acc)
        return Matrix(spec, result, self.nrows, other.ncols)

    def _mul_int(self, other):
        k = self.spec.modulus if isinstance(self.spec, IntegersMod) else None
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        result = []
        for row in self.rows:
            nz = [(t, x) for t, x in enumerate(row) if x]
            out = []
            for col in cols:
                s = 0
                for t, x in nz:
                    s += x * col[t]
                out.append(s % k if k else s)
            result.append(out)
        return Matrix(self.spec, result, self.nrows, other.ncols)

    def __neg__(self):
        return self.map(self.spec.neg)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(RingElem(self.spec, x)) for x in row) for row in self.rows)
        return f"Matrix<{self.spec}>[{body}]"


def identity(spec: RingSpec, n: int) -> Matrix:
    return Matrix.identity(spec, n)


# ---------------------------------------------------------------------------
# determinants


def _det_small(spec, rows):
    n = len(rows)
    if n == 0:
        return spec.one()
    if n == 1:
        return rows[0][0]
    add, sub, mul = spec.add, spec.sub, spec.mul
    if n == 2:
        return sub(mul(rows[0][0], rows[1][1]), mul(rows[0][1], rows[1][0]))
    # Laplace along the first row, skipping zeros
    acc = spec.zero()
    for j, x in enumerate(rows[0]):
        if not x:
            continue
        sub_rows = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = mul(x, _det_small(spec, sub_rows))
        acc = add(acc, term) if j % 2 == 0 else sub(acc, term)
    return acc


def _bareiss(spec, rows, exact_div):
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = spec.one()
    mul, sub = spec.mul, spec.sub
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return spec.zero()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mi, mk = m[i], m[k]
            mik = mi[k]
            for j in range(k + 1, n):
                v = sub(mul(mi[j], pk), mul(mik, mk[j]))
                mi[j] = exact_div(v, prev) if v else v
            mi[k] = spec.zero()
        prev = pk
    d = m[n - 1][n - 1]
    return spec.neg(d) if sign < 0 else d


def _det_field(spec, rows):
    p = spec.modulus
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pc = m[c][c]
        det = det * pc % p
        inv = pow(pc, -1, p)
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                f = f * inv % p
                rc, rr = m[c], m[r]
                for t in range(c, n):
                    rr[t] = (rr[t] - f * rc[t]) % p
    return det % p


def det_payload(spec: RingSpec, rows: list):
    n = len(rows)
    if n <= 4:
        return _det_small(spec, rows)
    if isinstance(spec, IntegersMod):
        if _modular_fast(spec, n):
            return kernels.det_mod(kernels.as_array(rows), spec.modulus)
        if spec.is_field:
            return _det_field(spec, rows)
        return _bareiss(Integers(), rows, lambda a, b: a // b) % spec.modulus
    if isinstance(spec, Integers):
        return _bareiss(spec, rows, lambda a, b: a // b)
    if isinstance(spec, PolynomialRing):
        lift = spec.integer_lift()
        if lift == spec or spec.base.is_field:
            return _bareiss(spec, rows, spec.exact_div)
        d = _bareiss(lift, [[spec.lift_payload(x) for x in r] for r in rows], lift.exact_div)
        return spec.reduce_from_lift(d)
    return _det_small(spec, rows)


def det(a: Matrix) -> RingElem:
    if a.nrows != a.ncols:
        raise LinalgError(f"determinant of non-square {a.nrows}x{a.ncols} matrix")
    return RingElem(a.spec, det_payload(a.spec, a.rows))


def minor(a: Matrix, I: Sequence[int], J: Sequence[int]) -> RingElem:
    """Determinant of rows ``I`` and columns ``J`` (1-based, taken ascending)."""
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        raise LinalgError("minor needs |I| == |J|")
    if len(I) > min(a.nrows, a.ncols):
        raise LinalgError("minor larger than the matrix")
    return det(a.submatrix(I, J))


# ---------------------------------------------------------------------------
# inverses


def _gauss_jordan_units(spec, rows):
    """Gauss-Jordan choosing unit pivots; None when some column has no unit."""
    n = len(rows)
    one, zero = spec.one(), spec.zero()
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    add, mul, sub = spec.add, spec.mul, spec.sub
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] and spec.unit_p(m[r][c])), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = spec.inv(m[c][c])
        m[c] = [mul(x, inv) for x in m[c]]
        for r in range(n):
            f = m[r][c]
            if r != c and f:
                rc = m[c]
                m[r] = [sub(x, mul(f, y)) if y else x for x, y in zip(m[r], rc)]
    return [row[n:] for row in m]


def _factor(k: int):
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            e = 1
            k //= p
            while k % p == 0:
                k //= p
                e += 1
            out.append((p, e))
        p += 1
    if k > 1:
        out.append((k, 1))
    return out


def _inverse_zmod_crt(spec: IntegersMod, rows):
    # Z/k = prod Z/p^e; each factor is local, so unit pivots always exist there.
    k = spec.modulus
    n = len(rows)
    result = [[0] * n for _ in range(n)]
    for p, e in _factor(k):
        q = p**e
        local = IntegersMod(q)
        inv = _gauss_jordan_units(local, [[x % q for x in r] for r in rows])
        if inv is None:
            raise NotInvertible()
        c = (k // q) * pow(k // q, -1, q)
        for i in range(n):
            for j in range(n):
                result[i][j] = (result[i][j] + c * inv[i][j]) % k
    return result


def _inverse_z(rows):
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise NotInvertible()
        m[c], m[piv] = m[piv], m[c]
        pc = m[c][c]
        m[c] = [x / pc for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for row in m:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise NotInvertible()
        out.append([int(v) for v in vals])
    return out


def _adjugate_inverse(spec, rows):
    n = len(rows)
    d = det_payload(spec, rows)
    if not spec.unit_p(d):
        raise NotInvertible()
    dinv = spec.inv(d)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub_rows = [r[:i] + r[i + 1:] for t, r in enumerate(rows) if t != j]
            c = det_payload(spec, sub_rows)
            if (i + j) % 2:
                c = spec.neg(c)
            out[i][j] = spec.mul(c, dinv)
    return out


def mat_inverse(a: Matrix) -> Matrix:
    """Exact inverse; raises :class:`NotInvertible` when det(a) is not a unit."""
    if a.nrows != a.ncols:
        raise LinalgError("inverse of non-square matrix")
    spec = a.spec
    inv = _gauss_jordan_units(spec, a.rows)
    if inv is None:
        if spec.is_field:
            raise NotInvertible()
        if isinstance(spec, IntegersMod):
            inv = _inverse_zmod_crt(spec, a.rows)
        elif isinstance(spec, Integers):
            inv = _inverse_z(a.rows)
        else:
            inv = _adjugate_inverse(spec, a.rows)
    return Matrix(spec, inv, a.nrows, a.ncols)


# ---------------------------------------------------------------------------
# transvections and group words


class Letter:
    """Interface of a group-word generator."""

    size: int

    def matrix(self, spec: RingSpec | None = None) -> Matrix:
        raise NotImplementedError

    def inverse(self) -> "Letter":
        raise NotImplementedError

    def ring(self) -> RingSpec | None:
        return None

    def right_act(self, M: list, spec: RingSpec) -> list:
        """Return the rows of ``M @ self`` (``M`` given as payload rows)."""
        other = self.matrix(spec)
        return (Matrix(spec, M, len(M), self.size) * other).rows

    def elementary_ops(self, spec: RingSpec):
        """``(row, col, payload)`` triples, 0-based, whose transvections multiply
        to this letter; None if the letter is not a product of transvections."""
        return None


def _coerce_arg(arg, spec):
    if spec is None:
        if isinstance(arg, RingElem):
            return arg
        return RingElem(Integers(), int(arg))
    return spec(arg)


@dataclass(frozen=True)
class Transvection(Letter):
    """t_{i,j}(arg) = e + arg*e_{i,j} of size n (1-based i != j)."""

    size: int
    i: int
    j: int
    arg: RingElem

    def __post_init__(self):
        if self.i == self.j:
            raise LinalgError("transvection needs i != j")
        if not (1 <= self.i <= self.size and 1 <= self.j <= self.size):
            raise LinalgError(f"indices ({self.i},{self.j}) out of range for size {self.size}")
        if not isinstance(self.arg, RingElem):
            object.__setattr__(self, "arg", RingElem(Integers(), int(self.arg)))

    def ring(self):
        return self.arg.spec

    def matrix(self, spec=None) -> Matrix:
        spec = spec or self.arg.spec
        m = Matrix.identity(spec, self.size)
        m.rows[self.i - 1][self.j - 1] = spec.coerce_payload(self.arg)
        return m

    def inverse(self) -> "Transvection":
        return Transvection(self.size, self.i, self.j, -self.arg)

    def right_act(self, M, spec):
        x = spec.coerce_payload(self.arg)
        if not x:
            return M
        i, j = self.i - 1, self.j - 1
        add, mul = spec.add, spec.mul
        out = []
        for row in M:
            v = row[i]
            if v:
                row = list(row)
                row[j] = add(row[j], mul(v, x))
            out.append(row)
        return out

    def elementary_ops(self, spec):
        return [(self.i - 1, self.j - 1, spec.coerce_payload(self.arg))]

    def __str__(self):
        return f"t_{{{self.i},{self.j}}}({self.arg})"


@dataclass(frozen=True)
class MatrixLetter(Letter):
    """An explicit invertible matrix used as a generator."""

    mat: Matrix
    inverted: bool = False

    @property
    def size(self):
        return self.mat.nrows

    def ring(self):
        return self.mat.spec

    def matrix(self, spec=None) -> Matrix:
        m = self.mat
        if spec is not None and spec != m.spec:
            m = m.reduce_to(spec)
        return mat_inverse(m) if self.inverted else m

    def inverse(self):
        return MatrixLetter(self.mat, not self.inverted)

    def __str__(self):
        return "M^-1" if self.inverted else "M"


class GroupWord:
    """Formal group word: a tree of gen / inv / prod / comm / conj nodes.

    ``comm(x, y) = x y x^-1 y^-1`` and ``conj(x, y) = x y x^-1`` (left conjugate).
    """

    __slots__ = ("op", "args")

    def __init__(self, op: str, *args):
        if op not in ("gen", "inv", "prod", "comm", "conj"):
            raise LinalgError(f"unknown word op {op!r}")
        self.op = op
        self.args = args

    # constructors
    @staticmethod
    def gen(letter: Letter) -> "GroupWord":
        return GroupWord("gen", letter)

    @staticmethod
    def prod(*words) -> "GroupWord":
        return GroupWord("prod", *[as_word(w) for w in words])

    @staticmethod
    def comm(x, y) -> "GroupWord":
        return GroupWord("comm", as_word(x), as_word(y))

    @staticmethod
    def conj(x, y) -> "GroupWord":
        return GroupWord("conj", as_word(x), as_word(y))

    def inv(self) -> "GroupWord":
        return GroupWord("inv", self)

    def __mul__(self, other) -> "GroupWord":
        return GroupWord.prod(self, other)

    # structure
    def letters(self, sign: int = 1):
        """Flatten into a sequence of letters (inverses already applied)."""
        op, a = self.op, self.args
        if op == "gen":
            yield a[0] if sign > 0 else a[0].inverse()
        elif op == "inv":
            yield from a[0].letters(-sign)
        elif op == "prod":
            seq = a if sign > 0 else reversed(a)
            for w in seq:
                yield from w.letters(sign)
        elif op == "comm":
            x, y = a
            # [x,y]^-1 = y x y^-1 x^-1
            if sign > 0:
                parts = ((x, 1), (y, 1), (x, -1), (y, -1))
            else:
                parts = ((y, 1), (x, 1), (y, -1), (x, -1))
            for w, s in parts:
                yield from w.letters(s)
        else:  # conj: x y x^-1, inverse x y^-1 x^-1
            x, y = a
            yield from x.letters(1)
            yield from y.letters(sign)
            yield from x.letters(-1)

    def generators(self):
        if self.op == "gen":
            yield self.args[0]
        else:
            for w in self.args:
                yield from w.generators()

    def size(self) -> int:
        sizes = {g.size for g in self.generators()}
        if len(sizes) != 1:
            raise LinalgError(f"size mismatch among letters: {sorted(sizes)}")
        return sizes.pop()

    def ring(self) -> RingSpec:
        for g in self.generators():
            r = g.ring()
            if r is not None:
                return r
        return Integers()

    def evaluate(self, spec: RingSpec | None = None) -> Matrix:
        return word_evaluate(self, spec)

    def __str__(self):
        op, a = self.op, self.args
        if op == "gen":
            return str(a[0])
        if op == "inv":
            return f"({a[0]})^-1"
        if op == "prod":
            return "*".join(str(w) for w in a) if a else "e"
        if op == "comm":
            return f"[{a[0]}, {a[1]}]"
        return f"^{{{a[0]}}}({a[1]})"

    __repr__ = __str__


def as_word(x) -> GroupWord:
    if isinstance(x, GroupWord):
        return x
    if isinstance(x, Letter):
        return GroupWord.gen(x)
    if isinstance(x, Matrix):
        return GroupWord.gen(MatrixLetter(x))
    raise LinalgError(f"cannot make a group word from {x!r}")


def sparse_apply(D: dict, ops, spec: RingSpec) -> dict:
    """Right-multiply ``e + D`` by the transvections ``ops`` in place.

    ``D`` maps row -> {col: payload}; identity entries are implicit.
    """
    add, mul = spec.add, spec.mul
    for r, c, x in ops:
        if not x:
            continue
        updates = [(q, mul(v, x)) for q, row in D.items() if (v := row.get(r))]
        updates.append((r, x))
        for q, val in updates:
            if not val:  # zero divisors: v * x can vanish
                continue
            row = D.get(q)
            if row is None:
                row = D[q] = {}
            nv = add(row[c], val) if c in row else val
            if nv:
                row[c] = nv
            else:
                del row[c]
                if not row:
                    del D[q]
    return D


def sparse_to_matrix(D: dict, spec: RingSpec, n: int) -> Matrix:
    m = Matrix.identity(spec, n)
    for r, row in D.items():
        for c, v in row.items():
            m.rows[r][c] = spec.add(m.rows[r][c], v)
    return m


def word_ops(w, spec: RingSpec):
    """All letters of ``w`` as elementary ops, or None if some letter is opaque."""
    ops = []
    for letter in as_word(w).letters():
        o = letter.elementary_ops(spec)
        if o is None:
            return None
        ops.extend(o)
    return ops


def invert_ops(ops, spec: RingSpec) -> list:
    neg = spec.neg
    return [(r, c, neg(x)) for r, c, x in reversed(ops)]


def word_evaluate(w, spec: RingSpec | None = None) -> Matrix:
    """Multiply out a word left to right using each letter's right action."""
    w = as_word(w)
    n = w.size()
    spec = spec or w.ring()
    ops = word_ops(w, spec)
    if ops is not None:
        return sparse_to_matrix(sparse_apply({}, ops, spec), spec, n)
    rows = Matrix.identity(spec, n).rows
    for letter in w.letters():
        rows = letter.right_act(rows, spec)
    return Matrix(spec, rows, n, n)


def commutator(x: Matrix, y: Matrix) -> Matrix:
    return x * y * mat_inverse(x) * mat_inverse(y)


def conjugate(x: Matrix, y: Matrix) -> Matrix:
    """Left conjugate x y x^-1."""
    return x * y * mat_inverse(x)


# ---------------------------------------------------------------------------
# commutator classification shared by the degree-n and exterior formulas


@dataclass
class CommutatorResult:
    """Outcome of a symbolic commutator: ``kind`` plus the factors or matrix.

    kind is one of ``identity``, ``transvection`` / ``single``, ``triple`` or
    ``irreducible``.  ``factors`` is a tuple of letters whose product is the
    commutator; for ``irreducible`` the explicit ``matrix`` is set instead.
    """

    kind: str
    factors: tuple = ()
    matrix: Matrix | None = None
    size: int = 0

    def word(self) -> GroupWord:
        if self.kind == "irreducible":
            return as_word(self.matrix)
        if not self.factors:
            return GroupWord.prod()
        return GroupWord.prod(*self.factors)

    def evaluate(self, spec: RingSpec) -> Matrix:
        if self.kind == "irreducible":
            return self.matrix
        if not self.factors:
            return Matrix.identity(spec, self.size)
        return word_evaluate(self.word(), spec)

    def __str__(self):
        if self.kind == "identity":
            return "e"
        if self.kind == "irreducible":
            return repr(self.matrix)
        return "*".join(str(f) for f in self.factors)


def chevalley_commutator(t1: Transvection, t2: Transvection) -> CommutatorResult:
    """[t_{i,j}(xi), t_{h,k}(zeta)] by the three-case commutator formula."""
    if t1.size != t2.size:
        raise LinalgError("transvections of different sizes")
    i, j, h, k = t1.i, t1.j, t2.i, t2.j
    n = t1.size
    xi, zeta = t1.arg, t2.arg
    if zeta.spec != xi.spec:
        zeta = xi.spec(zeta)
    if j == h and i != k:
        return CommutatorResult("transvection", (Transvection(n, i, k, xi * zeta),), size=n)
    if j != h and i == k:
        return CommutatorResult("transvection", (Transvection(n, h, j, -(zeta * xi)),), size=n)
    if j != h and i != k:
        return CommutatorResult("identity", size=n)
    spec = xi.spec
    m = commutator(t1.matrix(spec), t2.matrix(spec))
    return CommutatorResult("irreducible", matrix=m, size=n)


def hall_witt_check(x: Matrix, y: Matrix, z: Matrix) -> bool:
    """Check [x,y^-1,z^-1]^x [z,x^-1,y^-1]^z [y,z^-1,x^-1]^y == e.

    Here u^v = v^-1 u v and [a,b,c] = [[a,b],c].
    """
    xi, yi, zi = mat_inverse(x), mat_inverse(y), mat_inverse(z)

    def triple(a, b, c):
        return commutator(commutator(a, b), c)

    def right_conj(u, v, vi):
        return vi * u * v

    total = (
        right_conj(triple(x, yi, zi), x, xi)
        * right_conj(triple(z, xi, yi), z, zi)
        * right_conj(triple(y, zi, xi), y, yi)
    )
    return total.is_identity()


def random_invertible(spec: IntegersMod, n: int, rng, max_tries: int = 1000) -> Matrix:
    """Uniform random element of GL_n over Z/k (rejection sampling)."""
    k = spec.modulus
    for _ in range(max_tries):
        rows = [[rng.randrange(k) for _ in range(n)] for _ in range(n)]
        d = det_payload(spec, rows)
        if math.gcd(d, k) == 1:
            return Matrix(spec, rows, n, n)
    raise LinalgError("could not sample an invertible matrix")


def random_elementary_word(spec, n: int, length: int, rng, values=None) -> GroupWord:
    """Random product of transvections t_{i,j}(v) with v from ``values``."""
    letters = []
    for _ in range(length):
        i, j = rng.sample(range(1, n + 1), 2)
        v = rng.choice(values) if values is not None else rng.randrange(-5, 6)
        letters.append(GroupWord.gen(Transvection(n, i, j, spec(v))))
    return GroupWord.prod(*letters)


def index_subsets(n: int, m: int):
    return [list(c) for c in combinations(range(1, n + 1), m)]
