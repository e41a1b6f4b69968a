"""Exact commutative rings: Z, Z/k, F_p and polynomial rings over them.

Ring elements are stored as raw *payloads* (a Python ``int`` for the scalar
rings, a ``{exponent-tuple: coefficient}`` dict for polynomials) and all
arithmetic is dispatched through the owning :class:`RingSpec`.  The
:class:`RingElem` wrapper pairs a payload with its spec for the public API.

Payloads are canonical: residues live in ``[0, k)``, polynomial dicts never
hold zero coefficients.  That makes payload equality ring equality and lets
``bool(payload)`` double as a cheap non-zero test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence


class RingError(ValueError):
    """Raised for ill-formed ring specs or unsupported ring operations."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class RingSpec:
    """Base class of the supported ring kinds.

    Subclasses implement payload arithmetic.  Calling a spec coerces a value
    into a :class:`RingElem` of that ring.
    """

    kind: str = "?"

    # -- payload arithmetic (overridden) ---------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, x: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def unit_p(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    # -- shared helpers ----------------------------------------------------
    @property
    def is_field(self) -> bool:
        return False

    @property
    def two_invertible(self) -> bool:
        return self.unit_p(self.from_int(2))

    def coerce_payload(self, x):
        """Turn ``x`` (RingElem, int or raw payload) into a payload of this ring."""
        if isinstance(x, RingElem):
            if x.spec == self:
                return x.payload
            return self.lift_from(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        raise RingError(f"cannot coerce {x!r} into {self}")

    def lift_from(self, x: "RingElem"):
        # integers map into every ring; anything else must already match
        if isinstance(x.spec, Integers):
            return self.from_int(x.payload)
        raise RingError(f"element of {x.spec} is not in {self}")

    def __call__(self, x) -> "RingElem":
        return RingElem(self, self.coerce_payload(x))

    def elem(self, payload) -> "RingElem":
        return RingElem(self, payload)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def integer_lift(self) -> "RingSpec":
        """The ring over Z whose reduction gives this one (identity for Z)."""
        return self

    def reduce_from_lift(self, payload):
        return payload

    def lift_payload(self, payload):
        return payload

    @staticmethod
    def parse(text: str) -> "RingSpec":
        """Parse the CLI ring syntax: ``z``, ``zmod:k``, ``fp:p``, ``poly:X,Y@<base>``."""
        text = text.strip()
        if text == "z":
            return Integers()
        if text.startswith("zmod:"):
            return IntegersMod(int(text[5:]))
        if text.startswith("fp:"):
            return PrimeField(int(text[3:]))
        if text.startswith("poly:"):
            body = text[5:]
            if "@" in body:
                names, base = body.split("@", 1)
            else:
                names, base = body, "z"
            variables = tuple(v.strip() for v in names.split(",") if v.strip())
            return PolynomialRing(RingSpec.parse(base), variables)
        if text == "poly":
            return PolynomialRing(Integers(), ("xi", "zeta"))
        raise RingError(f"unknown ring {text!r}")


@dataclass(frozen=True)
class Integers(RingSpec):
    kind = "z"

    def __str__(self) -> str:
        return "z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, x: int):
        return int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def unit_p(self, a) -> bool:
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise RingError(f"{a} is not a unit in Z")


@dataclass(frozen=True)
class IntegersMod(RingSpec):
    modulus: int
    kind = "zmod"

    def __post_init__(self):
        if self.modulus < 2:
            raise RingError(f"modulus must be >= 2, got {self.modulus}")

    def __str__(self) -> str:
        return f"zmod:{self.modulus}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.modulus

    def from_int(self, x: int):
        return int(x) % self.modulus

    def add(self, a, b):
        s = a + b
        k = self.modulus
        return s - k if s >= k else s

    def sub(self, a, b):
        s = a - b
        return s + self.modulus if s < 0 else s

    def neg(self, a):
        return (self.modulus - a) if a else 0

    def mul(self, a, b):
        return (a * b) % self.modulus

    def unit_p(self, a) -> bool:
        return math.gcd(a, self.modulus) == 1

    def inv(self, a):
        if math.gcd(a, self.modulus) != 1:
            raise RingError(f"{a} is not a unit in {self}")
        return pow(a, -1, self.modulus)

    def integer_lift(self) -> RingSpec:
        return Integers()

    def reduce_from_lift(self, payload):
        return payload % self.modulus

    def lift_from(self, x: "RingElem"):
        if isinstance(x.spec, (Integers, IntegersMod)):
            if isinstance(x.spec, IntegersMod) and x.spec.modulus % self.modulus:
                raise RingError(f"no reduction map {x.spec} -> {self}")
            return x.payload % self.modulus
        raise RingError(f"element of {x.spec} is not in {self}")


@dataclass(frozen=True)
class PrimeField(IntegersMod):
    kind = "fp"

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise RingError(f"{self.modulus} is not prime")

    def __str__(self) -> str:
        return f"fp:{self.modulus}"

    @property
    def is_field(self) -> bool:
        return True

    @property
    def p(self) -> int:
        return self.modulus


@dataclass(frozen=True)
class PolynomialRing(RingSpec):
    """Multivariate polynomials; exponent vectors are dense over ``variables``."""

    base: RingSpec
    variables: tuple
    kind = "poly"

    def __post_init__(self):
        if isinstance(self.base, PolynomialRing):
            raise RingError("nested polynomial rings are not supported; list all variables at once")
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise RingError(f"duplicate variable names in {self.variables}")
        object.__setattr__(self, "_zero_exp", (0,) * len(self.variables))

    def __str__(self) -> str:
        return f"poly:{','.join(self.variables)}@{self.base}"

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self):
        return {}

    def one(self):
        return self.from_int(1)

    def from_int(self, x: int):
        c = self.base.from_int(x)
        return {self._zero_exp: c} if c else {}

    def var(self, name: str) -> "RingElem":
        idx = self.variables.index(name)
        exp = tuple(1 if t == idx else 0 for t in range(self.nvars))
        return RingElem(self, {exp: self.base.one()})

    def gens(self) -> tuple:
        return tuple(self.var(v) for v in self.variables)

    def coerce_payload(self, x):
        if isinstance(x, dict):
            return {tuple(e): c for e, c in x.items() if c}
        return super().coerce_payload(x)

    def lift_from(self, x: "RingElem"):
        if x.spec == self.base or isinstance(x.spec, Integers):
            c = self.base.coerce_payload(x)
            return {self._zero_exp: c} if c else {}
        if isinstance(x.spec, PolynomialRing) and x.spec.variables == self.variables:
            base = self.base
            out = {}
            for e, c in x.payload.items():
                v = base.coerce_payload(RingElem(x.spec.base, c))
                if v:
                    out[e] = v
            return out
        raise RingError(f"element of {x.spec} is not in {self}")

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        badd = self.base.add
        r = dict(a)
        for e, c in b.items():
            v = badd(r.get(e, 0), c)
            if v:
                r[e] = v
            else:
                r.pop(e, None)
        return r

    def neg(self, a):
        bneg = self.base.neg
        return {e: bneg(c) for e, c in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return {}
        badd, bmul = self.base.add, self.base.mul
        r: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = badd(r.get(e, 0), bmul(c1, c2))
                if v:
                    r[e] = v
                else:
                    r.pop(e, None)
        return r

    def scale(self, a, c):
        bmul = self.base.mul
        out = {}
        for e, v in a.items():
            w = bmul(v, c)
            if w:
                out[e] = w
        return out

    def constant(self, a):
        """Constant term, or None when ``a`` is not constant."""
        if not a:
            return 0
        if len(a) == 1 and self._zero_exp in a:
            return a[self._zero_exp]
        return None

    def unit_p(self, a) -> bool:
        c = self.constant(a)
        return c is not None and c != 0 and self.base.unit_p(c)

    def inv(self, a):
        c = self.constant(a)
        if c is None or not c or not self.base.unit_p(c):
            raise RingError(f"{RingElem(self, a)} is not a unit in {self}")
        return {self._zero_exp: self.base.inv(c)}

    def integer_lift(self) -> RingSpec:
        if isinstance(self.base, Integers):
            return self
        return PolynomialRing(Integers(), self.variables)

    def reduce_from_lift(self, payload):
        return self.lift_from(RingElem(PolynomialRing(Integers(), self.variables), payload))

    def lift_payload(self, payload):
        return dict(payload)

    def exact_div(self, a, b):
        """Exact quotient ``a / b``; raises when ``b`` does not divide ``a``.

        Division by lexicographic leading terms.  Needs an integral base
        (Z or a prime field); callers lift Z/k coefficients first.
        """
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        if isinstance(self.base, IntegersMod) and not self.base.is_field:
            raise RingError("exact division needs an integral coefficient ring")
        lead_b = max(b)
        cb = b[lead_b]
        q: dict = {}
        rem = dict(a)
        while rem:
            lead_r = max(rem)
            diff = tuple(x - y for x, y in zip(lead_r, lead_b))
            if min(diff, default=0) < 0:
                raise RingError("inexact polynomial division")
            cr = rem[lead_r]
            if isinstance(self.base, Integers):
                if cr % cb:
                    raise RingError("inexact polynomial division")
                cq = cr // cb
            else:
                cq = self.base.mul(cr, self.base.inv(cb))
            term = {diff: cq}
            q = self.add(q, term)
            rem = self.sub(rem, self.mul(term, b))
        return q

    def evaluate(self, a, values: Sequence) -> "RingElem":
        """Substitute base-ring values for the variables."""
        base = self.base
        total = base.zero()
        vals = [base.coerce_payload(v) for v in values]
        for e, c in a.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = base.mul(term, base.pow(v, k))
            total = base.add(total, term)
        return RingElem(base, total)


class RingElem:
    """An element of a ring: the pair (spec, canonical payload)."""

    __slots__ = ("spec", "payload")

    def __init__(self, spec: RingSpec, payload):
        self.spec = spec
        self.payload = payload

    def _other(self, other):
        if isinstance(other, RingElem):
            if other.spec != self.spec:
                return self.spec.coerce_payload(other)
            return other.payload
        return self.spec.coerce_payload(other)

    def __add__(self, other):
        return RingElem(self.spec, self.spec.add(self.payload, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElem(self.spec, self.spec.sub(self.payload, self._other(other)))

    def __rsub__(self, other):
        return RingElem(self.spec, self.spec.sub(self._other(other), self.payload))

    def __mul__(self, other):
        return RingElem(self.spec, self.spec.mul(self.payload, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.spec, self.spec.neg(self.payload))

    def __pow__(self, e: int):
        return RingElem(self.spec, self.spec.pow(self.payload, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElem):
            return self.spec == other.spec and self.payload == other.payload
        if isinstance(other, int):
            return self.payload == self.spec.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        p = self.payload
        if isinstance(p, dict):
            p = tuple(sorted(p.items()))
        return hash((self.spec, p))

    def __bool__(self) -> bool:
        return bool(self.payload)

    def is_unit(self) -> bool:
        return is_unit(self)

    def inverse(self) -> "RingElem":
        return RingElem(self.spec, self.spec.inv(self.payload))

    def __repr__(self) -> str:
        return format_payload(self.spec, self.payload)

    __str__ = __repr__


def format_payload(spec: RingSpec, payload) -> str:
    if not isinstance(spec, PolynomialRing):
        if isinstance(spec, IntegersMod) and payload > spec.modulus // 2:
            return str(payload - spec.modulus)
        return str(payload)
    if not payload:
        return "0"
    parts = []
    for e in sorted(payload, reverse=True):
        c = payload[e]
        c_str = format_payload(spec.base, c)
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(spec.variables, e) if k
        )
        if not mono:
            parts.append(c_str)
        elif c_str == "1":
            parts.append(mono)
        elif c_str == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{c_str}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def is_unit(x: RingElem) -> bool:
    """True iff ``x`` is invertible (constant unit for polynomials)."""
    return x.spec.unit_p(x.payload)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    """Finitely generated ideal.  ``normal_form`` is None over polynomial rings."""

    spec: RingSpec
    generators: tuple
    normal_form: RingElem | None

    def __contains__(self, x) -> bool:
        return ideal_membership(self, x)

    def __str__(self) -> str:
        if self.normal_form is None:
            return "(" + ", ".join(map(str, self.generators)) + ")"
        return f"({self.normal_form.payload})"


def ideal_generate(spec: RingSpec, gens: Iterable) -> Ideal:
    elems = []
    for g in gens:
        if isinstance(g, RingElem) and g.spec != spec:
            raise RingError(f"generator {g} lives in {g.spec}, not {spec}")
        elems.append(spec(g))
    if isinstance(spec, PolynomialRing):
        return Ideal(spec, tuple(elems), None)
    if isinstance(spec, Integers):
        g = reduce(math.gcd, (e.payload for e in elems), 0)
        return Ideal(spec, tuple(elems), spec(abs(g)))
    if spec.is_field:
        nf = 1 if any(e.payload for e in elems) else 0
        return Ideal(spec, tuple(elems), spec(nf))
    # Z/k: the ideal is generated by gcd(k, lifts)
    g = reduce(math.gcd, (e.payload for e in elems), spec.modulus)
    return Ideal(spec, tuple(elems), spec(g))


def _ideal_modulus(I: Ideal) -> int:
    """The non-negative integer d with I = (d) (Z) or I = (d mod k), d | k (Z/k)."""
    g = I.normal_form.payload
    if isinstance(I.spec, IntegersMod):
        return math.gcd(g, I.spec.modulus)
    return g


def ideal_membership(I: Ideal, x) -> bool:
    spec = I.spec
    if isinstance(spec, PolynomialRing):
        raise RingError("ideal membership over polynomial rings is not supported")
    v = spec.coerce_payload(x)
    d = _ideal_modulus(I)
    if d == 0:
        return v == 0
    return v % d == 0


def quotient_ring(I: Ideal) -> RingSpec | None:
    """R/I as a representable ring, or None for the zero ring (I = R)."""
    spec = I.spec
    if isinstance(spec, PolynomialRing):
        raise RingError("quotients of polynomial rings are not representable")
    d = _ideal_modulus(I)
    if d == 1:
        return None
    if d == 0:
        return spec
    return PrimeField(d) if is_prime(d) else IntegersMod(d)


# ---------------------------------------------------------------------------
# linear algebra over Z, Z/k and F_p


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Smith form over Z.  Returns ``(U, D, V)`` with ``U @ A @ V == D``.

    U, V are unimodular, D is diagonal with d_1 | d_2 | ... (all >= 0).
    Matrices are plain lists of lists of ints.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    def add_row(M, src, dst, f):  # row_dst += f * row_src
        rs, rd = M[src], M[dst]
        for c in range(len(rd)):
            rd[c] += f * rs[c]

    def add_col(M, src, dst, f):
        for r in M:
            r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return U, D, V
            i, j = pivot
            if i != t:
                swap_rows(D, i, t)
                swap_rows(U, i, t)
            if j != t:
                swap_cols(D, j, t)
                swap_cols(V, j, t)
            p = D[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = D[i][t] // p
                if q:
                    add_row(D, t, i, -q)
                    add_row(U, t, i, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = D[t][j] // p
                if q:
                    add_col(D, t, j, -q)
                    add_col(V, t, j, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(D, bad, t, 1)
            add_row(U, bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def _solve_over_z(A: list, b: list) -> list | None:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U, D, V = smith_normal_form(A)
    c = [sum(U[i][k] * b[k] for k in range(rows)) for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = D[i][i] if i < cols else 0
        if d == 0:
            if c[i]:
                return None
            continue
        if c[i] % d:
            return None
        y[i] = c[i] // d
    return [sum(V[i][k] * y[k] for k in range(cols)) for i in range(cols)]


def _solve_over_field(spec: PrimeField, A: list, b: list) -> list | None:
    p = spec.modulus
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [[x % p for x in A[i]] + [b[i] % p] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [(x - f * y) % p for x, y in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if M[i][cols]:
            return None
    x = [0] * cols
    for i, c in enumerate(pivots):
        x[c] = M[i][cols]
    return x


def solve_linear(spec: RingSpec, A, b) -> list | None:
    """Some ``x`` with ``A x = b`` over ``spec``, or None if there is none.

    ``A`` is a :class:`~extpow.linalg.Matrix` or nested list of elements,
    ``b`` a sequence of elements.  Z and Z/k go through the Smith form of the
    integer lift; prime fields through Gaussian elimination.
    """
    if isinstance(spec, PolynomialRing):
        raise RingError("solve_linear supports Z, Z/k and prime fields only")
    rows_in = A.to_lists() if hasattr(A, "to_lists") else A
    Ap = [[spec.coerce_payload(x) for x in row] for row in rows_in]
    bp = [spec.coerce_payload(x) for x in b]
    rows = len(Ap)
    if rows != len(bp):
        raise RingError(f"dimension mismatch: {rows} equations, {len(bp)} right-hand sides")
    cols = len(Ap[0]) if rows else 0
    if any(len(r) != cols for r in Ap):
        raise RingError("ragged coefficient matrix")
    if rows == 0:
        return []
    if spec.is_field:
        x = _solve_over_field(spec, Ap, bp)
    elif isinstance(spec, Integers):
        x = _solve_over_z(Ap, bp)
    else:
        k = spec.modulus
        aug = [Ap[i] + [k if j == i else 0 for j in range(rows)] for i in range(rows)]
        x = _solve_over_z(aug, bp)
        if x is not None:
            x = x[:cols]
    if x is None:
        return None
    return [spec(v) for v in x]
