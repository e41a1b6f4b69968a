"""Level computation and machine-checkable inclusion witnesses.

A :class:`Derivation` is a straight-line program over an overgroup ``H`` of
/\\^m E(n, R): it may cite transvections assumed to lie in ``H`` (GIVEN),
introduce generators /\\^m t_{i,j}(zeta) (EXT_GEN), and combine earlier
results by commutators, products, inverses and halving of a single
transvection argument.  :func:`validate_derivation` replays the program with
exact sparse matrices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .exterior import (
    ExtGen,
    ExteriorContext,
    ExtTransvection,
    WeightIndex,
    _swap,
    classify_commutator,
    height,
    pair_sign,
)
from .linalg import (
    GroupWord,
    LinalgError,
    invert_ops,
    sparse_apply,
    word_evaluate,
)
from .rings import Ideal, IntegersMod, RingElem, RingError, RingSpec, ideal_generate


class LevelError(ValueError):
    pass


NET_OF_IDEALS = "level not single-ideal; net of ideals out of scope"

GIVEN = "GIVEN"
EXT_GEN = "EXT_GEN"
COMMUTE = "COMMUTE"
PRODUCT = "PRODUCT"
INVERSE = "INVERSE"
SCALE_BY_HALF = "SCALE_BY_HALF"
STEP_KINDS = (GIVEN, EXT_GEN, COMMUTE, PRODUCT, INVERSE, SCALE_BY_HALF)


@dataclass(frozen=True)
class LevelGenerator:
    """The hypothesis (or conclusion) ``t_{I,J}(xi) in H``."""

    ctx: ExteriorContext
    I: WeightIndex
    J: WeightIndex
    xi: RingElem

    def __post_init__(self):
        object.__setattr__(self, "I", self.ctx.index(self.I))
        object.__setattr__(self, "J", self.ctx.index(self.J))
        if self.I == self.J:
            raise LevelError("level generator needs I != J")

    def letter(self) -> ExtTransvection:
        return ExtTransvection(self.ctx, self.I, self.J, self.xi)

    def __str__(self):
        return str(self.letter())


@dataclass
class Step:
    kind: str
    refs: tuple = ()
    given: LevelGenerator | None = None
    gen: ExtGen | None = None
    claim: tuple | None = None
    note: str = ""

    def describe(self, idx: int) -> str:
        if self.kind == GIVEN:
            body = f"{self.given} in H"
        elif self.kind == EXT_GEN:
            body = f"{self.gen} in H"
        elif self.kind == COMMUTE:
            body = f"[s{self.refs[0]}, s{self.refs[1]}]"
        elif self.kind == PRODUCT:
            body = " * ".join(f"s{r}" for r in self.refs)
        elif self.kind == INVERSE:
            body = f"s{self.refs[0]}^-1"
        else:
            body = f"s{self.refs[0]} with argument halved"
        if self.claim is not None:
            body += " = " + ("*".join(map(str, self.claim)) if self.claim else "e")
        if self.note:
            body += f"    ({self.note})"
        return f"s{idx}: {self.kind:<13} {body}"


@dataclass
class Derivation:
    ctx: ExteriorContext
    steps: list
    conclusion: LevelGenerator | None
    unit: int = 1
    note: str = ""
    premise: LevelGenerator | None = None

    def transcript(self) -> str:
        lines = [s.describe(k) for k, s in enumerate(self.steps)]
        if self.conclusion is not None:
            lines.append(f"conclusion: {self.conclusion} in H")
        return "\n".join(lines)

    def givens(self):
        return [s.given for s in self.steps if s.kind == GIVEN]

    def uses_halving(self) -> bool:
        return any(s.kind == SCALE_BY_HALF for s in self.steps)


@dataclass
class ValidationResult:
    ok: bool
    step: int | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# validation


def _letter_ops(letter, spec):
    return letter.elementary_ops(spec)


def _claim_ops(claim, spec):
    ops = []
    for f in claim:
        ops.extend(_letter_ops(f, spec))
    return ops


def _recoerce(letter, spec):
    if isinstance(letter, ExtTransvection):
        return ExtTransvection(letter.ctx, letter.I, letter.J, spec(letter.arg))
    return ExtGen(letter.ctx, letter.i, letter.j, spec(letter.arg))


def validate_derivation(d: Derivation, ring: RingSpec | None = None) -> ValidationResult:
    """Replay ``d`` with exact matrices; report the first failing step.

    Arguments are coerced into ``ring`` (default: the ring of the first
    GIVEN argument).  Raises :class:`LevelError` ("2 not invertible") when a
    halving step is present and 2 is not a unit of the ring.
    """
    if ring is None:
        ring = next((s.given.xi.spec for s in d.steps if s.kind == GIVEN), None)
        if ring is None:
            ring = next((s.gen.arg.spec for s in d.steps if s.kind == EXT_GEN), None)
    if not d.steps:
        ok = d.conclusion is None or d.conclusion == d.premise
        return ValidationResult(ok, None, "" if ok else "empty derivation without matching premise")
    if ring is None:
        return ValidationResult(False, None, "no ring to validate over")
    if d.uses_halving() and not ring.two_invertible:
        raise LevelError("2 not invertible")
    values: list = []  # op lists
    sparse: list = []
    for k, st in enumerate(d.steps):
        try:
            if any(r >= k or r < 0 for r in st.refs):
                return ValidationResult(False, k, "reference to a later or missing step")
            if st.kind == GIVEN:
                ops = _letter_ops(_recoerce(st.given.letter(), ring), ring)
            elif st.kind == EXT_GEN:
                ops = _letter_ops(_recoerce(st.gen, ring), ring)
            elif st.kind == COMMUTE:
                a, b = (values[r] for r in st.refs)
                ops = a + b + invert_ops(a, ring) + invert_ops(b, ring)
            elif st.kind == PRODUCT:
                ops = [o for r in st.refs for o in values[r]]
            elif st.kind == INVERSE:
                ops = invert_ops(values[st.refs[0]], ring)
            elif st.kind == SCALE_BY_HALF:
                D = sparse[st.refs[0]]
                entries = [(r, c, v) for r, row in D.items() for c, v in row.items()]
                if len(entries) != 1 or entries[0][0] == entries[0][1]:
                    return ValidationResult(False, k, "halving needs a single transvection")
                r, c, v = entries[0]
                ops = [(r, c, ring.mul(v, ring.inv(ring.from_int(2))))]
            else:
                return ValidationResult(False, k, f"unknown step kind {st.kind!r}")
        except (RingError, LinalgError) as exc:
            return ValidationResult(False, k, str(exc))
        D = sparse_apply({}, ops, ring)
        if st.claim is not None:
            try:
                cops = _claim_ops([_recoerce(f, ring) for f in st.claim], ring)
            except (RingError, LinalgError) as exc:
                return ValidationResult(False, k, str(exc))
            if sparse_apply({}, cops, ring) != D:
                return ValidationResult(False, k, "step value differs from its claim")
            ops = cops  # shorter, and proven equal
        values.append(ops)
        sparse.append(D)
    if d.conclusion is None:
        return ValidationResult(True)
    if not d.steps:
        return ValidationResult(False, None, "no steps")
    target = sparse_apply({}, _letter_ops(_recoerce(d.conclusion.letter(), ring), ring), ring)
    if sparse[-1] != target:
        return ValidationResult(False, len(d.steps) - 1, "last step does not equal the conclusion")
    return ValidationResult(True)


# ---------------------------------------------------------------------------
# building derivations


def _merge(ctx, factors, spec):
    """Product of commuting transvections with equal positions merged."""
    acc: dict = {}
    for f in factors:
        key = (f.I, f.J)
        acc[key] = acc[key] + f.arg if key in acc else f.arg
    out = [ExtTransvection(ctx, I, J, v) for (I, J), v in acc.items() if v]
    out.sort(key=lambda f: (ctx.rank(f.I), ctx.rank(f.J)))
    return tuple(out)


def _inverse_claim(claim):
    return tuple(f.inverse() for f in reversed(claim))


class Builder:
    """Accumulates steps and tracks each step's claimed value."""

    def __init__(self, ctx: ExteriorContext, spec: RingSpec):
        self.ctx = ctx
        self.spec = spec
        self.steps: list = []
        self._givens: dict = {}

    def _add(self, step) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def claim(self, idx):
        return self.steps[idx].claim

    def given(self, I, J, xi) -> int:
        key = (WeightIndex(I), WeightIndex(J), xi)
        if key in self._givens:
            return self._givens[key]
        g = LevelGenerator(self.ctx, I, J, xi)
        idx = self._add(Step(GIVEN, given=g, claim=(g.letter(),)))
        self._givens[key] = idx
        return idx

    def ext_gen(self, i, j, zeta) -> int:
        g = ExtGen(self.ctx, i, j, self.spec(zeta))
        return self._add(Step(EXT_GEN, gen=g))

    def commute_with_gen(self, t_idx, i, j, zeta, note=""):
        """[value of t_idx, /\\^m t_{j,i}(zeta)] for a single-transvection value."""
        (t,) = self.claim(t_idx)
        g = self.ext_gen(j, i, zeta)
        res = classify_commutator(self.ctx, t, i, j, self.spec(zeta))
        if res.kind == "irreducible":
            raise LevelError("irreducible commutator inside a witness")
        idx = self._add(Step(COMMUTE, (t_idx, g), claim=tuple(res.factors), note=note or res.kind))
        return idx

    def commute(self, a, b, claim, note=""):
        return self._add(Step(COMMUTE, (a, b), claim=tuple(claim), note=note))

    def product(self, *refs, note=""):
        factors = [f for r in refs for f in self.claim(r)]
        return self._add(Step(PRODUCT, tuple(refs), claim=_merge(self.ctx, factors, self.spec), note=note))

    def inverse(self, a, note=""):
        return self._add(Step(INVERSE, (a,), claim=_inverse_claim(self.claim(a)), note=note))

    def half(self, a, note=""):
        (t,) = self.claim(a)
        h = self.spec.inv(self.spec.from_int(2))
        return self._add(Step(SCALE_BY_HALF, (a,), claim=(t.with_arg(t.arg * RingElem(self.spec, h)),), note=note))

    def single(self, idx) -> ExtTransvection:
        c = self.claim(idx)
        if len(c) != 1:
            raise LevelError(f"step {idx} is not a single transvection")
        return c[0]

    def finish(self, conclusion_idx=None, unit=1, note="") -> Derivation:
        idx = len(self.steps) - 1 if conclusion_idx is None else conclusion_idx
        t = self.single(idx)
        concl = LevelGenerator(self.ctx, t.I, t.J, t.arg)
        premise = next((s.given for s in self.steps if s.kind == GIVEN), None)
        return Derivation(self.ctx, self.steps, concl, unit, note, premise)


# --- elementary moves on a tracked single transvection t_{I,J}(a) ----------


def _row_move(b: Builder, idx, p, f):
    """Replace p in I by a free index f (commutation with /\\^m t_{f,p}(1))."""
    return b.commute_with_gen(idx, p, f, 1, note=f"row {p}->{f}")


def _col_move(b: Builder, idx, q, f):
    """Replace q in J by a free index f (commutation with /\\^m t_{q,f}(1))."""
    return b.commute_with_gen(idx, f, q, 1, note=f"column {q}->{f}")


def _isolate(b: Builder, c_plus, c_minus, keep_linear: bool, note: str):
    """From the triples C(zeta), C(-zeta) keep either the doubled quadratic
    or the doubled linear part (as a product) -- before halving."""
    if keep_linear:
        inv = b.inverse(c_minus, note="inverse")
        return b.product(c_plus, inv, note=note)
    return b.product(c_plus, c_minus, note=note)


def _swap_move(b: Builder, idx, p, q):
    """p in I\\J and q in J\\I trade places: t_{I-p+q, J-q+p}(+-a)."""
    c1 = b.commute_with_gen(idx, p, q, 1, note="triple, zeta=1")
    c2 = b.commute_with_gen(idx, p, q, -1, note="triple, zeta=-1")
    dbl = _isolate(b, c1, c2, False, "linear terms cancel")
    return b.half(dbl, note="halve")


def _common_move(b: Builder, idx, c, f):
    """Change a common index c of (I, J) into the free index f on both sides."""
    t = b.single(idx)
    low = _row_move(b, idx, c, f)  # t_{I-c+f, J}(bb)
    c1 = b.commute_with_gen(low, f, c, 1, note="triple, zeta=1")
    c2 = b.commute_with_gen(low, f, c, -1, note="triple, zeta=-1")
    both = _isolate(b, c1, c2, True, "quadratic terms cancel")
    # cancel the leftover t_{I,J}(x) using the original transvection
    rest = [g for g in b.claim(both) if (g.I, g.J) == (t.I, t.J)]
    refs = [both]
    if rest:
        x = rest[0].arg
        if x == t.arg * 2:
            inv = b.inverse(idx, note="inverse")
            refs += [inv, inv]
        elif x == -(t.arg * 2):
            refs += [idx, idx]
        else:  # pragma: no cover - shape is fixed by the construction
            raise LevelError("unexpected leftover in common-index move")
    prod = b.product(*refs, note="cancel original")
    return b.half(prod, note="halve")


def _moves(I, J, n, targets, allow_half, allow_lower):
    """Deterministic list of (label, new_state, apply) for BFS."""
    occupied = set(I) | set(J)
    free_all = [x for x in range(1, n + 1) if x not in occupied]
    wanted = [x for x in free_all if x in targets]
    extra = [x for x in free_all if x not in targets][:1]
    free = sorted(set(wanted + extra))
    common = sorted(set(I) & set(J))
    only_i = sorted(set(I) - set(J))
    only_j = sorted(set(J) - set(I))
    out = []
    for p in only_i:
        for f in free:
            out.append((("row", p, f), (_swap(I, p, f), J)))
    for q in only_j:
        for f in free:
            out.append((("col", q, f), (I, _swap(J, q, f))))
    if allow_half:
        if len(common) <= len(I) - 2:
            for p in only_i:
                for q in only_j:
                    out.append((("swap", p, q), (_swap(I, p, q), _swap(J, q, p))))
        for c in common:
            for f in free:
                out.append((("common", c, f), (_swap(I, c, f), _swap(J, c, f))))
    if allow_lower:
        for c in common:
            for f in free:
                out.append((("row", c, f), (_swap(I, c, f), J)))
                out.append((("col", c, f), (I, _swap(J, c, f))))
    return out


def _plan(ctx, start, goal, allow_half, allow_lower):
    start = (WeightIndex(start[0]), WeightIndex(start[1]))
    goal = (WeightIndex(goal[0]), WeightIndex(goal[1]))
    if start == goal:
        return []
    targets = set(goal[0]) | set(goal[1])
    prev = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if height(*state) < height(*goal):
            continue
        for label, nxt in _moves(state[0], state[1], ctx.n, targets, allow_half, allow_lower):
            if nxt in prev or height(*nxt) < height(*goal):
                continue
            prev[nxt] = (state, label)
            if nxt == goal:
                path = []
                cur = nxt
                while prev[cur] is not None:
                    cur, lab = prev[cur]
                    path.append(lab)
                return path[::-1]
            queue.append(nxt)
    return None


def _apply_path(b: Builder, idx, path):
    for kind, x, y in path:
        if kind == "row":
            idx = _row_move(b, idx, x, y)
        elif kind == "col":
            idx = _col_move(b, idx, x, y)
        elif kind == "swap":
            idx = _swap_move(b, idx, x, y)
        else:
            idx = _common_move(b, idx, x, y)
    return idx


def _unit_of(xi, t):
    if t.arg == xi:
        return 1
    if t.arg == -xi:
        return -1
    return 0


def _ring_of(xi):
    if not isinstance(xi, RingElem):
        raise LevelError("xi must be a ring element")
    if not xi:
        raise LevelError("xi must be nonzero: t(0) is the identity")
    return xi.spec


def _no_witness(ctx, I, J, K, L, spec):
    msg = f"no witness from ({ctx.label(I)}, {ctx.label(J)}) to ({ctx.label(K)}, {ctx.label(L)}) for n={ctx.n}"
    if not spec.two_invertible:
        msg += " without halving (2 is not invertible)"
    return LevelError(msg)


def equalize_witness(ctx: ExteriorContext, frm, to, xi) -> Derivation:
    """Derivation of ``t_{K,L}(+-xi) in H`` from ``t_{I,J}(xi) in H`` (equal heights).

    Shortest sequence of moves (row/column replacement by a free index,
    exchanging a row index with a column index, relocating a common index);
    the last two need 2 to be invertible.
    """
    I, J = ctx.index(frm[0]), ctx.index(frm[1])
    K, L = ctx.index(to[0]), ctx.index(to[1])
    if height(I, J) != height(K, L):
        raise LevelError(f"heights differ: {height(I, J)} vs {height(K, L)}")
    spec = _ring_of(xi)
    if (I, J) == (K, L):
        g = LevelGenerator(ctx, K, L, xi)
        return Derivation(ctx, [], g, 1, "trivial", premise=g)
    b = Builder(ctx, spec)
    start = b.given(I, J, xi)
    path = _plan(ctx, (I, J), (K, L), spec.two_invertible, False)
    if path is None:
        raise _no_witness(ctx, I, J, K, L, spec)
    _apply_path(b, start, path)
    d = b.finish()
    d.unit = _unit_of(xi, b.single(len(b.steps) - 1))
    return d


def lower_height_witness(ctx: ExteriorContext, frm, to, xi) -> Derivation:
    """Derivation of ``t_{K,L}(+-xi)`` from ``t_{I,J}(xi)`` when height(I,J) > height(K,L)."""
    I, J = ctx.index(frm[0]), ctx.index(frm[1])
    K, L = ctx.index(to[0]), ctx.index(to[1])
    if height(I, J) <= height(K, L):
        raise LevelError(f"heights not descending: {height(I, J)} -> {height(K, L)}")
    spec = _ring_of(xi)
    b = Builder(ctx, spec)
    start = b.given(I, J, xi)
    path = _plan(ctx, (I, J), (K, L), spec.two_invertible, True)
    if path is None:
        raise _no_witness(ctx, I, J, K, L, spec)
    _apply_path(b, start, path)
    d = b.finish()
    d.unit = _unit_of(xi, b.single(len(b.steps) - 1))
    return d


def _residual(b: Builder, t_idx, i, j, zeta):
    """Linear part of the triple [t, /\\^m t_{j,i}(zeta)] as a two-factor product."""
    c1 = b.commute_with_gen(t_idx, i, j, zeta, note="triple")
    c2 = b.commute_with_gen(t_idx, i, j, -b.spec(zeta), note="triple, opposite zeta")
    dbl = b.product(c1, c2, note="linear terms cancel")
    quad = b.half(dbl, note="quadratic term")
    qinv = b.inverse(quad)
    return b.product(c1, qinv, note="drop quadratic term")


def raise_height_witness(ctx: ExteriorContext, k: int, xi, zeta=1, zeta1=1, side: str = "col") -> Derivation:
    """Derivation of a height-(k+1) transvection with argument +-xi^2*zeta*zeta1
    from height-k transvections with argument xi (two triple commutations, then
    the commutator of their linear residues).  Needs n >= 3m - 2k.
    """
    n, m = ctx.n, ctx.m
    if not 0 <= k <= m - 2:
        raise LevelError(f"need 0 <= k <= m-2, got k={k}")
    if n < 3 * m - 2 * k:
        raise LevelError(f"need n >= 3m - 2k = {3 * m - 2 * k}, got n={n}")
    if side not in ("col", "row"):
        raise LevelError("side must be 'col' or 'row'")
    spec = _ring_of(xi)
    zeta, zeta1 = spec(zeta), spec(zeta1)
    if not xi * xi * zeta * zeta1:
        raise LevelError("xi^2*zeta*zeta1 = 0: the raised transvection is the identity")
    C = list(range(1, k + 1))
    P = list(range(k + 1, m + 1))
    Q = list(range(m + 1, 2 * m - k + 1))
    I, J = WeightIndex(C + P), WeightIndex(C + Q)
    i, j = m, 2 * m - k
    fresh = list(range(2 * m - k + 1, n + 1))
    fresh = [x for x in fresh if x >= 2 * m] + [x for x in fresh if x < 2 * m]
    q = m - k
    E = fresh[: q - 1]
    j1 = min(fresh[q - 1:])
    b = Builder(ctx, spec)
    t0 = b.given(I, J, xi)
    res1 = _residual(b, t0, i, j, zeta)
    if side == "col":
        I1 = WeightIndex(C + [i] + E)
        J1 = _swap(I, i, j1)
        t1 = b.given(I1, J1, xi)
        res2 = _residual(b, t1, i, j1, zeta1)
        first, second = res1, res2
    else:
        I1 = WeightIndex(C + [j] + E)
        J1 = WeightIndex(C + [x for x in P if x != i] + [j1])
        t1 = b.given(I1, J1, xi)
        res2 = _residual(b, t1, j, j1, zeta1)
        first, second = res2, res1
    val = word_evaluate(
        GroupWord.comm(GroupWord.prod(*b.claim(first)), GroupWord.prod(*b.claim(second))), spec
    )
    claim = _claim_from_matrix(ctx, val)
    b.commute(first, second, claim, note="commutator of residues")
    return b.finish(note=f"height {k} -> {k + 1}")


def _claim_from_matrix(ctx, mat):
    out = []
    for r, row in enumerate(mat.rows):
        for c, v in enumerate(row):
            if r != c and v:
                out.append(ExtTransvection(ctx, ctx.unrank(r), ctx.unrank(c), RingElem(mat.spec, v)))
            elif r == c and v != mat.spec.one():
                raise LevelError("commutator is not unipotent")
    if len(out) != 1:
        raise LevelError("commutator of residues is not a single transvection")
    return tuple(out)


# ---------------------------------------------------------------------------
# level


def compute_level(ctx: ExteriorContext, gens, spec: RingSpec | None = None) -> Ideal:
    """Ideal generated by the arguments of the given transvections (n >= 3m)."""
    if ctx.n < 3 * ctx.m:
        raise LevelError(NET_OF_IDEALS)
    gens = list(gens)
    if spec is None:
        if not gens:
            raise LevelError("empty generator list needs an explicit ring")
        spec = gens[0].xi.spec
    return ideal_generate(spec, [g.xi for g in gens])


# ---------------------------------------------------------------------------
# relative generators


@dataclass(frozen=True)
class RelativeGenerator:
    """z_{I,J}(xi, zeta) = t_{J,I}(zeta) t_{I,J}(xi) t_{J,I}(-zeta)."""

    ctx: ExteriorContext
    I: WeightIndex
    J: WeightIndex
    xi: RingElem
    zeta: RingElem

    def __post_init__(self):
        object.__setattr__(self, "I", self.ctx.index(self.I))
        object.__setattr__(self, "J", self.ctx.index(self.J))
        if self.I == self.J:
            raise LevelError("relative generator needs I != J")

    def word(self) -> GroupWord:
        c = self.ctx
        return GroupWord.conj(ExtTransvection(c, self.J, self.I, self.zeta), ExtTransvection(c, self.I, self.J, self.xi))

    def matrix(self):
        return word_evaluate(self.word(), self.xi.spec)


@dataclass(frozen=True)
class FactorItem:
    """``conjugator * base * conjugator^-1`` (conjugator None means plain base)."""

    conjugator: GroupWord | None
    base: ExtTransvection
    label: str = ""

    def word(self) -> GroupWord:
        if self.conjugator is None:
            return GroupWord.gen(self.base)
        return GroupWord.conj(self.conjugator, self.base)


def factorization_word(items) -> GroupWord:
    return GroupWord.prod(*[it.word() for it in items])


def _z_factor(ctx, I, J, xi, zeta, label):
    """Items whose product is z_{I,J}(xi, zeta); induction on height upwards."""
    I, J = WeightIndex(I), WeightIndex(J)
    m = ctx.m
    h = height(I, J)
    if h == m - 1:
        (a,) = set(I) - set(J)
        (bb,) = set(J) - set(I)
        L = sorted(set(I) & set(J))
        s = pair_sign(L, bb, a)
        conj = GroupWord.gen(ExtGen(ctx, bb, a, zeta if s > 0 else -zeta))
        return [FactorItem(conj, ExtTransvection(ctx, I, J, xi), label + "base")]
    iq = max(set(I) - set(J))
    jq = max(set(J) - set(I))
    V = _swap(I, iq, jq)
    T = lambda K, L_, x: ExtTransvection(ctx, K, L_, x)  # noqa: E731
    a = T(J, V, zeta * xi)
    ainv = a.inverse()
    items = []
    # ^a[b,c] with b = t_{I,V}(xi), c = t_{V,I}(-zeta)
    items.append(FactorItem(None, a, label + "a"))
    items.append(FactorItem(None, T(I, V, xi), label + "b"))
    items += _z_factor(ctx, I, V, -xi, -zeta, label + "bc.")
    items.append(FactorItem(None, ainv, label + "a^-1"))
    # ^{ac}[b,d] with d = t_{V,J}(1)
    items.append(FactorItem(None, a, label + "a"))
    items.append(FactorItem(None, T(V, J, -(zeta * xi)), label + "c-shift"))
    items.append(FactorItem(None, T(I, J, xi), label + "bd"))
    items.append(FactorItem(None, ainv, label + "a^-1"))
    # [a,c]
    items.append(FactorItem(None, T(J, I, -(zeta * zeta * xi)), label + "ac"))
    # ^c[a,d] = [^c a, d] with ^c a = t_{J,I}(zeta^2 xi) a
    a1 = T(J, I, zeta * zeta * xi)
    items.append(FactorItem(None, a1, label + "a1"))
    items.append(FactorItem(None, a, label + "a"))
    items += _z_factor(ctx, J, V, -(zeta * xi), zeta.spec(1), label + "ad.")
    items.append(FactorItem(None, a1.inverse(), label + "a1^-1"))
    items.append(FactorItem(None, T(V, I, -(zeta * zeta * xi)), label + "a1d"))
    return items


def relative_generator_factorization(ctx: ExteriorContext, z: RelativeGenerator) -> list:
    """Write z_{I,J}(xi, zeta) as a product of /\\^m E-conjugates of
    transvections whose arguments are multiples of xi.  Needs n >= 3m."""
    if ctx.n < 3 * ctx.m:
        raise LevelError(f"need n >= 3m, got n={ctx.n}, m={ctx.m}")
    return _z_factor(ctx, z.I, z.J, z.xi, z.zeta, "")


def conjugators_in_elementary(items) -> bool:
    """Every conjugator is built from /\\^m t_{i,j} letters only."""
    for it in items:
        if it.conjugator is None:
            continue
        if not all(isinstance(g, ExtGen) for g in it.conjugator.generators()):
            return False
    return True


# ---------------------------------------------------------------------------
# perfectness


def perfectness_witness(ctx: ExteriorContext, g) -> GroupWord:
    """A commutator [x, y] of generators equal to ``g``.

    ``g`` is either /\\^m t_{i,j}(zeta) (an :class:`ExtGen`) or a transvection
    t_{I,J}(xi) of GL_N; the returned x, y are again of these two kinds.
    """
    n = ctx.n
    if isinstance(g, ExtGen):
        h = next((x for x in range(1, n + 1) if x not in (g.i, g.j)), None)
        if h is None:
            raise LevelError("no auxiliary index: need n >= 3")
        one = g.arg.spec(1)
        return GroupWord.comm(ExtGen(ctx, g.i, h, g.arg), ExtGen(ctx, h, g.j, one))
    if not isinstance(g, ExtTransvection):
        raise LevelError("perfectness witness needs an ExtGen or ExtTransvection")
    I, J, xi = g.I, g.J, g.arg
    K = sorted(set(I) & set(J))
    Ionly = sorted(set(I) - set(J))
    Jonly = sorted(set(J) - set(I))
    q = len(Ionly)
    if q >= 2:
        iq, jq = Ionly[-1], Jonly[-1]
        M = K + Jonly[:-1]
        V = WeightIndex(M + [iq])
    else:
        (a,) = Ionly
        (jq,) = Jonly
        free = [x for x in range(1, n + 1) if x not in set(I) | set(J)]
        if not free:
            raise LevelError("no auxiliary index: need n > m + 1")
        iq = free[0]
        M = K
        V = WeightIndex(M + [iq])
    s = pair_sign(M, iq, jq)
    unit = xi.spec(s)
    return GroupWord.comm(ExtTransvection(ctx, I, V, xi), ExtGen(ctx, iq, jq, unit))


def generators_e_ext(ctx: ExteriorContext, spec: RingSpec, zetas, xis):
    """All generators /\\^m t_{i,j}(zeta), t_{I,J}(xi) for the given value lists."""
    out = []
    for i in range(1, ctx.n + 1):
        for j in range(1, ctx.n + 1):
            if i != j:
                for z in zetas:
                    out.append(ExtGen(ctx, i, j, spec(z)))
    for I in ctx.index_table:
        for J in ctx.index_table:
            if I != J:
                for x in xis:
                    out.append(ExtTransvection(ctx, I, J, spec(x)))
    return out
