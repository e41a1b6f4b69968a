"""JSON encodings of ring elements, matrices, words, derivations and polynomials."""

from __future__ import annotations

import ast
import json

from .exterior import ExtGen, ExteriorContext, ExtTransvection, WeightIndex
from .invariants import QuadricSystem, WeightPoly, weight_ring
from .level import Derivation, LevelGenerator, Step
from .linalg import GroupWord, Matrix, MatrixLetter, Transvection
from .rings import IntegersMod, PolynomialRing, RingElem, RingError, RingSpec


class FormatError(ValueError):
    pass


# -- elements ---------------------------------------------------------------


def elem_to_json(x: RingElem):
    spec = x.spec
    if isinstance(spec, PolynomialRing):
        return [
            {"monomial": list(e), "coeff": elem_to_json(RingElem(spec.base, c))}
            for e, c in sorted(x.payload.items(), reverse=True)
        ]
    return x.payload


def elem_from_json(spec: RingSpec, v) -> RingElem:
    if isinstance(spec, PolynomialRing):
        if isinstance(v, int):
            return spec(v)
        payload = {}
        for term in v:
            e = tuple(term["monomial"])
            if len(e) != spec.nvars:
                raise FormatError(f"monomial {e} has the wrong number of variables")
            c = elem_from_json(spec.base, term["coeff"]).payload
            if c:
                payload[e] = spec.base.add(payload.get(e, spec.base.zero()), c)
        return RingElem(spec, {e: c for e, c in payload.items() if c})
    if isinstance(v, str):
        return parse_element(spec, v)
    if not isinstance(v, int):
        raise FormatError(f"expected an integer, got {v!r}")
    return spec(v)


_BINOPS = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul"}


def parse_element(spec: RingSpec, text: str) -> RingElem:
    """Parse an arithmetic expression such as ``-2*xi*zeta^2 + 3`` into ``spec``."""
    text = str(text).strip().replace("^", "**")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise FormatError(f"cannot parse element {text!r}") from exc

    def ev(node) -> RingElem:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return spec(node.value)
        if isinstance(node, ast.Name):
            if isinstance(spec, PolynomialRing) and node.id in spec.variables:
                return spec.var(node.id)
            raise FormatError(f"unknown variable {node.id!r} in ring {spec}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise FormatError("exponents must be integer literals")
                return ev(node.left) ** node.right.value
            kind = _BINOPS.get(type(node.op))
            if kind is None:
                raise FormatError(f"unsupported operator in {text!r}")
            a, b = ev(node.left), ev(node.right)
            return a + b if kind == "add" else a - b if kind == "sub" else a * b
        raise FormatError(f"unsupported expression {text!r}")

    return ev(tree)


# -- matrices ---------------------------------------------------------------


def matrix_to_json(M: Matrix) -> dict:
    return {"ring": str(M.spec), "rows": [[elem_to_json(RingElem(M.spec, x)) for x in row] for row in M.rows]}


def matrix_from_json(obj, spec: RingSpec | None = None) -> Matrix:
    if spec is None:
        if "ring" not in obj:
            raise FormatError("matrix JSON needs a ring")
        spec = RingSpec.parse(obj["ring"])
    rows = obj["rows"]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise FormatError("matrix rows must be non-empty and rectangular")
    return Matrix(spec, [[elem_from_json(spec, v).payload for v in row] for row in rows])


# -- group words ------------------------------------------------------------


def _letter_to_json(letter):
    if isinstance(letter, Transvection):
        return {"kind": "t", "n": letter.size, "i": letter.i, "j": letter.j, "arg": elem_to_json(letter.arg)}
    if isinstance(letter, ExtTransvection):
        return {
            "kind": "ext_t",
            "n": letter.ctx.n,
            "m": letter.ctx.m,
            "I": str(letter.I),
            "J": str(letter.J),
            "arg": elem_to_json(letter.arg),
        }
    if isinstance(letter, ExtGen):
        return {
            "kind": "ext_gen",
            "n": letter.ctx.n,
            "m": letter.ctx.m,
            "i": letter.i,
            "j": letter.j,
            "arg": elem_to_json(letter.arg),
        }
    if isinstance(letter, MatrixLetter):
        out = {"kind": "matrix", "matrix": matrix_to_json(letter.mat)}
        if letter.inverted:
            out["inverted"] = True
        return out
    raise FormatError(f"cannot encode letter {letter!r}")


_ctx_cache: dict = {}


def _ctx(n, m):
    key = (n, m)
    if key not in _ctx_cache:
        _ctx_cache[key] = ExteriorContext(n, m)
    return _ctx_cache[key]


def _letter_from_json(obj, spec):
    kind = obj.get("kind")
    if kind == "t":
        return Transvection(obj["n"], obj["i"], obj["j"], elem_from_json(spec, obj["arg"]))
    if kind == "ext_t":
        ctx = _ctx(obj["n"], obj["m"])
        return ExtTransvection(ctx, WeightIndex(obj["I"]), WeightIndex(obj["J"]), elem_from_json(spec, obj["arg"]))
    if kind == "ext_gen":
        ctx = _ctx(obj["n"], obj["m"])
        return ExtGen(ctx, obj["i"], obj["j"], elem_from_json(spec, obj["arg"]))
    if kind == "matrix":
        return MatrixLetter(matrix_from_json(obj["matrix"], spec), bool(obj.get("inverted", False)))
    raise FormatError(f"unknown letter kind {kind!r}")


def word_to_json(w: GroupWord) -> dict:
    if w.op == "gen":
        return {"op": "gen", **_letter_to_json(w.args[0])}
    if w.op == "inv":
        return {"op": "inv", "arg": word_to_json(w.args[0])}
    if w.op == "prod":
        return {"op": "prod", "args": [word_to_json(a) for a in w.args]}
    return {"op": w.op, "x": word_to_json(w.args[0]), "y": word_to_json(w.args[1])}


def word_from_json(obj, spec: RingSpec) -> GroupWord:
    op = obj.get("op")
    if op == "gen":
        return GroupWord.gen(_letter_from_json(obj, spec))
    if op == "inv":
        return word_from_json(obj["arg"], spec).inv()
    if op == "prod":
        return GroupWord.prod(*[word_from_json(a, spec) for a in obj["args"]])
    if op in ("comm", "conj"):
        return GroupWord(op, word_from_json(obj["x"], spec), word_from_json(obj["y"], spec))
    raise FormatError(f"unknown word op {op!r}")


# -- derivations ------------------------------------------------------------


def _t_json(t):
    return {"I": str(t.I), "J": str(t.J), "arg": elem_to_json(t.arg)}


def _gen_json(g: LevelGenerator):
    return {"I": str(g.I), "J": str(g.J), "arg": elem_to_json(g.xi)}


def derivation_to_json(d: Derivation) -> dict:
    ring = None
    steps = []
    for s in d.steps:
        item = {"kind": s.kind}
        if s.refs:
            item["refs"] = list(s.refs)
        if s.given is not None:
            item["given"] = _gen_json(s.given)
            ring = ring or s.given.xi.spec
        if s.gen is not None:
            item["gen"] = {"i": s.gen.i, "j": s.gen.j, "arg": elem_to_json(s.gen.arg)}
            ring = ring or s.gen.arg.spec
        if s.claim is not None:
            item["claim"] = [_t_json(t) for t in s.claim]
        if s.note:
            item["note"] = s.note
        steps.append(item)
    if ring is None and d.conclusion is not None:
        ring = d.conclusion.xi.spec
    out = {"ring": str(ring) if ring else None, "n": d.ctx.n, "m": d.ctx.m, "steps": steps}
    if d.premise is not None:
        out["premise"] = _gen_json(d.premise)
    if d.conclusion is not None:
        out["conclusion"] = _gen_json(d.conclusion)
    out["unit"] = d.unit
    return out


def derivation_from_json(obj) -> Derivation:
    ctx = _ctx(obj["n"], obj["m"])
    spec = RingSpec.parse(obj["ring"]) if obj.get("ring") else None
    if spec is None:
        raise FormatError("derivation JSON needs a ring")

    def lg(o):
        return LevelGenerator(ctx, WeightIndex(o["I"]), WeightIndex(o["J"]), elem_from_json(spec, o["arg"]))

    steps = []
    for item in obj["steps"]:
        given = lg(item["given"]) if "given" in item else None
        gen = None
        if "gen" in item:
            g = item["gen"]
            gen = ExtGen(ctx, g["i"], g["j"], elem_from_json(spec, g["arg"]))
        claim = None
        if "claim" in item:
            claim = tuple(
                ExtTransvection(ctx, WeightIndex(c["I"]), WeightIndex(c["J"]), elem_from_json(spec, c["arg"]))
                for c in item["claim"]
            )
        steps.append(Step(item["kind"], tuple(item.get("refs", ())), given, gen, claim, item.get("note", "")))
    concl = lg(obj["conclusion"]) if obj.get("conclusion") else None
    premise = lg(obj["premise"]) if obj.get("premise") else None
    return Derivation(ctx, steps, concl, obj.get("unit", 1), "", premise)


# -- polynomials ------------------------------------------------------------


def poly_to_json(p: WeightPoly) -> dict:
    terms = []
    for idxs, c in p.terms():
        counts: dict = {}
        for I in idxs:
            counts[str(I)] = counts.get(str(I), 0) + 1
        terms.append({"monomial": [[k, v] for k, v in counts.items()], "coeff": elem_to_json(c)})
    return {
        "ring": str(p.base),
        "n": p.ctx.n,
        "m": p.ctx.m,
        "alternating": p.alternating,
        "terms": terms,
    }


def poly_from_json(obj) -> WeightPoly:
    ctx = _ctx(obj["n"], obj["m"])
    base = RingSpec.parse(obj["ring"])
    terms = []
    for t in obj["terms"]:
        idxs = []
        for label, e in t["monomial"]:
            idxs += [WeightIndex(label)] * int(e)
        terms.append((idxs, elem_from_json(base, t["coeff"])))
    return WeightPoly.from_terms(ctx, base, terms, bool(obj.get("alternating", False)))


def system_to_json(sys: QuadricSystem) -> dict:
    return {
        "provenance": sys.provenance,
        "degree": sys.degree,
        "n": sys.ctx.n,
        "m": sys.ctx.m,
        "generators": [poly_to_json(g) for g in sys.generators],
    }


def system_from_json(obj) -> QuadricSystem:
    ctx = _ctx(obj["n"], obj["m"])
    return QuadricSystem(ctx, [poly_from_json(g) for g in obj["generators"]], obj["degree"], obj["provenance"])


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
