"""Command line interface: ``extpow <subcommand> ...``.

Output is compact, key-sorted JSON unless ``--pretty`` is given.  Exit codes:
0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb

from . import serialize as ser
from .exterior import ExtGen, ExteriorContext, ExtTransvection, classify_commutator, exterior_power, parse_index
from .exterior import ext_transvection_decomposition
from .invariants import (
    QuadricSystem,
    build_form,
    build_partition_ideal,
    build_pluecker,
    canonical_systems,
    congruence_membership,
    stabilizer_check,
)
from .level import (
    LevelGenerator,
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
)
from .linalg import Matrix, word_evaluate
from .rings import IntegersMod, PolynomialRing, RingSpec, ideal_generate
from .verify import DEFAULT_SEED, SUITES, report, run_suite


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------


def _ring(args, default="z") -> RingSpec:
    return RingSpec.parse(getattr(args, "ring", None) or default)


def _ctx(args) -> ExteriorContext:
    n, m = args.n, args.m
    if n is None or m is None:
        raise UsageError("--n and --m are required")
    if not 1 <= m <= n:
        raise UsageError(f"need 1 <= m <= n, got n={n}, m={m}")
    return ExteriorContext(n, m)


def _index(ctx, text, flag):
    try:
        idx = parse_index(text)
    except ValueError:
        raise UsageError(f"{flag}: cannot parse index list {text!r}")
    if len(idx) != ctx.m or len(set(idx)) != ctx.m or not all(1 <= x <= ctx.n for x in idx):
        raise UsageError(f"{flag}: expected {ctx.m} distinct indices in 1..{ctx.n}, got {text!r}")
    return tuple(sorted(idx))


def _pair(ctx, text, flag):
    if ":" not in text:
        raise UsageError(f"{flag}: expected I:J, got {text!r}")
    a, b = text.split(":", 1)
    return _index(ctx, a, flag), _index(ctx, b, flag)


def _position(ctx, v, flag):
    if v is None or not 1 <= v <= ctx.n:
        raise UsageError(f"{flag}: expected an index in 1..{ctx.n}")
    return v


def _elem(spec, text, default):
    if text is None:
        if isinstance(spec, PolynomialRing) and default in spec.variables:
            return spec.var(default)
        return spec(1)
    return ser.parse_element(spec, text)


def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _load_matrix(args, spec=None):
    if not args.matrix:
        raise UsageError("--matrix is required")
    obj = _read_json(args.matrix)
    if isinstance(obj, list):
        obj = {"rows": obj}
    if spec is None and "ring" not in obj:
        spec = _ring(args)
    return matrix_from(obj, spec), obj


def matrix_from(obj, spec):
    if spec is None:
        return ser.matrix_from_json(obj)
    return ser.matrix_from_json(obj, spec)


def _infer_ctx(args, N, obj):
    n = args.n if args.n is not None else obj.get("n")
    m = args.m if args.m is not None else obj.get("m")
    if n is not None and m is not None:
        ctx = ExteriorContext(n, m)
        if ctx.N != N:
            raise UsageError(f"matrix is {N}x{N} but C({n},{m}) = {ctx.N}")
        return ctx
    cands = [(a, b) for a in range(2, N + 2) for b in range(2, a // 2 + 1) if comb(a, b) == N]
    if len(cands) != 1:
        raise UsageError(f"cannot infer (n, m) from size {N}; pass --n and --m")
    return ExteriorContext(*cands[0])


# -- output ------------------------------------------------------------------


def _emit(args, obj, text=None):
    if args.pretty and text is not None:
        print(text)
    else:
        print(ser.dumps(obj))


def _matrix_text(M: Matrix) -> str:
    cells = [[str(M.spec.elem(x)) for x in row] for row in M.rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


# -- subcommands -------------------------------------------------------------


def cmd_power(args):
    ctx = _ctx(args)
    g, _ = _load_matrix(args, _ring(args) if args.ring else None)
    if g.nrows != ctx.n or g.ncols != ctx.n:
        raise UsageError(f"expected an {ctx.n}x{ctx.n} matrix, got {g.nrows}x{g.ncols}")
    img = exterior_power(ctx, g)
    _emit(args, ser.matrix_to_json(img), _matrix_text(img))


def cmd_transvection(args):
    ctx = _ctx(args)
    spec = _ring(args, "poly")
    i, j = _position(ctx, args.i, "--i"), _position(ctx, args.j, "--j")
    if i == j:
        raise UsageError("--i and --j must differ")
    xi = _elem(spec, args.xi, "xi")
    w = ext_transvection_decomposition(ctx, i, j, xi)
    factors = [str(f) for f in w.letters()]
    out = {"n": ctx.n, "m": ctx.m, "i": i, "j": j, "factors": factors, "word": ser.word_to_json(w)}
    _emit(args, out, "*".join(factors) if factors else "e")


def cmd_commutator(args):
    ctx = _ctx(args)
    spec = _ring(args, "poly")
    I, J = _index(ctx, args.I, "--I"), _index(ctx, args.J, "--J")
    if I == J:
        raise UsageError("--I and --J must differ")
    i, j = _position(ctx, args.i, "--i"), _position(ctx, args.j, "--j")
    if i == j:
        raise UsageError("--i and --j must differ")
    t = ExtTransvection(ctx, I, J, _elem(spec, args.xi, "xi"))
    zeta = _elem(spec, args.zeta, "zeta")
    # --i a --j b names the generator /\^m t_{a,b}(zeta)
    res = classify_commutator(ctx, t, j, i, zeta)
    out = {"kind": res.kind, "lhs": f"[{t}, {ExtGen(ctx, i, j, zeta)}]"}
    if res.kind == "irreducible":
        out["matrix"] = ser.matrix_to_json(res.matrix)
    else:
        out["factors"] = [str(f) for f in res.factors]
    _emit(args, out, f"{out['lhs']} = {res}")


def cmd_level(args):
    ctx = _ctx(args)
    spec = _ring(args)
    gens = []
    for text in args.gen or []:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"--gen expects I:J:xi, got {text!r}")
        I, J = _index(ctx, parts[0], "--gen"), _index(ctx, parts[1], "--gen")
        gens.append(LevelGenerator(ctx, I, J, ser.parse_element(spec, parts[2])))
    A = compute_level(ctx, gens, spec)
    out = {"ring": str(spec), "generators": [ser.elem_to_json(g) for g in A.generators]}
    if A.normal_form is not None:
        out["normal_form"] = ser.elem_to_json(A.normal_form)
    _emit(args, out, f"A = {A}")


def _derivation_out(args, d):
    v = validate_derivation(d)
    out = {"derivation": ser.derivation_to_json(d), "valid": v.ok}
    if not v.ok:
        out["error"] = {"step": v.step, "message": v.message}
    text = d.transcript() + f"\nvalid: {v.ok}" + ("" if v.ok else f" (step {v.step}: {v.message})")
    _emit(args, out, text)


def cmd_witness(args):
    ctx = _ctx(args)
    spec = _ring(args, "poly")
    kind = args.kind
    xi = _elem(spec, args.xi, "xi")
    if kind in ("equalize", "lower"):
        if not args.frm or not args.to:
            raise UsageError("--from and --to are required")
        frm, to = _pair(ctx, args.frm, "--from"), _pair(ctx, args.to, "--to")
        fn = equalize_witness if kind == "equalize" else lower_height_witness
        return _derivation_out(args, fn(ctx, frm, to, xi))
    if kind == "raise":
        if args.k is None:
            raise UsageError("--k is required")
        zeta, zeta1 = _elem(spec, args.zeta, "zeta"), _elem(spec, args.zeta1, "zeta1")
        return _derivation_out(args, raise_height_witness(ctx, args.k, xi, zeta, zeta1, side=args.side))
    if kind == "zfactor":
        I, J = _index(ctx, args.I, "--I"), _index(ctx, args.J, "--J")
        z = RelativeGenerator(ctx, I, J, xi, _elem(spec, args.zeta, "zeta"))
        items = relative_generator_factorization(ctx, z)
        w = factorization_word(items)
        exact = word_evaluate(w, spec) == z.matrix()
        out = {
            "items": [
                {"label": it.label, "base": str(it.base), "conjugator": None if it.conjugator is None else str(it.conjugator)}
                for it in items
            ],
            "exact": exact,
            "conjugators_elementary": conjugators_in_elementary(items),
        }
        text = "\n".join(
            f"{it.label:<16} {it.base}" + ("" if it.conjugator is None else f"  conjugated by {it.conjugator}")
            for it in items
        )
        return _emit(args, out, text + f"\nexact: {exact}")
    if kind == "perfect":
        if args.I and args.J:
            g = ExtTransvection(ctx, _index(ctx, args.I, "--I"), _index(ctx, args.J, "--J"), xi)
        elif args.i is not None and args.j is not None:
            g = ExtGen(ctx, _position(ctx, args.i, "--i"), _position(ctx, args.j, "--j"), _elem(spec, args.zeta, "zeta"))
        else:
            raise UsageError("perfect needs --I/--J or --i/--j")
        w = perfectness_witness(ctx, g)
        exact = word_evaluate(w, spec) == g.matrix()
        out = {"target": str(g), "witness": ser.word_to_json(w), "exact": exact}
        return _emit(args, out, f"{g} = {w}\nexact: {exact}")
    raise UsageError(f"unknown witness kind {kind!r}")


def _poly_system_out(args, obj, text):
    _emit(args, obj, text)


def cmd_form(args):
    ctx = _ctx(args)
    f = build_form(ctx, _ring(args))
    _emit(args, ser.poly_to_json(f), str(f))


def cmd_pluecker(args):
    ctx = _ctx(args)
    spec = _ring(args)
    sys_ = build_partition_ideal(ctx, spec) if args.partition else build_pluecker(ctx, spec, args.alternating)
    _emit(args, ser.system_to_json(sys_), "\n".join(map(str, sys_.generators)) or "(no generators)")


def _systems(kind, ctx, spec):
    if kind == "form":
        return build_form(ctx, spec)
    if kind == "pluecker":
        return build_pluecker(ctx, spec)
    if kind == "partition":
        return build_partition_ideal(ctx, spec)
    return canonical_systems(ctx, spec)


def cmd_stab(args):
    g, obj = _load_matrix(args, _ring(args) if args.ring else None)
    if g.nrows != g.ncols:
        raise UsageError("matrix must be square")
    ctx = _infer_ctx(args, g.nrows, obj)
    rep = stabilizer_check(g, _systems(args.system, ctx, g.spec))
    out = {"member": rep.member, "n": ctx.n, "m": ctx.m, "system": args.system}
    if rep.multiplier is not None:
        out["multiplier"] = ser.elem_to_json(rep.multiplier)
    if rep.failing_generator is not None:
        out["failing_generator"] = rep.failing_generator
    if rep.direction is not None:
        out["direction"] = rep.direction
    text = f"member: {rep.member}" + ("" if rep.multiplier is None else f"  multiplier: {rep.multiplier}")
    _emit(args, out, text)


def cmd_congr(args):
    g, obj = _load_matrix(args, _ring(args) if args.ring else None)
    if not isinstance(g.spec, IntegersMod) and str(g.spec) != "z":
        raise UsageError("congruence test needs a ring z or zmod:k")
    ctx = _infer_ctx(args, g.nrows, obj)
    A = ideal_generate(g.spec, [args.mod])
    ok = congruence_membership(ctx, g, A)
    _emit(args, {"member": ok, "ideal": str(A), "n": ctx.n, "m": ctx.m}, f"member: {ok}  (mod {A})")


def cmd_verify(args):
    results = run_suite(args.suite, args.seed, log=sys.stderr)
    out = report(results, require_coverage=args.suite == "all")
    out["seed"] = args.seed
    if args.pretty:
        lines = []
        for s in out["suites"]:
            lines.append(f"{s['suite']}: {'ok' if s['ok'] else 'FAILED'}")
            for label, c in s["checks"].items():
                lines.append(f"  {label:<55} {c['passed']:>6}/{c['total']}")
            lines += [f"  ! {f}" for f in s["failures"]]
        if "coverage" in out:
            cov = out["coverage"]
            lines.append(f"coverage: {cov['operations'] - len(cov['missing'])}/{cov['operations']} operations")
        lines.append("all ok" if out["ok"] else "FAILURES")
        print("\n".join(lines))
    else:
        print(ser.dumps(out))
    return 0 if out["ok"] else 1


# -- parser ------------------------------------------------------------------


def _common(p, ring=True, nm=True):
    if ring:
        p.add_argument("--ring", help="z, zmod:k, fp:p or poly:VARS@BASE")
    if nm:
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extpow", description="Exterior powers of GL_n over commutative rings.")
    parser.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power", help="image of a matrix in GL_N")
    _common(p)
    p.add_argument("--matrix", help="JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("transvection", help="factors of the image of t_{i,j}(xi)")
    _common(p)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--xi")
    p.set_defaults(func=cmd_transvection)

    p = sub.add_parser("commutator", help="[t_{I,J}(xi), /\\^m t_{i,j}(zeta)]")
    _common(p)
    p.add_argument("--I", required=True)
    p.add_argument("--J", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--xi")
    p.add_argument("--zeta")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("level", help="level ideal of a set of transvections")
    _common(p)
    p.add_argument("--gen", action="append", metavar="I:J:XI")
    p.set_defaults(func=cmd_level)

    p = sub.add_parser("witness", help="derivations and factorizations")
    p.add_argument("kind", choices=["equalize", "raise", "lower", "zfactor", "perfect"])
    _common(p)
    p.add_argument("--from", dest="frm", metavar="I:J")
    p.add_argument("--to", metavar="I:J")
    p.add_argument("--I")
    p.add_argument("--J")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--side", choices=["col", "row"], default="col")
    p.add_argument("--xi")
    p.add_argument("--zeta")
    p.add_argument("--zeta1")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("form", help="the invariant form (m divides n)")
    _common(p)
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("pluecker", help="Pluecker quadrics (or the partition ideal)")
    _common(p)
    p.add_argument("--alternating", action="store_true")
    p.add_argument("--partition", action="store_true", help="emit the partition ideal instead")
    p.set_defaults(func=cmd_pluecker)

    p = sub.add_parser("stab", help="stabilizer membership of a matrix")
    _common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--system", choices=["form", "pluecker", "partition", "canonical"], default="canonical")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("congr", help="membership of g mod A in the image over R/A")
    _common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--mod", type=int, required=True)
    p.set_defaults(func=cmd_congr)

    p = sub.add_parser("verify", help="run the bundled verification suites")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        rc = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"extpow: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, json.JSONDecodeError, OSError) as exc:
        print(f"extpow: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
