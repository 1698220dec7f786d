"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 mathematical
failure (nullspace dimension, reconstruction, certification).
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import exprdb, interp, invariants, roots
from .exactnum import format_rational, parse_rational
from .exterior import (HypercubeTensor, Multivector, embed_hypercube, format_tensor, load_tensor,
                       project_to_hypercube, symmetrize)
from .interp import InterpolationError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MATH = 0, 1, 2, 3

log = logging.getLogger("discforge")

# CLI names for interpolation problems
INTERP_ALIASES = {"gr39": "gr39", "gr48": "gr48", "cube2222": "cube2222", "hd2222": "cube2222"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # so that coordinates like -1/2 are not taken for options
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def data_dir() -> Path | None:
    env = os.environ.get("DISCFORGE_DATA")
    return Path(env) if env else None


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _tensor_for_family(family: str, path: str) -> Multivector:
    t = load_tensor(path)
    n, k = invariants.FAMILY_FORMATS[family]
    if not isinstance(t, Multivector) or (t.n, t.k) != (n, k):
        raise UsageError(f"{family} needs a 'wedge {n} {k}' tensor file")
    return t


def _parse_grouping(text: str) -> list[list[int]]:
    try:
        return [[int(x) for x in block.split(",")] for block in text.split()]
    except ValueError:
        raise UsageError(f"bad grouping {text!r}; expected e.g. '1,5 2,6 3,7 4,8'") from None


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(args) -> int:
    t = _tensor_for_family(args.family, args.tensor)
    vals = invariants.trace_invariants(args.family, t)
    print(vals.format())
    if args.family == "gr36":
        tr = invariants.raw_traces("gr36", t, [1])[1]
        print(f"tr(A) = {format_rational(tr)}" + ("" if tr == 0 else "  (expected 0)"))
        if tr != 0:
            return EXIT_MATH
    return EXIT_OK


def _gr48_expression(path: str | None) -> exprdb.InvariantExpression:
    candidates = [Path(path)] if path else []
    if not path and data_dir():
        candidates.append(data_dir() / "gr48_discriminant.txt")
    for c in candidates:
        if c.exists():
            return exprdb.load(c)
    raise FileNotFoundError(
        "the Gr(4,8) discriminant expression is not bundled; pass --expr FILE, or place "
        "gr48_discriminant.txt in $DISCFORGE_DATA (produce it with `discforge interpolate gr48 "
        "--primes N --shards DIR` followed by `discforge lift gr48 DIR --out FILE`)")


def discriminant_value(name: str, t, expr_path: str | None = None) -> Fraction:
    if name in ("delta222", "gr36_dual", "binary_cubic_disc"):
        poly = exprdb.builtin(name)
        if name == "binary_cubic_disc":
            if not isinstance(t, HypercubeTensor) or t.shape != (2, 2, 2):
                raise UsageError("binary_cubic_disc needs a 'cube 2 2 2' tensor")
            s = symmetrize(t)
            return poly.evaluate({"s" + "".join(map(str, k)): v for k, v in s.items()})
        return poly.evaluate_tensor(t)
    if name == "gr39":
        if not isinstance(t, Multivector) or (t.n, t.k) != (9, 3):
            raise UsageError("gr39 needs a 'wedge 9 3' tensor")
        return exprdb.builtin("gr39_discriminant").evaluate(invariants.trace_invariants("gr39", t))
    if name == "hd2222":
        if not isinstance(t, HypercubeTensor) or t.shape != (2, 2, 2, 2):
            raise UsageError("hd2222 needs a 'cube 2 2 2 2' tensor")
        vals = invariants.trace_invariants("gr48", embed_hypercube(t, roots.GR48_PAIRS))
        return exprdb.builtin("hd2222").evaluate(vals)
    if name == "gr48":
        if not isinstance(t, Multivector) or (t.n, t.k) != (8, 4):
            raise UsageError("gr48 needs a 'wedge 8 4' tensor")
        expr = _gr48_expression(expr_path)
        return expr.evaluate(invariants.trace_invariants("gr48", t))
    raise UsageError(f"unknown discriminant {name!r}")


def cmd_discriminant(args) -> int:
    t = load_tensor(args.tensor)
    if args.expr and args.name != "gr48":
        expr = exprdb.load(args.expr)
        family = {"gr39": "gr39", "hd2222": "gr48"}.get(args.name)
        if family is None:
            raise UsageError("--expr applies to invariant expressions (gr39, hd2222, gr48)")
        if args.name == "hd2222":
            t = embed_hypercube(t, roots.GR48_PAIRS)
        value = expr.evaluate(invariants.trace_invariants(family, t))
    else:
        value = discriminant_value(args.name, t, args.expr)
    print(format_rational(value))
    return EXIT_OK


def _primes(args) -> list[int]:
    if args.prime:
        return [int(p) for p in args.prime]
    return interp.primes_for(args.primes or 1)


def cmd_interpolate(args) -> int:
    name = INTERP_ALIASES.get(args.family)
    if name is None:
        raise UsageError(f"cannot interpolate {args.family!r}; choose from {sorted(INTERP_ALIASES)}")
    mode = args.mode or ("prime" if (args.prime or args.primes or name == "gr48") else "rational")
    if mode == "rational":
        res = interp.interpolate(name, "rational", seed=args.seed, box=args.box,
                                 oversample=args.oversample, workers=args.workers)
        _emit(res.as_expression().format(), args.out)
        return EXIT_OK
    shard_dir = Path(args.shards) if args.shards else (data_dir() / "shards" / name if data_dir() else None)
    results = interp.run_primes(name, _primes(args), shard_dir, seed=args.seed, box=args.box,
                                oversample=args.oversample)
    for r in results:
        log.info("prime %d done", r.prime)
    if shard_dir is None:
        _emit("".join(f"{r.prime}\n" + "\n".join(map(str, r.residues)) + "\n" for r in results),
              args.out)
    else:
        print(f"{len(results)} shard(s) in {shard_dir}")
    return EXIT_OK


def cmd_lift(args) -> int:
    name = INTERP_ALIASES.get(args.family)
    if name is None:
        raise UsageError(f"unknown family {args.family!r}")
    shards = interp.load_shards(Path(args.shards))
    res = interp.lift_and_certify(name, shards, seed=args.seed, certify_box=args.certify_box)
    _emit(res.as_expression().format(), args.out)
    verdict = "certified" if res.certified else "NOT certified"
    print(f"{verdict}: {len(shards)} primes, modulus {len(str(res.details['modulus']))} digits",
          file=sys.stderr)
    return EXIT_OK if res.certified else EXIT_MATH


def cmd_certify(args) -> int:
    """Exact check that an expression vanishes on fresh dual points and not on generic ones."""
    name = INTERP_ALIASES.get(args.family)
    if name is None:
        raise UsageError(f"unknown family {args.family!r}")
    expr = exprdb.load(args.expr) if args.expr else exprdb.builtin(
        {"gr39": "gr39_discriminant", "cube2222": "hd2222"}.get(name) or _missing_gr48())
    rng = random.Random(args.seed)
    dual = [interp.sample_dual_point(name, rng, args.box) for _ in range(args.points)]
    generic = [interp.sample_generic_point(name, rng, args.box) for _ in range(2)]
    bad = [p for p, v in zip(dual, interp.invariant_rows(name, dual)) if expr.evaluate(v) != 0]
    zero_generic = [p for p, v in zip(generic, interp.invariant_rows(name, generic)) if expr.evaluate(v) == 0]
    if bad or zero_generic:
        print(f"FAILED: {len(bad)} dual points off the hypersurface, "
              f"{len(zero_generic)} generic points on it")
        return EXIT_MATH
    print(f"ok: vanishes at {len(dual)} dual points, nonzero at {len(generic)} generic points")
    return EXIT_OK


def _missing_gr48():
    raise FileNotFoundError("no bundled gr48 expression; pass --expr FILE")


def cmd_enumerate(args) -> int:
    degrees = [int(x) for x in args.degrees.replace(",", " ").split()]
    basis = interp.enumerate_monomials(degrees, args.total)
    if args.list:
        for exp in basis.exponents:
            print(" ".join(map(str, exp)))
    print(len(basis))
    return EXIT_OK


def cmd_project(args) -> int:
    t = load_tensor(args.tensor)
    if not isinstance(t, Multivector):
        raise UsageError("project needs a 'wedge n k' tensor")
    grouping = _parse_grouping(args.grouping)
    _emit(format_tensor(project_to_hypercube(t, grouping)), args.out)
    return EXIT_OK


def cmd_semisimple(args) -> int:
    coords = [parse_rational(c) for c in args.coords]
    try:
        t = roots.semisimple_tensor(args.family, coords)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(format_tensor(t), args.out)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    try:
        cal = invariants.calibrate(args.family, mode=args.mode, seed=args.seed)
    except invariants.CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    directory = Path(args.out) if args.out else data_dir()
    path = invariants.save_calibration(cal, directory)
    print(cal.format(), end="")
    print(f"written to {path}", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    """A few fast end-to-end checks with known answers."""
    checks = []
    checks.append(("monomials (12,18,24,30;120) = 28",
                   len(interp.enumerate_monomials((12, 18, 24, 30), 120)) == 28))
    proj = exprdb.substitute(exprdb.builtin("gr36_dual"), exprdb.projection_gr36_to_222())
    checks.append(("gr36 dual projects to the 2x2x2 hyperdeterminant", proj == exprdb.builtin("delta222")))
    sym = exprdb.substitute(exprdb.builtin("delta222"), exprdb.symmetrization_222())
    checks.append(("symmetrized 2x2x2 hyperdeterminant is the binary cubic discriminant",
                   sym == exprdb.builtin("binary_cubic_disc")))
    y = [3, -1, 4, 1, -5, 9, 2]
    vals = invariants.trace_invariants("gr48", roots.semisimple_tensor("gr48", y))
    checks.append(("gr48 trace invariants match root power sums",
                   vals.values == roots.family_invariants("gr48", y)))
    z = [1, 2, 3, 0]
    checks.append(("gr39 discriminant vanishes when a coordinate is zero",
                   discriminant_value("gr39", roots.semisimple_tensor("gr39", z)) == 0))
    for label, ok in checks:
        print(("PASS " if ok else "FAIL ") + label)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_MATH


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="discforge", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, sampling=False):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output file (default: stdout)")
        if sampling:
            sp.add_argument("--box", type=int, default=interp.DEFAULT_BOX)
            sp.add_argument("--oversample", type=float, default=interp.DEFAULT_OVERSAMPLE)
            sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("invariants", help="calibrated fundamental invariants of a tensor")
    sp.add_argument("family", choices=sorted(invariants.FAMILY_FORMATS))
    sp.add_argument("tensor")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("discriminant", help="evaluate a discriminant at a tensor")
    sp.add_argument("name", choices=["gr39", "gr48", "hd2222", "delta222", "gr36_dual",
                                     "binary_cubic_disc"])
    sp.add_argument("tensor")
    sp.add_argument("--expr", help="invariant expression file")
    sp.set_defaults(func=cmd_discriminant)

    sp = sub.add_parser("interpolate", help="interpolate a discriminant in fundamental invariants")
    sp.add_argument("family")
    sp.add_argument("--mode", choices=["rational", "prime"])
    sp.add_argument("--prime", action="append", help="explicit prime (repeatable)")
    sp.add_argument("--primes", type=int, help="use the first N primes above 1000")
    sp.add_argument("--shards", help="shard directory (resumable)")
    common(sp, sampling=True)
    sp.set_defaults(func=cmd_interpolate)

    sp = sub.add_parser("lift", help="CRT-lift and certify per-prime shards")
    sp.add_argument("family")
    sp.add_argument("shards")
    sp.add_argument("--certify-box", type=int, default=3)
    common(sp)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("certify", help="check an expression on fresh dual and generic points")
    sp.add_argument("family")
    sp.add_argument("--expr")
    sp.add_argument("--points", type=int, default=10)
    sp.add_argument("--box", type=int, default=interp.DEFAULT_BOX)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("enumerate-monomials", help="monomials of a weighted degree")
    sp.add_argument("degrees", help="generator degrees, e.g. '12,18,24,30'")
    sp.add_argument("total", type=int)
    sp.add_argument("--list", action="store_true")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("project", help="project a multivector onto a hypercube format")
    sp.add_argument("tensor")
    sp.add_argument("--grouping", required=True, help="blocks, e.g. '1,5 2,6 3,7 4,8'")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("semisimple", help="write the semi-simple tensor with given coordinates")
    sp.add_argument("family", choices=sorted(roots.FAMILIES))
    sp.add_argument("coords", nargs="+")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_semisimple)

    sp = sub.add_parser("calibrate", help="fit and store trace-invariant calibrations")
    sp.add_argument("family", choices=sorted(invariants.FAMILY_FORMATS))
    sp.add_argument("--mode", choices=["auto", "scalar", "triangular"], default="auto")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="directory (default: $DISCFORGE_DATA or the package data)")
    sp.set_defaults(func=cmd_calibrate)

    sp = sub.add_parser("selftest", help="quick end-to-end checks")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"discforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InterpolationError, invariants.CalibrationError) as exc:
        code = EXIT_DATA if "not calibrated" in str(exc) else EXIT_MATH
        print(f"discforge: {exc}", file=sys.stderr)
        return code
    except (OSError, ValueError, KeyError) as exc:
        print(f"discforge: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
