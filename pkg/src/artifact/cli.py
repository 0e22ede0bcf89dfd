"""Command-line entry point: verify-paper, bbf, grr-eval."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from . import mukai, scenarios
from .interring import ToddMode
from .lattice import ZeroVector
from .scenarios import ScenarioError, VerificationReport

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


def format_table(rep: VerificationReport, quiet: bool = False) -> str:
    rows = [s for s in rep.steps if not quiet or s.match is False]
    width = max([len(s.label) for s in rows] + [5])
    lines = []
    for s in rows:
        status = {True: "ok", False: "MISMATCH", None: "-"}[s.match]
        exp = "" if s.expected is None else f"  (expected {s.expected})"
        lines.append(f"{s.label:<{width}}  {s.computed}{exp}  [{status}]")
    lines += rep.notes
    n_bad = sum(1 for s in rep.steps if s.match is False)
    n_chk = sum(1 for s in rep.steps if s.match is not None)
    lines.append(f"{'PASS' if rep.overall else 'FAIL'}: {n_chk - n_bad}/{n_chk} checks matched ({rep.elapsed})")
    return "\n".join(lines)


def emit(rep: VerificationReport, fmt: str, quiet: bool) -> None:
    if fmt == "json":
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(format_table(rep, quiet))


def cmd_verify_paper(args) -> int:
    vectors = ("v1", "v2") if args.vector == "all" else (args.vector,)
    rep = scenarios.verify_all(vectors, args.todd_mode, args.glue)
    emit(rep, args.format, args.quiet)
    return EXIT_OK if rep.overall else EXIT_MISMATCH


_CLASS_RE = re.compile(r"^\s*\(\s*([^,()]+)\s*,\s*([^,()]+)\s*,\s*([^,()]+)\s*\)\s*(?:;\s*(\S+))?\s*$")


def parse_class(text: str, v: mukai.MukaiVector, glue_mode: str) -> mukai.GammaClass:
    """'(r,a,s);k' means the algebraic class (r, a h, s) plus k sigma; entries may be p/q."""
    m = _CLASS_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse class {text!r}; expected '(r,a,s);k'")
    try:
        r, a, s = (Fraction(x.strip()) for x in m.group(1, 2, 3))
        k = Fraction(m.group(4) or 0)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse class {text!r}; entries must be integers or p/q") from None
    b2 = [2 * t for t in (r, a, s)] + [2 * k]
    if any(t.denominator != 1 for t in b2):
        raise ValueError("entries must be multiples of 1/2")
    return mukai.GammaClass(v, mukai.MukaiVector(*(int(t) for t in b2[:3])), int(b2[3]), glue_mode)


def cmd_bbf(args) -> int:
    v = mukai.VECTORS[args.vector]
    c = parse_class(args.cls, v, args.glue)
    if c.is_zero():
        raise ZeroVector("zero class has no divisibility or component")
    mukai.check_membership(c)
    q = mukai.bbf_square(c)
    d = mukai.gamma_divisibility(c)
    out = {"class": str(c), "vector": args.vector, "square": q, "divisibility": d}
    try:
        key = mukai.component_key(c)
        out["component"] = list(key.component)
        out["multiple"] = key.multiple
    except mukai.NonPositive:
        out["component"] = None
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"class        {out['class']} in Gamma_{args.vector}")
        print(f"square       {q}")
        print(f"divisibility {d}")
        if out["component"] is None:
            print("component    none (square is not positive)")
        else:
            print(f"component    ({out['component'][0]},{out['component'][1]}) via multiple {out['multiple']}")
    return EXIT_OK


def cmd_grr_eval(args) -> int:
    t0 = time.perf_counter()
    sc = scenarios.load_scenario(args.file)
    res = scenarios.run_scenario(sc, args.todd_mode)
    rep = VerificationReport(list(res.steps), [f"WARNING  {w}" for w in res.warnings])
    rep.elapsed = f"{time.perf_counter() - t0:.3f}s"
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    emit(rep, args.format, args.quiet)
    return EXIT_OK if rep.overall else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Exact O'Grady-10 lattice and intersection computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, todd=True):
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--quiet", action="store_true", help="only print mismatches and notes")
        if todd:
            sp.add_argument("--todd-mode", choices=("paper", "standard"), default="paper")

    vp = sub.add_parser("verify-paper", help="run every golden computation")
    vp.add_argument("--vector", choices=("v1", "v2", "all"), default="all")
    vp.add_argument("--glue", choices=("algebraic", "full"), default="algebraic")
    common(vp)
    vp.set_defaults(func=cmd_verify_paper)

    bp = sub.add_parser("bbf", help="square, divisibility and component of a class in Gamma_v")
    bp.add_argument("--vector", choices=("v1", "v2"), required=True)
    bp.add_argument("--class", dest="cls", required=True, help="'(r,a,s);k' = (r, a h, s) + k sigma")
    bp.add_argument("--glue", choices=("algebraic", "full"), default="algebraic")
    bp.add_argument("--format", choices=("table", "json"), default="table")
    bp.set_defaults(func=cmd_bbf)

    gp = sub.add_parser("grr-eval", help="evaluate a scenario file")
    gp.add_argument("file")
    common(gp)
    gp.set_defaults(func=cmd_grr_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    args.todd_mode = ToddMode.parse(getattr(args, "todd_mode", "paper"))
    try:
        return args.func(args)
    except ScenarioError as e:
        print(f"error: scenario: {e}", file=sys.stderr)
    except mukai.NotInGamma as e:
        print(f"error: NotInGamma: {e}", file=sys.stderr)
    except ZeroVector as e:
        print(f"error: ZeroVector: {e}", file=sys.stderr)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
    except Exception as e:  # internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
