"""Command-line front end.

Exit codes: 0 pass, 1 validation or comparison failure, 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from typing import List, Optional

from .errors import ParseError, SemitoricError
from .ingredients import isomorphic, validate
from .sti import UnknownFieldWarning, dumps, parse

OK, FAIL, PARSE = 0, 1, 2


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, report: dict, lines: List[str]):
        if self.as_json:
            print(json.dumps(report, indent=2, sort_keys=True))
        else:
            for line in lines:
                print(line)


def _load(path: str, lenient: bool):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnknownFieldWarning)
        parsed = parse(text, lenient)
    for msg in parsed.warnings:
        print(f"warning: {path}: {msg}", file=sys.stderr)
    return parsed.ingredients


def cmd_validate(args, out: _Out) -> int:
    L = _load(args.file, args.lenient)
    rep = validate(L)
    out.emit({"file": args.file, **rep.as_dict()}, [f"valid: {str(rep.ok).lower()}", str(rep)])
    return OK if rep.ok else FAIL


def cmd_canonical(args, out: _Out) -> int:
    from .weighted import canonical_form

    L = _load(args.file, args.lenient)
    rep = validate(L)
    if not rep:
        out.emit({"file": args.file, **rep.as_dict()}, ["valid: false", str(rep)])
        return FAIL
    C = L.with_polygon(canonical_form(L.polygon))
    text = dumps(C)
    out.emit({"file": args.file, "canonical": json.loads(text)}, [text.rstrip("\n")])
    return OK


def cmd_compare(args, out: _Out) -> int:
    A = _load(args.file_a, args.lenient)
    B = _load(args.file_b, args.lenient)
    bad = [(p, r) for p, r in ((args.file_a, validate(A)), (args.file_b, validate(B))) if not r]
    if bad:
        lines = ["isomorphic: false"] + [f"{p} is invalid:\n{r}" for p, r in bad]
        out.emit({"isomorphic": False, "invalid": {p: r.as_dict() for p, r in bad}}, lines)
        return FAIL
    same = isomorphic(A, B)
    out.emit({"isomorphic": same}, [f"isomorphic: {str(same).lower()}"])
    return OK if same else FAIL


def _window(values) -> Optional[tuple]:
    if values is None:
        return None
    try:
        return tuple(Fraction(v) for v in values)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed window {values!r}") from None


def _summary_lines(s: dict) -> List[str]:
    return [f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in s.items()]


def cmd_atlas(args, out: _Out) -> int:
    from .atlas import build_atlas, unfold_cuts

    L = _load(args.file, args.lenient)
    rep = validate(L)
    if not rep:
        out.emit({"file": args.file, **rep.as_dict()}, ["valid: false", str(rep)])
        return FAIL
    A = build_atlas(L, window=_window(args.window))
    summary = A.summary()
    summary["cut_unfolds"] = [{"chart": c.id, "cut": c.cut, "unfolded": c.unfolded} for c in unfold_cuts(L, A.charts)]
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            json.dump(A.certificate(), fh, indent=1)
            fh.write("\n")
    out.emit(summary, _summary_lines(summary))
    return OK if A.ok else FAIL


def cmd_recheck(args, out: _Out) -> int:
    from .atlas import recheck

    with open(args.certificate, encoding="utf-8") as fh:
        text = fh.read()
    try:
        cert = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    try:
        rep = recheck(cert)
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed certificate: {e}") from None
    lines = [f"recheck: {'pass' if rep.ok else 'fail'}"] + [f"problem: {p}" for p in rep.problems]
    out.emit({"ok": rep.ok, "problems": rep.problems, "summary": rep.summary}, lines)
    return OK if rep.ok else FAIL


def cmd_render(args, out: _Out) -> int:
    from .svg import render_svg

    L = _load(args.file, args.lenient)
    A = None
    if args.atlas:
        from .atlas import build_atlas

        A = build_atlas(L, window=_window(args.window))
    svg = render_svg(L, A)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return OK


def cmd_taylor(args, out: _Out) -> int:
    import numpy as np

    from .taylor import random_series, roundtrip

    rng = np.random.default_rng(args.seed)
    worst, closed = 0.0, 0.0
    for _ in range(args.trials):
        S = random_series(rng, args.order)
        _, err, ex = roundtrip(S, args.radius, args.order)
        worst, closed = max(worst, err), max(closed, ex.closedness_residual)
    ok = worst < args.tolerance
    report = {
        "order": args.order,
        "radius": args.radius,
        "seed": args.seed,
        "trials": args.trials,
        "max_coefficient_error": worst,
        "closedness_residual": closed,
        "ok": ok,
    }
    out.emit(report, [f"max coefficient error: {worst:.3e}", f"closedness residual: {closed:.3e}", f"pass: {str(ok).lower()}"])
    return OK if ok else FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subparser from resetting a flag given before the command
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    common.add_argument(
        "--lenient", action="store_true", default=argparse.SUPPRESS, help="warn on unknown fields instead of failing"
    )

    p = argparse.ArgumentParser(prog="semitoric", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the five items of an ingredient file")
    s.add_argument("file")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("canonical", parents=[common], help="print the canonical orbit representative")
    s.add_argument("file")
    s.set_defaults(run=cmd_canonical)

    s = sub.add_parser("compare", parents=[common], help="decide isomorphism of two ingredient files")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.set_defaults(run=cmd_compare)

    s = sub.add_parser("atlas", parents=[common], help="build and check an integral affine atlas")
    s.add_argument("file")
    s.add_argument("--window", nargs=4, metavar=("X0", "X1", "Y0", "Y1"))
    s.add_argument("--certificate", metavar="OUT")
    s.set_defaults(run=cmd_atlas)

    s = sub.add_parser("recheck", parents=[common], help="re-verify an atlas certificate")
    s.add_argument("certificate")
    s.set_defaults(run=cmd_recheck)

    s = sub.add_parser("render", parents=[common], help="draw an ingredient file as SVG")
    s.add_argument("file")
    s.add_argument("--atlas", action="store_true", help="overlay chart boxes")
    s.add_argument("--window", nargs=4, metavar=("X0", "X1", "Y0", "Y1"))
    s.add_argument("-o", "--output", metavar="OUT")
    s.set_defaults(run=cmd_render)

    s = sub.add_parser("taylor-roundtrip", parents=[common], help="synthesize and re-extract random series")
    s.add_argument("--order", type=int, default=4)
    s.add_argument("--radius", type=float, default=0.1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--tolerance", type=float, default=1e-8)
    s.set_defaults(run=cmd_taylor)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.lenient = getattr(args, "lenient", False)
    out = _Out(args.json)
    try:
        return args.run(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return PARSE
    except SemitoricError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
