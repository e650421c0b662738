"""Command-line front end: ``conpat <subcommand> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 cap exceeded,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from conpat.algebra import TPoly
from conpat.analysis import (
    InsufficientN,
    asym_estimate,
    asym_rank,
    render_asym_table,
    wilf_classify,
)
from conpat.errors import CapExceeded, ConpatError
from conpat.overlap import overlap_maps
from conpat.permcore import AlphaSequence, PatternSet, brute_alpha, brute_C, parse_perm
from conpat.scheme import SchemeEvaluator, alpha_via_scheme, build_scheme
from conpat.tailfe import TailFEEvaluator, alpha_fast, build_tail_fe

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

ENGINES = ("naive", "scheme", "tailfe")


class Mismatch(Exception):
    pass


def _patterns(args) -> PatternSet:
    if getattr(args, "patterns_file", None):
        return PatternSet.parse(Path(args.patterns_file).read_text())
    if not args.patterns:
        raise ValueError("a pattern set is required (--patterns or --patterns-file)")
    return PatternSet.parse(args.patterns)


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _render_alpha(seq: AlphaSequence) -> str:
    if not seq.track:
        return ", ".join(str(v) for v in seq.values())
    return "\n".join(f"{n}: {TPoly.coerce(v)}" for n, v in enumerate(seq.entries) if n >= 1)


def count_with(engine: str, B: PatternSet, n: int, track: bool,
               cap: Optional[int] = None) -> AlphaSequence:
    if engine == "naive":
        return brute_alpha(B, n, track, cap)
    if engine == "scheme":
        return alpha_via_scheme(B, n, track)
    return alpha_fast(B, n, track)


def cmd_count(args) -> int:
    B = _patterns(args)
    seq = count_with(args.engine, B, args.n, args.track, args.brute_cap)
    _emit(args, _render_alpha(seq), seq.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    """All three engines on the same input, with the occurrence variable tracked."""
    B = _patterns(args)
    n = args.n
    kmax = args.k if args.k is not None else n
    scheme = build_scheme(B)
    fe = build_tail_fe(B, scheme)

    seqs = {
        "naive": brute_alpha(B, n, True, args.brute_cap),
        "scheme": alpha_via_scheme(B, n, True, scheme),
        "tailfe": alpha_fast(B, n, True, fe),
    }
    s_ev, f_ev = SchemeEvaluator(scheme, True), TailFEEvaluator(fe, True)
    cvals = {
        "naive": [brute_C(B, k, True, args.brute_cap) for k in range(1, kmax + 1)],
        "scheme": [s_ev.C(k) for k in range(1, kmax + 1)],
        "tailfe": [f_ev.C(k) for k in range(1, kmax + 1)],
    }

    rows, first_bad = [], None
    for label, table, start in (("alpha", seqs, 1), ("C", cvals, 1)):
        size = n if label == "alpha" else kmax
        for i in range(start, size + 1):
            vals = [TPoly.coerce(table[e][i] if label == "alpha" else table[e][i - 1]) for e in ENGINES]
            ok = all(v == vals[0] for v in vals)
            rows.append({"quantity": label, "index": i, "agree": ok,
                         "values": {e: v.to_json() for e, v in zip(ENGINES, vals)}})
            if not ok and first_bad is None:
                first_bad = (label, i, dict(zip(ENGINES, vals)))

    lines = [f"verify {B}  n <= {n}, k <= {kmax}"]
    for r in rows:
        mark = "agree" if r["agree"] else "MISMATCH"
        shown = TPoly.from_json(r["values"]["naive"])
        lines.append(f"  {r['quantity']:>5s}({r['index']:2d})  {mark:<8s}  {shown}")
    if first_bad is None:
        lines.append("all engines agree")
    _emit(args, "\n".join(lines), {"patterns": B.to_json(), "rows": rows, "all_agree": first_bad is None})
    if first_bad is not None:
        label, i, vals = first_bad
        detail = ", ".join(f"{e}={v}" for e, v in vals.items())
        print(f"mismatch at {label}({i}): {detail}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_scheme(args) -> int:
    sch = build_scheme(_patterns(args))
    _emit(args, sch.render(), sch.to_json())
    return EXIT_OK


def cmd_tail_fe(args) -> int:
    fe = build_tail_fe(_patterns(args))
    _emit(args, fe.render(avoid=not args.track), fe.to_json())
    return EXIT_OK


def cmd_overlaps(args) -> int:
    prof = overlap_maps(parse_perm(args.p1), parse_perm(args.p2))
    _emit(args, str(prof), prof.to_json())
    return EXIT_OK


def cmd_classify(args) -> int:
    report = wilf_classify(args.len, args.size, args.depth, args.recheck,
                           symmetry_images=args.symmetry_images)
    _emit(args, report.render(args.verbose), report.to_json())
    return EXIT_OK


def _report_warnings(caught) -> None:
    for w in caught:
        if issubclass(w.category, InsufficientN):
            print(f"warning: insufficient N: {w.message}", file=sys.stderr)


def cmd_asym(args) -> int:
    B = PatternSet.parse(args.pattern)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InsufficientN)
        est = asym_estimate(B, args.N, args.digits, args.aitken)
    _report_warnings(caught)
    _emit(args, f"{B}  gamma = {est.gamma_str}  rho = {est.rho_str}", est.to_json())
    return EXIT_OK


def cmd_asym_rank(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InsufficientN)
        rows = asym_rank(args.len, args.N, args.digits, args.aitken)
    _report_warnings(caught)
    _emit(args, render_asym_table(rows), [r.to_json() for r in rows])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conpat",
        description="Count permutations by consecutive pattern occurrences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    pats = argparse.ArgumentParser(add_help=False)
    pats.add_argument("--patterns", "-p", help='"2,1,4,3", "{123;321}" or "[[1,2,3],[3,2,1]]"')
    pats.add_argument("--patterns-file", help="file holding a JSON array of patterns")

    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--brute-cap", type=int, default=None,
                      help="largest length brute force may enumerate (default 10)")

    p = sub.add_parser("count", parents=[common, pats, caps], help="avoidance or occurrence counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--engine", choices=ENGINES, default="tailfe")
    p.add_argument("--track", action="store_true", help="track occurrences with t")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[common, pats, caps], help="cross-check all engines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None, help="largest cluster length checked (default n)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scheme", parents=[common, pats], help="cluster recurrence")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("tail-fe", parents=[common, pats], help="tail functional equation")
    p.add_argument("--track", action="store_true", help="render with the (t-1) factor")
    p.set_defaults(func=cmd_tail_fe)

    p = sub.add_parser("overlaps", parents=[common], help="overlap maps of two patterns")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("classify", parents=[common], help="Wilf-equivalence classes")
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--size", type=int, default=1)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--recheck", type=int, default=2,
                   help="extra depth for groups without a full certificate")
    p.add_argument("--symmetry-images", dest="symmetry_images", action=argparse.BooleanOptionalAction,
                   default=True, help="match certificates against symmetry images too")
    p.add_argument("--verbose", "-v", action="store_true", help="list singleton classes too")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("asym", parents=[common], help="growth constants of one pattern set")
    p.add_argument("--pattern", required=True)
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--aitken", action="store_true")
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("asym-rank", parents=[common], help="growth constants of all classes")
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--aitken", action="store_true")
    p.set_defaults(func=cmd_asym_rank)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConpatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
