# chaincalc/cli.py - Command-line front end
"""
chaincalc <subcommand> [options]

Exit codes: 0 success, 1 validation or verification failure, 2 parse or
usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import io
from .arcs import box_dimension_estimate, koch2_nest, koch2_polyline, ml_descending, ml_test, osgood_nest, segment_nest
from .chains import certified_containments, check_labelled_refinement, check_refinement, validate_descending
from .config import load_config, rational_setting, setting, setup_logging
from .construction import local_connectivity_witness, run_construction, verify_trace
from .errors import BudgetExhaustedError, ChainCalcError, FormatError
from .evaluation import evaluate_point, label_sequence
from .fixtures import bundled_adversaries
from .geometry import Point, Rect, Region, format_rational, parse_rational
from .svg import render_chains, render_trace, write_svg

logger = logging.getLogger("chaincalc.cli")


def parse_point(text: str) -> Point:
    parts = text.split(",")
    if len(parts) != 2:
        raise FormatError(f"expected x,y but got {text!r}")
    return Point(parse_rational(parts[0]), parse_rational(parts[1]))


def _rect_text(r: Rect) -> str:
    return (f"({format_rational(r.xlo)}, {format_rational(r.xhi)}) x "
            f"({format_rational(r.ylo)}, {format_rational(r.yhi)})")


#  Subcommands

def cmd_koch(args, cfg) -> int:
    nest = koch2_nest(args.depth, buffer=rational_setting(cfg, "koch", "buffer", default="1/8"),
                      max_shrinks=int(setting(cfg, "koch", "max_shrinks", default=6)))
    poly = koch2_polyline(args.depth + 1).polyline
    io.save_chains(args.out, nest, polyline=poly, meta={"kind": "koch2", "depth": args.depth})
    print(f"wrote {len(nest)} arc chains to {args.out}")
    if args.depth >= 1:
        slope = box_dimension_estimate(poly, 1, args.depth + 1)
        print(f"box-counting slope over scales 1..{args.depth + 1}: {float(slope):.3f}")
    return 0


def cmd_segment(args, cfg) -> int:
    nest = segment_nest(parse_point(args.a), parse_point(args.b), args.depth)
    io.save_labelled(args.out, label_sequence(nest), meta={"kind": "segment", "a": args.a, "b": args.b})
    print(f"wrote {len(nest)} labelled arc chains to {args.out}")
    return 0


def cmd_osgood(args, cfg) -> int:
    limit = int(setting(cfg, "osgood", "max_depth"))
    if args.depth > limit:
        raise FormatError(f"depth {args.depth} above osgood.max_depth = {limit}")
    nest = osgood_nest(args.k, args.depth)
    io.save_chains(args.out, nest, meta={"kind": "osgood", "k": args.k, "depth": args.depth})
    print(f"wrote {len(nest)} arc chains to {args.out}")
    return 0


def cmd_mltest(args, cfg) -> int:
    levels = ml_test(args.n, args.depth)
    for lv in levels:
        print(f"U_{lv.n}: {len(lv.rects)} rectangles, measure {format_rational(lv.measure)}")
    if not ml_descending(levels):
        print("levels are not descending", file=sys.stderr)
        return 1
    if args.out:
        io.save_ml_test(args.out, levels, args.depth)
    return 0


def cmd_eval(args, cfg) -> int:
    chains, _, labelled = io.load_chain_file(args.chains)
    report = validate_descending(chains, enforce_diam=False)
    if not report['valid']:
        for err in report['errors']:
            print(err, file=sys.stderr)
        return 1
    if labelled is None:
        labelled = label_sequence(chains)
    else:
        for j in range(len(labelled) - 1):
            if check_labelled_refinement(labelled[j + 1], labelled[j]) is None:
                print(f"labels do not refine at {j}", file=sys.stderr)
                return 1
    offset = int(setting(cfg, "evaluation", "inflation_offset", default=4))
    result = evaluate_point(labelled, parse_rational(args.x), args.prec, offset)
    print(f"depth {result.depth_used}: {_rect_text(result.enclosure)}")
    return 0


def cmd_refine(args, cfg) -> int:
    fine = io.load_chains(args.fine)[args.fine_level]
    coarse = io.load_chains(args.coarse)[args.coarse_level]
    rtype = check_refinement(fine, coarse)
    if rtype is None or not certified_containments(fine, coarse, rtype):
        print("no refinement type", file=sys.stderr)
        return 1
    print("type (" + ", ".join(str(s) for s in rtype.s) + ")")
    return 0


def cmd_construct(args, cfg) -> int:
    adversaries = io.load_adversaries(args.adversaries) if args.adversaries else bundled_adversaries()
    trace = run_construction(
        adversaries,
        args.stages if args.stages is not None else int(setting(cfg, "construction", "stages")),
        emax=args.emax if args.emax is not None else int(setting(cfg, "construction", "emax")),
        comb_depth=args.comb_depth if args.comb_depth is not None else int(setting(cfg, "construction", "comb_depth")),
        budget=args.budget if args.budget is not None else int(setting(cfg, "construction", "budget")),
        max_scale_gap=int(setting(cfg, "construction", "max_scale_gap")),
        progress=args.progress,
    )
    io.save_trace(args.out, trace)
    print(f"wrote {trace.T} stages with {len(trace.actions)} actions to {args.out}")
    if trace.annotations:
        for note in trace.annotations:
            print(note, file=sys.stderr)
        return BudgetExhaustedError.exit_code
    return 0


def cmd_verify(args, cfg) -> int:
    trace = io.load_trace(args.trace)
    report = verify_trace(trace, net_offset=int(setting(cfg, "construction", "net_offset")))
    print(io.trace_summary_frame(trace).to_string(index=False))
    if args.report:
        print(io.report_json(report))
    if not report['valid']:
        for err in report['errors']:
            print(err, file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


def cmd_witness(args, cfg) -> int:
    trace = io.load_trace(args.trace)
    q = parse_point(args.q)
    U = Region.of(Rect.around(q, parse_rational(args.radius)))
    w = local_connectivity_witness(trace, q, U, int(setting(cfg, "witness", "max_scale_gap")))
    print(f"case {w.case} at stage {w.t0} for requirement {w.e}")
    for r in w.parts:
        print(f"  {_rect_text(r)}")
    return 0


def cmd_svg(args, cfg) -> int:
    size = int(setting(cfg, "svg", "size"))
    margin = int(setting(cfg, "svg", "margin"))
    if args.trace:
        text = render_trace(io.load_trace(args.trace), args.stage, size, margin)
    else:
        chains, poly, _ = io.load_chain_file(args.chains)
        text = render_chains(chains, poly, size, margin)
    write_svg(args.out, text)
    return 0


#  Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaincalc", description="Exact arc-chain calculus and stage constructions")
    parser.add_argument("--config", help="config file (default: $CHAINCALC_CONFIG or config.yaml)")
    level = parser.add_mutually_exclusive_group()
    level.add_argument("--verbose", action="store_true", help="log at DEBUG")
    level.add_argument("--quiet", action="store_true", help="log warnings only")
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("koch", help="quadratic Koch nest")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_koch)

    p = sub.add_parser("segment", help="nest for a straight segment")
    p.add_argument("--a", required=True, help="x,y")
    p.add_argument("--b", required=True, help="x,y")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("osgood", help="positive-area arc nest")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_osgood)

    p = sub.add_parser("mltest", help="randomness test from arc complements")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mltest)

    p = sub.add_parser("eval", help="enclose the arc point at a parameter")
    p.add_argument("--chains", required=True)
    p.add_argument("--x", required=True, help="p/q in [0,1]")
    p.add_argument("--prec", type=int, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("refine", help="refinement type between two arc chains")
    p.add_argument("--fine", required=True)
    p.add_argument("--coarse", required=True)
    p.add_argument("--fine-level", type=int, default=-1)
    p.add_argument("--coarse-level", type=int, default=-1)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("construct", help="run the stage construction")
    p.add_argument("--adversaries", help="adversary file (default: bundled scenario)")
    p.add_argument("--stages", type=int)
    p.add_argument("--emax", type=int)
    p.add_argument("--comb-depth", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a stored trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--report", action="store_true", help="print the full JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="local connectivity witness at a point of the curve")
    p.add_argument("--trace", required=True)
    p.add_argument("--q", required=True, help="x,y")
    p.add_argument("--radius", default="1", help="half-side of the square neighbourhood")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("svg", help="draw a trace or a chain file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace")
    src.add_argument("--chains")
    p.add_argument("--stage", type=int, help="stage to draw (default: last)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_svg)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = load_config(args.config)
    setup_logging(cfg, "DEBUG" if args.verbose else "WARNING" if args.quiet else None)
    try:
        return args.func(args, cfg)
    except ChainCalcError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
