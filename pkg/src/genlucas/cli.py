"""Command-line entry point: ``genlucas <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import pipeline
from .bigseq import SequenceSpec, terms
from .charpoly import dominant_root, log_dominant_root, lucas_coefficient
from .errors import DomainError, PrecisionLimitError, ReductionFailure
from .linforms import (MatveevInstance, height_alpha, height_lucas_coeff_bound,
                       height_rational, matveev_exponent)
from .reduction import baker_davenport_reduce, build_large_k_problem, build_small_k_problem


def _emit(obj, as_json: str | None) -> None:
    if as_json and as_json != "-":
        with open(as_json, "w") as fh:
            json.dump(obj, fh, indent=2)
    elif as_json:
        print(json.dumps(obj, indent=2))
    else:
        for key, val in obj.items():
            print(f"{key}: {val}")


def cmd_seq(args) -> int:
    spec = SequenceSpec.fibonacci(args.k) if args.fibonacci else SequenceSpec.lucas(args.k)
    vals = terms(spec, args.count - 1)
    if args.json:
        _emit({"k": args.k, "terms": [str(v) for v in vals]}, args.json)
    else:
        print(", ".join(map(str, vals)))
    return 0


def cmd_root(args) -> int:
    bits = max(64, int(args.digits * 3.33) + 32)
    alpha = dominant_root(args.k, bits).alpha
    _emit({"k": args.k, "alpha": alpha.digits(args.digits),
           "log_alpha": log_dominant_root(args.k, bits).digits(args.digits),
           "coefficient": lucas_coefficient(args.k, bits).value.digits(args.digits),
           "radius_bits": bits}, args.json)
    return 0


def cmd_height(args) -> int:
    if args.kind == "rational":
        h = height_rational(int(args.values[0]), int(args.values[1]))
    elif args.kind == "alpha":
        h = height_alpha(int(args.values[0]))
    else:
        h = height_lucas_coeff_bound(int(args.values[0]))
    out = {"value": repr(h.value), "provenance": h.provenance}
    if h.cap is not None:
        out["cap"] = repr(h.cap)
    _emit(out, args.json)
    return 0


def cmd_matveev(args) -> int:
    A = tuple(Fraction(a) for a in args.A)
    inst = MatveevInstance(len(A), args.D, Fraction(args.B), A)
    _emit({"t": inst.t, "E": repr(matveev_exponent(inst))}, args.json)
    return 0


def cmd_reduce(args) -> int:
    if args.shape == "small":
        prob = build_small_k_problem(args.k, args.l, args.sign,
                                     int(Fraction(args.M)) if args.M else None)
    else:
        if not args.M:
            raise DomainError("large-order problems need --M")
        prob = build_large_k_problem(args.l, args.sign, int(Fraction(args.M)))
    r = baker_davenport_reduce(prob, ceiling=args.precision_ceiling)
    _emit({"label": prob.label, "M": str(prob.M), "q": str(r.q), "q_digits": r.q_digits,
           "epsilon": r.epsilon.digits(15), "w_bound": repr(r.w_bound),
           "convergent_index": r.convergent_index, "attempts": r.attempts,
           "precision": r.precision}, args.json)
    return 0


def _config(args) -> pipeline.PipelineConfig:
    return pipeline.PipelineConfig.from_sources(
        args.config, full_scale=args.full_scale,
        jobs=args.jobs, precision_ceiling=args.precision_ceiling,
        cache_dir=args.cache_dir, checkpoint_dir=args.checkpoint_dir)


def _finish(report: pipeline.CaseReport, args) -> int:
    if args.json and args.json != "-":
        report.write_json(args.json)
    if args.csv_path:
        report.write_csv(args.csv_path)
    if args.json == "-":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print("\n".join(report.summary_lines()))
        for s in report.nontrivial():
            print(f"NONTRIVIAL: L_{s['n']}^({s['k']}) = L_{s['m']}^({s['l']}) = {s['value']}")
    return 0 if not report.nontrivial() and not report.all_failures() else 1


def cmd_case(args) -> int:
    return _finish(pipeline.run_case(args.case_id, _config(args)), args)


def cmd_all(args) -> int:
    return _finish(pipeline.run_all(_config(args)), args)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", nargs="?", const="-", metavar="PATH",
                        help="write JSON to PATH (stdout when PATH is omitted)")
    common.add_argument("--precision-ceiling", type=int, default=pipeline.PRECISION_CEILING,
                        help="largest working precision in bits")

    p = argparse.ArgumentParser(prog="genlucas",
                                description="Coincidences between generalized Lucas sequences.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seq", parents=[common], help="print sequence terms from index 0")
    s.add_argument("k", type=int)
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--fibonacci", action="store_true", help="seed 0, 1 instead of 2, 1")
    s.set_defaults(func=cmd_seq)

    s = sub.add_parser("root", parents=[common], help="dominant root and related constants")
    s.add_argument("k", type=int)
    s.add_argument("--digits", type=int, default=30)
    s.set_defaults(func=cmd_root)

    s = sub.add_parser("height", parents=[common], help="logarithmic heights")
    s.add_argument("kind", choices=["rational", "alpha", "coeff"])
    s.add_argument("values", nargs="+")
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("matveev", parents=[common], help="exponent in the lower bound")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--A", nargs="+", required=True)
    s.set_defaults(func=cmd_matveev)

    s = sub.add_parser("reduce", parents=[common], help="one Baker-Davenport reduction")
    s.add_argument("shape", choices=["small", "large"])
    s.add_argument("--k", type=int)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--sign", required=True,
                   choices=["z1_pos", "z1_neg", "z2_pos", "z2_neg"])
    s.add_argument("--M", help="bound on the multiplier (default: M_k for small)")
    s.set_defaults(func=cmd_reduce)

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument("--full-scale", action="store_true",
                          help="use the full ranges (hours of CPU)")
    run_opts.add_argument("--csv", dest="csv_path", metavar="PATH")
    run_opts.add_argument("--jobs", type=int)
    run_opts.add_argument("--config", metavar="FILE", help="INI file with a [pipeline] section")
    run_opts.add_argument("--cache-dir")
    run_opts.add_argument("--checkpoint-dir")

    s = sub.add_parser("case", parents=[common, run_opts], help="run one case of the analysis")
    s.add_argument("case_id", choices=pipeline.CASE_IDS)
    s.set_defaults(func=cmd_case)

    s = sub.add_parser("all", parents=[common, run_opts], help="run every case")
    s.set_defaults(func=cmd_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ReductionFailure, PrecisionLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
