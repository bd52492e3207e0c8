"""Command-line entry point: ``mcfgosper <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 a finite input ran out,
3 the step guard stopped a run early, 4 the oracle ran out of precision,
5 verification found a mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import islice
from typing import Sequence

from .bilinear import product_forms, run_bilinear, sum_forms
from .errors import GuardHit, InputExhausted, PrecisionExhausted
from .exactnum import as_matrix
from .experiments import MODES, TrialConfig, run_suite
from .mcf import Mcf, jpa_steps
from .mobius import run
from .oracle import eval_bilinear, eval_moebius, verify_prefix
from .partial import run_bilinear_with_partial, run_with_partial
from .sources import McfSource, parse_source

EXIT_USAGE = 1
EXIT_EXHAUSTED = 2
EXIT_GUARD = 3
EXIT_PRECISION = 4
EXIT_MISMATCH = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(message)


def format_tuple(t: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in t) + ")"


def format_steps(steps: Sequence[Sequence[int]], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        obj = {"outputs": [list(s) for s in steps]}
        obj.update(extra or {})
        return json.dumps(obj)
    return "\n".join(f"{n}: {format_tuple(s)}" for n, s in enumerate(steps))


def parse_text_steps(text: str) -> list[tuple[int, ...]]:
    """Inverse of the text output format."""
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        _, _, body = line.partition(":")
        out.append(tuple(int(v) for v in body.strip().strip("()").split(",")))
    return out


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_mcf(path: str) -> Mcf:
    return Mcf.from_json_obj(_load_json(path))


def _forms_for(args, m: int | None):
    if args.forms:
        return [as_matrix(f) for f in _load_json(args.forms)]
    if m is None:
        raise UsageError("--op needs the dimension; give --m or JSON inputs")
    return list(sum_forms(m) if args.op == "sum" else product_forms(m))


def _emit(args, res, **extra) -> int:
    print(format_steps(res.outputs, args.format, {"inputs": res.state.t, "guard_hit": res.guard_hit, **extra}))
    if getattr(args, "log", None):
        with open(args.log, "w", encoding="utf-8", newline="") as fh:
            res.log.write_csv(fh, with_bits=getattr(args, "partial_output", False))
    if res.guard_hit:
        raise GuardHit(f"stopped after {len(res.outputs)} of {args.max_outputs} outputs", res)
    return 0


def _moebius_input(args):
    if args.input:
        mcf = _load_mcf(args.input)
        return mcf, McfSource(mcf)
    if args.source:
        src = parse_source(args.source)
        return Mcf.from_source(src), src
    raise UsageError("give --input or --source")


def _bilinear_inputs(args):
    pairs = []
    for side in ("x", "y"):
        path, desc = getattr(args, side), getattr(args, f"{side}_source")
        if path:
            mcf = _load_mcf(path)
            pairs.append((mcf, McfSource(mcf)))
        elif desc:
            src = parse_source(desc)
            pairs.append((Mcf.from_source(src), src))
        else:
            raise UsageError(f"give --{side} or --{side}-source")
    return pairs


def cmd_expand(args) -> int:
    src = parse_source(args.source, args.m)
    steps = list(islice(jpa_steps(src, budget_bits=args.budget_bits), args.steps))
    print(format_steps(steps, args.format, {"m": src.m, "terminated": len(steps) < args.steps}))
    return 0


def cmd_moebius(args) -> int:
    mcf, _ = _moebius_input(args)
    C = as_matrix(_load_json(args.matrix))
    engine = run_with_partial if args.partial_output else run
    res = engine(mcf, C, args.max_outputs, args.max_steps, allow_singular=args.allow_singular)
    return _emit(args, res)


def cmd_bilinear(args) -> int:
    (x, _), (y, _) = _bilinear_inputs(args)
    forms = _forms_for(args, x.m)
    if args.dump_forms:
        print(json.dumps([[list(r) for r in f] for f in forms]))
        return 0
    engine = run_bilinear_with_partial if args.partial_output else run_bilinear
    res = engine(x, y, forms, args.max_outputs, args.max_steps)
    return _emit(args, res)


def cmd_dump_forms(args) -> int:
    forms = sum_forms(args.m) if args.op == "sum" else product_forms(args.m)
    print(json.dumps([[list(r) for r in f] for f in forms]))
    return 0


def cmd_verify(args) -> int:
    if args.against == "moebius":
        if not args.matrix:
            raise UsageError("verify --against moebius needs --matrix")
        mcf, src = _moebius_input(args)
        C = as_matrix(_load_json(args.matrix))
        res = run(mcf, C, args.max_outputs, args.max_steps, allow_singular=args.allow_singular)
        image = eval_moebius(src, C)
    else:
        (x, xs), (y, ys) = _bilinear_inputs(args)
        forms = _forms_for(args, x.m)
        res = run_bilinear(x, y, forms, args.max_outputs, args.max_steps)
        image = eval_bilinear(xs, ys, forms)
    report = verify_prefix(res.outputs, image, args.budget_bits)
    if args.format == "json":
        print(json.dumps({
            "agree": report.agree,
            "checked": report.checked,
            "mismatch_index": report.mismatch_index,
            "undecidable": report.undecidable,
            "note": report.note,
        }))
    elif report.agree:
        print(f"agree: {report.checked} tuples")
    else:
        print(f"mismatch at {report.mismatch_index}: {report.note}")
    if report.undecidable:
        raise PrecisionExhausted(report.note)
    return 0 if report.agree else EXIT_MISMATCH


def cmd_experiment(args) -> int:
    cfg = TrialConfig(
        mode=args.mode,
        m=args.m,
        trials=args.trials,
        max_outputs=args.max_outputs,
        max_steps=args.max_steps,
        bound=args.bound,
        matrix_bound=args.matrix_bound,
        seed=args.seed,
        d_min=args.d_min,
        d_max=args.d_max,
    )
    suite = run_suite(cfg, jobs=args.jobs)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            suite.write_csv(fh)
    mean = suite.mean_slope
    summary = {
        "trials": len(suite.trials),
        "mean_slope": None if mean is None else float(mean),
        "max_slope": float(max(suite.slopes)) if suite.slopes else None,
        "guard_hits": len(suite.guard_hits),
        "verify_failures": len(suite.verify_failures),
    }
    # with no --out the CSV owns stdout and the summary goes to stderr
    fh = sys.stdout if args.out else sys.stderr
    if args.format == "json":
        print(json.dumps(summary), file=fh)
    else:
        for k, v in summary.items():
            print(f"{k}: {v}", file=fh)
    if not args.out:
        sys.stdout.write(suite.to_csv())
    return 0


def _engine_flags(p, bilinear: bool) -> None:
    if bilinear:
        p.add_argument("--x", help="MCF JSON file for x")
        p.add_argument("--y", help="MCF JSON file for y")
        p.add_argument("--x-source", help="real source for x, e.g. cbrt:2")
        p.add_argument("--y-source", help="real source for y")
        p.add_argument("--forms", help="JSON array of m+1 row-major matrices")
        p.add_argument("--op", choices=("sum", "product"), default="sum", help="standard family when --forms is absent")
    else:
        p.add_argument("--input", help="MCF JSON file")
        p.add_argument("--source", help="real source instead of --input, e.g. cbrt:2")
        p.add_argument("--matrix", help="row-major integer matrix JSON")
        p.add_argument("--allow-singular", action="store_true")
    p.add_argument("--max-outputs", type=int, default=10)
    p.add_argument("--max-steps", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcfgosper", description="Gosper-style transforms of multidimensional continued fractions.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="Jacobi-Perron expansion of a real source")
    p.add_argument("--source", required=True, help="cbrt:d | sqrt:d | root:k:r1,r2 | rational:p/q,...")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--budget-bits", type=int, default=4096)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("moebius", parents=[common], help="Möbius transform of one MCF")
    _engine_flags(p, bilinear=False)
    p.add_argument("--partial-output", action="store_true")
    p.add_argument("--log", help="write the step log CSV here")
    p.set_defaults(func=cmd_moebius)

    p = sub.add_parser("bilinear", parents=[common], help="bilinear transform of two MCFs")
    _engine_flags(p, bilinear=True)
    p.add_argument("--partial-output", action="store_true")
    p.add_argument("--log", help="write the step log CSV here")
    p.add_argument("--dump-forms", action="store_true", help="print the form family and exit")
    p.set_defaults(func=cmd_bilinear)

    p = sub.add_parser("verify", parents=[common], help="check engine outputs against the oracle")
    p.add_argument("--against", choices=("moebius", "bilinear"), required=True)
    p.add_argument("--input")
    p.add_argument("--source")
    p.add_argument("--matrix")
    p.add_argument("--allow-singular", action="store_true")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--x-source")
    p.add_argument("--y-source")
    p.add_argument("--forms")
    p.add_argument("--op", choices=("sum", "product"), default="sum")
    p.add_argument("--max-outputs", type=int, default=10)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--budget-bits", type=int, default=4096)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="inputs-per-output statistics")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-outputs", type=int, default=500)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--matrix-bound", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV path; stdout when omitted")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("dump-forms", parents=[common], help="print a standard bilinear form family")
    p.add_argument("--op", choices=("sum", "product"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_dump_forms)
    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputExhausted as exc:
        if exc.result is not None:
            print(format_steps(exc.result.outputs, args.format, {"inputs": exc.result.state.t, "exhausted": True}))
        print(f"input exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except GuardHit as exc:
        print(f"guard hit: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
