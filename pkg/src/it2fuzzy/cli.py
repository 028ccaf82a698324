"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid system definition or data,
3 evaluation error (including a ``demo`` value that does not reproduce).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import coverage_report, param_count, surface_sample
from .demo import compare_demo
from .io import DefinitionError, load_system, serialize_system, write_surface_csv
from .optimize import Dataset, OptimizerConfig, optimize_it2, optimize_t1
from .reduction import ReductionError, corner_oracle, eiasc, evaluate
from .rulebase import DimensionError, Reducer, SystemValidationError

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_EVAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _fmt(v, precision):
    return f"{v:.{precision}f}"


def _reducer(args):
    if getattr(args, "reducer", None) is None:
        return None
    return Reducer(args.reducer, args.alpha, args.beta)


def cmd_eval(args, out):
    system = load_system(args.system)
    x = _floats(args.input)
    res = evaluate(system, x, reducer=_reducer(args))
    p = args.precision
    line = f"y_l={_fmt(res.y_l, p)} y_r={_fmt(res.y_r, p)} y={_fmt(res.y, p)}"
    if res.switch_points is not None:
        line += f" L={res.switch_points[0]} R={res.switch_points[1]}"
    print(line, file=out)
    return EXIT_OK


def cmd_surface(args, out):
    system = load_system(args.system)
    sample = surface_sample(system, resolution=args.resolution,
                            jump_threshold=args.jump_threshold, reducer=_reducer(args))
    if args.out == "-":
        write_surface_csv(sample, out)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_surface_csv(sample, fh)
        print(f"wrote {sample.outputs.size} cells to {args.out}", file=out)
    print(f"gaps={sample.gap_count} jump_candidates={len(sample.jump_candidates)} "
          f"threshold={sample.jump_threshold:.{args.precision}g}",
          file=sys.stderr if args.out == "-" else out)
    return EXIT_OK


def cmd_coverage(args, out):
    system = load_system(args.system)
    rep = coverage_report(system, resolution=args.resolution)
    fmt = lambda iv: ",".join(f"[{a:.{args.precision}f},{b:.{args.precision}f}]" for a, b in iv) or "-"  # noqa: E731
    for ax in rep.axes:
        print(f"input={ax.name} umf_covered={str(ax.umf_covered).lower()} "
              f"lmf_covered={str(ax.lmf_covered).lower()} uncovered_umf={fmt(ax.uncovered_umf)} "
              f"uncovered_lmf={fmt(ax.uncovered_lmf)} method={ax.method}", file=out)
    print(f"predicted_continuity={rep.predicted_continuity}", file=out)
    return EXIT_OK


def cmd_params(args, out):
    system = load_system(args.system)
    pc = param_count(system)
    table = "-" if pc.table_formula_count is None else str(pc.table_formula_count)
    print(f"config={pc.formula_name} stored={pc.stored_count} table={table}"
          + (f" formula={pc.formula}" if pc.formula else ""), file=out)
    if pc.note:
        print(f"note: {pc.note}", file=out)
    return EXIT_OK


def cmd_optimize(args, out):
    try:
        data = Dataset.from_csv(args.data, header=args.header)
    except (OSError, ValueError) as exc:
        raise DefinitionError([str(exc)]) from None
    mfs = _floats(args.mfs)
    config = OptimizerConfig(population_size=args.population, max_generations=args.generations,
                             seed=args.seed, mf_count=tuple(int(m) for m in mfs)
                             if len(mfs) > 1 else int(mfs[0]),
                             consequent_kind=args.consequent,
                             reducer=args.reducer or "eiasc_cos")
    t1, t1_rep = optimize_t1(data, config)
    p = args.precision
    print(f"t1 rmse={_fmt(t1_rep.final_fitness, p)} generations={len(t1_rep.best_fitness) - 1} "
          f"evaluations={t1_rep.evaluations}", file=out)
    final = t1
    if args.two_step:
        it2, it2_rep = optimize_it2(data, config, t1)
        print(f"it2 rmse={_fmt(it2_rep.final_fitness, p)} generations={len(it2_rep.best_fitness) - 1} "
              f"evaluations={it2_rep.evaluations}", file=out)
        print(f"improvement={_fmt(t1_rep.final_fitness - it2_rep.final_fitness, p)}", file=out)
        final = it2
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("step,generation,best_rmse\n")
            for g, v in enumerate(t1_rep.best_fitness):
                fh.write(f"t1,{g},{v!r}\n")
            if args.two_step:
                for g, v in enumerate(it2_rep.best_fitness):
                    fh.write(f"it2,{g},{v!r}\n")
    if args.out:
        Path(args.out).write_text(serialize_system(final), encoding="utf-8")
        print(f"wrote {final.kind} system to {args.out}", file=out)
    return EXIT_OK


def cmd_bench(args, out):
    if args.rules < 1 or args.trials < 1:
        raise UsageError("--rules and --trials must be positive")
    rng = np.random.default_rng(args.seed)
    t_eiasc = t_oracle = 0.0
    max_dev = 0.0
    for _ in range(args.trials):
        a, b = rng.random(args.rules), rng.random(args.rules)
        firings = list(zip(np.minimum(a, b), np.maximum(a, b)))
        c, d = rng.uniform(-1, 1, args.rules), rng.uniform(-1, 1, args.rules)
        cons = list(zip(np.minimum(c, d), np.maximum(c, d)))
        t0 = time.perf_counter()
        yl, yr, _, _ = eiasc(firings, cons)
        t1 = time.perf_counter()
        ol, orr = corner_oracle(firings, cons)
        t2 = time.perf_counter()
        t_eiasc += t1 - t0
        t_oracle += t2 - t1
        max_dev = max(max_dev, abs(yl - ol), abs(yr - orr))
    print(f"rules={args.rules} trials={args.trials} "
          f"eiasc_us={1e6 * t_eiasc / args.trials:.2f} oracle_us={1e6 * t_oracle / args.trials:.2f} "
          f"max_deviation={max_dev:.3e}", file=out)
    return EXIT_OK


def cmd_demo(args, out):
    failures = 0

    def show(v):
        if isinstance(v, tuple):
            return "[" + ",".join(_fmt(x, args.precision) for x in v) + "]"
        return _fmt(v, args.precision)

    for name, want, got, ok in compare_demo():
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name} published={show(want)} computed={show(got)}",
              file=out)
    print(f"{'all published values reproduced' if not failures else f'{failures} mismatch(es)'}",
          file=out)
    return EXIT_OK if not failures else EXIT_EVAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="it2fuzzy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=4, help="decimal places in output")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    _add = sub.add_parser

    def add(name, **kw):
        return _add(name, parents=[common], **kw)

    def with_system(p):
        p.add_argument("--system", required=True, help="system definition JSON")
        return p

    def with_reducer(p):
        p.add_argument("--reducer", choices=["eiasc_cos", "nt", "bmm", "t1_weighted_average"])
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--beta", type=float, default=0.5)
        return p

    p = with_reducer(with_system(add("eval", help="evaluate at one input")))
    p.add_argument("--input", required=True, help="comma-separated input vector")
    p.set_defaults(func=cmd_eval)

    p = with_reducer(with_system(add("surface", help="export the input-output surface")))
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--out", required=True, help="CSV file, or - for stdout")
    p.add_argument("--jump-threshold", type=float, default=None)
    p.set_defaults(func=cmd_surface)

    p = with_system(add("coverage", help="MF coverage and continuity class"))
    p.add_argument("--resolution", type=int, default=1001)
    p.set_defaults(func=cmd_coverage)

    p = with_system(add("params", help="parameter counts"))
    p.set_defaults(func=cmd_params)

    p = add("optimize", help="evolutionary tuning from a CSV dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--header", action="store_true", help="first CSV row is a header")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--population", type=int, default=30)
    p.add_argument("--mfs", default="3", help="MFs per input, one value or comma-separated")
    p.add_argument("--consequent", choices=["constant", "linear"], default="constant")
    p.add_argument("--reducer", choices=["eiasc_cos", "nt", "bmm"], default=None)
    p.add_argument("--two-step", action="store_true", help="also tune an IT2 system")
    p.add_argument("--out", help="write the final system definition here")
    p.add_argument("--trace", help="write the per-generation best RMSE as CSV")
    p.set_defaults(func=cmd_optimize, alpha=0.5, beta=0.5)

    p = add("bench", help="EIASC vs corner enumeration")
    p.add_argument("--rules", type=int, default=8)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = add("demo", help="reproduce the PI controller worked example")
    p.set_defaults(func=cmd_demo)
    return parser


def _glue_vectors(argv):
    # "--input -0.2,-0.3" would otherwise be read as an unknown option
    argv = list(argv)
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--input" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--input={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    argv = _glue_vectors(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DefinitionError, SystemValidationError) as exc:
        print(f"invalid definition:\n{exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ReductionError, DimensionError, ValueError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
