"""Command-line interface.

Usage::

    tensionspline solve --problem example_4_2 --eps 1e-4 --n 16 --scheme fourth
    tensionspline convergence --problem example_4_1 --eps 1/16 --n 16,32,64 --scheme cubic
    tensionspline reproduce table2

Exit codes: 0 success, 2 bad arguments, 3 problem file / expression errors,
4 solver failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

from .analysis import max_abs_error, run_sweep, solve
from .errors import (
    EvalError,
    ExprSyntaxError,
    InvalidParams,
    InvalidProblem,
    ProblemFileError,
    SolverError,
    UnknownProblem,
)
from .problem import CATALOG, catalog, load_problem_file, parse_real
from .scheme import SchemeParams, parse_scheme
from .tables import report_csv, report_json, report_markdown

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_SOLVER = 4

FORMATS = ("csv", "md", "json")

TABLE1_EPS = ["1/16", "1/32", "1/64", "1/128"]
TABLE1_N = [16, 32, 64, 128, 256]
TABLE2_EPS = ["1e-3", "1e-4", "1e-5", "1e-6", "1e-7", "1e-8"]
TABLE2_N = [16, 32]
DEFAULT_N = TABLE1_N

DEFAULT_GRIDS = {
    "example_4_1": (TABLE1_EPS, TABLE1_N),
    "example_4_2": (TABLE2_EPS, TABLE2_N),
}

REPRODUCE = {
    "table1": (
        "example_4_1",
        "Maximum absolute errors in solutions of problem 1 (λ1=1/12, λ2=5/12)",
    ),
    "table2": (
        "example_4_2",
        "Maximum absolute errors in solutions of problem 2 (λ1=1/12, λ2=5/12)",
    ),
}


class UsageError(Exception):
    pass


def _eps_list(text):
    labels = [part.strip() for part in text.split(",") if part.strip()]
    if not labels:
        raise UsageError("--eps needs at least one value")
    values = []
    for label in labels:
        try:
            value = parse_real(label)
        except ValueError:
            raise UsageError(f"bad eps value {label!r}") from None
        if not value > 0.0:
            raise UsageError("eps must be positive")
        values.append(value)
    return labels, values


def _n_list(text):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"bad --n value {text!r}; expected integers such as 16,32,64") from None
    if not values:
        raise UsageError("--n needs at least one value")
    if any(n < 2 for n in values):
        raise UsageError("every n must be at least 2")
    return values


def _scheme(text):
    try:
        return parse_scheme(text)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from None


def _problem_source(args):
    if args.problem and args.problem_file:
        raise UsageError("give either --problem or --problem-file, not both")
    if not args.problem and not args.problem_file:
        raise UsageError("one of --problem or --problem-file is required")
    if args.problem and args.problem not in CATALOG:
        raise UsageError(
            f"unknown problem {args.problem!r}; choose from {', '.join(sorted(CATALOG))}"
        )


def _load(args, eps):
    if args.problem:
        return catalog(args.problem, eps)
    try:
        return load_problem_file(args.problem_file, epsilon=eps)
    except OSError as exc:
        raise UsageError(f"cannot read problem file: {exc}") from None


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args):
    _problem_source(args)
    eps = None
    if args.eps is not None:
        labels, values = _eps_list(args.eps)
        if len(values) != 1:
            raise UsageError("solve takes a single --eps value")
        eps = values[0]
    elif args.problem:
        raise UsageError("--eps is required for built-in problems")
    n = _n_list(args.n)
    if len(n) != 1:
        raise UsageError("solve takes a single --n value")
    params = _scheme(args.scheme)
    problem = _load(args, eps)
    sol = solve(problem, n[0], params)
    x = sol.x
    err = None
    exact = None
    if problem.exact is not None:
        exact = problem.exact_values(x)
        err = max_abs_error(sol.y, problem, sol.mesh)

    if args.format == "json":
        data = {
            "problem": problem.name,
            "epsilon": problem.epsilon,
            "n": n[0],
            "params": params.as_dict(),
            "dominant": sol.report.dominant,
            "min_pivot_magnitude": sol.report.min_pivot_magnitude,
            "x": x.tolist(),
            "y": sol.y.tolist(),
            "max_abs_error": err,
        }
        text = json.dumps(data, indent=2) + "\n"
    elif args.format == "md":
        lines = [
            f"**{problem.name}, ε={problem.epsilon!r}, N={n[0]}, scheme {params.describe()}**",
            "",
            "| x | y |" + (" exact | error |" if exact is not None else ""),
            "|---|---|" + ("---|---|" if exact is not None else ""),
        ]
        for i in range(len(x)):
            row = f"| {x[i]:.6g} | {sol.y[i]:.10g} |"
            if exact is not None:
                row += f" {exact[i]:.10g} | {abs(sol.y[i] - exact[i]):.2e} |"
            lines.append(row)
        if err is not None:
            lines += ["", f"E = max|ȳᵢ − yᵢ| = {err:.2e}"]
        text = "\n".join(lines) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y"])
        for xi, yi in zip(x, sol.y):
            writer.writerow([repr(float(xi)), repr(float(yi))])
        if err is not None:
            buf.write(f"# max_abs_error={err!r}\n")
        text = buf.getvalue()
    _emit(args, text)
    return EXIT_OK


def _render(report, fmt, caption=None, reference_table=None):
    if fmt == "csv":
        return report_csv(report, reference_table)
    if fmt == "md":
        return report_markdown(report, caption, reference_table)
    return report_json(report, reference_table)


def cmd_convergence(args):
    _problem_source(args)
    default_eps, default_n = DEFAULT_GRIDS.get(args.problem, (None, DEFAULT_N))
    if args.eps is not None:
        labels, values = _eps_list(args.eps)
    elif default_eps is not None:
        labels, values = _eps_list(",".join(default_eps))
    else:
        labels, values = None, None
    n_list = _n_list(args.n) if args.n is not None else list(default_n)
    params = _scheme(args.scheme)
    if args.problem:
        family = args.problem
    else:
        family = _load(args, values[0] if values else None)
        if values is None:
            values, labels = [family.epsilon], [repr(family.epsilon)]
    report = run_sweep(family, values, n_list, params, eps_labels=labels)
    _emit(args, _render(report, args.format))
    return EXIT_OK


def cmd_reproduce(args):
    problem, caption = REPRODUCE[args.table]
    eps_labels, n_list = DEFAULT_GRIDS[problem]
    labels, values = _eps_list(",".join(eps_labels))
    params = SchemeParams.from_preset("fourth_order")
    report = run_sweep(problem, values, n_list, params, eps_labels=labels)
    _emit(args, _render(report, args.format, caption, reference_table=args.table))
    return EXIT_OK


def _add_common(p, with_problem=True):
    if with_problem:
        p.add_argument("--problem", help=f"built-in problem: {', '.join(sorted(CATALOG))}")
        p.add_argument("--problem-file", help="path to a key = value problem file")
        p.add_argument("--eps", help="eps value(s), comma separated; rationals like 1/16 allowed")
        p.add_argument("--scheme", default="fourth",
                       help="cubic, fourth, lambda:<l1>,<l2> or tension:<lam> (default fourth)")
    p.add_argument("--format", choices=FORMATS, default="csv", help="output format (default csv)")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tensionspline",
        description="Tension-spline solver for -eps y'' + P(x) y = f(x) with Dirichlet data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one problem and print the nodal solution")
    _add_common(p)
    p.add_argument("--n", default="16", help="number of subintervals (default 16)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("convergence", help="error table over eps and N")
    _add_common(p)
    p.add_argument("--n", help="comma separated N values (default depends on problem)")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("reproduce", help="recompute one of the reference error tables")
    p.add_argument("table", choices=sorted(REPRODUCE), help="which table")
    _add_common(p, with_problem=False)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    def show(message, category, filename, lineno, file=None, line=None):
        sys.stderr.write(f"{parser.prog} {args.command}: warning: {message}\n")

    with warnings.catch_warnings():
        warnings.showwarning = show
        return _dispatch(parser, args)


def _dispatch(parser, args):
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog} {args.command}: error: {exc}\n")
    except (UnknownProblem, InvalidParams) as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog} {args.command}: error: {exc}\n")
    except (ExprSyntaxError, EvalError, ProblemFileError, InvalidProblem) as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: input error: {exc}\n")
        return EXIT_INPUT
    except SolverError as exc:
        sys.stderr.write(f"{parser.prog} {args.command}: solver error: {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
