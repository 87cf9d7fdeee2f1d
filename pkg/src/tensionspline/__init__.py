"""Tension-spline finite-difference solver for singularly perturbed two-point BVPs.

    -eps y'' + P(x) y = f(x),   y(a) = ya,  y(b) = yb
"""

from .analysis import ConvergenceReport, ErrorRecord, max_abs_error, observed_order, run_sweep, solve
from .exprparse import evaluate, parse
from .linalg import SolveReport, dense_oracle_solve, thomas_solve
from .problem import Problem, catalog, load_problem_file, verify_exact
from .scheme import (
    Mesh,
    SchemeParams,
    TridiagonalSystem,
    assemble,
    continuity_defect,
    moments,
    params_from_tension,
    spline_value,
    spline_values,
    truncation_residual,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceReport",
    "ErrorRecord",
    "Mesh",
    "Problem",
    "SchemeParams",
    "SolveReport",
    "TridiagonalSystem",
    "assemble",
    "catalog",
    "continuity_defect",
    "dense_oracle_solve",
    "evaluate",
    "load_problem_file",
    "max_abs_error",
    "moments",
    "observed_order",
    "params_from_tension",
    "parse",
    "run_sweep",
    "solve",
    "spline_value",
    "spline_values",
    "thomas_solve",
    "truncation_residual",
    "verify_exact",
]
