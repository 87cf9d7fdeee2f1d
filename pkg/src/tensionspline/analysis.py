"""Solving, error measurement and (eps, N) convergence sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import LengthMismatch, MissingExact, NonPositiveError, TensionSplineError
from .linalg import SolveReport, thomas_solve
from .problem import Problem, catalog
from .scheme import Mesh, SchemeParams, assemble

__all__ = [
    "Solution",
    "solve",
    "max_abs_error",
    "observed_order",
    "is_saturated",
    "ErrorRecord",
    "OrderRecord",
    "ConvergenceReport",
    "run_sweep",
    "SATURATION_RTOL",
]

# errors below SATURATION_RTOL * max|exact| are treated as roundoff
SATURATION_RTOL = 1e-13


@dataclass(frozen=True)
class Solution:
    mesh: Mesh
    y: np.ndarray
    report: SolveReport

    @property
    def x(self):
        return self.mesh.nodes


def solve(problem: Problem, n: int, params: SchemeParams) -> Solution:
    """Nodal values ``y[0..n]`` of the spline scheme, boundary values included."""
    mesh = Mesh.for_problem(problem, n)
    report = thomas_solve(assemble(problem, mesh, params))
    y = np.empty(n + 1)
    y[0] = problem.ya
    y[-1] = problem.yb
    y[1:-1] = report.solution
    return Solution(mesh, y, report)


def max_abs_error(numerical, problem: Problem, mesh: Mesh) -> float:
    """``max_i |numerical[i] - y(x[i])|`` over all nodes, boundaries included."""
    if problem.exact is None:
        raise MissingExact(f"problem {problem.name!r} has no exact solution")
    numerical = np.asarray(numerical, dtype=float)
    if numerical.shape != (mesh.n + 1,):
        raise LengthMismatch(f"expected {mesh.n + 1} nodal values, got {numerical.shape}")
    return float(np.abs(numerical - problem.exact_values(mesh.nodes)).max())


def observed_order(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float:
    """``log(e_coarse / e_fine) / log(ratio)``; base 2 under mesh halving."""
    if not (e_coarse > 0.0 and e_fine > 0.0):
        raise NonPositiveError(
            f"errors must be positive for an order estimate, got {e_coarse!r}, {e_fine!r}"
        )
    if ratio == 2.0:
        return math.log2(e_coarse / e_fine)
    return math.log(e_coarse / e_fine) / math.log(ratio)


def is_saturated(e_coarse: float, e_fine: float, floor: float = 1e-13) -> bool:
    """True when either error sits at roundoff level, making the ratio noise."""
    return e_coarse < floor or e_fine < floor


@dataclass
class ErrorRecord:
    epsilon: float
    n: int
    max_abs_error: Optional[float]
    dominant: Optional[bool]
    lambda_sum: float
    label: str = ""
    status: str = "ok"
    message: str = ""
    scale: float = 1.0

    @property
    def failed(self):
        return self.status != "ok"


@dataclass
class OrderRecord:
    epsilon: float
    n_coarse: int
    n_fine: int
    order: Optional[float]
    status: str  # ok | saturated | failed


@dataclass
class ConvergenceReport:
    problem: str
    params: SchemeParams
    eps_list: list
    n_list: list
    records: list = field(default_factory=list)
    orders: list = field(default_factory=list)
    eps_labels: list = field(default_factory=list)

    def cell(self, epsilon, n) -> ErrorRecord:
        for rec in self.records:
            if rec.epsilon == epsilon and rec.n == n:
                return rec
        raise KeyError((epsilon, n))

    def orders_for(self, epsilon):
        return [o for o in self.orders if o.epsilon == epsilon]

    def order_into(self, epsilon, n_fine) -> Optional[OrderRecord]:
        for o in self.orders:
            if o.epsilon == epsilon and o.n_fine == n_fine:
                return o
        return None

    def as_dict(self):
        return {
            "problem": self.problem,
            "params": self.params.as_dict(),
            "eps": list(self.eps_list),
            "eps_labels": list(self.eps_labels),
            "n": list(self.n_list),
            "records": [
                {
                    "epsilon": r.epsilon,
                    "label": r.label,
                    "n": r.n,
                    "max_abs_error": r.max_abs_error,
                    "dominant": r.dominant,
                    "lambda_sum": r.lambda_sum,
                    "status": r.status,
                    "message": r.message,
                }
                for r in self.records
            ],
            "orders": [
                {
                    "epsilon": o.epsilon,
                    "n_coarse": o.n_coarse,
                    "n_fine": o.n_fine,
                    "order": o.order,
                    "status": o.status,
                }
                for o in self.orders
            ],
        }


def _run_cell(problem, n, params, label):
    try:
        sol = solve(problem, n, params)
        exact = problem.exact_values(sol.x)
        err = float(np.abs(sol.y - exact).max())
        scale = max(float(np.abs(exact).max()), np.finfo(float).tiny)
        return ErrorRecord(
            problem.epsilon, n, err, sol.report.dominant, params.lambda_sum, label, scale=scale
        )
    except TensionSplineError as exc:
        return ErrorRecord(
            problem.epsilon,
            n,
            None,
            None,
            params.lambda_sum,
            label,
            status="failed",
            message=f"{type(exc).__name__}: {exc}",
        )


def run_sweep(
    family: Union[str, Problem],
    eps_list: Sequence[float],
    n_list: Sequence[int],
    params: SchemeParams,
    eps_labels: Optional[Sequence[str]] = None,
) -> ConvergenceReport:
    """Solve every ``(eps, n)`` cell and estimate orders between adjacent ``n``.

    ``family`` is a catalog name or a :class:`Problem` whose ``epsilon`` is
    replaced per row.  Records are ordered eps-major.  A cell that fails (for
    example on a zero pivot) is recorded with ``status="failed"`` and the
    sweep continues.
    """
    eps_list = [float(e) for e in eps_list]
    n_list = [int(n) for n in n_list]
    if not eps_list or not n_list:
        raise ValueError("eps_list and n_list must be non-empty")
    if any(not e > 0.0 for e in eps_list):
        raise ValueError("every eps must be positive")
    if any(n < 2 for n in n_list):
        raise ValueError("every n must be at least 2")
    if eps_labels is None:
        eps_labels = [repr(e) for e in eps_list]
    if isinstance(family, str):
        name = family
        make = lambda eps: catalog(family, eps)  # noqa: E731
    else:
        name = family.name
        make = family.with_epsilon

    report = ConvergenceReport(name, params, eps_list, n_list, eps_labels=list(eps_labels))
    for eps, label in zip(eps_list, eps_labels):
        try:
            problem = make(eps)
        except TensionSplineError as exc:
            for n in n_list:
                report.records.append(
                    ErrorRecord(eps, n, None, None, params.lambda_sum, label, "failed", str(exc))
                )
            continue
        row = [_run_cell(problem, n, params, label) for n in n_list]
        report.records.extend(row)
        for coarse, fine in zip(row, row[1:]):
            if coarse.failed or fine.failed:
                report.orders.append(OrderRecord(eps, coarse.n, fine.n, None, "failed"))
                continue
            floor = SATURATION_RTOL * max(coarse.scale, fine.scale)
            if is_saturated(coarse.max_abs_error, fine.max_abs_error, floor):
                report.orders.append(OrderRecord(eps, coarse.n, fine.n, None, "saturated"))
                continue
            order = observed_order(coarse.max_abs_error, fine.max_abs_error, fine.n / coarse.n)
            report.orders.append(OrderRecord(eps, coarse.n, fine.n, order, "ok"))
    return report
