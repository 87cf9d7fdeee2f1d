"""Tridiagonal solves.

:func:`thomas_solve` is the production path (no pivoting).
:func:`dense_oracle_solve` expands the system and runs textbook Gaussian
elimination with partial pivoting; it exists to check the former.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SingularMatrix, SystemTooLarge, ZeroPivot
from .scheme import TridiagonalSystem

__all__ = [
    "SolveReport",
    "thomas_solve",
    "dense_oracle_solve",
    "residual_inf",
    "residual_bound_holds",
    "PIVOT_TINY",
    "ORACLE_MAX_SIZE",
]

PIVOT_TINY = 1e-300
ORACLE_MAX_SIZE = 64


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    min_pivot_magnitude: float
    dominant: bool


def thomas_solve(system: TridiagonalSystem) -> SolveReport:
    """Forward elimination and back substitution without pivoting.

    Raises :class:`ZeroPivot` with the row index if a pivot falls below
    ``1e-300`` in magnitude.  The input arrays are never modified.
    """
    x, min_pivot, bad_row = kernels.thomas(
        np.ascontiguousarray(system.sub, dtype=float),
        np.ascontiguousarray(system.diag, dtype=float),
        np.ascontiguousarray(system.sup, dtype=float),
        np.ascontiguousarray(system.rhs, dtype=float),
        PIVOT_TINY,
    )
    if bad_row >= 0:
        raise ZeroPivot(int(bad_row), float(min_pivot))
    return SolveReport(x, float(min_pivot), system.is_diagonally_dominant())


def dense_oracle_solve(system: TridiagonalSystem) -> np.ndarray:
    """Gaussian elimination with partial pivoting on the full matrix."""
    m = system.size
    if m > ORACLE_MAX_SIZE:
        raise SystemTooLarge(f"oracle solver is limited to {ORACLE_MAX_SIZE} unknowns, got {m}")
    a = system.to_dense().astype(float)
    b = np.array(system.rhs, dtype=float)
    scale = np.abs(a).max() if a.size else 0.0
    for col in range(m):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) <= 1e-14 * scale or scale == 0.0:
            raise SingularMatrix(f"matrix is singular to working precision at column {col}")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, m):
            factor = a[row, col] / a[col, col]
            if factor != 0.0:
                a[row, col:] -= factor * a[col, col:]
                b[row] -= factor * b[col]
    x = np.empty(m)
    for row in range(m - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def residual_inf(system: TridiagonalSystem, solution) -> float:
    return float(np.abs(system.matvec(solution) - system.rhs).max())


def residual_bound_holds(system: TridiagonalSystem, solution, rtol=1e-12) -> bool:
    """``||T y - rhs|| <= rtol (||T|| ||y|| + ||rhs||)`` in the infinity norm."""
    solution = np.asarray(solution, dtype=float)
    bound = rtol * (
        system.norm_inf() * np.abs(solution).max() + np.abs(system.rhs).max()
    )
    return residual_inf(system, solution) <= bound
