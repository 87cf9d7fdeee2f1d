"""Non-polynomial (tension) cubic spline discretisation.

On a uniform mesh the spline in tension with nodal values ``y[i]`` and
moments ``M[i] = S''(x[i])`` has a continuous first derivative exactly when

    h^2 (lam1 M[i-1] + 2 lam2 M[i] + lam1 M[i+1]) = y[i+1] - 2 y[i] + y[i-1]

for every interior node.  Replacing the moments with ``(P y - f) / eps`` from
the differential equation gives the tridiagonal system assembled here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .errors import (
    IndexOutOfRange,
    InvalidParams,
    LengthMismatch,
    MeshTooSmall,
    MissingExact,
    NonPositiveTension,
    OutOfDomain,
)
from .problem import Problem

__all__ = [
    "Mesh",
    "SchemeParams",
    "TridiagonalSystem",
    "PRESETS",
    "TAYLOR_SWITCH",
    "CUBIC_SWITCH",
    "params_from_tension",
    "parse_scheme",
    "moments",
    "assemble",
    "spline_value",
    "spline_values",
    "continuity_defect",
    "truncation_residual",
]

# below this tension the truncated Taylor series replaces the closed form
TAYLOR_SWITCH = 1e-4
# below this tension spline evaluation uses the plain cubic segment
CUBIC_SWITCH = 1e-4


@dataclass(frozen=True)
class Mesh:
    """Uniform mesh ``x[i] = a + i*h``, ``i = 0..n``."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise MeshTooSmall(f"need at least 2 subintervals, got n={self.n!r}")
        if not self.a < self.b:
            raise OutOfDomain(f"need a < b, got a={self.a!r}, b={self.b!r}")

    @classmethod
    def for_problem(cls, problem: Problem, n: int) -> "Mesh":
        return cls(problem.a, problem.b, n)

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def nodes(self) -> np.ndarray:
        x = self.a + np.arange(self.n + 1) * self.h
        x[-1] = self.b
        return x


@dataclass(frozen=True)
class SchemeParams:
    """The coefficient pair ``(lam1, lam2)`` and where it came from.

    ``origin`` is ``"direct"``, ``"tension"`` (then ``tension`` holds the
    tension parameter lam = h sqrt(tau)) or ``"preset"`` (then ``preset``
    names an entry of :data:`PRESETS`).
    """

    lambda1: float
    lambda2: float
    origin: str = "direct"
    tension: Optional[float] = None
    preset: Optional[str] = None

    def __post_init__(self):
        if not (self.lambda1 > 0.0 and self.lambda2 > 0.0):
            raise InvalidParams(
                f"lambda1 and lambda2 must be positive, got "
                f"({self.lambda1!r}, {self.lambda2!r})"
            )
        if not (math.isfinite(self.lambda1) and math.isfinite(self.lambda2)):
            raise InvalidParams("lambda1 and lambda2 must be finite")

    @classmethod
    def direct(cls, lambda1, lambda2):
        return cls(float(lambda1), float(lambda2))

    @classmethod
    def from_preset(cls, name):
        try:
            l1, l2 = PRESETS[name]
        except KeyError:
            raise InvalidParams(
                f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
            ) from None
        return cls(l1, l2, origin="preset", preset=name)

    @property
    def lambda_sum(self):
        return self.lambda1 + self.lambda2

    def tau(self, h):
        """Tension ``tau = (lam/h)^2`` on a mesh of spacing ``h``."""
        if self.tension is None:
            return None
        return (self.tension / h) ** 2

    def describe(self):
        if self.origin == "preset":
            return {"second_order_cubic": "cubic", "fourth_order": "fourth"}[self.preset]
        if self.origin == "tension":
            return f"tension:{self.tension!r}"
        return f"lambda:{self.lambda1!r},{self.lambda2!r}"

    def as_dict(self):
        return {
            "scheme": self.describe(),
            "origin": self.origin,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda_sum": self.lambda_sum,
            "tension": self.tension,
            "preset": self.preset,
        }


PRESETS = {
    "second_order_cubic": (1.0 / 6.0, 1.0 / 3.0),
    "fourth_order": (1.0 / 12.0, 5.0 / 12.0),
}


def _series_sinh_minus_x(lam):
    # sinh(lam) - lam
    acc = 0.0
    term = lam
    k = 1
    while True:
        term *= lam * lam / ((2 * k) * (2 * k + 1))
        acc += term
        if term <= 1e-17 * acc:
            return acc
        k += 1


def _series_x_cosh_minus_sinh(lam):
    # lam cosh(lam) - sinh(lam) = sum_k 2k lam^(2k+1) / (2k+1)!
    acc = 0.0
    power = lam
    k = 1
    while True:
        power *= lam * lam / ((2 * k) * (2 * k + 1))
        term = 2 * k * power
        acc += term
        if term <= 1e-17 * acc:
            return acc
        k += 1


def _tension_closed_form(lam):
    if lam < 1.0:
        # convergent series of the numerators; the textbook form loses
        # about log10(1/lam^2) digits to cancellation
        sh = math.sinh(lam)
        lam1 = _series_sinh_minus_x(lam) / (lam * lam * sh)
        lam2 = _series_x_cosh_minus_sinh(lam) / (lam * lam * sh)
        return lam1, lam2
    if lam > 700.0:
        # lam/sinh(lam) and coth(lam) - 1 underflow to zero
        return 1.0 / (lam * lam), (lam - 1.0) / (lam * lam)
    lam1 = (1.0 - lam / math.sinh(lam)) / (lam * lam)
    lam2 = (lam / math.tanh(lam) - 1.0) / (lam * lam)
    return lam1, lam2


def _tension_taylor(lam):
    l2 = lam * lam
    return 1.0 / 6.0 - 7.0 * l2 / 360.0, 1.0 / 3.0 - l2 / 45.0


def params_from_tension(lam: float) -> SchemeParams:
    """Coefficients of the tension spline with parameter ``lam = h sqrt(tau)``.

    ``lam1 = (1 - lam/sinh lam)/lam^2`` and ``lam2 = (lam coth lam - 1)/lam^2``.
    Both tend to the cubic spline values (1/6, 1/3) as ``lam -> 0``; below
    :data:`TAYLOR_SWITCH` the two-term expansion is used.
    """
    lam = float(lam)
    if not lam > 0.0 or not math.isfinite(lam):
        raise NonPositiveTension(f"tension must be positive and finite, got {lam!r}")
    if lam < TAYLOR_SWITCH:
        l1, l2 = _tension_taylor(lam)
    else:
        l1, l2 = _tension_closed_form(lam)
    return SchemeParams(l1, l2, origin="tension", tension=lam)


def _parse_number(text):
    return float(Fraction(text.strip()))


def parse_scheme(text: str) -> SchemeParams:
    """Parse ``cubic``, ``fourth``, ``lambda:<l1>,<l2>`` or ``tension:<lam>``."""
    text = text.strip()
    if text == "cubic":
        return SchemeParams.from_preset("second_order_cubic")
    if text == "fourth":
        return SchemeParams.from_preset("fourth_order")
    kind, sep, rest = text.partition(":")
    try:
        if sep and kind == "lambda":
            parts = rest.split(",")
            if len(parts) != 2:
                raise ValueError
            return SchemeParams.direct(_parse_number(parts[0]), _parse_number(parts[1]))
        if sep and kind == "tension":
            return params_from_tension(_parse_number(rest))
    except (ValueError, ZeroDivisionError):
        pass
    raise InvalidParams(
        f"bad scheme {text!r}; expected cubic, fourth, lambda:<l1>,<l2> or tension:<lam>"
    )


@dataclass(frozen=True)
class TridiagonalSystem:
    """``sub[k-1] u[k-1] + diag[k] u[k] + sup[k] u[k+1] = rhs[k]``, ``k = 0..m-1``."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        m = len(self.diag)
        if m < 1:
            raise LengthMismatch("system must have at least one unknown")
        if len(self.rhs) != m or len(self.sub) != m - 1 or len(self.sup) != m - 1:
            raise LengthMismatch(
                f"inconsistent lengths: sub={len(self.sub)}, diag={m}, "
                f"sup={len(self.sup)}, rhs={len(self.rhs)}"
            )

    @property
    def size(self):
        return len(self.diag)

    def is_diagonally_dominant(self):
        """Strict row diagonal dominance."""
        off = np.zeros(self.size)
        off[1:] += np.abs(self.sub)
        off[:-1] += np.abs(self.sup)
        return bool(np.all(np.abs(self.diag) > off))

    def matvec(self, u):
        u = np.asarray(u, dtype=float)
        out = self.diag * u
        out[1:] += self.sub * u[:-1]
        out[:-1] += self.sup * u[1:]
        return out

    def to_dense(self):
        return (
            np.diag(self.diag)
            + np.diag(self.sub, -1)
            + np.diag(self.sup, 1)
        )

    def norm_inf(self):
        """Infinity norm of the matrix."""
        rows = np.abs(self.diag).copy()
        rows[1:] += np.abs(self.sub)
        rows[:-1] += np.abs(self.sup)
        return float(rows.max())


def moments(problem: Problem, mesh: Mesh, y) -> np.ndarray:
    """Spline moments ``M[i] = (P(x[i]) y[i] - f(x[i])) / eps`` at every node."""
    y = np.asarray(y, dtype=float)
    if y.shape != (mesh.n + 1,):
        raise LengthMismatch(f"expected {mesh.n + 1} nodal values, got {y.shape}")
    p, f = problem.coefficients(mesh.nodes)
    return (p * y - f) / problem.epsilon


def assemble(problem: Problem, mesh: Mesh, params: SchemeParams) -> TridiagonalSystem:
    """Tridiagonal system for the interior values ``y[1..n-1]``.

    Row ``i`` reads

        (lam1 h^2 P[i-1] - eps) y[i-1] + 2 (eps + lam2 h^2 P[i]) y[i]
            + (lam1 h^2 P[i+1] - eps) y[i+1]
            = h^2 (lam1 f[i-1] + 2 lam2 f[i] + lam1 f[i+1])

    with the known boundary values moved to the right-hand side in the first
    and last rows.
    """
    if mesh.n < 2:
        raise MeshTooSmall(f"need at least 2 subintervals, got n={mesh.n}")
    p, f = problem.coefficients(mesh.nodes)
    sub, diag, sup, rhs = kernels.assemble(
        p,
        f,
        mesh.h,
        problem.epsilon,
        params.lambda1,
        params.lambda2,
        float(problem.ya),
        float(problem.yb),
    )
    return TridiagonalSystem(sub, diag, sup, rhs)


def _check_nodal(mesh, y, mom):
    y = np.ascontiguousarray(y, dtype=float)
    mom = np.ascontiguousarray(mom, dtype=float)
    if y.shape != (mesh.n + 1,) or mom.shape != (mesh.n + 1,):
        raise LengthMismatch(
            f"expected {mesh.n + 1} values and moments, got {y.shape} and {mom.shape}"
        )
    return y, mom


def spline_values(xs, mesh: Mesh, y, moments, lam: float) -> np.ndarray:
    """Evaluate the tension spline at every point of ``xs``.

    Segments are half-open ``[x[i], x[i+1])`` except the last, which includes
    ``b``.  Nodes return ``y[i]`` exactly.  For ``lam <`` :data:`CUBIC_SWITCH`
    the ordinary cubic spline segment (the zero-tension limit) is used.
    """
    lam = float(lam)
    if not lam > 0.0:
        raise NonPositiveTension(f"tension must be positive, got {lam!r}")
    y, mom = _check_nodal(mesh, y, moments)
    xq = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(~np.isfinite(xq)) or np.any(xq < mesh.a) or np.any(xq > mesh.b):
        raise OutOfDomain(f"evaluation points must lie in [{mesh.a}, {mesh.b}]")
    return kernels.spline_eval(
        np.ascontiguousarray(xq), mesh.a, mesh.h, mesh.n, y, mom, lam, lam < CUBIC_SWITCH
    )


def spline_value(x: float, mesh: Mesh, y, moments, lam: float) -> float:
    return float(spline_values([x], mesh, y, moments, lam)[0])


def continuity_defect(mesh: Mesh, y, moments, lam: float, i: int) -> float:
    """Jump ``S'(x[i]+) - S'(x[i]-)`` of the spline derivative at interior node ``i``.

    Uses the one-sided derivatives

        S'(x[i]+) = (y[i+1] - y[i])/h - h (lam1 M[i+1] + lam2 M[i])
        S'(x[i]-) = (y[i] - y[i-1])/h + h (lam2 M[i] + lam1 M[i-1])

    with ``(lam1, lam2)`` derived from the tension ``lam``.
    """
    y, mom = _check_nodal(mesh, y, moments)
    if not 1 <= i <= mesh.n - 1:
        raise IndexOutOfRange(f"interior node index must be in 1..{mesh.n - 1}, got {i}")
    params = params_from_tension(lam)
    l1, l2 = params.lambda1, params.lambda2
    h = mesh.h
    right = (y[i + 1] - y[i]) / h - h * (l1 * mom[i + 1] + l2 * mom[i])
    left = (y[i] - y[i - 1]) / h + h * (l2 * mom[i] + l1 * mom[i - 1])
    return float(right - left)


def truncation_residual(problem: Problem, mesh: Mesh, params: SchemeParams) -> np.ndarray:
    """Row residuals of the scheme with the exact solution plugged in.

    Entry ``i-1`` is left minus right of row ``i`` for ``i = 1..n-1``.  The
    row is regrouped as

        -eps (y[i+1] - 2 y[i] + y[i-1]) + h^2 (lam1 g[i-1] + 2 lam2 g[i] + lam1 g[i+1])

    with ``g = P y - f``, which is algebraically the same but avoids adding
    O(eps y) terms that cancel down to the O(h^6) remainder.
    """
    if problem.exact is None:
        raise MissingExact(f"problem {problem.name!r} has no exact solution")
    x = mesh.nodes
    y = problem.exact_values(x)
    p, f = problem.coefficients(x)
    g = p * y - f
    h2 = mesh.h * mesh.h
    l1, l2 = params.lambda1, params.lambda2
    second_diff = (y[2:] - y[1:-1]) - (y[1:-1] - y[:-2])
    return -problem.epsilon * second_diff + h2 * (l1 * g[:-2] + 2.0 * l2 * g[1:-1] + l1 * g[2:])
