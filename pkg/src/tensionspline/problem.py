"""Boundary value problems ``-eps y'' + P(x) y = f(x)``, ``y(a) = ya``, ``y(b) = yb``."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    InvalidProblem,
    MissingExact,
    ProblemFileError,
    UnknownProblem,
)
from .exprparse import Expr, evaluate, evaluate_many, parse, to_source

__all__ = [
    "Problem",
    "NonPositiveCoefficientWarning",
    "CATALOG",
    "catalog",
    "verify_exact",
    "load_problem_file",
    "parse_problem_text",
    "parse_real",
]

BOUNDARY_TOL = 1e-12


class NonPositiveCoefficientWarning(UserWarning):
    """P(x) is not positive everywhere on the interval."""


@dataclass(frozen=True)
class Problem:
    """A singularly perturbed two-point boundary value problem.

    ``p``, ``f`` and ``exact`` are parsed expressions in ``x`` and ``eps``;
    use :meth:`from_text` to build one from expression strings.
    """

    epsilon: float
    p: Expr
    f: Expr
    a: float = 0.0
    b: float = 1.0
    ya: float = 0.0
    yb: float = 0.0
    exact: Optional[Expr] = None
    name: str = "custom"
    sources: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise InvalidProblem(f"eps must be positive, got {self.epsilon!r}")
        if not self.a < self.b:
            raise InvalidProblem(f"need a < b, got a={self.a!r}, b={self.b!r}")
        if self.exact is not None:
            for where, target in ((self.a, self.ya), (self.b, self.yb)):
                got = evaluate(self.exact, where, self.epsilon)
                if abs(got - target) > BOUNDARY_TOL * max(1.0, abs(target)):
                    raise InvalidProblem(
                        f"exact solution gives {got!r} at x={where!r}, "
                        f"boundary value is {target!r}"
                    )
        xs = np.linspace(self.a, self.b, 101)
        if evaluate_many(self.p, xs, self.epsilon).min() <= 0.0:
            warnings.warn(
                f"P(x) = {self.source('p')} is not positive on [{self.a}, {self.b}]; "
                "the tridiagonal system may lose diagonal dominance",
                NonPositiveCoefficientWarning,
                stacklevel=3,
            )

    @classmethod
    def from_text(cls, epsilon, p, f, exact=None, **kwargs):
        sources = {"p": p, "f": f}
        if exact is not None:
            sources["exact"] = exact
        return cls(
            epsilon=float(epsilon),
            p=parse(p),
            f=parse(f),
            exact=None if exact is None else parse(exact),
            sources=sources,
            **kwargs,
        )

    def source(self, key):
        """Expression text for ``p``, ``f`` or ``exact`` as originally written."""
        if key in self.sources:
            return self.sources[key]
        expr = getattr(self, key)
        return None if expr is None else to_source(expr)

    def with_epsilon(self, epsilon):
        return replace(self, epsilon=float(epsilon))

    def coefficients(self, xs):
        """``(P(x), f(x))`` sampled at the points ``xs``."""
        return (
            evaluate_many(self.p, xs, self.epsilon),
            evaluate_many(self.f, xs, self.epsilon),
        )

    def exact_values(self, xs):
        if self.exact is None:
            raise MissingExact(f"problem {self.name!r} has no exact solution")
        return evaluate_many(self.exact, xs, self.epsilon)


# Built-in benchmarks.  The layer problem keeps the denominator
# 1 + exp(-1/sqrt(eps)) as written, which stays finite as eps -> 0.
CATALOG = {
    "example_4_1": {
        "p": "1",
        "f": "-cos(pi*x)^2 - 2*eps*pi^2*cos(2*pi*x)",
        "exact": "(exp(-(1 - x)/sqrt(eps)) + exp(-x/sqrt(eps)))"
        " / (1 + exp(-1/sqrt(eps))) - cos(pi*x)^2",
    },
    "example_4_2": {
        "p": "1 + x",
        "f": "-40*(x*(x^2 - 1) - 2*eps)",
        "exact": "40*x*(1 - x)",
    },
}


def catalog(name: str, epsilon: float) -> Problem:
    """One of the built-in problems at perturbation parameter ``epsilon``."""
    try:
        entry = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise UnknownProblem(f"unknown problem {name!r}; known problems: {known}") from None
    return Problem.from_text(epsilon, entry["p"], entry["f"], entry["exact"], name=name)


def verify_exact(problem: Problem, n_samples: int = 101) -> float:
    """Largest ODE residual of the exact solution at interior sample points.

    ``y''`` comes from a central second difference with step
    ``cbrt(machine eps) * max(1, |x|)``.  For ``eps < 1e-3`` the samples stay
    ``10 sqrt(eps)`` away from both ends, where a difference quotient cannot
    resolve a boundary layer.
    """
    if problem.exact is None:
        raise MissingExact(f"problem {problem.name!r} has no exact solution")
    if n_samples < 3:
        raise ValueError("n_samples must be at least 3")
    eps = problem.epsilon
    lo, hi = problem.a, problem.b
    if eps < 1e-3:
        margin = 10.0 * math.sqrt(eps)
        lo, hi = lo + margin, hi - margin
    xs = np.linspace(lo, hi, n_samples + 2)[1:-1]
    base_step = np.finfo(float).eps ** (1.0 / 3.0)
    worst = 0.0
    for x in xs:
        step = base_step * max(1.0, abs(x))
        # exactly representable step keeps x +- step symmetric
        step = (x + step) - x
        y0 = evaluate(problem.exact, x, eps)
        ym = evaluate(problem.exact, x - step, eps)
        yp = evaluate(problem.exact, x + step, eps)
        ypp = (yp - 2.0 * y0 + ym) / (step * step)
        residual = -eps * ypp + evaluate(problem.p, x, eps) * y0 - evaluate(problem.f, x, eps)
        worst = max(worst, abs(residual))
    return worst


def parse_real(text: str) -> float:
    """Parse ``"0.25"``, ``"1e-4"`` or a rational such as ``"1/16"`` exactly."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a real number: {text!r}") from None


_REAL_KEYS = {"eps", "a", "b", "ya", "yb"}
_EXPR_KEYS = {"p", "f", "exact"}


def parse_problem_text(text: str, epsilon: Optional[float] = None, name="custom") -> Problem:
    """Build a :class:`Problem` from ``key = value`` lines.

    Keys: ``eps``, ``a``, ``b``, ``ya``, ``yb`` (reals) and ``p``, ``f``,
    ``exact`` (expressions).  ``#`` starts a comment.  ``epsilon``, when
    given, overrides the file's ``eps``.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ProblemFileError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _REAL_KEYS | _EXPR_KEYS:
            raise ProblemFileError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ProblemFileError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ProblemFileError(f"line {lineno}: empty value for {key!r}")
        if key in _REAL_KEYS:
            try:
                values[key] = parse_real(value)
            except ValueError as exc:
                raise ProblemFileError(f"line {lineno}: {exc}") from None
        else:
            values[key] = value
    for key in ("p", "f"):
        if key not in values:
            raise ProblemFileError(f"missing required key {key!r}")
    if epsilon is None:
        if "eps" not in values:
            raise ProblemFileError("missing required key 'eps'")
        epsilon = values["eps"]
    return Problem.from_text(
        epsilon,
        values["p"],
        values["f"],
        values.get("exact"),
        a=values.get("a", 0.0),
        b=values.get("b", 1.0),
        ya=values.get("ya", 0.0),
        yb=values.get("yb", 0.0),
        name=name,
    )


def load_problem_file(path, epsilon: Optional[float] = None) -> Problem:
    path = Path(path)
    return parse_problem_text(path.read_text(), epsilon=epsilon, name=path.stem or "custom")
