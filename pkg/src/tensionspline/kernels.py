"""Hot numeric loops.

Every kernel exists in two forms: a loop written in the numba subset (compiled
by :func:`tensionspline._jit.njit`) and a NumPy fallback.  The public names at
the bottom of the module select one of them according to
:data:`tensionspline._jit.ENABLE_JIT`.  The ``*_jit`` and ``*_numpy`` names
stay importable so the benchmark and the equivalence tests can call both.
"""

import math

import numpy as np

from . import _jit

# ---------------------------------------------------------------------------
# tridiagonal assembly


def _assemble_loop(p, f, h, eps, lam1, lam2, ya, yb):
    n = p.shape[0] - 1
    m = n - 1
    sub = np.empty(m - 1)
    diag = np.empty(m)
    sup = np.empty(m - 1)
    rhs = np.empty(m)
    h2 = h * h
    for k in range(m):
        i = k + 1
        diag[k] = 2.0 * (eps + lam2 * h2 * p[i])
        rhs[k] = h2 * (lam1 * f[i - 1] + 2.0 * lam2 * f[i] + lam1 * f[i + 1])
        if k > 0:
            sub[k - 1] = lam1 * h2 * p[i - 1] - eps
        if k < m - 1:
            sup[k] = lam1 * h2 * p[i + 1] - eps
    rhs[0] = rhs[0] - (lam1 * h2 * p[0] - eps) * ya
    rhs[m - 1] = rhs[m - 1] - (lam1 * h2 * p[n] - eps) * yb
    return sub, diag, sup, rhs


def assemble_numpy(p, f, h, eps, lam1, lam2, ya, yb):
    n = p.shape[0] - 1
    h2 = h * h
    diag = 2.0 * (eps + lam2 * h2 * p[1:n])
    rhs = h2 * (lam1 * f[0 : n - 1] + 2.0 * lam2 * f[1:n] + lam1 * f[2 : n + 1])
    sub = lam1 * h2 * p[1 : n - 1] - eps
    sup = lam1 * h2 * p[2:n] - eps
    rhs[0] = rhs[0] - (lam1 * h2 * p[0] - eps) * ya
    rhs[-1] = rhs[-1] - (lam1 * h2 * p[n] - eps) * yb
    return sub, diag, sup, rhs


# ---------------------------------------------------------------------------
# Thomas algorithm
#
# Returns (x, min_pivot, bad_row); bad_row >= 0 flags a pivot below tiny.


def _thomas_loop(sub, diag, sup, rhs, tiny):
    m = diag.shape[0]
    c = np.empty(m)
    d = np.empty(m)
    x = np.empty(m)
    pivot = diag[0]
    min_pivot = abs(pivot)
    if min_pivot < tiny:
        return x, min_pivot, 0
    if m > 1:
        c[0] = sup[0] / pivot
    d[0] = rhs[0] / pivot
    for k in range(1, m):
        pivot = diag[k] - sub[k - 1] * c[k - 1]
        if abs(pivot) < min_pivot:
            min_pivot = abs(pivot)
        if abs(pivot) < tiny:
            return x, min_pivot, k
        if k < m - 1:
            c[k] = sup[k] / pivot
        d[k] = (rhs[k] - sub[k - 1] * d[k - 1]) / pivot
    x[m - 1] = d[m - 1]
    for k in range(m - 2, -1, -1):
        x[k] = d[k] - c[k] * x[k + 1]
    return x, min_pivot, -1


# The recurrence is sequential, so the fallback is the same loop run by the
# interpreter over float64 arrays.
thomas_numpy = _thomas_loop


# ---------------------------------------------------------------------------
# spline segment evaluation


def _spline_loop(xq, a, h, n, y, mom, lam, cubic):
    # Segment form: S = h^2 (M[i+1] g(t) + M[i] g(s)) + t y[i+1] + s y[i]
    # with g(u) = (sinh(lam u) - u sinh(lam)) / (lam^2 sinh(lam)), and
    # g(u) = (u^3 - u)/6 in the cubic limit.
    out = np.empty(xq.shape[0])
    h2 = h * h
    if not cubic and lam < 1.0:
        lam_over_sinh = lam / math.sinh(lam)
    else:
        lam_over_sinh = 1.0
    for q in range(xq.shape[0]):
        x = xq[q]
        i = int((x - a) / h)
        if i > n - 1:
            i = n - 1
        if i < 0:
            i = 0
        xi = a + i * h
        xi1 = a + (i + 1) * h
        if x == xi:
            out[q] = y[i]
            continue
        if x == xi1:
            out[q] = y[i + 1]
            continue
        t = (x - xi) / h
        s = (xi1 - x) / h
        gt = 0.0
        gs = 0.0
        for j in range(2):
            u = t if j == 0 else s
            if cubic:
                g = (u * u * u - u) / 6.0
            elif lam < 1.0:
                # power series of sinh(lam u) - u sinh(lam), no cancellation
                acc = 0.0
                lam_pow = 1.0
                u_pow = u
                fact = 1.0
                for k in range(1, 40):
                    u_pow = u_pow * u * u
                    fact = fact * (2 * k) * (2 * k + 1)
                    term = lam_pow * (u_pow - u) / fact
                    acc += term
                    if abs(term) <= 1e-17 * abs(acc):
                        break
                    lam_pow = lam_pow * lam * lam
                g = lam_over_sinh * acc
            elif lam > 20.0:
                # sinh(lam u)/sinh(lam) via expm1, sinh overflows past ~710
                r = math.exp(lam * (u - 1.0)) * (-math.expm1(-2.0 * lam * u))
                r = r / (-math.expm1(-2.0 * lam))
                g = (r - u) / (lam * lam)
            else:
                g = (math.sinh(lam * u) / math.sinh(lam) - u) / (lam * lam)
            if j == 0:
                gt = g
            else:
                gs = g
        out[q] = h2 * (mom[i + 1] * gt + mom[i] * gs) + t * y[i + 1] + s * y[i]
    return out


spline_numpy = _spline_loop


# ---------------------------------------------------------------------------
# selection

if _jit.HAS_NUMBA:
    assemble_jit = _jit.njit(_assemble_loop)
    thomas_jit = _jit.njit(_thomas_loop)
    spline_jit = _jit.njit(_spline_loop)
else:  # pragma: no cover
    assemble_jit = thomas_jit = spline_jit = None


if _jit.ENABLE_JIT:
    assemble = assemble_jit
    thomas = thomas_jit
    spline_eval = spline_jit
else:
    assemble = assemble_numpy
    thomas = thomas_numpy
    spline_eval = spline_numpy
