"""Acceptance suite.

Each criterion prints one ``PASS``/``FAIL`` line, also under pytest's output
capture.  ``python tests/test_acceptance.py`` prints the bare report.
"""

import csv
import io
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tensionspline import scheme
from tensionspline.analysis import observed_order, run_sweep, solve
from tensionspline.linalg import dense_oracle_solve, residual_bound_holds, thomas_solve
from tensionspline.problem import Problem, catalog, verify_exact
from tensionspline.scheme import (
    Mesh,
    SchemeParams,
    assemble,
    continuity_defect,
    moments,
    params_from_tension,
    truncation_residual,
)

FOURTH = SchemeParams.from_preset("fourth_order")
CUBIC = SchemeParams.from_preset("second_order_cubic")
T2_EPS = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]
T2_N = [16, 32]


def report(number, title, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    return ok


@pytest.fixture(scope="module", autouse=True)
def warm_up():
    # compile the kernels once so the runtime budgets measure the solver only
    run_sweep("example_4_2", [1e-3], [4, 8], FOURTH)


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def check_1():
    rep, dt = timed(lambda: run_sweep("example_4_2", T2_EPS, T2_N, FOURTH))
    worst = max(r.max_abs_error for r in rep.records)
    ok = len(rep.records) == 12 and worst <= 1e-12 and dt < 1.0
    return report(1, "quadratic exactness", ok, f"12 cells, max E={worst:.2e}, {dt:.3f}s")


def _layer_orders(params):
    rep, dt = timed(lambda: run_sweep("example_4_1", [1 / 16, 1 / 32], [32, 64, 128], params))
    orders = []
    for o in rep.orders:
        if o.status == "ok":
            orders.append(o.order)
    return rep, orders, dt


def check_2():
    rep, orders, dt = _layer_orders(FOURTH)
    ok = len(orders) == 4 and all(3.5 <= q <= 4.5 for q in orders) and dt < 1.0
    shown = ", ".join(f"{q:.3f}" for q in orders)
    return report(2, "fourth-order slope", ok, f"orders {shown}, {dt:.3f}s")


def check_3():
    rep, orders, _ = _layer_orders(CUBIC)
    ok = len(orders) == 4 and all(1.6 <= q <= 2.4 for q in orders)
    shown = ", ".join(f"{q:.3f}" for q in orders)
    return report(3, "second-order slope", ok, f"orders {shown}")


def _truncation_slopes(params):
    prob = Problem.from_text(1.0, "1", "2*sin(x)", exact="sin(x)", yb=math.sin(1.0))
    res = [np.abs(truncation_residual(prob, Mesh(0.0, 1.0, n), params)).max() for n in (8, 16, 32, 64)]
    return [observed_order(a, b) for a, b in zip(res, res[1:])]


def check_4():
    rng = np.random.default_rng(20240611)
    l1 = 1 / 12
    while abs(l1 - 1 / 12) < 0.02:
        l1 = rng.uniform(0.05, 0.4)
    generic = _truncation_slopes(SchemeParams.direct(l1, 0.5 - l1))
    special = _truncation_slopes(FOURTH)
    ok = all(abs(s - 4) <= 0.3 for s in generic) and all(abs(s - 6) <= 0.3 for s in special)
    detail = (
        f"lambda1={l1:.4f}: " + ", ".join(f"{s:.2f}" for s in generic)
        + "; lambda1=1/12: " + ", ".join(f"{s:.2f}" for s in special)
    )
    return report(4, "truncation order", ok, detail)


def check_5():
    lam = scheme.TAYLOR_SWITCH
    p = params_from_tension(lam)
    dev = max(abs(p.lambda1 - 1 / 6), abs(p.lambda2 - 1 / 3))
    closed = scheme._tension_closed_form(lam)
    taylor = scheme._tension_taylor(lam)
    gap = max(abs(a - b) for a, b in zip(closed, taylor))
    ok = dev <= 1e-7 and gap <= 1e-12
    return report(5, "tension limit", ok, f"|dev|={dev:.2e}, branch gap={gap:.2e}")


def check_6():
    prob = catalog("example_4_1", 1 / 16)
    params = params_from_tension(1.0)
    sol = solve(prob, 32, params)
    mom = moments(prob, sol.mesh, sol.y)
    h = sol.mesh.h
    bound = 1e-10 * np.abs(sol.y).max() / h
    worst = max(abs(continuity_defect(sol.mesh, sol.y, mom, 1.0, i)) for i in range(1, 32))
    return report(6, "derivative continuity", worst <= bound, f"max defect {worst:.2e}, bound {bound:.2e}")


def _random_dominant(rng, m):
    sub = rng.uniform(-1, 1, m - 1)
    sup = rng.uniform(-1, 1, m - 1)
    off = np.zeros(m)
    off[1:] += np.abs(sub)
    off[:-1] += np.abs(sup)
    diag = (off + rng.uniform(0.01, 2.0, m)) * rng.choice([-1.0, 1.0], m)
    return scheme.TridiagonalSystem(sub, diag, sup, rng.normal(size=m))


def check_7():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        s = _random_dominant(rng, int(rng.integers(1, 33)))
        ref = dense_oracle_solve(s)
        x = thomas_solve(s).solution
        worst = max(worst, np.abs(x - ref).max() / np.abs(ref).max())
    cases = 0
    bound_ok = True
    for name, eps_list in (
        ("example_4_1", [1 / 16, 1 / 32, 1 / 64, 1 / 128, 1e-4, 1e-6, 1e-8]),
        ("example_4_2", T2_EPS),
    ):
        for eps in eps_list:
            prob = catalog(name, eps)
            for params in (FOURTH, CUBIC):
                for n in (16, 32, 64, 128, 256):
                    s = assemble(prob, Mesh(0.0, 1.0, n), params)
                    bound_ok &= residual_bound_holds(s, thomas_solve(s).solution)
                    cases += 1
    ok = worst <= 1e-10 and bound_ok
    return report(7, "solver oracle", ok, f"max rel diff {worst:.2e}, residual bound on {cases} assemblies")


def check_8():
    worst = 0.0
    for eps in [1 / 16, 1 / 32, 1 / 64, 1 / 128]:
        worst = max(worst, verify_exact(catalog("example_4_1", eps)))
    for eps in T2_EPS + [1e-9]:
        worst = max(worst, verify_exact(catalog("example_4_2", eps)))
    return report(8, "manufactured-solution audit", worst <= 1e-5, f"max residual {worst:.2e}")


def check_9():
    cmd = [sys.executable, "-m", "tensionspline", "reproduce", "table2"]
    runs = [subprocess.run(cmd, capture_output=True, text=True) for _ in range(2)]
    codes = [r.returncode for r in runs]
    rows = list(csv.DictReader(io.StringIO(runs[0].stdout)))
    cells = {(float(r["epsilon"]), int(r["n"])): float(r["max_abs_error"]) for r in rows}
    expected = {(e, n) for e in T2_EPS for n in T2_N}
    ok = (
        codes == [0, 0]
        and set(cells) == expected
        and all(v <= 1e-12 for v in cells.values())
        and runs[0].stdout == runs[1].stdout
    )
    worst = max(cells.values()) if cells else float("nan")
    return report(9, "CLI reproduce table2", ok, f"exit {codes}, {len(cells)} cells, max E={worst:.2e}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check, capsys):
    with capsys.disabled():
        ok = check()
    assert ok


if __name__ == "__main__":
    run_sweep("example_4_2", [1e-3], [4, 8], FOURTH)
    results = [check() for check in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
