"""Time the compiled kernels against their fallbacks.

    python benchmarks/bench_kernels.py [--sizes 64,1024,16384] [--repeat 5]

Prints one line per (kernel, size) with the best wall time of each path and
checks the two outputs are bit-identical.
"""

import argparse
import timeit

import numpy as np

from tensionspline import _jit, kernels


def cases(n, rng):
    p = rng.uniform(0.5, 2.0, n + 1)
    f = rng.normal(size=n + 1)
    h = 1.0 / n
    asm = (p, f, h, 1e-4, 1 / 12, 5 / 12, 0.0, 0.0)
    sub, diag, sup, rhs = kernels.assemble_numpy(*asm)
    y, mom = rng.normal(size=n + 1), rng.normal(size=n + 1)
    xq = np.linspace(0.0, 1.0, 4 * n + 1)
    return {
        "assemble": (kernels.assemble_jit, kernels.assemble_numpy, asm),
        "thomas": (kernels.thomas_jit, kernels.thomas_numpy, (sub, diag, sup, rhs, 1e-300)),
        "spline": (kernels.spline_jit, kernels.spline_numpy, (xq, 0.0, h, n, y, mom, 1.0, False)),
    }


def as_bytes(out):
    if isinstance(out, tuple):
        return b"".join(np.asarray(o).tobytes() for o in out)
    return out.tobytes()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,1024,16384")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _jit.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<9} {'n':>7} {'jit [s]':>11} {'numpy [s]':>11} {'speedup':>8}  same")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, (fast, slow, call_args) in cases(n, rng).items():
            same = as_bytes(fast(*call_args)) == as_bytes(slow(*call_args))  # also warms up
            t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
            t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
            print(f"{name:<9} {n:>7} {t_fast:>11.3e} {t_slow:>11.3e} {t_slow / t_fast:>8.1f}  {same}")


if __name__ == "__main__":
    main()
