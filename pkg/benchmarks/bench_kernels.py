"""Compiled vs NumPy kernels, on the kernels alone and end to end.

    python benchmarks/bench_kernels.py [--repeat 200]
"""

import argparse
import timeit

import numpy as np

from detrep import kernels
from detrep.bench import BenchConfig, run_sample
from detrep.polycore import HomoPoly
from detrep.representation import build


def _coeffs(rng, n):
    c = rng.standard_normal((n + 1, n + 1)) + 1j * rng.standard_normal((n + 1, n + 1))
    return c * np.tri(n + 1)[::-1]


def cases(rng):
    a, b = _coeffs(rng, 3), _coeffs(rng, 2)
    c5 = _coeffs(rng, 5)
    T = rng.standard_normal((3, 3))
    pts = rng.standard_normal((100, 3)) + 1j * rng.standard_normal((100, 3))
    mats = [rng.standard_normal((n, n)) + 0j for n in (5, 5, 5, 5, 5, 5)]
    p5 = HomoPoly(c5)
    cfg = BenchConfig(degrees=(4,), samples=1, timing=False)
    return {
        "poly_mul 3x2": lambda: kernels.poly_mul(a, b),
        "poly_eval deg5 x100": lambda: kernels.poly_eval(c5, pts),
        "poly_substitute deg5": lambda: kernels.poly_substitute(c5, T),
        "kron_deltas 5x5": lambda: kernels.kron_deltas(*mats),
        "build deg5": lambda: build(p5),
        "solve deg4 system": lambda: run_sample(cfg, 4, 0),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args(argv)
    backends = kernels.available_backends()
    rng = np.random.default_rng(0)
    table = cases(rng)
    print(f"{'case':<24}" + "".join(f"{b + ' us':>14}" for b in backends) + (f"{'speedup':>10}" if len(backends) > 1 else ""))
    for name, fn in table.items():
        times = {}
        for b in backends:
            with kernels.use_backend(b):
                fn()
                number = max(1, args.repeat // 20) if name.startswith(("build", "solve")) else args.repeat
                times[b] = min(timeit.repeat(fn, number=number, repeat=3)) / number * 1e6
        row = f"{name:<24}" + "".join(f"{times[b]:>14.1f}" for b in backends)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
