"""Compare the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best-of-``repeat`` wall time per call for both backends
and the speed-up.  The end-to-end rows swap the backend used by the library
for the duration of the measurement.
"""

import argparse
import contextlib
import timeit

import numpy as np

from qchi2 import _kernels_py, fop, kernels
from qchi2.harness import DEFAULT_LAMBDA_GRID, convexity_scan

_NAMES = ("mc_kernel", "hadamard_quadform", "weight_log_nodes", "divided_differences")


@contextlib.contextmanager
def backend(module):
    saved = {name: getattr(kernels, name) for name in _NAMES}
    for name in _NAMES:
        setattr(kernels, name, getattr(module, name))
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def cases():
    rng = np.random.default_rng(0)
    lam = rng.uniform(1e-3, 1.0, 64)
    c = _kernels_py.mc_kernel(kernels.FAMILY_WYD, 0.3, lam)
    x = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    t = fop.log_grid(1e-3, 1e3, 200)
    nodes, weights = np.polynomial.legendre.leggauss(64)
    ft = np.sqrt(t[:40])
    dft = 0.5 / ft
    yield "mc_kernel ruskai n=64", lambda m: (lambda: m.mc_kernel(kernels.FAMILY_RUSKAI, 0.3, lam))
    yield "mc_kernel wyd n=64", lambda m: (lambda: m.mc_kernel(kernels.FAMILY_WYD, 0.3, lam))
    yield "hadamard_quadform n=64", lambda m: (lambda: m.hadamard_quadform(c, x))
    yield "weight_log_nodes 200x64", lambda m: (lambda: m.weight_log_nodes(t, nodes, weights))
    yield "divided_differences n=40", lambda m: (lambda: m.divided_differences(t[:40], ft, dft))

    linear = fop.from_weight(fop.linear_weight())
    yield "from_weight(linear) 200 pts", lambda m: (lambda: linear(t))
    wyd = fop.wyd_family(0.25)
    yield "convexity scan wyd n=3 x20", lambda m: (
        lambda: convexity_scan(wyd, 3, 20, DEFAULT_LAMBDA_GRID, seed=1))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    compiled = kernels.compiled_module()
    if compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':32s} {'cython':>12s} {'python':>12s} {'speed-up':>9s}")
    for name, make in cases():
        times = []
        for module in (compiled, _kernels_py):
            with backend(module):
                times.append(best(make(module), args.repeat))
        print(f"{name:32s} {times[0] * 1e6:10.1f}us {times[1] * 1e6:10.1f}us {times[1] / times[0]:8.2f}x")


if __name__ == "__main__":
    main()
