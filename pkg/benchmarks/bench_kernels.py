"""Compiled vs pure-Python kernels: Jacobi eigensolver and compensated summation.

    python benchmarks/bench_kernels.py [--sizes 4 8 16 32] [--repeat 5]

Prints best-of-``repeat`` wall time per call and the speedup of the compiled
backend. Both backends run on identical inputs; their results are compared
before timing so a fast wrong answer cannot win.
"""
import argparse
import timeit

import numpy as np

from csiszar import kernels


def _sym(rng, n):
    m = rng.standard_normal((n, n))
    return (m + m.T) / 2


def _best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--sum-lengths", type=int, nargs="+", default=[100, 10_000, 1_000_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the python backend is available")
    py = backends["python"]
    cy = backends.get("cython")
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<12}{'size':>10}{'python':>14}{'cython':>14}{'speedup':>10}")
    for n in args.sizes:
        a = _sym(rng, n)
        t_py = _best(lambda: py.jacobi_eigh(a), args.repeat)
        row = f"{'jacobi_eigh':<12}{n:>10}{t_py * 1e3:>12.3f}ms"
        if cy is not None:
            np.testing.assert_allclose(np.sort(cy.jacobi_eigh(a)[0]), np.sort(py.jacobi_eigh(a)[0]),
                                       atol=1e-10 * max(1.0, float(np.abs(a).max())))
            t_cy = _best(lambda: cy.jacobi_eigh(a), args.repeat)
            row += f"{t_cy * 1e3:>12.3f}ms{t_py / t_cy:>9.1f}x"
        print(row)
    for n in args.sum_lengths:
        v = rng.standard_normal(n)
        t_py = _best(lambda: py.kahan_sum(v), args.repeat)
        row = f"{'kahan_sum':<12}{n:>10}{t_py * 1e3:>12.3f}ms"
        if cy is not None:
            assert cy.kahan_sum(v) == py.kahan_sum(v)
            t_cy = _best(lambda: cy.kahan_sum(v), args.repeat)
            row += f"{t_cy * 1e3:>12.3f}ms{t_py / t_cy:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
