#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Builds classification-scale instances (2 rule templates per
attribute/class pair) and times energy evaluation, the y-gradient, and
full MAP descent under both backends.

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from deeppsl.kernels import get_backend
from deeppsl.zsl import AttributeMatrix, build_template


def build_case(n_attributes, n_classes, seed):
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.05, 1.0, size=(n_classes, n_attributes))
    matrix = AttributeMatrix(
        values=values,
        class_names=[f"c{i:03d}" for i in range(n_classes)],
        attribute_names=[f"a{i:03d}" for i in range(n_attributes)])
    template = build_template(matrix, matrix.class_names)
    x = rng.uniform(0, 1, template.instance.n_obs)
    return template.instance, x


def time_call(fn, repeats):
    fn()                                   # warm up (JIT compile)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(instance, x, backend, repeats):
    args = instance.arrays()
    y = np.full(instance.n_free, 0.5)
    anchor = np.zeros(instance.n_free)
    rows = {}
    rows["energy"] = time_call(lambda: backend.energy(*args, x, y), repeats)
    rows["grad_y"] = time_call(
        lambda: backend.grad_y(*args, x, y, 100.0, 100.0, 0.0, anchor), repeats)
    rows["map_descent"] = time_call(
        lambda: backend.descend(*args, x, y, 5e-3, 500, 0.0,
                                100.0, 100.0, 0.0, anchor), repeats)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    numpy_be = get_backend("numpy")
    try:
        numba_be = get_backend("numba")
    except ImportError:
        numba_be = None
        print("numba unavailable; only the numpy backend is measured\n")

    cases = [("small  (a=12,  z=8)", build_case(12, 8, 0)),
             ("medium (a=85,  z=40)", build_case(85, 40, 1)),
             ("large  (a=312, z=150)", build_case(312, 150, 2))]

    print(f"{'case':<24} {'kernel':<12} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    print("-" * 73)
    for name, (instance, x) in cases:
        np_rows = bench(instance, x, numpy_be, args.repeats)
        nb_rows = bench(instance, x, numba_be, args.repeats) if numba_be else {}
        for kernel, np_t in np_rows.items():
            nb_t = nb_rows.get(kernel)
            speed = f"{np_t / nb_t:8.1f}x" if nb_t else "      n/a"
            nb_col = f"{nb_t * 1e3:10.3f}ms" if nb_t else "       n/a"
            print(f"{name:<24} {kernel:<12} {np_t * 1e3:10.3f}ms {nb_col} {speed}")
        print()


if __name__ == "__main__":
    main()
