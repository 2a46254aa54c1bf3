#!/usr/bin/env python3
"""Compare the compiled and numpy kernel backends on the hot evaluation
paths. Run twice: once normally and once with IFS_SPECTRA_PURE_PY=1, or let
this script spawn the second run itself (the backend is fixed at import)."""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def bench(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--depth", type=int, default=40)
    parser.add_argument("--no-spawn", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    from ifs_spectra import kernels

    rng = np.random.default_rng(0)
    pts = rng.uniform(-50, 50, size=(args.points, 2))
    digits = np.array([[0.0, 0.0], [0.0, 3.0], [1.0, 0.0], [1.0, 3.0]])
    s_inv = np.linalg.inv(np.array([[4.0, 1.0], [0.0, 4.0]]))

    print(f"backend={kernels.BACKEND} points={args.points} depth={args.depth}")
    t = bench(kernels.weight_values, pts, digits)
    print(f"  weight_values   {t * 1e3:8.2f} ms")
    t = bench(kernels.mask_values, pts, digits)
    print(f"  mask_values     {t * 1e3:8.2f} ms")
    t = bench(kernels.mask_products, pts, digits, s_inv, args.depth, repeat=3)
    print(f"  mask_products   {t * 1e3:8.2f} ms")

    if not args.no_spawn and kernels.BACKEND == "cython":
        env = dict(os.environ, IFS_SPECTRA_PURE_PY="1")
        subprocess.run(
            [sys.executable, __file__, "--points", str(args.points),
             "--depth", str(args.depth), "--no-spawn"],
            env=env, check=True,
        )


if __name__ == "__main__":
    main()
