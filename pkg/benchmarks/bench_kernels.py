"""Compare the compiled and numpy field kernels.

Run with ``python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]``.
Prints best-of-``repeat`` wall times and the maximum relative difference
between the two backends.
"""
import argparse
import timeit

import numpy as np

from kelvin.kernels import available_backends


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=200_000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    z = rng.uniform(-5, 5, args.n)
    r = rng.uniform(0.01, 5, args.n)
    d = rng.normal(size=(args.n, 3))
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the numpy backend only")

    results = {}
    for name, mod in backends.items():
        t_state = min(timeit.repeat(lambda: mod.kelvin_state(z, r, 1.0, 1.0, 0.25),
                                    number=1, repeat=args.repeat))
        t_green = min(timeit.repeat(lambda: mod.green_tensor(d, 1.0, 0.25),
                                    number=1, repeat=args.repeat))
        results[name] = (t_state, t_green, mod.kelvin_state(z, r, 1.0, 1.0, 0.25),
                         mod.green_tensor(d, 1.0, 0.25))
        print(f"{name:>7}: kelvin_state {t_state * 1e3:8.2f} ms   "
              f"green_tensor {t_green * 1e3:8.2f} ms   ({args.n} points)")

    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        for label, i in (("kelvin_state", 2), ("green_tensor", 3)):
            diff = np.max(np.abs(py[i] - cy[i]) / np.maximum(np.abs(py[i]), 1e-300))
            print(f"{label}: speedup {py[i - 2] / cy[i - 2]:.2f}x, max rel. difference {diff:.1e}")


if __name__ == "__main__":
    main()
