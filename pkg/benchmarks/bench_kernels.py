"""Compare the compiled and numpy walk kernels on full Dirac walk steps.

    python benchmarks/bench_kernels.py [--repeat 5] [--steps 20]
"""
import argparse
import time

import numpy as np

from diracwalk.backend import get_kernels
from diracwalk.fields import GridSpec, random_state
from diracwalk.walk import apply_walk_steps, build_dirac_walk

CASES = [(1, 4096), (1, 65536), (2, 128), (2, 512), (3, 32), (3, 64)]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--steps", type=int, default=20)
    args = parser.parse_args()

    backends = {"python": get_kernels("python")}
    try:
        backends["cython"] = get_kernels("cython")
    except ImportError:
        print("compiled kernels not built; timing the numpy fallback only")

    print(f"{'n':>2} {'N':>6} {'sites':>9}  " + "  ".join(f"{name:>12}" for name in backends) + "   speedup")
    for n, N in CASES:
        d = 4 if n == 3 else 2
        g = GridSpec(n, N, 0.01)
        phi = random_state(g, d, np.random.default_rng(0))
        walk = build_dirac_walk(n, 1.0, g.spacing)
        per_step = {}
        for name, kern in backends.items():
            apply_walk_steps(walk, phi, 1, kernels=kern)
            per_step[name] = best_time(lambda: apply_walk_steps(walk, phi, args.steps, kernels=kern), args.repeat)
            per_step[name] /= args.steps
        cols = "  ".join(f"{per_step[name] * 1e3:9.3f} ms" for name in backends)
        speed = f"{per_step['python'] / per_step['cython']:8.2f}x" if "cython" in per_step else ""
        print(f"{n:>2} {N:>6} {N ** n:>9}  {cols}  {speed}")


if __name__ == "__main__":
    main()
