#!/usr/bin/env python3
"""Benchmark the hot kernels: numba @njit loops vs the pure-numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py [--repeats 50]

Times both implementations directly (bypassing the env-flag dispatch) after a
warmup call so numba compilation is excluded, and prints a table plus the
end-to-end effect on a short 2D Euler run under each backend.
"""

import argparse
import os
import time

import numpy as np


def timeit(fn, args, repeats):
    fn(*args)  # warmup / compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    from invariant_guard.kernels import euler1d, scalar1d, scalar2d
    rng = np.random.default_rng(0)

    u = rng.normal(size=4096)
    yield ("muscl_advection_1d (n=4096)",
           scalar1d._muscl_advection_numpy, scalar1d._muscl_advection_numba,
           (u, 1.0))
    yield ("muscl_burgers_1d (n=4096)",
           scalar1d._muscl_burgers_numpy, scalar1d._muscl_burgers_numba, (u,))

    chi = rng.normal(size=(256, 256))
    ux = rng.normal(size=(256, 256))
    uy = rng.normal(size=(256, 256))
    yield ("muscl_fluxes_2d (256^2)",
           scalar2d._fluxes_numpy, scalar2d._fluxes_numba, (chi, ux, uy))

    n = 2048
    rho = rng.uniform(0.5, 2.0, n)
    v = rng.uniform(-1.0, 1.0, n)
    p = rng.uniform(0.5, 2.0, n)
    ue = np.stack([rho, rho * v, p / 0.4 + 0.5 * rho * v**2], axis=1)
    u_ext = np.concatenate([ue[-2:], ue, ue[:2]], axis=0)
    yield ("euler_characteristic_muscl (n=2048)",
           euler1d._fluxes_numpy, euler1d._fluxes_numba, (u_ext, 1.4))


def end_to_end(backend):
    os.environ["INVARIANT_GUARD_NUMBA"] = backend
    from invariant_guard import correctors as co
    from invariant_guard.core import UniformGrid2D
    from invariant_guard.drivers import Vorticity2D
    from invariant_guard.problems import ic_random_vorticity
    from invariant_guard.timeloop import StepPlan, run

    ic = ic_random_vorticity(UniformGrid2D(64, 64, 2 * np.pi, 2 * np.pi), 1)
    drv = Vorticity2D(ic, corrector="energy", target=co.L2RateTarget.clamp())
    plan = StepPlan(t_end=0.5, cfl=0.3, n_snapshots=2)
    run(plan, drv)  # warmup (compilation under the numba backend)
    t0 = time.perf_counter()
    run(plan, drv)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=50)
    args = parser.parse_args()

    print(f"{'kernel':42s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, f_np, f_nb, fargs in kernel_cases():
        t_np = timeit(f_np, fargs, args.repeats)
        t_nb = timeit(f_nb, fargs, args.repeats)
        print(f"{name:42s} {t_np * 1e3:9.3f}ms {t_nb * 1e3:9.3f}ms "
              f"{t_np / t_nb:7.1f}x")

    t_numba = end_to_end("1")
    t_numpy = end_to_end("0")
    print(f"\n2D Euler energy-corrected run, 64^2 to t=0.5:")
    print(f"  numpy backend: {t_numpy:.2f}s   numba backend: {t_numba:.2f}s "
          f"({t_numpy / t_numba:.1f}x)")


if __name__ == "__main__":
    main()
