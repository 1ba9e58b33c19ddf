"""Benchmark the numba kernels against the pure-numpy fallback.

Run directly: python benchmarks/bench_kernels.py
Both implementations are importable regardless of POINTERLAB_NO_NUMBA, so
this script times them side by side in one process.
"""

import time

import numpy as np

from pointerlab import _kernels


def timeit(fn, *args, repeat=3, **kwargs):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)

    print(f"numba available: {_kernels.USING_NUMBA}")
    if _kernels.USING_NUMBA:
        # trigger JIT compilation outside the timed region
        _kernels.dawson_batch(np.ones(4))
        _kernels.i_integrals_batch(np.ones(4), np.ones(4), 0.3, 1.0)
        _kernels.coherent_density(np.ones(4), np.ones(4), np.ones(2),
                                  np.ones(2), np.ones(2), np.ones(2), 0.3)

    x = rng.uniform(-10.0, 10.0, 2_000_000)
    rows = [("dawson (2e6 evals)",
             timeit(_kernels.dawson_numpy, x),
             timeit(_kernels.dawson_batch, x) if _kernels.USING_NUMBA else None)]

    z = rng.uniform(-2.0, 2.0, 20_000)
    xx = rng.uniform(-2.0, 2.0, 20_000)
    rows.append(("i_integrals (2e4 points, w=0.15)",
                 timeit(_kernels.i_integrals_numpy, z, xx, 0.15, 1.0,
                        1e-9, 1e-8, repeat=1),
                 timeit(_kernels.i_integrals_batch, z, xx, 0.15, 1.0,
                        1e-9, 1e-8, repeat=1)
                 if _kernels.USING_NUMBA else None))

    m = 49
    cz = rng.uniform(-1, 1, m)
    cx = rng.uniform(-1, 1, m)
    ah = rng.uniform(-1, 1, m)
    av = rng.uniform(-1, 1, m)
    zp = rng.uniform(-2, 2, 1_000_000)
    xp = rng.uniform(-2, 2, 1_000_000)
    rows.append(("beam density (1e6 points, 49 sites)",
                 timeit(_kernels.coherent_density_numpy,
                        zp, xp, cz, cx, ah, av, 0.15),
                 timeit(_kernels.coherent_density, zp, xp, cz, cx, ah, av, 0.15)
                 if _kernels.USING_NUMBA else None))

    print(f"{'kernel':<40} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<40} {t_np:>10.3f} {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{name:<40} {t_np:>10.3f} {t_nb:>10.3f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
