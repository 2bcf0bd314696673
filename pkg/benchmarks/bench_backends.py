"""Benchmark the numba kernels against the pure-numpy fallback.

Times the fused loss+gradient kernel, a full 200-epoch training run, the
assignment solver, and the default 480-run grid. Usage:

    python3 benchmarks/bench_backends.py [--skip-grid]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from protorecon.datagen import sample_dataset
from protorecon.harness import GridConfig, run_grid
from protorecon.kernels import available_backends, get_backend
from protorecon.losses import LossConfig
from protorecon.model import init_params
from protorecon.optim import TrainConfig, train


def timeit(fn, repeats: int) -> float:
    fn()  # warm-up (and numba compile)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_kernel(k, n: int, repeats: int) -> float:
    rng = np.random.default_rng(0)
    d = sample_dataset(n, 1)
    p = init_params(n, rng)
    args = (d.x, d.y, p.a, p.w, p.b, p.c, 1, 1, 1, 0.01, 0.01, 0.01, 0.01)
    return timeit(lambda: k.loss_and_grad(*args), repeats)


def bench_hungarian(k, n: int, repeats: int) -> float:
    cost = np.random.default_rng(1).uniform(0, 1, (n, n))
    return timeit(lambda: k.hungarian(cost), repeats)


def bench_train(n: int, repeats: int) -> float:
    d = sample_dataset(n, 2)
    cfg = TrainConfig(loss_cfg=LossConfig(mask="111"))
    return timeit(lambda: train(d, cfg, seed=3), repeats)


def bench_grid() -> float:
    t0 = time.perf_counter()
    run_grid(GridConfig())
    return time.perf_counter() - t0


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--skip-grid", action="store_true", help="skip the full-grid timing")
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}\n")

    rows = []
    for name in backends:
        k = get_backend(name)
        rows.append((f"loss+grad N=10 ({name})", bench_kernel(k, 10, 2000)))
        rows.append((f"loss+grad N=100 ({name})", bench_kernel(k, 100, 200)))
        rows.append((f"hungarian N=100 ({name})", bench_hungarian(k, 100, 50)))

    import os

    for name in backends:
        os.environ["PROTORECON_BACKEND"] = name
        rows.append((f"train 200 epochs N=30 ({name})", bench_train(30, 10)))
        rows.append((f"train 200 epochs N=100 ({name})", bench_train(100, 3)))
        if not args.skip_grid:
            rows.append((f"full 480-run grid ({name})", bench_grid()))
    os.environ.pop("PROTORECON_BACKEND", None)

    width = max(len(label) for label, _ in rows)
    print(f"{'benchmark':<{width}}  time")
    for label, seconds in rows:
        unit = "s" if seconds >= 0.1 else "ms" if seconds >= 1e-4 else "us"
        value = seconds if unit == "s" else seconds * 1e3 if unit == "ms" else seconds * 1e6
        print(f"{label:<{width}}  {value:8.2f} {unit}")


if __name__ == "__main__":
    main()
