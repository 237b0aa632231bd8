"""Benchmark the jump-relation kernels: numba backend vs numpy fallback.

Each backend is timed in its own subprocess (the backend is fixed at
import time by SSRR_BACKEND).  Workloads: batched normal-jump solves of
increasing size, and a full polar trace including root refinement.

    python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import time

SRC = os.path.join(os.path.dirname(__file__), "..", "src")

SIZES = (1_000, 10_000, 100_000, 1_000_000)


def run_workloads():
    import numpy as np

    from ssrr import _kernels
    from ssrr.gas import GasModel
    from ssrr.polar import polar_trace
    from ssrr.shock import UpstreamData

    gamma, rho_u = 1.4, 1.0
    c_u = float(np.sqrt(gamma))
    rng = np.random.default_rng(1)
    results = {"backend": _kernels.BACKEND, "batch": {}, "trace": None}

    # warm up (JIT compilation for the numba path)
    _kernels.jump_density_batch(gamma, rho_u, c_u * (1.0 + rng.uniform(0.01, 2.0, size=16)))

    for n in SIZES:
        zn = c_u * (1.0 + rng.uniform(0.001, 2.5, size=n))
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            _kernels.jump_density_batch(gamma, rho_u, zn)
            best = min(best, time.perf_counter() - t0)
        results["batch"][str(n)] = best

    up = UpstreamData(GasModel(gamma), 1.0, np.array([3.0, 0.2]))
    polar_trace(up, np.array([1.0, 0.0]), 64)  # warm up
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        polar_trace(up, np.array([1.0, 0.0]), 512)
        best = min(best, time.perf_counter() - t0)
    results["trace"] = best
    return results


def main():
    if os.environ.get("_SSRR_BENCH_CHILD"):
        print(json.dumps(run_workloads()))
        return

    rows = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ)
        env["SSRR_BACKEND"] = backend
        env["_SSRR_BENCH_CHILD"] = "1"
        env["PYTHONPATH"] = os.path.abspath(SRC) + os.pathsep + env.get("PYTHONPATH", "")
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__)],
            capture_output=True, text=True, env=env, check=True,
        )
        rows[backend] = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'workload':>22s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for n in SIZES:
        a = rows["numba"]["batch"][str(n)]
        b = rows["numpy"]["batch"][str(n)]
        print(f"{'jump batch n=%d' % n:>22s} {a * 1e3:>10.3f}ms {b * 1e3:>10.3f}ms {b / a:>8.1f}x")
    a = rows["numba"]["trace"]
    b = rows["numpy"]["trace"]
    print(f"{'polar trace (512/side)':>22s} {a * 1e3:>10.3f}ms {b * 1e3:>10.3f}ms {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
