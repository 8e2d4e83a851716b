"""Compare the numba kernel against the pure-numpy fallback.

The trajectory stepping is the only float-hot loop in the package (the
symbolic kernel is exact rational arithmetic, which neither backend can
express), so this is the benchmark the INTCERT_NO_NUMBA switch is about.

Run:  python3 benchmarks/bench_integrator.py
"""

import os
import time

import numpy as np


CASES = [
    ("linear saddle", [(1, 0)], [1.0], [(0, 1)], [-1.0], (1.0, 1.0), (0.0, 6.0)),
    (
        "separable quadratic",
        [(2, 0), (1, 0)],
        [1.0, -1.0],
        [(0, 2), (0, 1)],
        [1.0, -1.0],
        (0.5, 0.5),
        (0.0, 5.0),
    ),
    (
        "forced linear",
        [(0, 0)],
        [1.0],
        [(1, 0), (0, 1)],
        [1.0, 1.0],
        (0.0, 1.0),
        (0.0, 8.0),
    ),
]


def run_backend(label):
    # re-import with the chosen backend; kernels cache per-process, so the
    # flag must be set before the first call
    from intcert import _numkernels

    totals = []
    for name, ep, cp, eq, cq, start, span in CASES:
        exps_p = np.array(ep, dtype=np.int64)
        coefs_p = np.array(cp, dtype=np.float64)
        exps_q = np.array(eq, dtype=np.int64)
        coefs_q = np.array(cq, dtype=np.float64)
        # warm-up (pays the JIT cost outside the timed region)
        _numkernels.rkf45_polyfield(
            exps_p, coefs_p, exps_q, coefs_q, *start, *span, 1e-10, 1e-12, 2_000_000
        )
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            status, ts, xs, ys = _numkernels.rkf45_polyfield(
                exps_p, coefs_p, exps_q, coefs_q, *start, *span, 1e-10, 1e-12, 2_000_000
            )
            best = min(best, time.perf_counter() - t0)
        totals.append(best)
        print(f"  {name:24s} status={status} steps={len(ts):6d}  {best * 1e3:9.3f} ms")
    print(f"  {'total':24s} {'':22s} {sum(totals) * 1e3:9.3f} ms")
    return sum(totals)


def main():
    print(f"backend requested via INTCERT_NO_NUMBA={os.environ.get('INTCERT_NO_NUMBA', '')!r}")
    from intcert import _numkernels

    print(f"active backend: {_numkernels.backend_name()}")
    run_backend(_numkernels.backend_name())
    print()
    print("Run both paths:")
    print("  python3 benchmarks/bench_integrator.py                # numba (default)")
    print("  INTCERT_NO_NUMBA=1 python3 benchmarks/bench_integrator.py   # numpy fallback")


if __name__ == "__main__":
    main()
