"""Adaptive RKF45 stepping over a polynomial vector field, as float kernels.

Two interchangeable implementations: a numba-compiled loop and a pure
numpy/python fallback.  Selection: the INTCERT_NO_NUMBA environment
variable (any nonempty value) forces the fallback, as does a missing or
broken numba install.  Both return identical structures so results differ
only in runtime.
"""

from __future__ import annotations

import os

import numpy as np

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2

# Fehlberg 4(5) tableau
_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 4, 0.0, 0.0, 0.0, 0.0],
        [3 / 32, 9 / 32, 0.0, 0.0, 0.0],
        [1932 / 2197, -7200 / 2197, 7296 / 2197, 0.0, 0.0],
        [439 / 216, -8.0, 3680 / 513, -845 / 4104, 0.0],
        [-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40],
    ]
)
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])


def _poly_eval_py(exps, coefs, x, y):
    return float(np.sum(coefs * (x ** exps[:, 0]) * (y ** exps[:, 1])))


def _rkf45_py(exps_p, coefs_p, exps_q, coefs_q, x0, y0, t0, t1, rtol, atol, max_steps):
    """Pure numpy fallback; identical contract to the compiled kernel."""
    n_cap = max_steps + 2
    ts = np.empty(n_cap)
    xs = np.empty(n_cap)
    ys = np.empty(n_cap)
    ts[0], xs[0], ys[0] = t0, x0, y0
    count = 1
    span = t1 - t0
    direction = 1.0 if span >= 0 else -1.0
    h = direction * max(abs(span) * 1e-3, 1e-8)
    h_min = abs(span) * 1e-14
    t, x, y = t0, x0, y0
    kx = np.empty(6)
    ky = np.empty(6)
    steps = 0
    while direction * (t1 - t) > 0:
        if abs(h) > abs(t1 - t):
            h = t1 - t
        for s in range(6):
            xi = x
            yi = y
            for j in range(s):
                xi += h * _A[s, j] * kx[j]
                yi += h * _A[s, j] * ky[j]
            kx[s] = _poly_eval_py(exps_p, coefs_p, xi, yi)
            ky[s] = _poly_eval_py(exps_q, coefs_q, xi, yi)
        x4 = x + h * float(np.dot(_B4, kx))
        y4 = y + h * float(np.dot(_B4, ky))
        x5 = x + h * float(np.dot(_B5, kx))
        y5 = y + h * float(np.dot(_B5, ky))
        scale_x = atol + rtol * max(abs(x), abs(x4))
        scale_y = atol + rtol * max(abs(y), abs(y4))
        err = np.sqrt(0.5 * (((x4 - x5) / scale_x) ** 2 + ((y4 - y5) / scale_y) ** 2))
        if err <= 1.0 or abs(h) <= h_min:
            if err > 1.0:
                return STATUS_STEP_UNDERFLOW, ts[:count], xs[:count], ys[:count]
            t += h
            x, y = x4, y4
            ts[count], xs[count], ys[count] = t, x, y
            count += 1
            steps += 1
            if steps >= max_steps:
                return STATUS_MAX_STEPS, ts[:count], xs[:count], ys[:count]
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= factor
        if abs(h) < h_min:
            h = direction * h_min
    return STATUS_OK, ts[:count], xs[:count], ys[:count]


def _make_njit_kernel():
    from numba import njit

    @njit(cache=True)
    def poly_eval(exps, coefs, x, y):
        total = 0.0
        for k in range(coefs.shape[0]):
            total += coefs[k] * x ** exps[k, 0] * y ** exps[k, 1]
        return total

    @njit(cache=True)
    def kernel(exps_p, coefs_p, exps_q, coefs_q, x0, y0, t0, t1, rtol, atol, max_steps, A, B4, B5):
        n_cap = max_steps + 2
        ts = np.empty(n_cap)
        xs = np.empty(n_cap)
        ys = np.empty(n_cap)
        ts[0] = t0
        xs[0] = x0
        ys[0] = y0
        count = 1
        span = t1 - t0
        direction = 1.0 if span >= 0 else -1.0
        h0 = abs(span) * 1e-3
        if h0 < 1e-8:
            h0 = 1e-8
        h = direction * h0
        h_min = abs(span) * 1e-14
        t = t0
        x = x0
        y = y0
        kx = np.empty(6)
        ky = np.empty(6)
        steps = 0
        status = STATUS_OK
        while direction * (t1 - t) > 0:
            if abs(h) > abs(t1 - t):
                h = t1 - t
            for s in range(6):
                xi = x
                yi = y
                for j in range(s):
                    xi += h * A[s, j] * kx[j]
                    yi += h * A[s, j] * ky[j]
                kx[s] = poly_eval(exps_p, coefs_p, xi, yi)
                ky[s] = poly_eval(exps_q, coefs_q, xi, yi)
            x4 = x
            y4 = y
            x5 = x
            y5 = y
            for s in range(6):
                x4 += h * B4[s] * kx[s]
                y4 += h * B4[s] * ky[s]
                x5 += h * B5[s] * kx[s]
                y5 += h * B5[s] * ky[s]
            ax = abs(x) if abs(x) > abs(x4) else abs(x4)
            ay = abs(y) if abs(y) > abs(y4) else abs(y4)
            scale_x = atol + rtol * ax
            scale_y = atol + rtol * ay
            ex = (x4 - x5) / scale_x
            ey = (y4 - y5) / scale_y
            err = np.sqrt(0.5 * (ex * ex + ey * ey))
            if err <= 1.0 or abs(h) <= h_min:
                if err > 1.0:
                    status = STATUS_STEP_UNDERFLOW
                    break
                t += h
                x = x4
                y = y4
                ts[count] = t
                xs[count] = x
                ys[count] = y
                count += 1
                steps += 1
                if steps >= max_steps:
                    status = STATUS_MAX_STEPS
                    break
            if err == 0.0:
                factor = 5.0
            else:
                factor = 0.9 * err ** -0.2
                if factor > 5.0:
                    factor = 5.0
                elif factor < 0.2:
                    factor = 0.2
            h *= factor
            if abs(h) < h_min:
                h = direction * h_min
        return status, ts[:count], xs[:count], ys[:count]

    return kernel


_njit_kernel = None


def backend_name() -> str:
    if os.environ.get("INTCERT_NO_NUMBA"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def rkf45_polyfield(exps_p, coefs_p, exps_q, coefs_q, x0, y0, t0, t1, rtol, atol, max_steps):
    """(status, ts, xs, ys) for the trajectory of the compiled field."""
    exps_p = np.ascontiguousarray(exps_p, dtype=np.int64)
    coefs_p = np.ascontiguousarray(coefs_p, dtype=np.float64)
    exps_q = np.ascontiguousarray(exps_q, dtype=np.int64)
    coefs_q = np.ascontiguousarray(coefs_q, dtype=np.float64)
    if backend_name() == "numba":
        global _njit_kernel
        if _njit_kernel is None:
            _njit_kernel = _make_njit_kernel()
        return _njit_kernel(
            exps_p, coefs_p, exps_q, coefs_q,
            float(x0), float(y0), float(t0), float(t1),
            float(rtol), float(atol), int(max_steps), _A, _B4, _B5,
        )
    return _rkf45_py(
        exps_p, coefs_p, exps_q, coefs_q,
        float(x0), float(y0), float(t0), float(t1),
        float(rtol), float(atol), int(max_steps),
    )
