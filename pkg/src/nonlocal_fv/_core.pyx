# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernels.

Mirror of _kernels_py.py: same accumulation order (ascending kernel offset)
and the same expression shapes, so both backends produce bit-identical
results.  Keep the two files in sync.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def limited_slopes(double[::1] rho_ext, double two_theta, double extra):
    cdef Py_ssize_t L = rho_ext.shape[0]
    out = np.zeros(L, dtype=np.float64)
    cdef double[::1] sigma = out
    if L < 3:
        return out
    cdef Py_ssize_t e
    cdef double dm, dp, dc, d4, mm
    cdef bint with_extra = extra >= 0.0
    for e in range(1, L - 1):
        dm = rho_ext[e] - rho_ext[e - 1]
        dp = rho_ext[e + 1] - rho_ext[e]
        dc = 0.5 * (rho_ext[e + 1] - rho_ext[e - 1])
        if with_extra:
            d4 = extra if dp > 0.0 else (-extra if dp < 0.0 else 0.0)
            if dm > 0.0 and dc > 0.0 and dp > 0.0 and d4 > 0.0:
                mm = min(min(dm, dc), min(dp, d4))
            elif dm < 0.0 and dc < 0.0 and dp < 0.0 and d4 < 0.0:
                mm = max(max(dm, dc), max(dp, d4))
            else:
                mm = 0.0
        else:
            if dm > 0.0 and dc > 0.0 and dp > 0.0:
                mm = min(min(dm, dc), dp)
            elif dm < 0.0 and dc < 0.0 and dp < 0.0:
                mm = max(max(dm, dc), dp)
            else:
                mm = 0.0
        sigma[e] = two_theta * mm
    return out


def conv_cell(double[::1] rho_ext, double[::1] w, Py_ssize_t k_min, double dx):
    cdef Py_ssize_t L = rho_ext.shape[0]
    cdef Py_ssize_t nw = w.shape[0]
    out = np.zeros(L, dtype=np.float64)
    cdef double[::1] o = out
    if nw == 0:
        return out
    cdef Py_ssize_t k_max = k_min + nw - 1
    cdef Py_ssize_t lo = k_max if k_max > 0 else 0
    cdef Py_ssize_t hi = L + (k_min if k_min < 0 else 0)
    cdef Py_ssize_t e, k
    cdef double acc
    for e in range(lo, hi):
        acc = 0.0
        for k in range(k_min, k_max + 1):
            acc = acc + w[k - k_min] * rho_ext[e - k]
        o[e] = dx * acc
    return out


def conv_interface(
    double[::1] u_plus_ext,
    double[::1] v_minus_ext,
    double[::1] w,
    Py_ssize_t k_min,
    double dx,
):
    cdef Py_ssize_t L = v_minus_ext.shape[0]
    cdef Py_ssize_t nw = w.shape[0]
    out = np.zeros(L, dtype=np.float64)
    cdef double[::1] o = out
    if nw == 0:
        return out
    cdef Py_ssize_t k_max = k_min + nw - 1
    cdef Py_ssize_t lo = k_max if k_max > 0 else 0
    cdef Py_ssize_t hi1 = L + (k_min if k_min < 0 else 0)
    cdef Py_ssize_t hi2 = L - 1 + (k_min if k_min < 1 else 1)
    cdef Py_ssize_t hi = hi1 if hi1 < hi2 else hi2
    cdef Py_ssize_t e, k
    cdef double acc, wk, half_dx
    half_dx = 0.5 * dx
    for e in range(lo, hi):
        acc = 0.0
        for k in range(k_min, k_max + 1):
            wk = w[k - k_min]
            acc = acc + (wk * u_plus_ext[e + 1 - k] + wk * v_minus_ext[e - k])
        o[e] = half_dx * acc
    return out
