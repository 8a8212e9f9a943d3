"""Numpy implementations of the hot stepping kernels.

These are the fallback for the compiled extension in _core.pyx.  Both
backends accumulate in the same order (ascending kernel offset, matching
expression shapes) so that results agree bit for bit; keep them in sync.

Array convention: inputs are ghost-extended cell arrays of length L.
Outputs have length L with entries outside the computable range left at
zero.  Interface index e sits between cells e and e+1.
"""

import numpy as np


def limited_slopes(rho_ext: np.ndarray, two_theta: float, extra: float) -> np.ndarray:
    """Minmod-limited undivided slopes on every cell with both neighbours.

    extra < 0 selects the plain three-argument limiter; extra >= 0 appends
    sign(forward difference) * extra as a fourth argument.
    """
    r = np.asarray(rho_ext, dtype=np.float64)
    sigma = np.zeros_like(r)
    if r.size < 3:
        return sigma
    dm = r[1:-1] - r[:-2]
    dp = r[2:] - r[1:-1]
    dc = 0.5 * (r[2:] - r[:-2])
    if extra >= 0.0:
        d4 = np.where(dp > 0.0, extra, np.where(dp < 0.0, -extra, 0.0))
        pos = (dm > 0.0) & (dc > 0.0) & (dp > 0.0) & (d4 > 0.0)
        neg = (dm < 0.0) & (dc < 0.0) & (dp < 0.0) & (d4 < 0.0)
        mn = np.minimum(np.minimum(dm, dc), np.minimum(dp, d4))
        mx = np.maximum(np.maximum(dm, dc), np.maximum(dp, d4))
    else:
        pos = (dm > 0.0) & (dc > 0.0) & (dp > 0.0)
        neg = (dm < 0.0) & (dc < 0.0) & (dp < 0.0)
        mn = np.minimum(np.minimum(dm, dc), dp)
        mx = np.maximum(np.maximum(dm, dc), dp)
    sigma[1:-1] = two_theta * np.where(pos, mn, np.where(neg, mx, 0.0))
    return sigma


def conv_cell(rho_ext: np.ndarray, w: np.ndarray, k_min: int, dx: float) -> np.ndarray:
    """Midpoint-rule convolution at cell centers: out[e] = dx * sum_k w_k * rho[e-k]."""
    r = np.asarray(rho_ext, dtype=np.float64)
    out = np.zeros_like(r)
    nw = len(w)
    if nw == 0:
        return out
    L = r.size
    k_max = k_min + nw - 1
    lo = max(k_max, 0)
    hi = L + min(k_min, 0)
    if lo >= hi:
        return out
    acc = np.zeros(hi - lo)
    for i, k in enumerate(range(k_min, k_max + 1)):
        acc += w[i] * r[lo - k : hi - k]
    out[lo:hi] = dx * acc
    return out


def conv_interface(
    u_plus_ext: np.ndarray, v_minus_ext: np.ndarray, w: np.ndarray, k_min: int, dx: float
) -> np.ndarray:
    """Trapezoidal-rule convolution at interfaces.

    out[e] = (dx/2) * sum_k [w_k * u_plus[e+1-k] + w_k * v_minus[e-k]],
    pairing the left-face sequence u_plus and right-face sequence v_minus.
    """
    up = np.asarray(u_plus_ext, dtype=np.float64)
    vm = np.asarray(v_minus_ext, dtype=np.float64)
    out = np.zeros_like(vm)
    nw = len(w)
    if nw == 0:
        return out
    L = vm.size
    k_max = k_min + nw - 1
    lo = max(k_max, 0)
    hi = min(L + min(k_min, 0), L - 1 + min(k_min, 1))
    if lo >= hi:
        return out
    acc = np.zeros(hi - lo)
    for i, k in enumerate(range(k_min, k_max + 1)):
        acc += w[i] * up[lo + 1 - k : hi + 1 - k] + w[i] * vm[lo - k : hi - k]
    out[lo:hi] = (0.5 * dx) * acc
    return out
