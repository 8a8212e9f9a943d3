"""The four discrete convolution operators of the scheme.

Index conventions, fixed here once and shared by every module:

* cell-aligned arrays: position j holds the value for cell j; within-cell
  face arrays align the same way (left_minus[j] lives at the right
  interface of cell j, right_plus[j] at its left interface);
* interface arrays returned by the interface operators have m + 1 entries
  for an m-cell interior, left to right: entry i is the interface between
  cells i-1 and i (entry 0 the left boundary, entry m the right boundary).

Sums run over the kernel's trimmed nonzero window only, accumulated in
ascending-offset order; no compensated summation (determinism over the
last few bits of accuracy).
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .kernels import DiscreteKernel


@dataclass(frozen=True)
class ConvolutionFields:
    """Cell-aligned convolution data: centers, slopes and interface values.

    a_minus[j] = a_center[j] + s[j]/2 (right interface of cell j),
    a_plus[j] = a_center[j] - s[j]/2 (left interface of cell j).
    """

    a_center: np.ndarray
    s: np.ndarray
    a_minus: np.ndarray
    a_plus: np.ndarray


def _as_ext(arr, halo: int, min_interior: int = 1) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out.ndim != 1:
        raise ValueError("expected a 1-D cell array")
    if halo < 0 or out.size - 2 * halo < min_interior:
        raise ValueError(f"halo {halo} leaves no interior in array of length {out.size}")
    return out


def _require_window(kernel: DiscreteKernel, halo: int, need_extra: int = 0) -> None:
    need = kernel.stencil_width + need_extra
    if halo < need:
        raise ValueError(
            f"insufficient halo for convolution: have {halo}, need >= {need} "
            f"(kernel window [{kernel.k_lo}, {kernel.k_hi}])"
        )


def cell_center_convolution(rho_ext: np.ndarray, kernel: DiscreteKernel, dx: float, halo: int) -> np.ndarray:
    """Midpoint-rule convolution at the interior cell centers.

    rho_ext carries `halo` ghost cells on each side; the result has
    len(rho_ext) - 2*halo entries aligned with the interior cells.
    """
    ext = _as_ext(rho_ext, halo)
    _require_window(kernel, halo)
    full = _backend.conv_cell(ext, kernel.weights, kernel.k_lo, dx)
    return full[halo : ext.size - halo]


def convolution_slopes(a_center_ext: np.ndarray, theta: float) -> np.ndarray:
    """Centered-difference slopes s_j = theta * (A_{j+1} - A_{j-1}).

    a_center_ext carries a 1-cell halo; the result aligns with its interior.
    """
    a = _as_ext(a_center_ext, 1)
    return theta * (a[2:] - a[:-2])


def interface_convolutions(a_center: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell interface values (a_minus, a_plus) from centers and slopes."""
    a = np.asarray(a_center, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if a.shape != s.shape:
        raise ValueError("a_center and s must be aligned")
    half = 0.5 * s
    return a + half, a - half


def convolution_fields(rho_ext: np.ndarray, kernel: DiscreteKernel, dx: float, theta: float, halo: int) -> ConvolutionFields:
    """Centers, slopes and interface values for the interior cells in one go."""
    ext = _as_ext(rho_ext, halo)
    _require_window(kernel, halo, need_extra=1)
    full = _backend.conv_cell(ext, kernel.weights, kernel.k_lo, dx)
    a_ext = full[halo - 1 : ext.size - halo + 1]
    s = convolution_slopes(a_ext, theta)
    a_center = a_ext[1:-1]
    a_minus, a_plus = interface_convolutions(a_center, s)
    return ConvolutionFields(a_center=a_center, s=s, a_minus=a_minus, a_plus=a_plus)


def midtime_convolution(
    rho_half_plus_ext: np.ndarray,
    rho_half_minus_ext: np.ndarray,
    kernel: DiscreteKernel,
    dx: float,
    halo: int,
) -> np.ndarray:
    """Trapezoidal-rule convolution of predictor faces at the interfaces.

    Both face arrays are cell-aligned with `halo` ghost cells; the result has
    m + 1 entries (interior interface convention above).
    """
    up = _as_ext(rho_half_plus_ext, halo)
    vm = _as_ext(rho_half_minus_ext, halo)
    if up.size != vm.size:
        raise ValueError("face arrays must be the same length")
    _require_window(kernel, halo, need_extra=1)
    full = _backend.conv_interface(up, vm, kernel.weights, kernel.k_lo, dx)
    return full[halo - 1 : up.size - halo]


def fo_interface_convolution(rho_ext: np.ndarray, kernel: DiscreteKernel, dx: float, halo: int) -> np.ndarray:
    """Interface convolution of cell values: the midtime rule with both faces
    replaced by the cell averages (termwise identical at theta = 0)."""
    ext = _as_ext(rho_ext, halo)
    _require_window(kernel, halo, need_extra=1)
    full = _backend.conv_interface(ext, ext, kernel.weights, kernel.k_lo, dx)
    return full[halo - 1 : ext.size - halo]
