"""Convolution kernels: definitions, normalization and discrete sampling.

Every kernel is nonnegative, compactly supported on an interval [a, b] and
scaled to unit integral.  The discrete form tabulates mu(k*dx) on an index
window covering the support; raw samples are used as-is (no discrete
renormalization), so the midpoint sum dx*sum(mu_k) is close to but not
exactly 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

_BETA_72_72 = 5.0 * math.pi / 1024.0  # int_0^1 (t(1-t))^(5/2) dt


class KernelSpec:
    """A nonnegative kernel with compact support [a, b] and unit integral.

    Subclasses set name, support, norm_const (the divisor applied to the
    unnormalized profile) and h4_smooth (False for kernels that are merely
    continuous, e.g. tabulated data).
    """

    name: str
    support: tuple[float, float]
    norm_const: float
    h4_smooth: bool

    def evaluate(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError


class Poly52Kernel(KernelSpec):
    """((x-a)(b-x))^(5/2) bump on [a, b], normalized."""

    h4_smooth = True

    def __init__(self, a: float, b: float):
        _check_support(a, b)
        self.name = "poly52"
        self.support = (float(a), float(b))
        self.norm_const = (b - a) ** 6 * _BETA_72_72

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        a, b = self.support
        p = np.clip((x - a) * (b - x), 0.0, None)
        return np.where((x >= a) & (x <= b), p ** 2.5 / self.norm_const, 0.0)

    def derivative(self, x):
        x = np.asarray(x, dtype=np.float64)
        a, b = self.support
        p = np.clip((x - a) * (b - x), 0.0, None)
        return np.where(
            (x >= a) & (x <= b),
            2.5 * p ** 1.5 * (a + b - 2.0 * x) / self.norm_const,
            0.0,
        )


class CubicKernel(KernelSpec):
    """(-x(eta+x))^3 bump on [-eta, 0], normalized by eta^7/140."""

    h4_smooth = True

    def __init__(self, eta: float):
        if not (math.isfinite(eta) and eta > 0.0):
            raise ValueError(f"eta must be a positive finite number, got {eta}")
        self.name = "cubic"
        self.eta = float(eta)
        self.support = (-float(eta), 0.0)
        self.norm_const = eta ** 7 / 140.0

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        q = np.clip(-x * (self.eta + x), 0.0, None)
        return np.where((x >= -self.eta) & (x <= 0.0), q ** 3 / self.norm_const, 0.0)

    def derivative(self, x):
        x = np.asarray(x, dtype=np.float64)
        q = np.clip(-x * (self.eta + x), 0.0, None)
        return np.where(
            (x >= -self.eta) & (x <= 0.0),
            3.0 * q ** 2 * (-self.eta - 2.0 * x) / self.norm_const,
            0.0,
        )


class TabulatedKernel(KernelSpec):
    """Piecewise-linear kernel through (x, mu) samples, trapezoid-normalized.

    Accepted even though piecewise-linear data is not twice differentiable;
    h4_smooth is False to flag that.
    """

    h4_smooth = False

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("tabulated kernel needs two equal-length columns, >= 2 rows")
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise ValueError("tabulated kernel data must be finite")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("tabulated kernel x-column must be strictly increasing")
        if np.any(ys < 0.0):
            raise ValueError("tabulated kernel values must be nonnegative")
        _check_support(xs[0], xs[-1])
        total = np.trapezoid(ys, xs)
        if total <= 0.0:
            raise ValueError("tabulated kernel must have positive integral")
        self.name = "tabulated"
        self.support = (float(xs[0]), float(xs[-1]))
        self.norm_const = float(total)
        self._xs = xs
        self._ys = ys / total

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.interp(x, self._xs, self._ys, left=0.0, right=0.0)

    def derivative(self, x):
        x = np.asarray(x, dtype=np.float64)
        slopes = np.diff(self._ys) / np.diff(self._xs)
        idx = np.clip(np.searchsorted(self._xs, x, side="right") - 1, 0, slopes.size - 1)
        inside = (x > self._xs[0]) & (x < self._xs[-1])
        return np.where(inside, slopes[idx], 0.0)


def _check_support(a: float, b: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("kernel support bounds must be finite")
    if not a < b:
        raise ValueError(f"kernel support must satisfy a < b, got [{a}, {b}]")


def poly52(a: float, b: float) -> Poly52Kernel:
    return Poly52Kernel(a, b)


def cubic(eta: float) -> CubicKernel:
    return CubicKernel(eta)


def tabulated(xs, ys) -> TabulatedKernel:
    return TabulatedKernel(xs, ys)


def load_tabulated(path) -> TabulatedKernel:
    """Read a two-column text file (x, mu(x)) into a tabulated kernel."""
    data = np.loadtxt(path, dtype=np.float64, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (x, mu), got {data.shape[1]}")
    return TabulatedKernel(data[:, 0], data[:, 1])


def normalization_constant(spec: KernelSpec) -> float:
    """The divisor that scales the unnormalized profile to unit integral."""
    return spec.norm_const


def support_extent(spec: KernelSpec) -> tuple[float, float]:
    """Smallest closed interval containing the kernel support."""
    return spec.support


@dataclass(frozen=True)
class DiscreteKernel:
    """Samples mu_k = mu(k*dx) on an index window covering the support.

    samples holds the full stored window starting at index k_min; weights /
    k_lo is the same data trimmed to the leading/trailing nonzero entries,
    which is what the convolution sums iterate over.  undersampled is set
    when dx >= b - a, i.e. the mesh cannot resolve the kernel.
    """

    samples: np.ndarray
    k_min: int
    dx: float
    ghost_count: int
    undersampled: bool
    weights: np.ndarray = field(repr=False)
    k_lo: int = 0

    @property
    def k_hi(self) -> int:
        return self.k_lo + len(self.weights) - 1

    @property
    def stencil_width(self) -> int:
        """Largest |k| with mu_k != 0; 0 when every sample vanishes."""
        if len(self.weights) == 0:
            return 0
        return max(abs(self.k_lo), abs(self.k_hi))


def sample_kernel(spec: KernelSpec, dx: float) -> DiscreteKernel:
    """Tabulate mu at x = k*dx for every k with k*dx within [a - dx, b + dx]."""
    if not (math.isfinite(dx) and dx > 0.0):
        raise ValueError(f"dx must be a positive finite number, got {dx}")
    a, b = spec.support
    k_min = math.ceil((a - dx) / dx - 1e-9)
    k_max = math.floor((b + dx) / dx + 1e-9)
    ks = np.arange(k_min, k_max + 1)
    samples = np.asarray(spec.evaluate(ks * dx), dtype=np.float64)
    nz = np.nonzero(samples)[0]
    if nz.size:
        weights = samples[nz[0] : nz[-1] + 1].copy()
        k_lo = k_min + int(nz[0])
    else:
        weights = np.empty(0, dtype=np.float64)
        k_lo = 0
    return DiscreteKernel(
        samples=samples,
        k_min=k_min,
        dx=dx,
        ghost_count=math.ceil((b - a) / dx - 1e-9),
        undersampled=dx >= (b - a),
        weights=weights,
        k_lo=k_lo,
    )


def sup_abs_derivative(spec: KernelSpec, samples: int = 200001) -> float:
    """Supremum of |mu'| over the support, by dense sampling plus refinement.

    Exact for tabulated kernels (max segment slope); for smooth kernels the
    two-stage grid search is accurate to near the grid-square resolution.
    """
    if isinstance(spec, TabulatedKernel):
        slopes = np.diff(spec._ys) / np.diff(spec._xs)
        return float(np.max(np.abs(slopes)))
    a, b = spec.support
    xs = np.linspace(a, b, samples)
    vals = np.abs(spec.derivative(xs))
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, samples - 1)]
    fine = np.linspace(lo, hi, samples)
    return float(np.max(np.abs(spec.derivative(fine))))
