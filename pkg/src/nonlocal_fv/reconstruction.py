"""Minmod-limited piecewise-linear reconstruction of cell data.

Slopes are stored undivided (units of the reconstructed quantity): the
in-cell profile is rho_j + sigma_j * (x - x_j)/dx, so face values are
rho_j +/- sigma_j/2.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend


@dataclass(frozen=True)
class SlopeMode:
    """Limiter configuration: theta in [0, 0.5], optionally an entropy term.

    In entropy mode the limiter gains a fourth argument
    sign(forward difference) * strength * dx**exponent, which caps slopes
    at O(dx^exponent) on fine meshes.
    """

    theta: float = 0.5
    kind: str = "standard"
    strength: float = 1.0  # K, entropy mode only
    exponent: float = 0.5  # delta, entropy mode only

    def __post_init__(self):
        if not 0.0 <= self.theta <= 0.5:
            raise ValueError(f"theta must lie in [0, 0.5], got {self.theta}")
        if self.kind not in ("standard", "entropy"):
            raise ValueError(f"unknown slope mode {self.kind!r}")
        if self.kind == "entropy":
            if not self.strength > 0.0:
                raise ValueError(f"entropy strength K must be > 0, got {self.strength}")
            if not 0.0 < self.exponent < 1.0:
                raise ValueError(f"entropy exponent delta must lie in (0, 1), got {self.exponent}")

    @classmethod
    def standard(cls, theta: float = 0.5) -> "SlopeMode":
        return cls(theta=theta, kind="standard")

    @classmethod
    def entropy(cls, theta: float, strength: float, exponent: float) -> "SlopeMode":
        return cls(theta=theta, kind="entropy", strength=strength, exponent=exponent)

    def limiter_extra(self, dx: float) -> float:
        """Fourth minmod argument magnitude; negative disables it."""
        if self.kind == "entropy":
            return self.strength * dx ** self.exponent
        return -1.0


def minmod(values) -> float:
    """n-argument minmod: min if all positive, max if all negative, else 0."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("minmod needs at least one argument")
    if all(v > 0.0 for v in vals):
        return min(vals)
    if all(v < 0.0 for v in vals):
        return max(vals)
    return 0.0


def slopes(rho_ext: np.ndarray, mode: SlopeMode, dx: float) -> np.ndarray:
    """Limited slopes for every cell of rho_ext that has both neighbours.

    rho_ext carries a halo of >= 1 cell; the result is 2 entries shorter and
    aligns with rho_ext[1:-1].
    """
    rho_ext = np.ascontiguousarray(rho_ext, dtype=np.float64)
    if rho_ext.size < 3:
        raise ValueError("slopes need at least one interior cell plus a 1-cell halo")
    full = _backend.limited_slopes(rho_ext, 2.0 * mode.theta, mode.limiter_extra(dx))
    return full[1:-1]


def face_values(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reconstructed interface values of each cell.

    Returns (left_minus, right_plus): left_minus[j] is the value at the
    right interface of cell j (approached from the left), right_plus[j] the
    value at its left interface (approached from the right).
    """
    rho = np.asarray(rho, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    if rho.shape != sigma.shape:
        raise ValueError("rho and sigma must be aligned")
    half = 0.5 * sigma
    return rho + half, rho - half
