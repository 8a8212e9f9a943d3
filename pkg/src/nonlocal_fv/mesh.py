"""Uniform spatial grid, time-step bookkeeping and the CFL admissibility rule."""

import math
from dataclasses import dataclass

import numpy as np

ALPHA_MAX = 8.0 / 27.0


@dataclass(frozen=True)
class Grid:
    """Uniform mesh of num_cells cells covering [x_left, x_right]."""

    x_left: float
    x_right: float
    num_cells: int
    dx: float

    def cell_centers(self) -> np.ndarray:
        j = np.arange(self.num_cells)
        return self.x_left + (j + 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        return self.x_left + np.arange(self.num_cells + 1) * self.dx


@dataclass(frozen=True)
class TimeControls:
    """Constant step size dt up to t_final; lam is recomputed, never cached."""

    dt: float
    t_final: float
    dx: float

    @property
    def lam(self) -> float:
        return self.dt / self.dx


def build_grid(x_left: float, x_right: float, num_cells: int) -> Grid:
    if not (math.isfinite(x_left) and math.isfinite(x_right)):
        raise ValueError("grid bounds must be finite")
    if x_right <= x_left:
        raise ValueError(f"x_right ({x_right}) must exceed x_left ({x_left})")
    if num_cells < 1:
        raise ValueError(f"num_cells must be >= 1, got {num_cells}")
    dx = (x_right - x_left) / num_cells
    return Grid(x_left=x_left, x_right=x_right, num_cells=num_cells, dx=dx)


def cfl_max_dt(dx: float, alpha: float, lip_rho: float) -> float:
    """Largest admissible dt for the given mesh width and flux bound.

    The step ratio dt/dx must not exceed the smallest of three brackets:
    (8 - 27*alpha)/(27*L), 2/(27*L) and alpha/L, with L the bound on the
    rho-derivative of the flux.
    """
    if not 0.0 < alpha < ALPHA_MAX:
        raise ValueError(f"alpha must lie in (0, 8/27), got {alpha}")
    if lip_rho <= 0.0:
        raise ValueError(f"lip_rho must be positive, got {lip_rho}")
    if dx <= 0.0:
        raise ValueError(f"dx must be positive, got {dx}")
    bound = min(
        (8.0 - 27.0 * alpha) / (27.0 * lip_rho),
        2.0 / (27.0 * lip_rho),
        alpha / lip_rho,
    )
    return dx * bound


def check_cfl(dt: float, dx: float, alpha: float, lip_rho: float) -> bool:
    """True iff a step of size dt is admissible on a mesh of width dx."""
    return dt <= cfl_max_dt(dx, alpha, lip_rho)


def cfl_brackets(alpha: float, lip_rho: float) -> tuple[float, float, float]:
    """The three individual dt/dx brackets, in the order they are combined."""
    if not 0.0 < alpha < ALPHA_MAX:
        raise ValueError(f"alpha must lie in (0, 8/27), got {alpha}")
    if lip_rho <= 0.0:
        raise ValueError(f"lip_rho must be positive, got {lip_rho}")
    return (
        (8.0 - 27.0 * alpha) / (27.0 * lip_rho),
        2.0 / (27.0 * lip_rho),
        alpha / lip_rho,
    )
