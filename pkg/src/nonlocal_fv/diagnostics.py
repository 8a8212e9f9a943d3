"""Norms, variation, reference-error measurement and order-of-accuracy."""

import math
from dataclasses import dataclass, field

import numpy as np


def _cells(state) -> np.ndarray:
    return np.asarray(getattr(state, "cells", state), dtype=np.float64)


def l1_norm(state, dx: float) -> float:
    """Discrete L1 norm dx * sum |rho_j|."""
    return float(dx * np.sum(np.abs(_cells(state))))


def total_variation(state) -> float:
    """Sum of absolute consecutive differences; 0 for a single cell."""
    cells = _cells(state)
    if cells.size < 2:
        return 0.0
    return float(np.sum(np.abs(np.diff(cells))))


def l1_distance_to_reference(coarse, coarse_grid, reference, reference_grid) -> float:
    """Exact L1 distance between two piecewise-constant states on nested meshes.

    The coarse mesh must share endpoints with the reference mesh and its
    cell count must divide the reference cell count.
    """
    if (coarse_grid.x_left != reference_grid.x_left) or (
        coarse_grid.x_right != reference_grid.x_right
    ):
        raise ValueError("meshes must share domain endpoints")
    mc = coarse_grid.num_cells
    mr = reference_grid.num_cells
    if mr % mc != 0:
        raise ValueError(f"meshes are not nested: {mc} cells do not divide {mr}")
    ratio = mr // mc
    diff = np.repeat(_cells(coarse), ratio) - _cells(reference)
    return float(reference_grid.dx * np.sum(np.abs(diff)))


def restrict_to_coarse(reference, reference_grid, coarse_grid) -> np.ndarray:
    """Exact cell averages of a fine piecewise-constant state on a coarser
    nested mesh (conservative restriction)."""
    if (coarse_grid.x_left != reference_grid.x_left) or (
        coarse_grid.x_right != reference_grid.x_right
    ):
        raise ValueError("meshes must share domain endpoints")
    mc = coarse_grid.num_cells
    mr = reference_grid.num_cells
    if mr % mc != 0:
        raise ValueError(f"meshes are not nested: {mc} cells do not divide {mr}")
    return _cells(reference).reshape(mc, mr // mc).mean(axis=1)


def l1_error_restricted(coarse, coarse_grid, reference, reference_grid) -> float:
    """Discrete L1 distance between coarse cell averages and the reference
    restricted (exactly averaged) onto the coarse mesh.

    This is the convergence-table metric: it measures the cell-average error
    only, whereas l1_distance_to_reference additionally integrates the
    in-cell variation of the fine reference (an O(dx) floor that would mask
    second-order behaviour).
    """
    restricted = restrict_to_coarse(reference, reference_grid, coarse_grid)
    return float(coarse_grid.dx * np.sum(np.abs(_cells(coarse) - restricted)))


def eoa(err_coarse: float, err_fine: float) -> float:
    """Experimental order of accuracy log2(err_coarse / err_fine)."""
    if err_coarse <= 0.0 or err_fine <= 0.0:
        raise ValueError("both errors must be positive to form an order estimate")
    return math.log2(err_coarse / err_fine)


@dataclass
class RunReport:
    """Per-run diagnostics: one entry per recorded state (steps + 1 total)."""

    mass_series: list = field(default_factory=list)
    min_series: list = field(default_factory=list)
    linf_series: list = field(default_factory=list)
    tv_series: list = field(default_factory=list)
    correction_max_series: list | None = None
    wall_time: float = 0.0  # clock around the whole time loop
    step_time: float = 0.0  # accumulated stepper calls only (no bookkeeping)

    @classmethod
    def fresh(cls, track_correction: bool = False) -> "RunReport":
        report = cls()
        if track_correction:
            # entry 0 pads the series to the common steps+1 length
            report.correction_max_series = [0.0]
        return report

    def record(self, dx: float, cells: np.ndarray) -> None:
        lo = float(np.min(cells))
        hi = float(np.max(cells))
        self.mass_series.append(float(dx * np.sum(cells)))
        self.min_series.append(lo)
        self.linf_series.append(max(-lo, hi))
        self.tv_series.append(total_variation(cells))
        self._last_range = (lo, hi)

    @property
    def n_steps(self) -> int:
        return len(self.mass_series) - 1

    def mass_drift(self) -> float:
        """Largest relative deviation of mass from its initial value."""
        mass = np.asarray(self.mass_series)
        scale = max(abs(mass[0]), 1e-300)
        return float(np.max(np.abs(mass - mass[0])) / scale)
