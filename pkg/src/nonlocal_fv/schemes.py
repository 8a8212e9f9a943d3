"""Boundary extension, the predictor and the MH / FO / RK-2 time steppers.

Each step works on one ghost-extended copy of the state (refreshed once per
stage, so twice per RK-2 step): reconstruction, convolutions and predictor
are evaluated in the halo as well, which is what makes the single-sweep
update near the boundary well defined.  Halo widths are the exact
per-scheme requirements (W = kernel stencil width): W + 1 for FO, W + 2
for RK-2 stages, 2W + 2 for the MH pipeline.
"""

import time
import warnings
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import _backend
from .convolution import ConvolutionFields
from .diagnostics import RunReport
from .fluxmodels import FluxModel, lax_friedrichs_flux
from .kernels import DiscreteKernel
from .mesh import Grid, check_cfl
from .reconstruction import SlopeMode

BOUNDARY_CONDITIONS = ("periodic", "absorbing")
SCHEMES = ("MH", "FO", "RK2")


class CFLViolationError(RuntimeError):
    """The requested step size violates the CFL admissibility bound."""


class NonFiniteStateError(RuntimeError):
    """A step produced a non-finite cell value."""

    def __init__(self, t: float, cell_index: int):
        super().__init__(f"non-finite cell value at t={t!r}, cell index {cell_index}")
        self.t = t
        self.cell_index = cell_index


@dataclass
class SolutionState:
    """Time stamp plus the sequence of cell averages."""

    t: float
    cells: np.ndarray

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.float64)
        if self.cells.ndim != 1 or self.cells.size == 0:
            raise ValueError("cells must be a nonempty 1-D array")


@dataclass(frozen=True)
class SchemeConfig:
    """Scheme selection and its stability parameters."""

    slope_mode: SlopeMode = dataclass_field(default_factory=SlopeMode)
    alpha: float = 0.16
    scheme: str = "MH"

    def __post_init__(self):
        if not 0.0 < self.alpha < 8.0 / 27.0:
            raise ValueError(f"alpha must lie in (0, 8/27), got {self.alpha}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")

    @property
    def theta(self) -> float:
        return self.slope_mode.theta


def extend_with_ghosts(state, bc: str, halo: int) -> np.ndarray:
    """Ghost-extended copy of the cell array.

    periodic wraps indices modulo the cell count; absorbing repeats the edge
    values.  Periodic extension requires halo <= number of cells.
    """
    cells = state.cells if isinstance(state, SolutionState) else np.asarray(state, dtype=np.float64)
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"bc must be one of {BOUNDARY_CONDITIONS}, got {bc!r}")
    if halo < 1:
        raise ValueError(f"halo must be >= 1, got {halo}")
    m = cells.size
    if bc == "periodic":
        if halo > m:
            raise ValueError(f"periodic halo {halo} exceeds cell count {m} (wrap would alias)")
        return np.concatenate([cells[m - halo :], cells, cells[:halo]])
    out = np.empty(m + 2 * halo, dtype=np.float64)
    out[:halo] = cells[0]
    out[halo : halo + m] = cells
    out[halo + m :] = cells[-1]
    return out


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(5)


def init_cell_averages(ic, grid: Grid) -> SolutionState:
    """Cell averages of the initial profile via 5-point Gauss-Legendre."""
    centers = grid.cell_centers()
    nodes = centers[:, None] + (0.5 * grid.dx) * _GAUSS_X[None, :]
    vals = np.asarray(ic(nodes), dtype=np.float64)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    if not np.isfinite(vals).all():
        raise ValueError("initial profile produced non-finite values")
    averages = 0.5 * (vals @ _GAUSS_W)
    return SolutionState(t=0.0, cells=averages)


def predictor(
    faces: tuple[np.ndarray, np.ndarray],
    conv: ConvolutionFields,
    model: FluxModel,
    lam: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Half-step Taylor update of the face values.

    Subtracts (lam/2) times the in-cell flux difference
    f(left_minus, a_minus) - f(right_plus, a_plus) from both faces of each
    cell; returns (rho_half_minus, rho_half_plus), cell-aligned.
    """
    left_minus, right_plus = faces
    dflux = model.eval(left_minus, conv.a_minus) - model.eval(right_plus, conv.a_plus)
    shift = (0.5 * lam) * dflux
    return left_minus - shift, right_plus - shift


def _require_cfl(dt: float, dx: float, config: SchemeConfig, model: FluxModel, force: bool) -> None:
    if check_cfl(dt, dx, config.alpha, model.lip_rho):
        return
    msg = (
        f"dt={dt} violates the CFL bound for dx={dx}, alpha={config.alpha}, "
        f"lip_rho={model.lip_rho}"
    )
    if force:
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
    else:
        raise CFLViolationError(msg)


def _checked_state(t: float, cells: np.ndarray) -> SolutionState:
    bad = ~np.isfinite(cells)
    if bad.any():
        raise NonFiniteStateError(t, int(np.argmax(bad)))
    return SolutionState(t=t, cells=cells)


def _mh_halo(kernel: DiscreteKernel) -> int:
    # slopes need 1 cell, interface convolutions of predictor faces reach
    # stencil_width further out, and those faces again need slopes and
    # interface convolutions of their own: 2W + 2 in total
    return 2 * kernel.stencil_width + 2


def _fo_halo(kernel: DiscreteKernel) -> int:
    return kernel.stencil_width + 1


def _rk2_halo(kernel: DiscreteKernel) -> int:
    # faces (1 ghost) feeding the interface convolution (W + 1)
    return kernel.stencil_width + 2


def _mh_fluxes(
    cells: np.ndarray,
    dx: float,
    lam: float,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    with_fo: bool = False,
):
    """Corrector fluxes at the m+1 interfaces; optionally the first-order
    fluxes from the same extended state (for the correction term)."""
    m = cells.size
    width = kernel.stencil_width
    halo = _mh_halo(kernel)
    ext = extend_with_ghosts(cells, bc, halo)
    mode = config.slope_mode

    # reconstruction, predictor and the interface convolution of its faces
    # only ever feed interfaces within `width` of the interior, so the outer
    # `width` ghost cells matter solely through the cell convolution window:
    # work on the trimmed view (index p = extended index - width)
    sub = ext[width : ext.size - width]
    sigma = _backend.limited_slopes(sub, 2.0 * mode.theta, mode.limiter_extra(dx))
    half_sigma = 0.5 * sigma
    left_minus = sub + half_sigma
    right_plus = sub - half_sigma

    a_center = _backend.conv_cell(ext, kernel.weights, kernel.k_lo, dx)[width : ext.size - width]
    s = np.zeros_like(a_center)
    s[1:-1] = mode.theta * (a_center[2:] - a_center[:-2])
    half_s = 0.5 * s
    a_minus = a_center + half_s
    a_plus = a_center - half_s

    dflux = model.eval(left_minus, a_minus) - model.eval(right_plus, a_plus)
    shift = (0.5 * lam) * dflux
    half_minus = left_minus - shift
    half_plus = right_plus - shift

    a_half = _backend.conv_interface(half_plus, half_minus, kernel.weights, kernel.k_lo, dx)

    lo = halo - 1 - width  # interface between cells lo and lo+1 of the view
    hi = lo + m + 1
    flux = lax_friedrichs_flux(
        model, half_minus[lo:hi], half_plus[lo + 1 : hi + 1], a_half[lo:hi], config.alpha, lam
    )
    if not with_fo:
        return flux, None
    a_fo = _backend.conv_interface(ext, ext, kernel.weights, kernel.k_lo, dx)
    lo_e = halo - 1
    hi_e = halo + m
    flux_fo = lax_friedrichs_flux(
        model, ext[lo_e:hi_e], ext[lo_e + 1 : hi_e + 1], a_fo[lo_e:hi_e], config.alpha, lam
    )
    return flux, flux_fo


def _fo_fluxes(
    cells: np.ndarray,
    dx: float,
    lam: float,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
):
    m = cells.size
    halo = _fo_halo(kernel)
    ext = extend_with_ghosts(cells, bc, halo)
    a_fo = _backend.conv_interface(ext, ext, kernel.weights, kernel.k_lo, dx)
    lo = halo - 1
    hi = halo + m
    return lax_friedrichs_flux(
        model, ext[lo:hi], ext[lo + 1 : hi + 1], a_fo[lo:hi], config.alpha, lam
    )


def _rk2_stage(
    cells: np.ndarray,
    dx: float,
    lam: float,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
) -> np.ndarray:
    """One Euler-forward stage on reconstructed faces with the trapezoidal
    interface convolution of those faces."""
    m = cells.size
    halo = _rk2_halo(kernel)
    ext = extend_with_ghosts(cells, bc, halo)
    mode = config.slope_mode
    sigma = _backend.limited_slopes(ext, 2.0 * mode.theta, mode.limiter_extra(dx))
    half_sigma = 0.5 * sigma
    left_minus = ext + half_sigma
    right_plus = ext - half_sigma
    a_trap = _backend.conv_interface(right_plus, left_minus, kernel.weights, kernel.k_lo, dx)
    lo = halo - 1
    hi = halo + m
    flux = lax_friedrichs_flux(
        model, left_minus[lo:hi], right_plus[lo + 1 : hi + 1], a_trap[lo:hi], config.alpha, lam
    )
    return cells - lam * (flux[1:] - flux[:-1])


def mh_step(
    state: SolutionState,
    grid: Grid,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    dt: float,
    force: bool = False,
) -> SolutionState:
    """Single-stage predictor-corrector update over one time step."""
    _require_cfl(dt, grid.dx, config, model, force)
    lam = dt / grid.dx
    flux, _ = _mh_fluxes(state.cells, grid.dx, lam, config, model, kernel, bc)
    new = state.cells - lam * (flux[1:] - flux[:-1])
    return _checked_state(state.t + dt, new)


def fo_step(
    state: SolutionState,
    grid: Grid,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    dt: float,
    force: bool = False,
) -> SolutionState:
    """First-order update: cell values straight into the two-point flux."""
    _require_cfl(dt, grid.dx, config, model, force)
    lam = dt / grid.dx
    flux = _fo_fluxes(state.cells, grid.dx, lam, config, model, kernel, bc)
    new = state.cells - lam * (flux[1:] - flux[:-1])
    return _checked_state(state.t + dt, new)


def rk2_step(
    state: SolutionState,
    grid: Grid,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    dt: float,
    force: bool = False,
) -> SolutionState:
    """Two Euler-forward stages (ghosts refreshed per stage), then averaging."""
    _require_cfl(dt, grid.dx, config, model, force)
    lam = dt / grid.dx
    r1 = _rk2_stage(state.cells, grid.dx, lam, config, model, kernel, bc)
    r2 = _rk2_stage(r1, grid.dx, lam, config, model, kernel, bc)
    new = 0.5 * (state.cells + r2)
    return _checked_state(state.t + dt, new)


_STEPPERS = {"MH": mh_step, "FO": fo_step, "RK2": rk2_step}


def correction_term(
    state: SolutionState,
    grid: Grid,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    dt: float,
    force: bool = False,
) -> np.ndarray:
    """Per-interface gap lam * (corrector flux - first-order flux).

    Returns m+1 values under the interface convention of the convolution
    module; identically zero at theta = 0.
    """
    _require_cfl(dt, grid.dx, config, model, force)
    lam = dt / grid.dx
    flux, flux_fo = _mh_fluxes(
        state.cells, grid.dx, lam, config, model, kernel, bc, with_fo=True
    )
    return lam * (flux - flux_fo)


def _box_warning(state_range: tuple, model: FluxModel, already_warned: bool) -> bool:
    if already_warned:
        return True
    (rho_lo, rho_hi), _ = model.box
    tol = 1e-10
    lo, hi = state_range
    if lo < rho_lo - tol or hi > rho_hi + tol:
        warnings.warn(
            f"state left the declared flux-model box [{rho_lo}, {rho_hi}] "
            f"(range [{lo}, {hi}]); declared bounds may not apply",
            RuntimeWarning,
            stacklevel=3,
        )
        return True
    return False


def advance_to_time(
    state: SolutionState,
    grid: Grid,
    config: SchemeConfig,
    model: FluxModel,
    kernel: DiscreteKernel,
    bc: str,
    dt: float,
    t_final: float,
    force: bool = False,
    track_correction: bool = False,
) -> tuple[SolutionState, RunReport]:
    """Repeated steps of dt, with the last step truncated to land on t_final.

    The truncated step uses its own dt (and hence its own lam) throughout
    the flux formulas.  Per-step diagnostics are accumulated into a
    RunReport; wall_time clocks the whole loop, step_time only the stepper
    calls (excluding the diagnostics bookkeeping between steps).
    """
    if t_final < state.t:
        raise ValueError(f"t_final {t_final} precedes state time {state.t}")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    stepper = _STEPPERS[config.scheme]
    track = track_correction and config.scheme == "MH"

    report = RunReport.fresh(track_correction=track)
    report.record(grid.dx, state.cells)
    warned = _box_warning(report._last_range, model, False)

    snap = 1e-12 * max(1.0, abs(t_final))
    stepping = 0.0
    t_start = time.perf_counter()
    while t_final - state.t > snap:
        dt_step = min(dt, t_final - state.t)
        if track:
            e = correction_term(state, grid, config, model, kernel, bc, dt_step, force)
            report.correction_max_series.append(float(np.max(np.abs(e))))
        t_step = time.perf_counter()
        state = stepper(state, grid, config, model, kernel, bc, dt_step, force)
        stepping += time.perf_counter() - t_step
        report.record(grid.dx, state.cells)
        warned = _box_warning(report._last_range, model, warned)
    report.wall_time = time.perf_counter() - t_start
    report.step_time = stepping

    state = SolutionState(t=t_final, cells=state.cells)
    return state, report
