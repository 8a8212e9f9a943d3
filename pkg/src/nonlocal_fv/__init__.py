"""Finite-volume solvers for 1-D non-local scalar conservation laws.

Solves d_t rho + d_x f(rho, mu*rho) = 0 with a single-stage second-order
predictor-corrector scheme (MH), its first-order reduction (FO) and a
two-stage MUSCL-RK2 comparator, plus a convergence/diagnostics harness.

The hot kernels (convolutions, slope limiting) run through a compiled
extension when available and a numpy fallback otherwise; see
nonlocal_fv.active_backend().
"""

from ._backend import active_backend, available_backends
from .convolution import (
    ConvolutionFields,
    cell_center_convolution,
    convolution_fields,
    convolution_slopes,
    fo_interface_convolution,
    interface_convolutions,
    midtime_convolution,
)
from .diagnostics import (
    RunReport,
    eoa,
    l1_distance_to_reference,
    l1_error_restricted,
    l1_norm,
    restrict_to_coarse,
    total_variation,
)
from .fluxmodels import FluxModel, builtin_linear, builtin_lwr, lax_friedrichs_flux
from .kernels import (
    DiscreteKernel,
    KernelSpec,
    cubic,
    load_tabulated,
    normalization_constant,
    poly52,
    sample_kernel,
    support_extent,
    sup_abs_derivative,
    tabulated,
)
from .mesh import Grid, TimeControls, build_grid, cfl_max_dt, check_cfl
from .reconstruction import SlopeMode, face_values, minmod, slopes
from .runner import (
    ConfigError,
    ConvergenceRow,
    ExperimentConfig,
    compare_schemes,
    emit_csv,
    emit_profile,
    emit_table,
    load_config,
    parse_config,
    run_convergence,
    run_single,
)
from .schemes import (
    CFLViolationError,
    NonFiniteStateError,
    SchemeConfig,
    SolutionState,
    advance_to_time,
    correction_term,
    extend_with_ghosts,
    fo_step,
    init_cell_averages,
    mh_step,
    predictor,
    rk2_step,
)

__version__ = "0.1.0"
