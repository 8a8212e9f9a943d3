"""Experiment configuration, orchestration and output emission.

Config files are flat "key = value" text ('#' starts a comment).  Unknown
keys are errors, as are out-of-range values; see DEFAULTS/REQUIRED for the
key set.  Sweeps reuse one reference solution per configuration, cached on
disk keyed by a hash of the reference-relevant fields.
"""

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import kernels as kernels_mod
from .diagnostics import RunReport, eoa, l1_error_restricted
from .fluxmodels import BUILTIN_FLUXES, FluxModel
from .kernels import KernelSpec
from .mesh import ALPHA_MAX, Grid, build_grid
from .reconstruction import SlopeMode
from .schemes import (
    SCHEMES,
    SchemeConfig,
    SolutionState,
    advance_to_time,
    init_cell_averages,
)


class ConfigError(ValueError):
    """Malformed or out-of-range experiment configuration."""


# ---------------------------------------------------------------------------
# built-in initial profiles


def ic_sine(x):
    return 0.5 + 0.4 * np.sin(np.pi * x)


def ic_amorim_steps(x):
    x = np.asarray(x, dtype=np.float64)
    return (
        0.5 * ((x >= -2.8) & (x <= -1.8))
        + 0.75 * ((x >= -1.2) & (x <= -0.2))
        + 0.75 * ((x >= 0.6) & (x <= 1.0))
        + 1.0 * (x >= 1.5)
    )


def ic_aggarwal_steps(x):
    x = np.asarray(x, dtype=np.float64)
    return 0.25 * ((x >= -0.9) & (x <= 0.1)) + 0.5 * ((x > 0.1) & (x <= 0.3))


BUILTIN_ICS = {
    "sine": ic_sine,
    "amorim_steps": ic_amorim_steps,
    "aggarwal_steps": ic_aggarwal_steps,
}


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    x_left: float
    x_right: float
    scheme: str
    flux: str
    kernel_variant: str
    kernel_a: float | None
    kernel_b: float | None
    kernel_eta: float | None
    kernel_file: str | None
    ic: str
    ic_value: float | None
    ic_file: str | None
    bc: str
    theta: float
    alpha: float
    slope_mode: str
    delta: float
    K: float
    dt_rule: str
    dt_value: float
    t_final: float
    mesh_list: tuple[int, ...]
    reference_M: int | None

    def scheme_config(self, scheme: str | None = None) -> SchemeConfig:
        if self.slope_mode == "entropy":
            mode = SlopeMode.entropy(self.theta, self.K, self.delta)
        else:
            mode = SlopeMode.standard(self.theta)
        return SchemeConfig(slope_mode=mode, alpha=self.alpha, scheme=scheme or self.scheme)

    def kernel_spec(self) -> KernelSpec:
        if self.kernel_variant == "poly52":
            return kernels_mod.poly52(self.kernel_a, self.kernel_b)
        if self.kernel_variant == "cubic":
            return kernels_mod.cubic(self.kernel_eta)
        return kernels_mod.load_tabulated(self.kernel_file)

    def flux_model(self) -> FluxModel:
        return BUILTIN_FLUXES[self.flux]()

    def initial_profile(self):
        if self.ic == "constant":
            c = self.ic_value
            return lambda x: np.full_like(np.asarray(x, dtype=np.float64), c)
        if self.ic == "file":
            data = np.loadtxt(self.ic_file, dtype=np.float64, ndmin=2)
            if data.shape[1] != 2:
                raise ConfigError(f"{self.ic_file}: expected two columns (x, value)")
            xs, ys = data[:, 0], data[:, 1]
            return lambda x: np.interp(x, xs, ys)
        return BUILTIN_ICS[self.ic]

    def grid_for(self, num_cells: int) -> Grid:
        return build_grid(self.x_left, self.x_right, num_cells)

    def dt_for(self, dx: float) -> float:
        if self.dt_rule == "ratio":
            return self.dt_value * dx
        return self.dt_value


_STR_KEYS = {
    "scheme",
    "flux",
    "kernel.variant",
    "kernel.file",
    "ic",
    "ic.file",
    "bc",
    "slope_mode",
    "dt_rule",
}
_FLOAT_KEYS = {
    "domain.left",
    "domain.right",
    "kernel.a",
    "kernel.b",
    "kernel.eta",
    "ic.value",
    "theta",
    "alpha",
    "delta",
    "K",
    "dt_rule.value",
    "t_final",
}
_INT_KEYS = {"reference_M"}
_LIST_KEYS = {"mesh_list"}
KNOWN_KEYS = _STR_KEYS | _FLOAT_KEYS | _INT_KEYS | _LIST_KEYS

DEFAULTS = {
    "theta": 0.5,
    "alpha": 0.16,
    "slope_mode": "standard",
    "delta": 0.5,
    "K": 1.0,
    "kernel.eta": 0.1,
    "scheme": "MH",
}
REQUIRED = {
    "domain.left",
    "domain.right",
    "flux",
    "kernel.variant",
    "ic",
    "bc",
    "dt_rule",
    "dt_rule.value",
    "t_final",
}


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first at line {lines[key]})")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        raw[key] = value
        lines[key] = lineno

    values: dict[str, object] = dict(DEFAULTS)
    for key, value in raw.items():
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{source}:{lines[key]}: {key} must be a number, got {value!r}") from None
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"{source}:{lines[key]}: {key} must be an integer, got {value!r}") from None
        elif key in _LIST_KEYS:
            try:
                values[key] = tuple(int(tok) for tok in value.split())
            except ValueError:
                raise ConfigError(
                    f"{source}:{lines[key]}: {key} must be space-separated integers, got {value!r}"
                ) from None
        else:
            values[key] = value

    missing = sorted(REQUIRED - values.keys())
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}")

    def need(key, context):
        if key not in values:
            raise ConfigError(f"{source}: {context} requires key {key!r}")
        return values[key]

    variant = values["kernel.variant"]
    if variant not in ("poly52", "cubic", "tabulated"):
        raise ConfigError(f"{source}: kernel.variant must be poly52|cubic|tabulated, got {variant!r}")
    if variant == "poly52":
        need("kernel.a", "kernel.variant = poly52")
        need("kernel.b", "kernel.variant = poly52")
    if variant == "tabulated":
        need("kernel.file", "kernel.variant = tabulated")

    ic = values["ic"]
    if ic not in (*BUILTIN_ICS, "constant", "file"):
        raise ConfigError(
            f"{source}: ic must be one of sine|amorim_steps|aggarwal_steps|constant|file, got {ic!r}"
        )
    if ic == "constant":
        need("ic.value", "ic = constant")
    if ic == "file":
        need("ic.file", "ic = file")

    config = ExperimentConfig(
        x_left=values["domain.left"],
        x_right=values["domain.right"],
        scheme=values["scheme"],
        flux=values["flux"],
        kernel_variant=variant,
        kernel_a=values.get("kernel.a"),
        kernel_b=values.get("kernel.b"),
        kernel_eta=values.get("kernel.eta"),
        kernel_file=values.get("kernel.file"),
        ic=ic,
        ic_value=values.get("ic.value"),
        ic_file=values.get("ic.file"),
        bc=values["bc"],
        theta=values["theta"],
        alpha=values["alpha"],
        slope_mode=values["slope_mode"],
        delta=values["delta"],
        K=values["K"],
        dt_rule=values["dt_rule"],
        dt_value=values["dt_rule.value"],
        t_final=values["t_final"],
        mesh_list=values.get("mesh_list", ()),
        reference_M=values.get("reference_M"),
    )
    validate_config(config, source)
    return config


def validate_config(config: ExperimentConfig, source: str = "<config>") -> None:
    def fail(field, message):
        raise ConfigError(f"{source}: {field}: {message}")

    if not config.x_right > config.x_left:
        fail("domain", f"right bound {config.x_right} must exceed left bound {config.x_left}")
    if config.scheme not in SCHEMES:
        fail("scheme", f"must be one of {'|'.join(SCHEMES)}, got {config.scheme!r}")
    if config.flux not in BUILTIN_FLUXES:
        fail("flux", f"must be one of {'|'.join(BUILTIN_FLUXES)}, got {config.flux!r}")
    if config.bc not in ("periodic", "absorbing"):
        fail("bc", f"must be periodic|absorbing, got {config.bc!r}")
    if not 0.0 <= config.theta <= 0.5:
        fail("theta", f"must lie in [0, 0.5], got {config.theta}")
    if not 0.0 < config.alpha < ALPHA_MAX:
        fail("alpha", f"must lie in (0, 8/27), got {config.alpha}")
    if config.slope_mode not in ("standard", "entropy"):
        fail("slope_mode", f"must be standard|entropy, got {config.slope_mode!r}")
    if not 0.0 < config.delta < 1.0:
        fail("delta", f"must lie in (0, 1), got {config.delta}")
    if not config.K > 0.0:
        fail("K", f"must be positive, got {config.K}")
    if config.dt_rule not in ("fixed", "ratio"):
        fail("dt_rule", f"must be fixed|ratio, got {config.dt_rule!r}")
    if not config.dt_value > 0.0:
        fail("dt_rule.value", f"must be positive, got {config.dt_value}")
    if not config.t_final >= 0.0:
        fail("t_final", f"must be nonnegative, got {config.t_final}")
    if config.kernel_variant == "poly52" and not config.kernel_a < config.kernel_b:
        fail("kernel", f"poly52 support needs a < b, got [{config.kernel_a}, {config.kernel_b}]")
    if config.kernel_variant == "cubic" and not config.kernel_eta > 0.0:
        fail("kernel.eta", f"must be positive, got {config.kernel_eta}")
    for m in config.mesh_list:
        if m < 1:
            fail("mesh_list", f"cell counts must be >= 1, got {m}")
    if config.mesh_list and config.reference_M is not None:
        for m in config.mesh_list:
            if config.reference_M % m != 0:
                fail(
                    "mesh_list",
                    f"entry {m} does not divide reference_M = {config.reference_M} (meshes must nest)",
                )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


# ---------------------------------------------------------------------------
# runs


def run_single(
    config: ExperimentConfig,
    num_cells: int,
    scheme: str | None = None,
    force: bool = False,
    track_correction: bool = False,
) -> tuple[RunReport, SolutionState, Grid]:
    """Full simulation of one mesh: returns diagnostics, final state, grid."""
    grid = config.grid_for(num_cells)
    spec = config.kernel_spec()
    kernel = kernels_mod.sample_kernel(spec, grid.dx)
    model = config.flux_model()
    scheme_config = config.scheme_config(scheme)
    state = init_cell_averages(config.initial_profile(), grid)
    dt = config.dt_for(grid.dx)
    final, report = advance_to_time(
        state,
        grid,
        scheme_config,
        model,
        kernel,
        config.bc,
        dt,
        config.t_final,
        force=force,
        track_correction=track_correction,
    )
    return report, final, grid


@dataclass(frozen=True)
class ConvergenceRow:
    scheme: str
    kernel: str
    a: float
    b: float
    M: int
    dx: float
    l1_error: float
    eoa: float | None
    wall_time_s: float


def _reference_hash(config: ExperimentConfig) -> str:
    """Hash of every field the reference solution depends on.

    mesh_list is excluded; the scheme is pinned to MH because references are
    always computed with it.
    """
    ref_cfg = replace(config, mesh_list=(), scheme="MH")
    payload = repr(ref_cfg).encode()
    return hashlib.sha256(payload).hexdigest()


def _reference_cache_path(cache_dir, config: ExperimentConfig) -> str:
    digest = _reference_hash(config)
    return os.path.join(cache_dir, f"ref_{digest[:16]}_M{config.reference_M}.txt")


def compute_reference(config: ExperimentConfig, cache_dir=None, force: bool = False):
    """MH solution on the reference mesh, loaded from cache when available."""
    if config.reference_M is None:
        raise ConfigError("reference_M is required to compute a reference solution")
    grid = config.grid_for(config.reference_M)
    digest = _reference_hash(config)
    path = _reference_cache_path(cache_dir, config) if cache_dir else None
    if path and os.path.exists(path):
        with open(path, "r", encoding="utf-8") as handle:
            header = handle.readline().split()
            cells = np.loadtxt(handle, dtype=np.float64, ndmin=1)
        if (
            len(header) >= 4
            and header[1] == digest
            and header[2] == f"M={config.reference_M}"
            and cells.size == config.reference_M
        ):
            return SolutionState(t=config.t_final, cells=cells), grid
    _, state, _ = run_single(config, config.reference_M, scheme="MH", force=force)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(f"#ref-cache {digest} M={config.reference_M} t_final={config.t_final!r}\n")
            for value in state.cells:
                handle.write(f"{value:.17g}\n")
    return state, grid


def _sweep_worker(config: ExperimentConfig, num_cells: int, scheme: str, force: bool):
    report, state, grid = run_single(config, num_cells, scheme=scheme, force=force)
    return num_cells, state.cells, grid.dx, report.wall_time


class SweepError(RuntimeError):
    """A convergence sweep aborted; .rows carries the completed prefix."""

    def __init__(self, message: str, rows):
        super().__init__(message)
        self.rows = rows


def run_convergence(
    config: ExperimentConfig,
    scheme: str | None = None,
    jobs: int = 1,
    cache_dir=None,
    force: bool = False,
) -> list[ConvergenceRow]:
    """Errors against the MH reference for each mesh, coarse to fine.

    The EOA column pairs consecutive rows; the first row has none.  With
    jobs > 1 the meshes run on a process pool (identical results to the
    sequential sweep; each worker owns its solver state).
    """
    if not config.mesh_list:
        raise ConfigError("mesh_list is required for a convergence sweep")
    if config.reference_M is None:
        raise ConfigError("reference_M is required for a convergence sweep")
    scheme = scheme or config.scheme
    meshes = sorted(config.mesh_list)
    ref_state, ref_grid = compute_reference(config, cache_dir=cache_dir, force=force)

    results = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                m: pool.submit(_sweep_worker, config, m, scheme, force) for m in meshes
            }
            for m in meshes:
                try:
                    results[m] = futures[m].result()
                except Exception as exc:
                    rows = _rows_from_results(config, scheme, meshes, results, ref_state, ref_grid)
                    raise SweepError(f"sweep aborted at M={m}: {exc}", rows) from exc
    else:
        for m in meshes:
            try:
                results[m] = _sweep_worker(config, m, scheme, force)
            except Exception as exc:
                rows = _rows_from_results(config, scheme, meshes, results, ref_state, ref_grid)
                raise SweepError(f"sweep aborted at M={m}: {exc}", rows) from exc

    return _rows_from_results(config, scheme, meshes, results, ref_state, ref_grid)


def _rows_from_results(config, scheme, meshes, results, ref_state, ref_grid):
    spec = config.kernel_spec()
    a, b = spec.support
    rows = []
    previous_error = None
    for m in meshes:
        if m not in results:
            break
        _, cells, dx, wall = results[m]
        grid = config.grid_for(m)
        err = l1_error_restricted(cells, grid, ref_state, ref_grid)
        order = eoa(previous_error, err) if (previous_error is not None and err > 0.0) else None
        rows.append(
            ConvergenceRow(
                scheme=scheme,
                kernel=spec.name,
                a=a,
                b=b,
                M=m,
                dx=dx,
                l1_error=err,
                eoa=order,
                wall_time_s=wall,
            )
        )
        previous_error = err
    return rows


def compare_schemes(
    config: ExperimentConfig,
    num_cells: int | None = None,
    jobs: int = 1,
    force: bool = False,
):
    """Run FO, MH and RK-2 on one mesh; returns {scheme: (report, state, grid)}."""
    if num_cells is None:
        if not config.mesh_list:
            raise ConfigError("compare needs mesh_list (or an explicit cell count)")
        num_cells = max(config.mesh_list)
    schemes = ("FO", "MH", "RK2")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(schemes))) as pool:
            futures = {
                scheme: pool.submit(run_single, config, num_cells, scheme, force)
                for scheme in schemes
            }
            return {scheme: futures[scheme].result() for scheme in schemes}
    return {scheme: run_single(config, num_cells, scheme=scheme, force=force) for scheme in schemes}


# ---------------------------------------------------------------------------
# emitters

CSV_HEADER = "scheme,kernel,a,b,M,dx,l1_error,eoa,wall_time_s"


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def emit_csv(rows, path) -> None:
    if not rows:
        raise ValueError("no rows to emit")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(CSV_HEADER + "\n")
        for r in rows:
            order = "" if r.eoa is None else _fmt(r.eoa)
            handle.write(
                f"{r.scheme},{r.kernel},{_fmt(r.a)},{_fmt(r.b)},{r.M},{_fmt(r.dx)},"
                f"{_fmt(r.l1_error)},{order},{_fmt(r.wall_time_s)}\n"
            )


def emit_table(rows) -> str:
    if not rows:
        raise ValueError("no rows to format")
    header = f"{'M':>6} {'dx':>12} {'L1 error':>14} {'EOA':>10} {'wall [s]':>10}"
    lines = [f"{rows[0].scheme} scheme, {rows[0].kernel} kernel on [{rows[0].a:g}, {rows[0].b:g}]", header]
    for r in rows:
        order = "-" if r.eoa is None else f"{r.eoa:.6f}"
        lines.append(
            f"{r.M:>6} {r.dx:>12.6g} {r.l1_error:>14.6e} {order:>10} {r.wall_time_s:>10.3f}"
        )
    return "\n".join(lines)


def emit_profile(state: SolutionState, grid: Grid, path) -> None:
    """Two-column (cell center, value) plot data at full float precision."""
    centers = grid.cell_centers()
    with open(path, "w", encoding="utf-8") as handle:
        for x, v in zip(centers, state.cells):
            handle.write(f"{x:.17g} {v:.17g}\n")


def parse_csv(path) -> list[ConvergenceRow]:
    """Round-trip reader for files written by emit_csv."""
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {header!r}")
        for line in handle:
            parts = line.rstrip("\n").split(",")
            rows.append(
                ConvergenceRow(
                    scheme=parts[0],
                    kernel=parts[1],
                    a=float(parts[2]),
                    b=float(parts[3]),
                    M=int(parts[4]),
                    dx=float(parts[5]),
                    l1_error=float(parts[6]),
                    eoa=None if parts[7] == "" else float(parts[7]),
                    wall_time_s=float(parts[8]),
                )
            )
    return rows
