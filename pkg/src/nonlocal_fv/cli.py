"""Command-line front end: run, convergence, compare, check-cfl.

Exit codes: 0 success, 1 configuration error, 2 solver error.
"""

import argparse
import os
import sys

from ._backend import active_backend
from .mesh import cfl_brackets, cfl_max_dt
from .runner import (
    ConfigError,
    SweepError,
    compare_schemes,
    emit_csv,
    emit_profile,
    emit_table,
    load_config,
    run_convergence,
    run_single,
)
from .schemes import CFLViolationError, NonFiniteStateError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocal-fv",
        description="Finite-volume solvers for 1-D non-local scalar conservation laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--force", action="store_true", help="downgrade CFL errors to warnings")
        p.add_argument("--scheme", choices=["MH", "FO", "RK2"], help="override the config scheme")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")

    p_run = sub.add_parser("run", help="single simulation, emits a profile file")
    common(p_run)
    p_run.add_argument("--cells", type=int, help="cell count (default: finest mesh_list entry)")

    p_conv = sub.add_parser("convergence", help="refinement sweep against the reference mesh")
    common(p_conv, jobs=True)

    p_cmp = sub.add_parser("compare", help="run FO, MH and RK2 on one mesh")
    common(p_cmp, jobs=True)
    p_cmp.add_argument("--cells", type=int, help="cell count (default: finest mesh_list entry)")

    p_cfl = sub.add_parser("check-cfl", help="print the CFL brackets for the config")
    p_cfl.add_argument("--config", required=True)
    p_cfl.add_argument("--cells", type=int, help="cell count (default: finest mesh_list entry)")
    return parser


def _pick_cells(config, cells):
    if cells is not None:
        return cells
    if not config.mesh_list:
        raise ConfigError("no --cells given and the config has no mesh_list")
    return max(config.mesh_list)


def _cmd_run(args) -> int:
    config = load_config(args.config)
    m = _pick_cells(config, args.cells)
    scheme = args.scheme or config.scheme
    report, state, grid = run_single(config, m, scheme=args.scheme, force=args.force)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"profile_{scheme}_M{m}.txt")
    emit_profile(state, grid, path)
    print(f"{scheme} on M={m} cells to t={config.t_final} ({report.n_steps} steps, "
          f"{report.wall_time:.3f} s, backend {active_backend()})")
    print(f"  mass drift {report.mass_drift():.3e}, min {min(report.min_series):.3e}, "
          f"final TV {report.tv_series[-1]:.6f}")
    print(f"  profile written to {path}")
    return 0


def _cmd_convergence(args) -> int:
    config = load_config(args.config)
    scheme = args.scheme or config.scheme
    os.makedirs(args.out, exist_ok=True)
    cache_dir = os.path.join(args.out, "cache")
    rows = run_convergence(config, scheme=args.scheme, jobs=args.jobs,
                           cache_dir=cache_dir, force=args.force)
    path = os.path.join(args.out, f"convergence_{scheme}.csv")
    emit_csv(rows, path)
    print(emit_table(rows))
    print(f"CSV written to {path}")
    return 0


def _cmd_compare(args) -> int:
    config = load_config(args.config)
    m = _pick_cells(config, args.cells)
    os.makedirs(args.out, exist_ok=True)
    results = compare_schemes(config, num_cells=m, jobs=args.jobs, force=args.force)
    note = " (timings under concurrent load)" if args.jobs > 1 else ""
    print(f"schemes on M={m} cells to t={config.t_final} (backend {active_backend()}){note}")
    for scheme, (report, state, grid) in results.items():
        path = os.path.join(args.out, f"profile_{scheme}_M{m}.txt")
        emit_profile(state, grid, path)
        per_step = report.step_time / max(report.n_steps, 1)
        print(
            f"  {scheme:>3}: {report.wall_time:.3f} s loop, "
            f"{per_step * 1e6:.1f} us/step in the stepper -> {path}"
        )
    return 0


def _cmd_check_cfl(args) -> int:
    config = load_config(args.config)
    m = _pick_cells(config, args.cells)
    grid = config.grid_for(m)
    model = config.flux_model()
    dt = config.dt_for(grid.dx)
    brackets = cfl_brackets(config.alpha, model.lip_rho)
    names = ("(8 - 27 alpha)/(27 L)", "2/(27 L)", "alpha/L")
    binding = min(range(3), key=lambda i: brackets[i])
    max_dt = cfl_max_dt(grid.dx, config.alpha, model.lip_rho)
    print(f"M={m}, dx={grid.dx:.6g}, alpha={config.alpha}, lip_rho={model.lip_rho}")
    for i, (name, value) in enumerate(zip(names, brackets)):
        mark = "  <- binding" if i == binding else ""
        print(f"  {name:>22} = {value:.9g}{mark}")
    print(f"  max admissible dt = {max_dt:.9g}")
    print(f"  configured dt     = {dt:.9g}  ({'admissible' if dt <= max_dt else 'VIOLATES CFL'})")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "convergence": _cmd_convergence,
    "compare": _cmd_compare,
    "check-cfl": _cmd_check_cfl,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (CFLViolationError, NonFiniteStateError, SweepError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
