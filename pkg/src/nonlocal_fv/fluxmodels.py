"""Flux functions f(rho, A), their rho-derivatives and global bounds.

A FluxModel declares the (rho, A) box over which its bounds hold; lip_rho
backs the CFL rule and m_const the runtime stability diagnostics.  Both
bounds are caller-declared, never estimated from data.
"""

from dataclasses import dataclass
from typing import Callable

from .mesh import ALPHA_MAX


@dataclass(frozen=True)
class FluxModel:
    name: str
    eval: Callable  # f(rho, A)
    d_rho: Callable  # df/drho(rho, A)
    lip_rho: float  # bound on |d_rho| over the box
    box: tuple[tuple[float, float], tuple[float, float]]  # (rho range, A range)
    m_const: float  # bound M with |dA f| <= M |rho| over the box


def builtin_lwr() -> FluxModel:
    """f(rho, A) = rho (1 - rho) (1 - A) on the unit box."""
    return FluxModel(
        name="lwr",
        eval=lambda rho, A: rho * (1.0 - rho) * (1.0 - A),
        d_rho=lambda rho, A: (1.0 - 2.0 * rho) * (1.0 - A),
        lip_rho=1.0,
        box=((0.0, 1.0), (0.0, 1.0)),
        m_const=1.0,
    )


def builtin_linear() -> FluxModel:
    """f(rho, A) = rho (1 - A) on the unit box."""
    return FluxModel(
        name="linear",
        eval=lambda rho, A: rho * (1.0 - A),
        d_rho=lambda rho, A: (1.0 - A) + 0.0 * rho,
        lip_rho=1.0,
        box=((0.0, 1.0), (0.0, 1.0)),
        m_const=1.0,
    )


BUILTIN_FLUXES = {"lwr": builtin_lwr, "linear": builtin_linear}


def lax_friedrichs_flux(model: FluxModel, u, v, A, alpha: float, lam: float):
    """Two-point flux (f(u,A) + f(v,A))/2 - alpha (v - u)/(2 lam).

    Consistent by construction: u == v gives f(u, A) exactly.
    """
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    if not 0.0 < alpha < ALPHA_MAX:
        raise ValueError(f"alpha must lie in (0, 8/27), got {alpha}")
    return 0.5 * (model.eval(u, A) + model.eval(v, A)) - (0.5 * alpha / lam) * (v - u)
