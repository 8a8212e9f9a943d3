"""Shared fixtures and reference oracles for the test suite."""

import numpy as np
import pytest

import nonlocal_fv as nf

SMOOTH_CFG = """
domain.left = -1
domain.right = 1
flux = lwr
kernel.variant = poly52
kernel.a = {a}
kernel.b = {b}
ic = sine
bc = periodic
dt_rule = ratio
dt_rule.value = 0.05
t_final = 0.15
mesh_list = 10 20 40 80 160
reference_M = 640
"""

STEPS_CFG = """
domain.left = -3
domain.right = 3
flux = lwr
kernel.variant = poly52
kernel.a = -0.25
kernel.b = 0.0
ic = amorim_steps
bc = absorbing
dt_rule = ratio
dt_rule.value = 0.05
t_final = 2.5
mesh_list = 40 80 160 320
reference_M = 1280
"""

PLATEAU_CFG = """
domain.left = -1.5
domain.right = 1.5
flux = linear
kernel.variant = cubic
kernel.eta = 0.1
ic = aggarwal_steps
bc = absorbing
dt_rule = ratio
dt_rule.value = 0.05
t_final = 0.5
mesh_list = 20 40 80 160
reference_M = 640
"""


def smooth_config(a=0.0, b=0.25):
    return nf.parse_config(SMOOTH_CFG.format(a=a, b=b))


def steps_config():
    return nf.parse_config(STEPS_CFG)


def plateau_config():
    return nf.parse_config(PLATEAU_CFG)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def brute_conv_cell(rho_ext, kernel, dx, halo):
    """Index-by-index double loop for the cell-center convolution."""
    m = len(rho_ext) - 2 * halo
    out = np.zeros(m)
    for j in range(m):
        e = halo + j
        acc = 0.0
        for k in range(kernel.k_lo, kernel.k_hi + 1):
            acc = acc + kernel.weights[k - kernel.k_lo] * rho_ext[e - k]
        out[j] = dx * acc
    return out


def brute_conv_interface(u_plus_ext, v_minus_ext, kernel, dx, halo):
    """Double loop for the trapezoidal interface convolution (m+1 values)."""
    m = len(v_minus_ext) - 2 * halo
    out = np.zeros(m + 1)
    for i in range(m + 1):
        e = halo - 1 + i
        acc = 0.0
        for k in range(kernel.k_lo, kernel.k_hi + 1):
            w = kernel.weights[k - kernel.k_lo]
            acc = acc + (w * u_plus_ext[e + 1 - k] + w * v_minus_ext[e - k])
        out[i] = 0.5 * dx * acc
    return out
