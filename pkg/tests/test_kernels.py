import math

import numpy as np
import pytest
from scipy.integrate import quad

from nonlocal_fv.kernels import (
    cubic,
    load_tabulated,
    normalization_constant,
    poly52,
    sample_kernel,
    sup_abs_derivative,
    support_extent,
    tabulated,
)


class TestNormalization:
    def test_poly52_closed_form(self):
        for a, b in ((0.0, 0.25), (-0.125, 0.125), (-0.25, 0.0), (1.0, 3.5)):
            spec = poly52(a, b)
            assert spec.norm_const == pytest.approx((b - a) ** 6 * 5.0 * math.pi / 1024.0, rel=1e-15)

    def test_poly52_quarter_support_value(self):
        assert normalization_constant(poly52(0.0, 0.25)) == pytest.approx(3.7450e-6, rel=1e-4)

    def test_poly52_against_adaptive_quadrature(self):
        for a, b in ((0.0, 0.25), (-0.125, 0.125), (-2.0, 1.0)):
            oracle, _ = quad(lambda x: ((x - a) * (b - x)) ** 2.5, a, b)
            assert normalization_constant(poly52(a, b)) == pytest.approx(oracle, rel=1e-10)

    def test_cubic_closed_form(self):
        for eta in (0.1, 0.5, 2.0):
            assert normalization_constant(cubic(eta)) == pytest.approx(eta ** 7 / 140.0, rel=1e-15)

    def test_cubic_against_adaptive_quadrature(self):
        for eta in (0.1, 1.0):
            oracle, _ = quad(lambda x: (-x * (eta + x)) ** 3, -eta, 0.0)
            assert normalization_constant(cubic(eta)) == pytest.approx(oracle, rel=1e-10)

    def test_degenerate_support_rejected(self):
        with pytest.raises(ValueError):
            poly52(0.3, 0.3)
        with pytest.raises(ValueError):
            cubic(0.0)

    @pytest.mark.parametrize("spec_fn", [lambda: poly52(0.0, 0.25), lambda: cubic(0.1)])
    def test_unit_integral(self, spec_fn):
        spec = spec_fn()
        a, b = spec.support
        total, _ = quad(lambda x: float(spec.evaluate(x)), a, b, limit=200)
        assert total == pytest.approx(1.0, rel=1e-9)


class TestSupport:
    def test_poly52_extent(self):
        assert support_extent(poly52(0.0, 0.25)) == (0.0, 0.25)

    def test_cubic_extent(self):
        assert support_extent(cubic(0.1)) == (-0.1, 0.0)

    def test_tabulated_extent(self):
        spec = tabulated([-0.125, 0.0, 0.125], [0.0, 1.0, 0.0])
        assert support_extent(spec) == (-0.125, 0.125)


class TestEvaluation:
    def test_poly52_endpoint_zeros(self):
        spec = poly52(0.0, 0.25)
        assert spec.evaluate(0.0) == 0.0
        assert spec.evaluate(0.25) == 0.0
        assert spec.evaluate(-0.01) == 0.0
        assert spec.evaluate(0.26) == 0.0

    def test_cubic_midpoint_value(self):
        spec = cubic(0.1)
        # (0.05*0.05)^3 * 140 / 0.1^7
        assert float(spec.evaluate(-0.05)) == pytest.approx(21.875, rel=1e-12)

    def test_nonnegative_everywhere(self):
        xs = np.linspace(-1.0, 1.0, 2001)
        for spec in (poly52(-0.25, 0.0), cubic(0.3)):
            assert np.all(spec.evaluate(xs) >= 0.0)


class TestSampling:
    def test_endpoint_samples_vanish(self):
        kern = sample_kernel(poly52(0.0, 0.25), 0.05)
        k = np.arange(kern.k_min, kern.k_min + len(kern.samples))
        at0 = kern.samples[np.where(k == 0)[0][0]]
        at5 = kern.samples[np.where(k == 5)[0][0]]
        assert at0 == 0.0 and at5 == 0.0

    def test_samples_vanish_outside_support(self):
        kern = sample_kernel(poly52(0.0, 0.25), 0.05)
        ks = np.arange(kern.k_min, kern.k_min + len(kern.samples))
        outside = (ks * 0.05 < 0.0) | (ks * 0.05 > 0.25)
        assert np.all(kern.samples[outside] == 0.0)
        assert np.all(kern.samples >= 0.0)

    def test_ghost_count(self):
        assert sample_kernel(poly52(0.0, 0.25), 0.05).ghost_count == 5
        assert sample_kernel(poly52(0.0, 0.25), 0.06).ghost_count == 5  # ceil(25/6)

    def test_riemann_sum_second_order(self):
        spec = poly52(0.0, 0.25)
        err = []
        for dx in (0.25 / 40, 0.25 / 80):
            kern = sample_kernel(spec, dx)
            err.append(abs(dx * np.sum(kern.samples) - 1.0))
        assert err[0] / err[1] >= 3.5

    def test_undersampled_flag(self):
        assert sample_kernel(cubic(0.1), 0.15).undersampled
        assert not sample_kernel(cubic(0.1), 0.01).undersampled

    def test_trimmed_window_matches_samples(self):
        kern = sample_kernel(poly52(-0.25, 0.0), 0.05)
        ks = np.arange(kern.k_lo, kern.k_hi + 1)
        assert np.array_equal(kern.weights, kern.samples[ks - kern.k_min])
        assert kern.weights[0] != 0.0 and kern.weights[-1] != 0.0

    def test_bad_dx_rejected(self):
        with pytest.raises(ValueError):
            sample_kernel(poly52(0.0, 0.25), 0.0)


class TestTabulated:
    def test_file_roundtrip(self, tmp_path):
        xs = np.linspace(-0.2, 0.2, 41)
        ys = np.clip(0.2 ** 2 - xs ** 2, 0.0, None)
        path = tmp_path / "kernel.txt"
        np.savetxt(path, np.column_stack([xs, ys]))
        spec = load_tabulated(path)
        assert spec.support == (-0.2, 0.2)
        assert not spec.h4_smooth
        # trapezoid-normalized: the piecewise-linear interpolant integrates
        # to one (trapezoid on the nodes is exact for it)
        total = np.trapezoid(spec.evaluate(xs), xs)
        assert total == pytest.approx(1.0, rel=1e-12)

    def test_linear_interpolation_between_samples(self):
        spec = tabulated([0.0, 1.0], [0.0, 2.0])  # normalized by trapezoid = 1
        assert float(spec.evaluate(0.25)) == pytest.approx(0.5, rel=1e-14)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            tabulated([0.0, 0.5, 1.0], [0.0, -0.1, 0.0])

    def test_nonincreasing_x_rejected(self):
        with pytest.raises(ValueError):
            tabulated([0.0, 0.0, 1.0], [0.0, 1.0, 0.0])


class TestDerivativeBound:
    def test_poly52_matches_finite_differences(self):
        spec = poly52(0.0, 0.25)
        sup = sup_abs_derivative(spec)
        xs = np.linspace(0.0, 0.25, 20001)
        fd = np.max(np.abs(np.diff(spec.evaluate(xs)) / np.diff(xs)))
        assert sup == pytest.approx(fd, rel=1e-3)
        assert sup >= fd  # sup of derivative dominates any secant slope

    def test_tabulated_exact_max_slope(self):
        spec = tabulated([0.0, 1.0, 2.0], [0.0, 3.0, 0.0])  # normalized by 3
        assert sup_abs_derivative(spec) == pytest.approx(1.0, rel=1e-14)
