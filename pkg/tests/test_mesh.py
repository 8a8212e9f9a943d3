import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonlocal_fv.mesh import build_grid, cfl_brackets, cfl_max_dt, check_cfl


class TestBuildGrid:
    def test_basic_division(self):
        assert build_grid(-1.0, 1.0, 10).dx == pytest.approx(0.2, abs=0)

    def test_example_mesh(self):
        assert build_grid(-3.0, 3.0, 150).dx == pytest.approx(0.04, rel=1e-15)

    def test_zero_cells_rejected(self):
        with pytest.raises(ValueError):
            build_grid(0.0, 1.0, 0)

    def test_reversed_bounds_rejected(self):
        with pytest.raises(ValueError):
            build_grid(1.0, 0.0, 4)

    def test_nonfinite_bounds_rejected(self):
        with pytest.raises(ValueError):
            build_grid(-math.inf, 1.0, 4)
        with pytest.raises(ValueError):
            build_grid(0.0, math.nan, 4)

    @given(
        st.floats(-100.0, 100.0),
        st.floats(1e-6, 100.0),
        st.integers(1, 10_000),
    )
    def test_width_recovered_within_ulps(self, left, width, m):
        grid = build_grid(left, left + width, m)
        target = grid.x_right - grid.x_left
        assert abs(grid.dx * m - target) <= 4 * math.ulp(target)

    def test_cell_centers_and_interfaces(self):
        grid = build_grid(0.0, 1.0, 4)
        assert np.allclose(grid.cell_centers(), [0.125, 0.375, 0.625, 0.875])
        assert np.allclose(grid.interfaces(), [0.0, 0.25, 0.5, 0.75, 1.0])


class TestCflRule:
    def test_binding_bracket_at_reference_alpha(self):
        # (8 - 27*0.16)/27 = 3.68/27 and alpha = 0.16 both exceed 2/27
        assert cfl_max_dt(0.1, 0.16, 1.0) == pytest.approx(0.1 * 2.0 / 27.0, rel=1e-15)

    def test_closed_form_bound(self):
        # binding bracket is exactly 2/27 for alpha = 0.16, any lip_rho
        for dx in (0.2, 0.05, 0.003125):
            for lip in (0.5, 1.0, 3.0):
                assert cfl_max_dt(dx, 0.16, lip) == dx * (2.0 / (27.0 * lip))

    def test_lip_doubling_halves_bound(self):
        one = cfl_max_dt(0.1, 0.16, 1.0)
        two = cfl_max_dt(0.1, 0.16, 2.0)
        assert two == pytest.approx(0.5 * one, rel=1e-15)

    def test_alpha_near_upper_limit_collapses(self):
        near = 8.0 / 27.0 - 1e-12
        assert cfl_max_dt(1.0, near, 1.0) == pytest.approx(0.0, abs=1e-11)

    def test_alpha_out_of_range(self):
        for alpha in (0.0, -0.1, 8.0 / 27.0, 0.5):
            with pytest.raises(ValueError):
                cfl_max_dt(0.1, alpha, 1.0)

    def test_nonpositive_lip(self):
        with pytest.raises(ValueError):
            cfl_max_dt(0.1, 0.16, 0.0)

    @given(st.floats(1e-3, 10.0), st.floats(1e-3, 10.0))
    def test_monotone_decreasing_in_lip(self, lip, factor):
        base = cfl_max_dt(0.1, 0.2, lip)
        harder = cfl_max_dt(0.1, 0.2, lip * (1.0 + factor))
        assert harder <= base

    @given(st.floats(1e-6, 100.0), st.floats(0.25, 4.0))
    def test_homogeneous_degree_one_in_dx(self, dx, scale):
        assert cfl_max_dt(dx * scale, 0.16, 1.0) == pytest.approx(
            scale * cfl_max_dt(dx, 0.16, 1.0), rel=1e-12
        )

    def test_check_accepts_ratio_twenty(self):
        dx = 0.05
        assert check_cfl(dx / 20.0, dx, 0.16, 1.0)

    def test_check_rejects_ratio_ten(self):
        dx = 0.05
        assert not check_cfl(dx / 10.0, dx, 0.16, 1.0)

    def test_zero_dt_vacuously_admissible(self):
        assert check_cfl(0.0, 0.1, 0.16, 1.0)

    def test_brackets_order(self):
        b = cfl_brackets(0.16, 1.0)
        assert b == ((8.0 - 27.0 * 0.16) / 27.0, 2.0 / 27.0, 0.16)


class TestTimeControls:
    def test_lambda_recomputed_from_fields(self):
        from nonlocal_fv.mesh import TimeControls

        controls = TimeControls(dt=0.01, t_final=0.15, dx=0.2)
        assert controls.lam == 0.01 / 0.2
        assert TimeControls(dt=0.003, t_final=1.0, dx=0.2).lam == 0.003 / 0.2
