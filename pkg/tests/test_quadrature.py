import math

import numpy as np
import pytest

from hktrace.errors import DomainError, TestFunctionError
from hktrace.quadrature import (
    QuadratureSpec,
    Support,
    TestFunction,
    integrate_boundary,
    integrate_halfspace,
    integrate_halfspace_box_detailed,
    integrate_hemisphere,
)

from oracles import angular_weight_integral, halfball_volume


class TestSpecValidation:
    def test_defaults(self):
        s = QuadratureSpec()
        assert s.r_min == 1e-4 and s.r_max == 1e4
        assert s.nodes_radial == 32 and s.nodes_angular == 64
        assert s.rel_tol == 1e-9

    @pytest.mark.parametrize(
        "kw",
        [
            dict(r_min=0.0),
            dict(r_min=2.0, r_max=1.0),
            dict(nodes_radial=4),
            dict(nodes_angular=2),
            dict(rel_tol=0.0),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            QuadratureSpec(**kw)


class TestHalfspace:
    def test_unit_halfball_volume(self):
        # g = 1 on rho in [~0, 1]: half the unit-ball volume
        spec = QuadratureSpec(r_min=1e-8, r_max=1.0, rel_tol=1e-10)
        got = integrate_halfspace(lambda r, t: np.ones_like(r), spec, 3)
        assert got == pytest.approx(2.0 * math.pi / 3.0, rel=1e-10)
        assert got == pytest.approx(halfball_volume(3), rel=1e-10)

    def test_gaussian(self):
        spec = QuadratureSpec(r_min=1e-6, r_max=10.0, rel_tol=1e-10)
        got = integrate_halfspace(lambda r, t: np.exp(-2.0 * (r * r + t * t)), spec, 3)
        assert got == pytest.approx(0.5 * (math.pi / 2.0) ** 1.5, rel=1e-10)

    def test_inverse_square_annulus(self):
        # rho^-2 over a <= rho <= b in n=3: 2 pi (b - a)
        spec = QuadratureSpec(r_min=0.5, r_max=4.0, rel_tol=1e-11)
        got = integrate_halfspace(lambda r, t: 1.0 / (r * r + t * t), spec, 3)
        assert got == pytest.approx(2.0 * math.pi * 3.5, rel=1e-11)

    def test_polynomial_exactness(self):
        # radial GL is exact on polynomials; the smooth angular factor
        # converges to machine precision at the base node count
        spec = QuadratureSpec(r_min=0.5, r_max=2.0, rel_tol=1e-12)
        for n in (3, 4, 5):
            got = integrate_halfspace(lambda r, t: (r * r + t * t) ** 1.5, spec, n)
            surf = n - 1.0
            from hktrace.constants import unit_ball_volume

            surf = (n - 1) * unit_ball_volume(n - 1)
            k = 3  # rho^3
            want = surf * (2.0 ** (k + n) - 0.5 ** (k + n)) / (k + n) * angular_weight_integral(n)
            assert got == pytest.approx(want, rel=1e-13)

    def test_refinement_reduces_error(self):
        from hktrace.quadrature import integrate_halfspace_detailed

        g = lambda r, t: np.exp(-(r * r + t * t))
        coarse = QuadratureSpec(r_min=1e-4, r_max=8.0, nodes_radial=8, nodes_angular=8, rel_tol=1e-6)
        fine = QuadratureSpec(r_min=1e-4, r_max=8.0, nodes_radial=16, nodes_angular=16, rel_tol=1e-10)
        _, e1 = integrate_halfspace_detailed(g, coarse, 4)
        _, e2 = integrate_halfspace_detailed(g, fine, 4)
        assert e2 < e1

    def test_box_variant_matches_polar(self):
        g = lambda r, t: np.exp(-((r - 1.5) ** 2 + t * t))
        spec = QuadratureSpec(rel_tol=1e-10)
        v_box, _ = integrate_halfspace_box_detailed(g, spec, 4, (1e-4, 8.0), (0.0, 8.0))
        v_pol = integrate_halfspace(g, QuadratureSpec(r_min=1e-4, r_max=9.0, rel_tol=1e-10), 4)
        assert v_box == pytest.approx(v_pol, rel=1e-9)


class TestBoundary:
    def test_unit_disk(self):
        got = integrate_boundary(lambda r: np.ones_like(r), (1e-10, 1.0), 3)
        assert got == pytest.approx(math.pi, rel=1e-12)

    def test_log_window(self):
        # r^(1-n) over r0 < r < R0 gives (n-1) omega_{n-1} ln(R0/r0) = 4 pi ln(R0/r0)
        got = integrate_boundary(lambda r: r**-3.0, (1e-2, 1e2), 4)
        assert got == pytest.approx(4.0 * math.pi * math.log(1e4), rel=1e-12)

    def test_boundary_trace_power(self):
        # phi(x,0)^2/|x| has the same logarithmic window form
        n = 5
        got = integrate_boundary(lambda r: r ** -(n - 2.0) / r, (0.1, 10.0), n)
        from hktrace.constants import unit_ball_volume

        want = (n - 1) * unit_ball_volume(n - 1) * math.log(100.0)
        assert got == pytest.approx(want, rel=1e-12)


class TestHemisphere:
    def test_area(self):
        got = integrate_hemisphere(lambda th: np.ones_like(th), 1.0, 3)
        assert got == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_scaling_law(self):
        g = lambda th: np.cos(th) + 0.3
        a = integrate_hemisphere(g, 2.0, 4)
        b = integrate_hemisphere(g, 1.0, 4)
        assert a == pytest.approx(2.0**3 * b, rel=1e-13)

    def test_rho_two(self):
        got = integrate_hemisphere(lambda th: np.ones_like(th), 2.0, 3)
        assert got == pytest.approx(8.0 * math.pi, rel=1e-12)


class TestTestFunction:
    def test_gradient_validation_passes(self):
        from hktrace.testfunctions import make_radial_bump

        u = make_radial_bump(1.5, 0.4, 0.8)
        assert u.support.kind == "box"

    def test_gradient_validation_rejects_wrong_grad(self):
        def value(r, t):
            return np.exp(-(r - 1.5) ** 2 - t * t)

        def bad_grad(r, t):
            return 0.5 * np.ones_like(r), np.zeros_like(t)

        with pytest.raises(TestFunctionError):
            TestFunction(value, bad_grad, Support.box(0.5, 2.5, 0.0, 1.0))

    def test_support_bounds(self):
        s = Support.box(1.0, 2.0, 0.0, 1.0)
        lo, hi = s.rho_bounds()
        assert lo == pytest.approx(1.0)
        assert hi == pytest.approx(math.hypot(2.0, 1.0))
        assert s.theta_bound() == pytest.approx(math.asin(1.0 / 1.0))
        assert Support.unbounded().rho_bounds() == (0.0, math.inf)

    def test_vanishes_outside_support(self):
        from hktrace.testfunctions import make_radial_bump

        u = make_radial_bump(1.5, 0.4, 0.8)
        r = np.array([0.5, 1.09, 1.91, 3.0])
        t = np.array([0.1, 0.81, 0.81, 0.0])
        assert np.all(u.value(r, t)[[0, 3]] == 0.0)
        gr, gt = u.grad(r, t)
        assert np.all(gr[[0, 3]] == 0.0) and np.all(gt[[0, 3]] == 0.0)
