import math

import numpy as np
import pytest

from hktrace.constants import Params, optimal_constant
from hktrace.errors import AxisProximityError, DomainError
from hktrace.extremal import (
    ExtremalProfile,
    PolarPoint,
    Z_MAX,
    _f_fp_arrays,
    default_theta_max,
    f_theta,
    grad_phi,
    grad_phi_rt,
    harmonic_rep,
    integrate_profile_ode,
    pde_residual,
    phi,
    shoot_alpha,
    w_general,
    w_profile,
)

from oracles import harmonic_axis_constant

PAIRS = [(3, 2.0), (3, 2.5), (4, 2.0), (4, 3.0), (5, 2.5), (6, 4.0)]


def profile(n, beta):
    return ExtremalProfile.from_params(Params(n, beta))


class TestProfileBasics:
    def test_w_at_zero_is_one(self):
        for (n, b) in PAIRS:
            assert w_profile(profile(n, b), 0.0) == 1.0

    def test_alpha_matches_constant(self):
        e = profile(5, 3.5)
        assert e.alpha == -optimal_constant(Params(5, 3.5))

    def test_wrong_alpha_rejected(self):
        with pytest.raises(DomainError):
            ExtremalProfile(Params(4, 3.0), -0.4)

    def test_slope_at_origin(self):
        # w(z^2) = 1 + alpha z + O(z^2): one-sided difference of z -> w(z^2)
        # (h = 1e-8 keeps the O(h) quadratic-term bias well under the 1e-6
        # tolerance; h = 1e-6 sits exactly on it)
        for (n, b) in PAIRS:
            e = profile(n, b)
            h = 1e-8
            slope = (w_profile(e, h * h) - w_profile(e, 0.0)) / h
            assert slope == pytest.approx(e.alpha, abs=1e-6)

    def test_n4_beta3_closed_form(self):
        # f(theta) = 1 / (cos(theta/2) + sin(theta/2))
        e = profile(4, 3.0)
        for th in np.linspace(0.0, math.pi / 2 - 1e-4, 25):
            want = 1.0 / (math.cos(th / 2) + math.sin(th / 2))
            assert f_theta(e, float(th)) == pytest.approx(want, rel=1e-12)

    def test_n4_beta2_closed_form(self):
        # f(theta) = (1 - 2 theta/pi) / cos(theta)
        e = profile(4, 2.0)
        for th in np.linspace(0.0, 1.4, 15):
            want = (1.0 - 2.0 * th / math.pi) / math.cos(th)
            assert f_theta(e, float(th)) == pytest.approx(want, rel=1e-11)

    def test_axis_guard(self):
        e = profile(4, 3.0)
        with pytest.raises(AxisProximityError):
            w_profile(e, 1.0 - 1e-14)
        with pytest.raises(DomainError):
            f_theta(e, math.pi / 2.0)

    def test_stable_branch_continuity(self):
        # two-term route vs bounded-branch route across the internal switch
        for (n, b) in PAIRS:
            e = profile(n, b)
            lo = w_profile(e, 0.99499)
            hi = w_profile(e, 0.99501)
            assert abs(hi - lo) < 1e-4 * abs(lo)

    def test_boundedness_and_cauchy_at_axis(self):
        # f(pi/2 - 10^-k), k=1..4: bounded, successive differences shrink
        for (n, b) in PAIRS:
            e = profile(n, b)
            vals = [f_theta(e, math.pi / 2 - 10.0**-k) for k in range(1, 5)]
            assert all(abs(v) < 10.0 for v in vals)
            diffs = [abs(v2 - v1) for v1, v2 in zip(vals, vals[1:])]
            assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))

    def test_wrong_alpha_divergence(self):
        # perturbing the matched slope produces a large value near the axis
        th = math.pi / 2 - 1e-3
        z = math.sin(th) ** 2
        for (n, b) in [(4, 3.0), (5, 2.5), (6, 4.0)]:
            e = profile(n, b)
            good = abs(w_profile(e, z))
            for da in (+0.01, -0.01):
                bad = abs(w_general(Params(n, b), e.alpha + da, z))
                assert bad > 10.0 * good, (n, b, da)


class TestPhi:
    def test_boundary_value_exact(self):
        for (n, b) in PAIRS:
            e = profile(n, b)
            for rho in (0.01, 1.0, 100.0):
                got = phi(e, PolarPoint(rho, 0.0))
                assert got == pytest.approx(rho ** (-(n - 2.0) / 2.0), rel=1e-13)

    def test_homogeneity(self):
        e = profile(5, 3.5)
        p1 = phi(e, PolarPoint(0.7, 0.9))
        p2 = phi(e, PolarPoint(7.0, 0.9))
        assert p2 == pytest.approx(10.0 ** (-(5 - 2.0) / 2.0) * p1, rel=1e-13)

    def test_polar_vs_cartesian_form(self):
        # rho^(-(n-2)/2) w(t^2/(r^2+t^2)) against the two-term closed form
        # assembled directly in half-plane coordinates
        from hktrace.specfun import Hyp2F1Params, hyp2f1

        n, b = 4, 3.0
        e = profile(n, b)
        rho, th = 1.0, 0.5
        r, t = rho * math.cos(th), rho * math.sin(th)
        z = t * t / (r * r + t * t)
        a1 = (n + b) / 4.0 - 1.0
        b1 = (n - b) / 4.0
        direct = (r * r + t * t) ** (-(n - 2.0) / 4.0) * hyp2f1(Hyp2F1Params(a1, b1, 0.5), z) \
            - t * optimal_constant(Params(n, b)) * (r * r + t * t) ** (-n / 4.0) \
            * hyp2f1(Hyp2F1Params(a1 + 0.5, b1 + 0.5, 1.5), z)
        assert phi(e, PolarPoint(rho, th)) == pytest.approx(direct, rel=1e-12)

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            PolarPoint(0.0, 0.3)


class TestGradPhi:
    def test_radial_log_derivative(self):
        for (n, b) in PAIRS:
            e = profile(n, b)
            pt = PolarPoint(1.7, 0.8)
            d_rho, _ = grad_phi(e, pt)
            assert d_rho / phi(e, pt) == pytest.approx(-(n - 2.0) / (2.0 * 1.7), rel=1e-12)

    def test_boundary_normal_derivative(self):
        # (1/rho) d phi/d theta at theta=0 equals -H rho^(-n/2)
        for (n, b) in PAIRS:
            e = profile(n, b)
            h_const = optimal_constant(Params(n, b))
            for rho in (0.5, 1.0, 20.0):
                _, d_th = grad_phi(e, PolarPoint(rho, 0.0))
                assert d_th == pytest.approx(-h_const * rho ** (-n / 2.0), rel=1e-10)

    def test_finite_difference_consistency(self):
        rng = np.random.default_rng(23)
        h = 1e-5
        for (n, b) in [(3, 2.5), (4, 3.0), (6, 4.0)]:
            e = profile(n, b)
            for _ in range(10):
                rho = rng.uniform(0.5, 2.0)
                th = rng.uniform(0.05, math.pi / 2 - 0.1)
                d_rho, d_th = grad_phi(e, PolarPoint(rho, th))
                fd_rho = (phi(e, PolarPoint(rho + h, th)) - phi(e, PolarPoint(rho - h, th))) / (2 * h)
                fd_th = (phi(e, PolarPoint(rho, th + h)) - phi(e, PolarPoint(rho, th - h))) / (2 * h * rho)
                assert d_rho == pytest.approx(fd_rho, rel=1e-7)
                assert d_th == pytest.approx(fd_th, rel=1e-7)

    def test_cartesian_rotation(self):
        e = profile(4, 3.0)
        r, t = 0.8, 0.6
        g_r, g_t = grad_phi_rt(e, r, t)
        h = 1e-6

        def cart(rr, tt):
            return phi(e, PolarPoint(math.hypot(rr, tt), math.atan2(tt, rr)))

        assert g_r == pytest.approx((cart(r + h, t) - cart(r - h, t)) / (2 * h), rel=1e-8)
        assert g_t == pytest.approx((cart(r, t + h) - cart(r, t - h)) / (2 * h), rel=1e-8)


class TestShooting:
    def test_exact_half(self):
        assert shoot_alpha(Params(4, 3.0), tol=1e-5) == pytest.approx(-0.5, abs=1e-5)

    def test_kato_case(self):
        assert shoot_alpha(Params(4, 2.0), tol=1e-5) == pytest.approx(-2.0 / math.pi, abs=1e-5)

    def test_grid_recovery(self):
        for n in (3, 4, 5, 6):
            for beta in sorted({2.0, 2.5, (n + 2) / 2.0, n - 0.5}):
                if not 2.0 <= beta < n:
                    continue
                p = Params(n, beta)
                got = shoot_alpha(p, tol=1e-5)
                assert got == pytest.approx(-optimal_constant(p), abs=1e-5), (n, beta)

    def test_theta_max_domain(self):
        with pytest.raises(DomainError):
            shoot_alpha(Params(4, 3.0), theta_max=1.0, tol=1e-5)

    def test_default_theta_max_in_range(self):
        for n in (3, 6, 9):
            th = default_theta_max(Params(n, 2.5), 1e-5)
            assert math.pi / 2 - 0.1 < th < math.pi / 2


class TestOdeSeriesEquivalence:
    def test_profiles_match(self):
        thetas = np.linspace(0.02, math.pi / 2 - 0.1, 40)
        for (n, b) in PAIRS:
            p = Params(n, b)
            e = profile(n, b)
            f_ode, _ = integrate_profile_ode(p, e.alpha, thetas)
            f_ser, _ = _f_fp_arrays(e, thetas)
            assert np.max(np.abs(f_ode - f_ser)) < 1e-8, (n, b)

    def test_scipy_integrator_agrees(self):
        # third route: an off-the-shelf adaptive integrator
        from scipy.integrate import solve_ivp

        n, b = 5, 2.5
        p = Params(n, b)
        e = profile(n, b)
        lam = n - 2.0
        kap = ((n - 2.0) ** 2 - (b - 2.0) ** 2) / 4.0
        sol = solve_ivp(
            lambda th, y: [y[1], lam * math.tan(th) * y[1] + kap * y[0]],
            (0.0, 1.2), [1.0, e.alpha], rtol=1e-11, atol=1e-13, dense_output=True,
        )
        for th in (0.3, 0.7, 1.1):
            assert sol.sol(th)[0] == pytest.approx(f_theta(e, th), abs=1e-8)


class TestHarmonicRep:
    def test_axis_and_boundary_forms(self):
        # t=0 slice: C_n r^(-(n-2)/2) with the Beta-form constant
        for n in (3, 4, 5):
            c_n = harmonic_axis_constant(n)
            for r in (0.5, 1.0, 2.0):
                got = harmonic_rep(n, PolarPoint(r, 0.0))
                assert got == pytest.approx(c_n * r ** (-(n - 2.0) / 2.0), rel=1e-9)

    def test_n4_constant_is_half_pi(self):
        assert harmonic_rep(4, PolarPoint(1.0, 0.0)) == pytest.approx(math.pi / 2.0, rel=1e-10)

    def test_proportional_to_profile(self):
        rng = np.random.default_rng(31)
        for n in (3, 4, 5):
            e = profile(n, 2.0)
            c_n = harmonic_axis_constant(n)
            ratios = []
            for _ in range(20):
                pt = PolarPoint(rng.uniform(0.3, 3.0), rng.uniform(0.0, 1.45))
                ratios.append(harmonic_rep(n, pt) / phi(e, pt))
            spread = (max(ratios) - min(ratios)) / abs(np.mean(ratios))
            assert spread < 1e-6
            assert np.mean(ratios) == pytest.approx(c_n, rel=1e-8)


class TestPdeResidual:
    def test_small_residual(self):
        rng = np.random.default_rng(37)
        for (n, b) in PAIRS:
            e = profile(n, b)
            for _ in range(10):
                pt = PolarPoint(rng.uniform(0.5, 2.0), rng.uniform(0.1, math.pi / 2 - 0.1))
                res = pde_residual(e, pt, h=3e-4)
                assert abs(res) <= 1e-5 * abs(phi(e, pt)), (n, b, pt)

    def test_beta2_harmonic(self):
        # at beta=2 the interior coefficient vanishes: pure Laplacian residual
        e = profile(4, 2.0)
        pt = PolarPoint(1.0, 0.7)
        assert abs(pde_residual(e, pt, h=1e-3)) <= 1e-5 * abs(phi(e, pt))

    def test_h_squared_scaling(self):
        e = profile(4, 3.0)
        pt = PolarPoint(1.0, 0.7)
        r1 = pde_residual(e, pt, h=2e-2)
        r2 = pde_residual(e, pt, h=1e-2)
        assert 3.6 <= r1 / r2 <= 4.4

    def test_stencil_domain_guard(self):
        e = profile(4, 3.0)
        with pytest.raises(DomainError):
            pde_residual(e, PolarPoint(1.0, math.pi / 2 - 1e-5), h=1e-3)
