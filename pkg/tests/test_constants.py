import math

import pytest

from hktrace.constants import (
    Params,
    escobar_constant,
    hardy_constant,
    interior_coefficient,
    kato_constant,
    optimal_constant,
    sobolev_constant,
    unit_ball_volume,
    unit_sphere_area,
)
from hktrace.errors import DomainError

from oracles import optimal_constant_ref


class TestParams:
    def test_valid(self):
        Params(3, 2.0)
        Params(12, 11.99)

    @pytest.mark.parametrize("n,beta", [(2, 2.0), (4, 1.9), (4, 4.0), (3, 3.0), (4, 5.0)])
    def test_invalid(self, n, beta):
        with pytest.raises(DomainError):
            Params(n, beta)

    def test_beta_equal_n_is_domain_error(self):
        # the n-endpoint is excluded, not a limit value
        with pytest.raises(DomainError):
            Params(5, 5.0)


class TestOptimalConstant:
    def test_exact_values(self):
        assert optimal_constant(Params(4, 3.0)) == pytest.approx(0.5, abs=1e-12)
        assert optimal_constant(Params(4, 2.0)) == pytest.approx(2.0 / math.pi, rel=1e-12)
        # 2 Gamma^2(3/4) / Gamma^2(1/4), frozen from a 50-digit evaluation
        assert optimal_constant(Params(3, 2.0)) == pytest.approx(0.22847329052223181269, rel=1e-12)

    def test_against_high_precision(self):
        for n in range(3, 13):
            for beta in (2.0, 2.25, (n + 2) / 2.0, n - 0.25):
                if not 2.0 <= beta < n:
                    continue
                assert optimal_constant(Params(n, beta)) == pytest.approx(
                    optimal_constant_ref(n, beta), rel=1e-12
                )

    def test_reduces_to_kato_at_two(self):
        for n in range(3, 13):
            assert optimal_constant(Params(n, 2.0)) == pytest.approx(kato_constant(n), rel=1e-12)

    def test_decreasing_in_beta(self):
        for n in (3, 5, 8):
            betas = [2.0 + (n - 2.0 - 1e-6) * k / 99.0 for k in range(100)]
            vals = [optimal_constant(Params(n, b)) for b in betas]
            assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
            assert all(v > 0.0 for v in vals)

    def test_linear_vanishing_toward_n(self):
        # H(n, n - 10^-k) / H(n, n - 10^-(k-1)) -> 1/10
        for n in (4, 7):
            for k in range(2, 6):
                num = optimal_constant(Params(n, n - 10.0**-k))
                den = optimal_constant(Params(n, n - 10.0 ** -(k - 1)))
                assert num / den == pytest.approx(0.1, rel=0.05)


class TestSupportingConstants:
    def test_kato(self):
        assert kato_constant(4) == pytest.approx(2.0 / math.pi, rel=1e-13)
        assert kato_constant(6) == pytest.approx(math.pi / 2.0, rel=1e-13)

    def test_hardy(self):
        assert hardy_constant(3) == 0.25
        assert hardy_constant(4) == 1.0
        assert hardy_constant(6) == 4.0

    def test_interior_coefficient(self):
        assert interior_coefficient(Params(4, 2.0)) == 0.0
        assert interior_coefficient(Params(4, 3.0)) == 0.25
        # the pair (H, interior) interpolates (kato, 0) -> (0, hardy)
        n = 6
        b = n - 1e-7
        assert interior_coefficient(Params(n, b)) == pytest.approx(hardy_constant(n), rel=1e-6)
        assert optimal_constant(Params(n, b)) == pytest.approx(0.0, abs=1e-6)

    def test_unit_ball_volume(self):
        assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-14)
        assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-14)

    def test_escobar(self):
        # sphere-measure normalization: ((n-2)/2)^(1/2) (n omega_n)^(1/(2(n-1)))
        assert unit_sphere_area(3) == pytest.approx(4.0 * math.pi, rel=1e-14)
        assert escobar_constant(3) == pytest.approx(math.pi**0.25, rel=1e-12)
        assert escobar_constant(4) == pytest.approx((2.0 * math.pi**2) ** (1.0 / 6.0), rel=1e-12)

    def test_sobolev(self):
        # frozen from 40-digit evaluations of the closed form
        assert sobolev_constant(3) == pytest.approx(2.3404922750420117278, rel=1e-12)
        assert sobolev_constant(4) == pytest.approx(3.2031857019684189338, rel=1e-12)
        for n in range(3, 12):
            assert sobolev_constant(n) > 0.0

    def test_domain_errors(self):
        for fn in (kato_constant, hardy_constant, escobar_constant, sobolev_constant):
            with pytest.raises(DomainError):
                fn(2)

    def test_large_dimension_stability(self):
        # Gamma ratios must survive dimensions where Gamma itself overflows
        v = optimal_constant(Params(400, 200.0))
        assert math.isfinite(v) and v > 0.0
