"""Special-function checks against independent quadrature oracles."""

import math

import numpy as np
import pytest
from scipy import integrate as si

from invsub.special import (
    EULER_GAMMA,
    bessel_jy,
    bessel_k,
    exp_integral_complex,
    exp_scaled_gamma0,
    gen_exp_integral,
    log_squared_jy_modulus,
)
from invsub.errors import MagnitudeError


def bessel_k_quadrature(nu, x):
    """Independent oracle: K_nu(x) = int_0^inf exp(-x cosh u) cosh(nu u) du."""
    val, _ = si.quad(lambda u: math.exp(-x * math.cosh(u)) * math.cosh(nu * u),
                     0.0, 60.0 / max(x, 1.0) + 10.0, limit=400)
    return val


def exp_integral_quadrature(nu, lam):
    """Independent oracle: E_nu(lam) = int_1^inf exp(-lam x) x^(-nu) dx."""
    val, _ = si.quad(lambda x: math.exp(-lam * x) * x ** (-nu), 1.0, np.inf, limit=400)
    return val


class TestBesselK:
    def test_half_integer_closed_form(self):
        # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        want = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
        assert abs(bessel_k(0.5, 1.0) - want) < 1e-14

    def test_symmetry(self):
        assert bessel_k(-0.3, 2.0) == bessel_k(0.3, 2.0)

    def test_three_term_recurrence_spot(self):
        nu, x = 0.25, 1.5
        res = x * bessel_k(nu + 2, x) - x * bessel_k(nu, x) - 2 * (1 + nu) * bessel_k(nu + 1, x)
        assert abs(res) < 1e-10 * x * bessel_k(nu + 2, x)

    @pytest.mark.parametrize("nu", [0.0, 0.25, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_recurrence_grid(self, nu, x):
        lhs = x * bessel_k(nu + 2, x)
        rhs = x * bessel_k(nu, x) + 2 * (1 + nu) * bessel_k(nu + 1, x)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    @pytest.mark.parametrize("nu,x", [(0.3, 0.7), (1.7, 2.5), (0.0, 1.0)])
    def test_against_integral_representation(self, nu, x):
        assert abs(bessel_k(nu, x) - bessel_k_quadrature(nu, x)) < 1e-11

    def test_overflow_guard(self):
        with pytest.raises(MagnitudeError):
            bessel_k(5.0, 1e-300)

    def test_deterministic(self):
        assert bessel_k(0.77, 3.3) == bessel_k(0.77, 3.3)


class TestBesselJY:
    def test_half_integer_j(self):
        # J_{1/2}(x) = sqrt(2/(pi x)) sin x at x = pi/2
        j, _ = bessel_jy(0.5, math.pi / 2.0)
        assert abs(j - 2.0 / math.pi) < 1e-14

    def test_half_integer_y(self):
        # Y_{1/2}(x) = -sqrt(2/(pi x)) cos x at x = pi
        _, y = bessel_jy(0.5, math.pi)
        assert abs(y - math.sqrt(2.0) / math.pi) < 1e-14

    def test_wronskian_spot(self):
        nu, x = 0.5, 3.0
        j0, y0 = bessel_jy(nu, x)
        j1, y1 = bessel_jy(nu + 1, x)
        assert abs(j1 * y0 - j0 * y1 - 2.0 / (math.pi * x)) < 1e-10

    @pytest.mark.parametrize("nu,x", [(0.0, 0.5), (1.3, 4.0), (2.0, 10.0)])
    def test_wronskian_grid(self, nu, x):
        j0, y0 = bessel_jy(nu, x)
        j1, y1 = bessel_jy(nu + 1, x)
        assert abs(j1 * y0 - j0 * y1 - 2.0 / (math.pi * x)) < 1e-10

    def test_squared_modulus_branches_agree(self):
        # the large-z asymptotic branch must match a direct evaluation at the
        # same point (scipy stays accurate somewhat past the switch)
        for nu in [0.0, 0.5, 2.0]:
            asym = log_squared_jy_modulus(nu, np.array([1.01e4]))[0]
            direct = math.log(sum(v**2 for v in bessel_jy(nu, 1.01e4)))
            assert abs(asym - direct) < 1e-10


class TestGenExpIntegral:
    def test_lam_zero(self):
        assert gen_exp_integral(3.0, 0.0) == 0.5

    def test_domain_error_at_zero(self):
        with pytest.raises(ValueError):
            gen_exp_integral(1.0, 0.0)

    def test_gamma0_value(self):
        want = exp_integral_quadrature(1.0, 1.0)
        assert abs(gen_exp_integral(1.0, 1.0) - want) < 1e-12
        assert abs(gen_exp_integral(1.0, 1.0) - 0.21938393439552026) < 1e-12

    def test_derivative_recurrence(self):
        # d/dlam E_nu = -E_{nu-1}
        nu, lam, h = 1.5, 2.0, 1e-6
        fd = (gen_exp_integral(nu, lam + h) - gen_exp_integral(nu, lam - h)) / (2 * h)
        assert abs(fd + gen_exp_integral(nu - 1.0, lam)) < 1e-8

    @pytest.mark.parametrize("nu,lam", [
        (0.5, 0.3), (1.0, 2.0), (2.5, 1.0), (-0.5, 1.0), (-3.2, 2.0), (-10.0, 5.0),
    ])
    def test_against_quadrature(self, nu, lam):
        want = exp_integral_quadrature(nu, lam)
        assert abs(gen_exp_integral(nu, lam) - want) <= 1e-10 * abs(want)

    def test_decreasing_in_lam(self):
        vals = [gen_exp_integral(1.5, lam) for lam in [0.5, 1.0, 2.0, 4.0]]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("nu", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 10.0])
    def test_sanity_bound(self, nu, lam):
        bound = math.exp(-lam) * max(1.0, 1.0 / (nu - 1.0))
        assert gen_exp_integral(nu, lam) <= bound * (1 + 1e-12)

    def test_complex_matches_real_axis(self):
        for nu in [1.5, 2.0, 3.0]:
            for lam in [0.5, 3.0, 8.0]:
                zval = exp_integral_complex(nu, complex(lam, 0.0))
                assert abs(zval.real - gen_exp_integral(nu, lam)) < 1e-12
                assert abs(zval.imag) < 1e-14

    def test_complex_oscillatory_against_quadrature(self):
        z = 1.0 + 2.0j
        want = si.quad(lambda x: math.exp(-x) * math.cos(2 * x) * x ** (-1.5), 1, np.inf)[0] \
            + 1j * -si.quad(lambda x: math.exp(-x) * math.sin(2 * x) * x ** (-1.5), 1, np.inf)[0]
        got = exp_integral_complex(1.5, z)
        assert abs(got - want) < 1e-10


class TestExpScaledGamma0:
    def test_unit_value(self):
        want = math.e * gen_exp_integral(1.0, 1.0)
        assert abs(exp_scaled_gamma0(1.0) - want) < 1e-12

    @pytest.mark.parametrize("t", [0.5, 1.0, 10.0, 100.0, 1000.0])
    def test_bounded_by_one(self, t):
        assert 0.0 < exp_scaled_gamma0(t) <= 1.0

    def test_large_t_asymptotic(self):
        # e^t Gamma(0,t) ~ 1/t for large t
        t = 1000.0
        assert abs(exp_scaled_gamma0(t) * t - 1.0) < 1e-2

    def test_no_overflow_huge_t(self):
        v = exp_scaled_gamma0(1e6)
        assert 0.0 < v < 1.0

    def test_deterministic(self):
        assert exp_scaled_gamma0(7.7) == exp_scaled_gamma0(7.7)
