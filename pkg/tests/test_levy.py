"""Levy-exponent evaluation: families, derivatives, densities, means."""

import math

import numpy as np
import pytest
from scipy import integrate as si
from scipy import special as sc

from invsub import (
    GIG,
    AtomKernel,
    Custom,
    ExpTiltedPowerKernel,
    ParetoCP,
    ParetoKernel,
    PoissonDrift,
    PureDrift,
    Stable,
    StableKernel,
    TwoStableMix,
    UniformStableMix,
    bessel_k,
    levy_density,
    make_spec,
    mean_of_D1,
    phi_derivs,
    phi_eval,
    phi_real_imag,
)
from invsub.errors import AccuracyError
from invsub.levy import atom_at_zero, phi_eval_quadrature, scaled_taylor

ALL_FAMILIES = [
    PureDrift(1.5),
    PoissonDrift(0.0, 1.0),
    PoissonDrift(0.5, 2.0),
    ParetoCP(0.5),
    ParetoCP(1.0),
    ParetoCP(2.0),
    Stable(0.5),
    TwoStableMix(0.75, 0.25, 0.5, 0.5),
    UniformStableMix(),
    GIG(0.0, 1.0, 1.0),
    GIG(1.0, 1.0, -0.5),
    GIG(1.0, 1.0, 0.8),
    GIG(1.0, 0.0, -1.5),
    Custom(0.25, (AtomKernel(2.0, 0.5), ExpTiltedPowerKernel(-1.5, 1.0))),
]


def gig_density_direct(delta, gamma, kappa, x):
    """Fully independent Levy density: nested scipy quadrature of the
    Bessel-kernel representation."""
    nu = abs(kappa)

    def w(y):
        z = delta * math.sqrt(2.0 * y)
        return 1.0 / (math.pi**2 * y * (sc.jv(nu, z) ** 2 + sc.yv(nu, z) ** 2))

    inner = si.quad(lambda y: math.exp(-x * y) * w(y), 0, np.inf, limit=800)[0]
    return math.exp(-gamma**2 * x / 2.0) / x * (inner + max(kappa, 0.0))


class TestFamilyValidation:
    @pytest.mark.parametrize("bad", [
        lambda: PureDrift(0.0),
        lambda: PoissonDrift(-0.1, 1.0),
        lambda: PoissonDrift(0.0, 0.0),
        lambda: ParetoCP(0.0),
        lambda: Stable(1.0),
        lambda: Stable(0.0),
        lambda: TwoStableMix(0.25, 0.75, 0.5, 0.5),   # alpha order
        lambda: TwoStableMix(0.75, 0.25, 0.7, 0.5),   # weights don't sum to 1
        lambda: GIG(0.0, 1.0, -0.5),                  # kappa<0 needs delta>0
        lambda: GIG(0.0, 1.0, 0.0),                   # kappa=0 needs delta>0
        lambda: GIG(1.0, 0.0, 0.5),                   # kappa>0 needs gamma>0
        lambda: Custom(0.0, ()),
        lambda: AtomKernel(0.0, 1.0),
        lambda: StableKernel(1.2, 1.0),
        lambda: ExpTiltedPowerKernel(-2.0, 1.0),
    ])
    def test_rejected(self, bad):
        with pytest.raises(ValueError):
            bad()


class TestPhiEval:
    def test_zero_at_origin(self):
        for fam in ALL_FAMILIES:
            assert phi_eval(make_spec(fam), 0.0) == 0.0

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: repr(f))
    def test_increasing(self, fam):
        spec = make_spec(fam)
        grid = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0]
        vals = [phi_eval(spec, lam) for lam in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_stable_power(self):
        assert abs(phi_eval(make_spec(Stable(0.5)), 4.0) - 2.0) < 1e-14

    def test_unimix_removable_singularity(self):
        spec = make_spec(UniformStableMix())
        assert phi_eval(spec, 1.0) == 1.0
        assert abs(phi_eval(spec, 1.0 + 1e-12) - 1.0) < 1e-11

    def test_ig_closed_form(self):
        # K_{1/2} closed form turns the exponent into sqrt(1 + 2 lam) - 1
        spec = make_spec(GIG(1.0, 1.0, -0.5))
        assert abs(phi_eval(spec, 4.0) - 2.0) < 1e-12

    def test_compound_poisson_mass_limit(self):
        # bounded exponents approach the total measure mass
        assert abs(phi_eval(make_spec(ParetoCP(1.5)), 1e6) - 1.0) < 1e-6
        assert abs(phi_eval(make_spec(PoissonDrift(0.0, 2.0)), 1e6) - 2.0) < 1e-6

    @pytest.mark.parametrize("fam", [
        Stable(0.5), ParetoCP(1.5), TwoStableMix(0.75, 0.25, 0.5, 0.5),
        GIG(1.0, 1.0, 0.8), GIG(1.0, 0.0, -1.5), GIG(0.0, 1.0, 1.0),
        Custom(0.25, (AtomKernel(2.0, 0.5), StableKernel(0.5, 0.3))),
    ], ids=lambda f: repr(f))
    def test_quadrature_cross_check(self, fam):
        spec = make_spec(fam)
        for lam in [0.5, 2.0]:
            a = phi_eval(spec, lam)
            b = phi_eval_quadrature(spec, lam)
            assert abs(a - b) <= 2e-9 * abs(a)

    def test_unimix_against_mixture_integral(self):
        # density-route quadrature cannot certify the log-type tail, so the
        # mixture representation itself is the independent check here
        spec = make_spec(UniformStableMix())
        for lam in [0.3, 2.0, 17.0]:
            want = si.quad(lambda b: lam**b, 0.0, 1.0, limit=200)[0]
            assert abs(phi_eval(spec, lam) - want) < 1e-12


class TestPhiRealImag:
    def test_pure_drift(self):
        assert phi_real_imag(make_spec(PureDrift(1.0)), 2.0, 3.0) == (2.0, 3.0)

    def test_poisson_atom(self):
        b, u = 0.7, 1.9
        pr, pi_ = phi_real_imag(make_spec(PoissonDrift(0.0, 1.0)), b, u)
        assert abs(pr - (1.0 - math.exp(-b) * math.cos(u))) < 1e-14
        assert abs(pi_ - math.exp(-b) * math.sin(u)) < 1e-14

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: repr(f))
    def test_real_axis_limit(self, fam):
        spec = make_spec(fam)
        pr, pi_ = phi_real_imag(spec, 2.0, 0.0)
        assert abs(pr - phi_eval(spec, 2.0)) < 1e-9 * max(1.0, abs(pr))
        assert pi_ == 0.0

    def test_requires_positive_abscissa(self):
        with pytest.raises(ValueError):
            phi_real_imag(make_spec(Stable(0.5)), 0.0, 1.0)

    def test_measure_route_agrees(self):
        # quadrature of the oscillatory measure split reproduces the closed form
        spec = make_spec(ParetoCP(1.5))
        b, u = 1.0, 2.0
        f_cos = si.quad(lambda x: (1 - math.exp(-x * b) * math.cos(x * u))
                        * 1.5 * x**-2.5, 1, np.inf, limit=400)[0]
        f_sin = si.quad(lambda x: math.exp(-x * b) * math.sin(x * u)
                        * 1.5 * x**-2.5, 1, np.inf, limit=400)[0]
        pr, pi_ = phi_real_imag(spec, b, u)
        assert abs(pr - f_cos) < 1e-9
        assert abs(pi_ - f_sin) < 1e-9


class TestPhiDerivs:
    def test_pure_drift(self):
        d = phi_derivs(make_spec(PureDrift(2.0)), 3.0, 3)
        np.testing.assert_allclose(d, [6.0, 2.0, 0.0], atol=1e-300)

    def test_poisson_alternating_exponential(self):
        r, lam = 1.3, 0.8
        d = phi_derivs(make_spec(PoissonDrift(0.0, r)), lam, 6)
        for j in range(1, 6):
            want = (-1.0) ** (j + 1) * r * math.exp(-lam)
            assert abs(d[j] - want) < 1e-14

    def test_stable_falling_factorial(self):
        a, lam = 0.5, 2.0
        d = phi_derivs(make_spec(Stable(a)), lam, 5)
        fact = 1.0
        for j in range(1, 5):
            fact *= a - (j - 1)
            assert abs(d[j] - fact * lam ** (a - j)) < 1e-13 * abs(d[j])

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: repr(f))
    def test_sign_pattern(self, fam):
        d = phi_derivs(make_spec(fam), 1.3, 8)
        for j in range(2, 8):
            assert (-1.0) ** (j + 1) * d[j] >= 0.0

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: repr(f))
    @pytest.mark.parametrize("lam", [0.5, 1.0, 10.0])
    def test_first_derivative_finite_difference(self, fam, lam):
        spec = make_spec(fam)
        d = phi_derivs(spec, lam, 2)
        h = 1e-5 * lam
        fd = (phi_eval(spec, lam + h) - phi_eval(spec, lam - h)) / (2 * h)
        assert abs(d[1] - fd) <= 1e-6 * abs(fd)

    def test_second_derivative_finite_difference(self):
        for fam in [Stable(0.5), GIG(1.0, 1.0, 0.8), ParetoCP(1.0)]:
            spec = make_spec(fam)
            lam, h = 2.0, 1e-4
            d = phi_derivs(spec, lam, 3)
            fd2 = (phi_eval(spec, lam + h) - 2 * phi_eval(spec, lam)
                   + phi_eval(spec, lam - h)) / h**2
            assert abs(d[2] - fd2) <= 1e-5 * abs(fd2)

    def test_gig_fubini_reduction_vs_double_quadrature(self):
        # high derivatives from the reduced kernel integral must match the
        # raw double integral  (-1)^(j+1) int x^j e^(-lam x) g(x) dx
        delta, gamma, kappa = 1.0, 1.0, 0.8
        spec = make_spec(GIG(delta, gamma, kappa))
        lam = 2.0
        d = phi_derivs(spec, lam, 6)
        for j in [1, 2, 5]:
            raw = si.quad(
                lambda x: x**j * math.exp(-lam * x) * gig_density_direct(delta, gamma, kappa, x),
                0, np.inf, limit=200,
            )[0]
            want = (-1.0) ** (j + 1) * raw
            assert abs(d[j] - want) <= 1e-7 * abs(want)

    def test_scaled_taylor_consistency(self):
        # scaled Taylor coefficients and raw derivatives agree for small k
        for fam in [Stable(0.5), PoissonDrift(1.0, 1.0), ParetoCP(1.0),
                    GIG(1.0, 1.0, 0.8), UniformStableMix()]:
            spec = make_spec(fam)
            lam, s, k = 2.0, 0.7, 8
            ta = scaled_taylor(spec, lam, k, s)
            d = phi_derivs(spec, lam, k)
            want = d * (-s) ** np.arange(k) / sc.factorial(np.arange(k))
            np.testing.assert_allclose(ta, want, rtol=1e-9, atol=1e-16)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            phi_derivs(make_spec(Stable(0.5)), 1.0, 514)


class TestLevyDensity:
    def test_pareto_value(self):
        assert levy_density(make_spec(ParetoCP(1.0)), 2.0) == 0.25
        assert levy_density(make_spec(ParetoCP(1.0)), 0.5) == 0.0

    def test_gig_gamma_case(self):
        # delta = 0, kappa > 0: (kappa/x) exp(-gamma^2 x / 2)
        spec = make_spec(GIG(0.0, 1.2, 0.7))
        x = 1.7
        want = 0.7 / x * math.exp(-1.2**2 * x / 2.0)
        assert abs(levy_density(spec, x) - want) < 1e-14

    def test_gig_small_delta_approaches_gamma_density(self):
        # delta -> 0 with kappa >= 1: the Bessel kernel term is O(delta^2)
        fam = GIG(1e-4, 1.0, 1.0)
        spec = make_spec(fam)
        for x in [0.5, 1.0, 2.0]:
            want = 1.0 / x * math.exp(-x / 2.0)
            got = levy_density(spec, x)
            assert abs(got - want) <= 1e-6 * want

    def test_gig_matches_direct_double_quadrature(self):
        spec = make_spec(GIG(1.0, 1.0, -0.5))
        for x in [0.4, 1.0, 3.0]:
            want = gig_density_direct(1.0, 1.0, -0.5, x)
            assert abs(levy_density(spec, x) - want) <= 1e-8 * want

    def test_measure_record_atoms(self):
        spec = make_spec(PoissonDrift(0.3, 2.0))
        assert spec.measure.atoms == ((1.0, 2.0),)
        assert levy_density(spec, 1.0) == 0.0


class TestMeanOfD1:
    def test_poisson(self):
        assert mean_of_D1(make_spec(PoissonDrift(0.3, 2.0))) == 2.3

    def test_stable_infinite(self):
        assert mean_of_D1(make_spec(Stable(0.5))) == math.inf

    def test_pareto_integrable(self):
        want = si.quad(lambda x: x * 2.0 * x**-3.0, 1, np.inf)[0]
        assert abs(mean_of_D1(make_spec(ParetoCP(2.0))) - want) < 1e-12
        assert mean_of_D1(make_spec(ParetoCP(1.0))) == math.inf

    def test_gig_against_bessel_formula(self):
        for d, g, kp in [(1.0, 1.0, -0.5), (1.0, 1.0, 0.5), (2.0, 0.5, 1.0)]:
            want = d * bessel_k(1 + kp, g * d) / (g * bessel_k(kp, g * d))
            got = mean_of_D1(make_spec(GIG(d, g, kp)))
            assert abs(got - want) <= 1e-10 * want

    def test_gig_reciprocal_gamma_cases(self):
        assert mean_of_D1(make_spec(GIG(1.0, 0.0, -0.5))) == math.inf
        assert abs(mean_of_D1(make_spec(GIG(2.0, 0.0, -2.0))) - 2.0) < 1e-14

    def test_custom_sum(self):
        spec = make_spec(Custom(0.5, (AtomKernel(1.0, 1.0), ExpTiltedPowerKernel(-0.5, 2.0))))
        want = 0.5 + 1.0 + math.gamma(1.5) * 2.0**-1.5
        assert abs(mean_of_D1(spec) - want) < 1e-14


class TestAtomAtZero:
    def test_values(self):
        assert atom_at_zero(make_spec(Stable(0.5))) == 0.0
        assert atom_at_zero(make_spec(ParetoCP(1.0))) == 1.0
        assert atom_at_zero(make_spec(PoissonDrift(0.0, 4.0))) == 0.25
        assert atom_at_zero(make_spec(PoissonDrift(0.5, 4.0))) == 0.0
        assert atom_at_zero(make_spec(GIG(0.0, 1.0, 1.0))) == 0.0


class TestSpecRecord:
    def test_fields(self):
        spec = make_spec(GIG(1.0, 1.0, 0.8))
        assert spec.drift == 0.0
        assert spec.exponent_form == "measure-defined"
        assert make_spec(Stable(0.5)).exponent_form == "closed-form"

    def test_appendix_mean_identity_via_density(self):
        # integral of x * density equals the Bessel mean formula
        d, g, kp = 1.0, 1.0, 0.5
        spec = make_spec(GIG(d, g, kp))
        dens = spec.measure.density
        val = si.quad(lambda x: x * float(dens(np.array([x]))[0]), 0, np.inf, limit=400)[0]
        want = d * bessel_k(1 + kp, g * d) / (g * bessel_k(kp, g * d))
        assert abs(val - want) <= 1e-7 * want
