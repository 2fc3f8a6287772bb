"""Subordinator families and evaluation of the Levy exponent.

Every family provides the handful of quantities the inversion engines ask
for: the exponent phi on the positive axis and in the right half plane, the
scaled Taylor coefficients of ``h -> phi(lam - s h)`` (which carry the high
derivatives the Post-Widder method needs in an overflow-free normalization),
log-magnitudes of the raw derivatives, the density/atoms of the Levy
measure, the mean jump rate, and the total measure mass.

phi is given by the Levy-Khintchine form

    phi(lam) = mu*lam + integral (1 - exp(-lam x)) Pi(dx),

so for j >= 1 the derivatives are (-1)^(j+1) integral x^j exp(-lam x) Pi(dx)
plus the drift at j = 1: positive magnitudes with a fixed alternating sign.
All scaled-Taylor vectors therefore have a positive leading entry and
nonpositive tail, which keeps the downstream triangular solve cancellation
free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special as _sc

from . import _gig
from .errors import AccuracyError, MagnitudeError
from .quadrature import adaptive, semi_infinite
from .series import binomial_coeffs
from .special import (
    complex_log1p,
    exp_integral_complex,
    gen_exp_integral,
    log_bessel_k,
    log_gen_exp_integral_low,
)

_BETA_NODES, _BETA_WEIGHTS = np.polynomial.legendre.leggauss(64)
_BETA_NODES = 0.5 * (_BETA_NODES + 1.0)
_BETA_WEIGHTS = 0.5 * _BETA_WEIGHTS

MAX_DERIV_ORDER = 513


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# measure record


@dataclass(frozen=True)
class LevyMeasure:
    """Absolutely continuous density plus point masses of the Levy measure."""

    density: Optional[Callable[[np.ndarray], np.ndarray]]
    atoms: tuple[tuple[float, float], ...]
    support_lower: float

    def __post_init__(self):
        for x, w in self.atoms:
            _require(x > 0 and w > 0, "measure atoms need positive location and weight")


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class PureDrift:
    """Deterministic subordinator D(s) = mu*s; trivial oracle family."""

    mu: float

    def __post_init__(self):
        _require(self.mu > 0, "PureDrift requires mu > 0")

    drift = property(lambda self: self.mu)
    discontinuous_renewal = False
    closed_form = True

    def phi(self, lam):
        return self.mu * lam

    def phi_z(self, z):
        return self.mu * z

    def scaled_taylor(self, lam, k, s):
        ta = np.zeros(k)
        ta[0] = self.mu * lam
        if k > 1:
            ta[1] = -self.mu * s
        return ta

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        if k > 1:
            out[1] = math.log(self.mu)
        return out

    def measure(self):
        return LevyMeasure(None, (), 0.0)

    def mean_d1(self):
        return self.mu

    def total_mass(self):
        return 0.0

    def max_atom(self):
        return 0.0


@dataclass(frozen=True)
class PoissonDrift:
    """Drift mu plus a rate-r Poisson process (unit jumps)."""

    mu: float
    r: float

    def __post_init__(self):
        _require(self.mu >= 0, "PoissonDrift requires mu >= 0")
        _require(self.r > 0, "PoissonDrift requires r > 0")

    drift = property(lambda self: self.mu)
    closed_form = True

    @property
    def discontinuous_renewal(self):
        return self.mu == 0.0

    def phi(self, lam):
        return self.mu * lam + self.r * -math.expm1(-lam)

    def phi_z(self, z):
        return self.mu * z + self.r * (1.0 - np.exp(-z))

    def scaled_taylor(self, lam, k, s):
        j = np.arange(k)
        with np.errstate(divide="ignore"):
            ta = -self.r * np.exp(-lam + j * np.log(s) - _sc.gammaln(j + 1))
        ta[0] = self.phi(lam)
        if k > 1:
            ta[1] -= self.mu * s
        return ta

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -lam + math.log(self.r))
        out[0] = -np.inf
        if k > 1 and self.mu > 0:
            out[1] = np.logaddexp(out[1], math.log(self.mu))
        return out

    def measure(self):
        return LevyMeasure(None, ((1.0, self.r),), 1.0)

    def mean_d1(self):
        return self.mu + self.r

    def total_mass(self):
        return self.r

    def max_atom(self):
        return 1.0


@dataclass(frozen=True)
class ParetoCP:
    """Rate-1 compound Poisson process with Pareto(alpha) jumps on [1, inf)."""

    alpha: float

    def __post_init__(self):
        _require(self.alpha > 0, "ParetoCP requires alpha > 0")

    drift = 0.0
    discontinuous_renewal = False
    closed_form = True

    def _log_e_ladder(self, lam, k):
        """log E_{1+alpha-m}(lam) for m = 0..k-1."""
        a = self.alpha
        m0 = math.ceil(a)
        loge = np.empty(k)
        if k > m0:
            ms = np.arange(m0, k)
            loge[m0:] = log_gen_exp_integral_low(1.0 + a - ms, lam)
        # orders above 1 climb from the base order in (0, 1]
        base_order = 1.0 + a - m0
        val = math.exp(log_gen_exp_integral_low(np.array([base_order]), lam)[0])
        q = base_order
        for m in range(m0 - 1, -1, -1):
            val = (math.exp(-lam) - lam * val) / q
            q += 1.0
            if m < k:
                loge[m] = math.log(val) if val > 0 else -np.inf
        return loge

    def phi(self, lam):
        return 1.0 - self.alpha * gen_exp_integral(1.0 + self.alpha, lam)

    def phi_z(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        vals = np.array([exp_integral_complex(1.0 + self.alpha, zz) for zz in flat])
        return (1.0 - self.alpha * vals).reshape(z.shape)

    def scaled_taylor(self, lam, k, s):
        loge = self._log_e_ladder(lam, k)
        j = np.arange(k)
        with np.errstate(divide="ignore"):
            ta = -self.alpha * np.exp(loge + j * np.log(s) - _sc.gammaln(j + 1))
        ta[0] = 1.0 - self.alpha * math.exp(loge[0])
        return ta

    def deriv_log_mags(self, lam, k):
        out = math.log(self.alpha) + self._log_e_ladder(lam, k)
        out[0] = -np.inf
        return out

    def measure(self):
        a = self.alpha

        def dens(x):
            x = np.asarray(x, dtype=float)
            return np.where(x >= 1.0, a * x ** (-a - 1.0), 0.0)

        return LevyMeasure(dens, (), 1.0)

    def mean_d1(self):
        if self.alpha <= 1.0:
            return math.inf
        return self.alpha / (self.alpha - 1.0)

    def total_mass(self):
        return 1.0

    def max_atom(self):
        return 0.0


def _stable_density(alpha, weight):
    c = weight * alpha / _sc.gamma(1.0 - alpha)

    def dens(x):
        x = np.asarray(x, dtype=float)
        return c * x ** (-1.0 - alpha)

    return dens


@dataclass(frozen=True)
class Stable:
    """alpha-stable subordinator, phi(lam) = lam**alpha."""

    alpha: float

    def __post_init__(self):
        _require(0 < self.alpha < 1, "Stable requires 0 < alpha < 1")

    drift = 0.0
    discontinuous_renewal = False
    closed_form = True

    def phi(self, lam):
        return lam**self.alpha

    def phi_z(self, z):
        return z**self.alpha

    def scaled_taylor(self, lam, k, s):
        return lam**self.alpha * binomial_coeffs(self.alpha, k, -s / lam)

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        if k == 1:
            return out
        loglam = math.log(lam)
        acc = math.log(self.alpha)
        out[1] = acc + (self.alpha - 1.0) * loglam
        for j in range(2, k):
            acc += math.log(abs(self.alpha - (j - 1)))
            out[j] = acc + (self.alpha - j) * loglam
        return out

    def measure(self):
        return LevyMeasure(_stable_density(self.alpha, 1.0), (), 0.0)

    def mean_d1(self):
        return math.inf

    def total_mass(self):
        return math.inf

    def max_atom(self):
        return 0.0


@dataclass(frozen=True)
class TwoStableMix:
    """Weighted sum of two stable subordinators, alpha2 < alpha1."""

    alpha1: float
    alpha2: float
    c1: float
    c2: float

    def __post_init__(self):
        _require(0 < self.alpha2 < self.alpha1 < 1,
                 "TwoStableMix requires 0 < alpha2 < alpha1 < 1")
        _require(self.c1 > 0 and self.c2 > 0, "TwoStableMix weights must be positive")
        _require(abs(self.c1 + self.c2 - 1.0) < 1e-12, "TwoStableMix weights must sum to 1")

    drift = 0.0
    discontinuous_renewal = False
    closed_form = True

    def _parts(self):
        return ((self.c1, self.alpha1), (self.c2, self.alpha2))

    def phi(self, lam):
        return self.c1 * lam**self.alpha1 + self.c2 * lam**self.alpha2

    def phi_z(self, z):
        return self.c1 * z**self.alpha1 + self.c2 * z**self.alpha2

    def scaled_taylor(self, lam, k, s):
        xi = -s / lam
        return sum(c * lam**a * binomial_coeffs(a, k, xi) for c, a in self._parts())

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        for c, a in self._parts():
            sub = Stable(a).deriv_log_mags(lam, k)
            out = np.logaddexp(out, math.log(c) + sub)
        return out

    def measure(self):
        d1 = _stable_density(self.alpha1, self.c1)
        d2 = _stable_density(self.alpha2, self.c2)
        return LevyMeasure(lambda x: d1(x) + d2(x), (), 0.0)

    def mean_d1(self):
        return math.inf

    def total_mass(self):
        return math.inf

    def max_atom(self):
        return 0.0


@dataclass(frozen=True)
class UniformStableMix:
    """Uniform continuous mixture of stable exponents: phi = (lam-1)/log lam."""

    drift = 0.0
    discontinuous_renewal = False
    closed_form = True

    def phi(self, lam):
        w = lam - 1.0
        if w == 0.0:
            return 1.0
        return w / math.log1p(w)

    def phi_z(self, z):
        z = np.asarray(z, dtype=complex)
        w = z - 1.0
        lg = np.log(z)
        out = np.where(np.abs(w) < 1e-8, 1.0 + w / 2.0 - w * w / 12.0,
                       w / np.where(lg == 0, 1.0, lg))
        return out

    def scaled_taylor(self, lam, k, s):
        # exact mixture form: coefficient j is integral_0^1 lam^b binom(b, j) (-s/lam)^j db
        xi = -s / lam
        lamb = lam**_BETA_NODES
        ta = np.empty(k)
        ta[0] = float(np.dot(_BETA_WEIGHTS, lamb))
        term = np.ones_like(_BETA_NODES)
        for j in range(1, k):
            term *= (_BETA_NODES - (j - 1)) / j * xi
            ta[j] = float(np.dot(_BETA_WEIGHTS, lamb * term))
        return ta

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        if k == 1:
            return out
        loglam = math.log(lam)
        acc = np.log(_BETA_WEIGHTS) + np.log(_BETA_NODES) + (_BETA_NODES - 1.0) * loglam
        mx = acc.max()
        out[1] = mx + math.log(np.exp(acc - mx).sum())
        for j in range(2, k):
            acc += np.log(j - 1 - _BETA_NODES) - loglam
            mx = acc.max()
            out[j] = mx + math.log(np.exp(acc - mx).sum())
        return out

    def measure(self):
        def dens(x):
            x = np.asarray(x, dtype=float)
            out = np.empty_like(x)
            for i, xi in enumerate(x.ravel()):
                kern = _BETA_NODES / _sc.gamma(1.0 - _BETA_NODES) * xi ** (-1.0 - _BETA_NODES)
                out.ravel()[i] = float(np.dot(_BETA_WEIGHTS, kern))
            return out

        return LevyMeasure(dens, (), 0.0)

    def mean_d1(self):
        return math.inf

    def total_mass(self):
        return math.inf

    def max_atom(self):
        return 0.0


@dataclass(frozen=True)
class GIG:
    """Generalized-inverse-Gaussian subordinator (parameters delta, gamma, kappa).

    Admissible domain: kappa > 0 needs delta >= 0, gamma > 0; kappa = 0 needs
    delta > 0, gamma > 0; kappa < 0 needs delta > 0, gamma >= 0.
    """

    delta: float
    gamma: float
    kappa: float

    def __post_init__(self):
        d, g, kp = self.delta, self.gamma, self.kappa
        if kp > 0:
            ok = d >= 0 and g > 0
        elif kp == 0:
            ok = d > 0 and g > 0
        else:
            ok = d > 0 and g >= 0
        _require(ok, f"GIG parameter domain violated: delta={d}, gamma={g}, kappa={kp}")

    drift = 0.0
    discontinuous_renewal = False

    @property
    def closed_form(self):
        return self.delta == 0.0 or abs(self.kappa) == 0.5

    @property
    def _s0(self):
        return self.gamma**2 / 2.0

    def _kernel(self):
        return _gig.kernel_for(self.delta, self.kappa)

    def phi(self, lam):
        d, g, kp = self.delta, self.gamma, self.kappa
        if lam == 0.0:
            return 0.0
        if d == 0.0:
            return kp * math.log1p(lam / self._s0)
        x1 = d * math.sqrt(g * g + 2.0 * lam)
        if g > 0.0:
            return -((kp / 2.0) * (math.log(g * g) - math.log(g * g + 2.0 * lam))
                     + log_bessel_k(kp, x1) - log_bessel_k(kp, d * g))
        # gamma = 0, kappa < 0: reciprocal-gamma form
        return -(math.log(2.0) - (kp / 2.0) * math.log(d * d / 2.0)
                 - (kp / 2.0) * math.log(lam) - _sc.gammaln(-kp)
                 + log_bessel_k(-kp, x1))

    def phi_z(self, z):
        d, g, kp = self.delta, self.gamma, self.kappa
        z = np.asarray(z, dtype=complex)
        if d == 0.0:
            return kp * complex_log1p(2.0 * z / (g * g))
        if abs(kp) == 0.5:
            out = d * (np.sqrt(g * g + 2.0 * z) - g)
            if kp > 0:
                out = out + 0.5 * complex_log1p(2.0 * z / (g * g))
            return out
        flat = z.ravel()
        out = self._kernel().frullani_complex(self._s0, flat)
        if kp > 0:
            out = out + kp * complex_log1p(flat / self._s0)
        return out.reshape(z.shape)

    def scaled_taylor(self, lam, k, s):
        d, g, kp = self.delta, self.gamma, self.kappa
        ta = np.empty(k)
        ta[0] = self.phi(lam)
        if k == 1:
            return ta
        sig0 = lam + self._s0
        j = np.arange(1, k)
        kplus = max(kp, 0.0)
        if d == 0.0:
            ta[1:] = -kp * (s / sig0) ** j / j
            return ta
        if abs(kp) == 0.5:
            A = g * g + 2.0 * lam
            sq = d * math.sqrt(A) * binomial_coeffs(0.5, k, -2.0 * s / A)
            ta[1:] = sq[1:]
            if kplus:
                ta[1:] -= kplus * (s / sig0) ** j / j
            return ta
        M, _ = self._kernel().scaled_deriv_terms(sig0, s, k - 1)
        ta[1:] = -(kplus * (s / sig0) ** j + M) / j
        return ta

    def deriv_log_mags(self, lam, k):
        d, g, kp = self.delta, self.gamma, self.kappa
        out = np.full(k, -np.inf)
        if k == 1:
            return out
        sig0 = lam + self._s0
        j = np.arange(1, k)
        lg = _sc.gammaln(j)
        if d == 0.0:
            out[1:] = math.log(kp) + lg - j * math.log(sig0)
            return out
        if kp > 0:
            out[1:] = math.log(kp) + lg - j * math.log(sig0)
        tails, _ = self._kernel().log_deriv_tails(sig0, k - 1)
        out[1:] = np.logaddexp(out[1:], lg + tails)
        return out

    def measure(self):
        d, g, kp = self.delta, self.gamma, self.kappa
        s0 = self._s0

        if d == 0.0:
            def dens(x):
                x = np.asarray(x, dtype=float)
                return kp / x * np.exp(-s0 * x)
        else:
            kern = self._kernel()
            kplus = max(kp, 0.0)

            def dens(x):
                x = np.asarray(x, dtype=float)
                out = np.empty_like(x)
                for i, xi in enumerate(x.ravel()):
                    inner, _ = kern.density_inner(xi)
                    out.ravel()[i] = math.exp(-s0 * xi) / xi * (inner + kplus)
                return out

        return LevyMeasure(dens, (), 0.0)

    def mean_d1(self):
        d, g, kp = self.delta, self.gamma, self.kappa
        if d == 0.0:
            return 2.0 * kp / (g * g)
        if g > 0.0:
            return d * math.exp(log_bessel_k(1.0 + kp, g * d) - log_bessel_k(kp, g * d)) / g
        if kp < -1.0:
            return d * d / (2.0 * (-kp - 1.0))
        return math.inf

    def total_mass(self):
        return math.inf

    def max_atom(self):
        return 0.0


# --- custom measure kernels -------------------------------------------------


@dataclass(frozen=True)
class AtomKernel:
    """Point mass of weight w at location x."""

    x: float
    w: float

    def __post_init__(self):
        _require(self.x > 0 and self.w > 0, "atom kernel needs x > 0, w > 0")

    def phi(self, lam):
        return self.w * -math.expm1(-lam * self.x)

    def phi_z(self, z):
        return self.w * (1.0 - np.exp(-self.x * z))

    def scaled_taylor(self, lam, k, s):
        j = np.arange(k)
        with np.errstate(divide="ignore"):
            ta = -self.w * np.exp(-lam * self.x + j * np.log(s * self.x) - _sc.gammaln(j + 1))
        ta[0] = self.phi(lam)
        return ta

    def deriv_log_mags(self, lam, k):
        j = np.arange(k)
        out = math.log(self.w) - lam * self.x + j * math.log(self.x)
        out[0] = -np.inf
        return out

    def mean(self):
        return self.w * self.x

    def mass(self):
        return self.w

    density = None


@dataclass(frozen=True)
class ParetoKernel:
    """Pareto(alpha) jump density alpha x^(-alpha-1) on [1, inf)."""

    alpha: float

    def __post_init__(self):
        _require(self.alpha > 0, "pareto kernel needs alpha > 0")

    def _proxy(self):
        return ParetoCP(self.alpha)

    def phi(self, lam):
        return self._proxy().phi(lam)

    def phi_z(self, z):
        return self._proxy().phi_z(z)

    def scaled_taylor(self, lam, k, s):
        return self._proxy().scaled_taylor(lam, k, s)

    def deriv_log_mags(self, lam, k):
        return self._proxy().deriv_log_mags(lam, k)

    def mean(self):
        return self._proxy().mean_d1()

    def mass(self):
        return 1.0

    @property
    def density(self):
        return self._proxy().measure().density


@dataclass(frozen=True)
class StableKernel:
    """weight * lam**alpha contribution."""

    alpha: float
    weight: float

    def __post_init__(self):
        _require(0 < self.alpha < 1, "stable kernel needs 0 < alpha < 1")
        _require(self.weight > 0, "stable kernel needs weight > 0")

    def phi(self, lam):
        return self.weight * lam**self.alpha

    def phi_z(self, z):
        return self.weight * z**self.alpha

    def scaled_taylor(self, lam, k, s):
        return self.weight * lam**self.alpha * binomial_coeffs(self.alpha, k, -s / lam)

    def deriv_log_mags(self, lam, k):
        return math.log(self.weight) + Stable(self.alpha).deriv_log_mags(lam, k)

    def mean(self):
        return math.inf

    def mass(self):
        return math.inf

    @property
    def density(self):
        return _stable_density(self.alpha, self.weight)


@dataclass(frozen=True)
class ExpTiltedPowerKernel:
    """Density x^a exp(-b x) on (0, inf); needs a > -2 for a Levy measure."""

    a: float
    b: float

    def __post_init__(self):
        _require(self.a > -2.0, "exp_tilted_power kernel needs a > -2")
        _require(self.b > 0.0, "exp_tilted_power kernel needs b > 0")

    def phi(self, lam):
        if self.a == -1.0:
            return math.log1p(lam / self.b)
        g1 = _sc.gamma(self.a + 1.0)
        return g1 * (self.b ** (-1.0 - self.a) - (self.b + lam) ** (-1.0 - self.a))

    def phi_z(self, z):
        if self.a == -1.0:
            return np.log1p(z / self.b)
        g1 = _sc.gamma(self.a + 1.0)
        return g1 * (self.b ** (-1.0 - self.a) - (self.b + z) ** (-1.0 - self.a))

    def scaled_taylor(self, lam, k, s):
        ta = np.empty(k)
        ta[0] = self.phi(lam)
        if k == 1:
            return ta
        j = np.arange(1, k)
        if self.a == -1.0:
            ta[1:] = -((s / (self.b + lam)) ** j) / j
            return ta
        coef = binomial_coeffs(-1.0 - self.a, k, -s / (self.b + lam))
        ta[1:] = -_sc.gamma(self.a + 1.0) * (self.b + lam) ** (-1.0 - self.a) * coef[1:]
        return ta

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        if k == 1:
            return out
        j = np.arange(1, k)
        # |phi^(j)| = Gamma(a+1+j)/Gamma(a+1) * |Gamma(a+1)| * (b+lam)^(-1-a-j) ... direct:
        out[1:] = (_sc.gammaln(self.a + 1.0 + j) - (1.0 + self.a + j) * math.log(self.b + lam))
        return out

    def mean(self):
        return _sc.gamma(self.a + 2.0) * self.b ** (-self.a - 2.0)

    def mass(self):
        if self.a <= -1.0:
            return math.inf
        return _sc.gamma(self.a + 1.0) * self.b ** (-1.0 - self.a)

    @property
    def density(self):
        a, b = self.a, self.b

        def dens(x):
            x = np.asarray(x, dtype=float)
            return x**a * np.exp(-b * x)

        return dens


@dataclass(frozen=True)
class Custom:
    """User-assembled exponent: drift plus a list of measure kernels."""

    drift_value: float
    kernels: tuple

    def __post_init__(self):
        _require(self.drift_value >= 0, "Custom drift must be nonnegative")
        _require(self.drift_value > 0 or len(self.kernels) > 0,
                 "Custom spec needs a drift or at least one kernel")

    drift = property(lambda self: self.drift_value)

    @property
    def closed_form(self):
        return True

    @property
    def discontinuous_renewal(self):
        return self.drift_value == 0.0 and all(isinstance(k, AtomKernel) for k in self.kernels)

    def phi(self, lam):
        return self.drift_value * lam + sum(k.phi(lam) for k in self.kernels)

    def phi_z(self, z):
        out = self.drift_value * np.asarray(z, dtype=complex)
        for k in self.kernels:
            out = out + k.phi_z(z)
        return out

    def scaled_taylor(self, lam, k, s):
        ta = np.zeros(k)
        for kern in self.kernels:
            ta += kern.scaled_taylor(lam, k, s)
        ta[0] += self.drift_value * lam
        if k > 1:
            ta[1] -= self.drift_value * s
        return ta

    def deriv_log_mags(self, lam, k):
        out = np.full(k, -np.inf)
        for kern in self.kernels:
            out = np.logaddexp(out, kern.deriv_log_mags(lam, k))
        if k > 1 and self.drift_value > 0:
            out[1] = np.logaddexp(out[1], math.log(self.drift_value))
        return out

    def measure(self):
        atoms = tuple((k.x, k.w) for k in self.kernels if isinstance(k, AtomKernel))
        denss = [k.density for k in self.kernels if k.density is not None]
        lower = min((1.0 if isinstance(k, ParetoKernel) else 0.0
                     for k in self.kernels if not isinstance(k, AtomKernel)), default=0.0)

        if denss:
            def dens(x):
                x = np.asarray(x, dtype=float)
                return sum(d(x) for d in denss)
        else:
            dens = None
        return LevyMeasure(dens, atoms, lower)

    def mean_d1(self):
        return self.drift_value + sum(k.mean() for k in self.kernels)

    def total_mass(self):
        return sum(k.mass() for k in self.kernels)

    def max_atom(self):
        return max((k.x for k in self.kernels if isinstance(k, AtomKernel)), default=0.0)


# ---------------------------------------------------------------------------
# spec record and module-level operations


@dataclass(frozen=True)
class SubordinatorSpec:
    """Drift + Levy measure + family tag; the single input every engine takes."""

    family: object
    drift: float
    measure: LevyMeasure
    exponent_form: str

    @classmethod
    def from_family(cls, family):
        return cls(
            family=family,
            drift=family.drift,
            measure=family.measure(),
            exponent_form="closed-form" if family.closed_form else "measure-defined",
        )


def make_spec(family) -> SubordinatorSpec:
    return SubordinatorSpec.from_family(family)


def phi_eval(spec, lam):
    """Levy exponent phi(lam) for lam >= 0."""
    if lam < 0:
        raise ValueError("phi_eval requires lam >= 0")
    if lam == 0.0:
        return 0.0
    return float(spec.family.phi(lam))


def phi_complex(spec, z):
    """phi evaluated on complex arguments with Re z > 0 (vectorized)."""
    return spec.family.phi_z(z)


def phi_real_imag(spec, b, u):
    """Real/imaginary split of phi(b + i u), b > 0."""
    if b <= 0:
        raise ValueError("phi_real_imag requires b > 0")
    val = complex(np.asarray(spec.family.phi_z(np.array([b + 1j * u]))).ravel()[0])
    return val.real, val.imag


def scaled_taylor(spec, lam, k, s):
    """Coefficients phi^(j)(lam) (-s)^j / j!  for j = 0..k-1.

    These are the Taylor coefficients of h -> phi(lam - s*h): the entire
    content of the scaled lower-triangular Leibniz system in the
    normalization that survives k = 512 in double precision.
    """
    if lam <= 0:
        raise ValueError("scaled_taylor requires lam > 0")
    ta = spec.family.scaled_taylor(lam, k, s)
    if ta[0] <= 0.0:
        raise MagnitudeError("nonpositive leading Taylor entry; upstream quadrature failed")
    return ta


def phi_derivs(spec, lam, k):
    """[phi(lam), phi'(lam), ..., phi^(k-1)(lam)] with the alternating sign law."""
    if lam <= 0:
        raise ValueError("phi_derivs requires lam > 0")
    if not 1 <= k <= MAX_DERIV_ORDER:
        raise ValueError(f"phi_derivs supports 1 <= k <= {MAX_DERIV_ORDER}")
    logmag = spec.family.deriv_log_mags(lam, k)
    if np.any(logmag > 709.0):
        j_bad = int(np.argmax(logmag))
        raise MagnitudeError(f"|phi^({j_bad})({lam})| exceeds double range")
    j = np.arange(k)
    signs = np.where(j % 2 == 1, 1.0, -1.0)
    out = signs * np.exp(logmag)
    out[0] = phi_eval(spec, lam)
    return out


def levy_density(spec, x):
    """Density of the absolutely continuous part of the Levy measure at x > 0."""
    if x <= 0:
        raise ValueError("levy_density requires x > 0")
    dens = spec.measure.density
    if dens is None:
        return 0.0
    return float(np.asarray(dens(np.array([x])))[0])


def mean_of_D1(spec):
    """E D(1) = mu + integral x Pi(dx); may be +inf."""
    return spec.family.mean_d1()


def levy_total_mass(spec):
    """Total mass of the Levy measure (finite only for compound Poisson)."""
    return spec.family.total_mass()


def atom_at_zero(spec):
    """Weight of the renewal-measure atom at 0: lim 1/phi, 0 if phi unbounded."""
    if spec.drift > 0:
        return 0.0
    mass = levy_total_mass(spec)
    if math.isinf(mass):
        return 0.0
    return 1.0 / mass


def phi_eval_quadrature(spec, lam, rel_tol=1e-10):
    """phi(lam) straight from the measure (cross-validation path).

    Atoms are summed exactly; the absolutely continuous part is integrated
    adaptively with the infinite tail truncated at the decay point.
    """
    if lam < 0:
        raise ValueError("phi_eval_quadrature requires lam >= 0")
    if lam == 0.0:
        return 0.0
    total = spec.drift * lam
    for x, w in spec.measure.atoms:
        total += w * -math.expm1(-lam * x)
    dens = spec.measure.density
    if dens is not None:
        lo = spec.measure.support_lower

        def f(x):
            return -np.expm1(-lam * x) * dens(x)

        if lo > 0.0:
            total += semi_infinite(f, lo, rel_tol=rel_tol).value
        else:
            # x = exp(1 - 1/w) flattens both power-law and 1/(x log^2 x)
            # singularities of (1 - e^(-lam x)) * density at the origin.
            # Below x0 any admissible density is x^(-p) with p < 2, so the
            # density stays representable at x0 and the cut mass is bounded
            # by a local power fit.
            x0 = 1e-120

            def f_head(w):
                w = np.asarray(w, dtype=float)
                out = np.zeros_like(w)
                with np.errstate(over="ignore", under="ignore"):
                    x = np.exp(1.0 - 1.0 / np.maximum(w, 1e-300))
                m = x > x0
                if m.any():
                    out[m] = f(x[m]) * x[m] / w[m] ** 2
                return out

            head = adaptive(f_head, 0.0, 1.0, rel_tol=rel_tol)
            tail = semi_infinite(f, 1.0, rel_tol=rel_tol)
            total += head.value + tail.value
            d0, d1 = (float(v) for v in dens(np.array([x0, x0 * 1e8])))
            if d0 > 0.0 and d1 > 0.0:
                p_hat = math.log(d0 / d1) / math.log(1e8)
                cut = lam * d0 * x0 * x0 / max(2.0 - p_hat, 1e-3)
                if abs(cut) > 100.0 * rel_tol * abs(total):
                    raise AccuracyError(
                        "Levy density too singular at 0 for the quadrature head",
                        residual=cut,
                    )
                total += cut
    return total
