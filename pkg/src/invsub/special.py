"""Special functions needed by the subordinator families and the oracles.

Bessel functions are delegated to scipy behind thin guards (overflow and
precision checks stay our responsibility); the generalized exponential
integral is implemented here because it is needed for arbitrary real order,
including the negative orders produced by high derivatives of the Pareto
exponent, and no library routine covers that range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sc

from .errors import MagnitudeError

EULER_GAMMA = 0.5772156649015329

_LOG_HUGE = 709.0
_CF_MAX_ITER = 500


@dataclass(frozen=True)
class SpecialFnResult:
    """A value with an absolute error estimate attached."""

    value: float
    est_abs_error: float


def gamma(x):
    return _sc.gamma(x)


def complex_log1p(w):
    """log(1 + w) for complex w, accurate for small |w|.

    numpy's complex log1p carries no small-argument compensation; this one
    builds the real part from the real log1p of |1+w|^2 - 1.
    """
    w = np.asarray(w, dtype=complex)
    a, b = w.real, w.imag
    big = np.abs(a) + np.abs(b) > 1e8
    with np.errstate(over="ignore", invalid="ignore"):
        re = np.where(big, np.log(np.hypot(1.0 + a, b)),
                      0.5 * np.log1p(np.where(big, 0.0, 2.0 * a + a * a + b * b)))
    return re + 1j * np.arctan2(b, 1.0 + a)


def log_gamma(x):
    return _sc.gammaln(x)


def bessel_k(nu, x):
    """Modified Bessel function K_nu(x), x > 0; symmetric in nu."""
    if x <= 0.0:
        raise ValueError("bessel_k requires x > 0")
    v = _sc.kv(nu, x)
    if not np.isfinite(v):
        mag = log_gamma(abs(nu)) + abs(nu) * math.log(2.0 / x) - math.log(2.0)
        raise MagnitudeError(
            f"K_{nu}({x}) overflows double precision (log magnitude ~ {mag:.1f})"
        )
    return float(v)


def log_bessel_k(nu, x):
    """log K_nu(x) without underflow at large x (uses the scaled form)."""
    if x <= 0.0:
        raise ValueError("log_bessel_k requires x > 0")
    return float(np.log(_sc.kve(nu, x)) - x)


def bessel_jy(nu, x):
    """(J_nu(x), Y_nu(x)) for nu >= 0, x > 0."""
    if x <= 0.0:
        raise ValueError("bessel_jy requires x > 0")
    if nu < 0.0:
        raise ValueError("bessel_jy requires nu >= 0")
    j, y = _sc.jv(nu, x), _sc.yv(nu, x)
    if not (np.isfinite(j) and np.isfinite(y)):
        raise MagnitudeError(f"J/Y_{nu}({x}) outside representable range")
    return float(j), float(y)


def log_squared_jy_modulus(nu, z):
    """log(J_nu(z)^2 + Y_nu(z)^2), vectorized over z > 0.

    Three regimes: small z where Y would overflow (leading small-argument
    form), a direct scipy band, and the large-z modulus expansion
    M^2 ~ (2/(pi z)) (1 + (mu-1)/(2(2z)^2) + ...), mu = 4 nu^2.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    lg2z = nu * np.log(2.0 / np.maximum(z, 1e-300))
    tiny = (lg2z > 300.0) & (nu > 0)
    big = z > 1e4
    mid = ~(tiny | big)
    if tiny.any():
        out[tiny] = 2.0 * (log_gamma(nu) - math.log(math.pi)) + 2.0 * lg2z[tiny]
    if big.any():
        zb = z[big]
        mu = 4.0 * nu * nu
        t2 = (0.5 / zb) ** 2
        out[big] = np.log(2.0 / (math.pi * zb)) + np.log1p(
            0.5 * (mu - 1.0) * t2 + 0.375 * (mu - 1.0) * (mu - 9.0) * t2 * t2
        )
    if mid.any():
        zm = z[mid]
        out[mid] = np.log(_sc.jv(nu, zm) ** 2 + _sc.yv(nu, zm) ** 2)
    return out


def _exp_integral_cf_scaled(nu, lam):
    """Modified Lentz continued fraction for exp(lam) * E_nu(lam)."""
    tiny = 1e-300
    b = lam + nu
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _CF_MAX_ITER):
        a = -i * (nu - 1.0 + i)
        b += 2.0
        d = a * d + b
        d = 1.0 / d if d != 0.0 else 1.0 / tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise MagnitudeError(f"exponential-integral continued fraction stalled (nu={nu}, lam={lam})")


def log_gen_exp_integral_low(nu, lam):
    """log E_nu(lam) for nu <= 1 (vectorized in nu), lam > 0.

    Uses E_nu(lam) = lam^(nu-1) Gamma(1-nu, lam); where the regularized
    upper incomplete gamma underflows, falls back to the continued
    fraction of the scaled integral.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    out = np.empty_like(nu)
    a = 1.0 - nu
    zero = a == 0.0
    if zero.any():
        e1 = float(_sc.exp1(lam))
        if e1 > 0.0:
            out[zero] = math.log(e1)
        else:
            out[zero] = -lam + math.log(_exp_integral_cf_scaled(1.0, lam))
    pos = ~zero
    if pos.any():
        q = _sc.gammaincc(a[pos], lam)
        vals = np.empty_like(q)
        ok = q > 0.0
        vals[ok] = (nu[pos][ok] - 1.0) * math.log(lam) + _sc.gammaln(a[pos][ok]) + np.log(q[ok])
        for idx in np.where(~ok)[0]:
            vals[idx] = -lam + math.log(_exp_integral_cf_scaled(nu[pos][idx], lam))
        out[pos] = vals
    return out


def gen_exp_integral(nu, lam):
    """E_nu(lam) = integral_1^inf exp(-lam x) x^(-nu) dx, real nu.

    Strictly decreasing in lam; requires lam > 0 unless nu > 1.
    """
    if lam < 0.0:
        raise ValueError("gen_exp_integral requires lam >= 0")
    if lam == 0.0:
        if nu <= 1.0:
            raise ValueError("E_nu(0) diverges for nu <= 1")
        return 1.0 / (nu - 1.0)
    if nu <= 1.0:
        return float(np.exp(log_gen_exp_integral_low(nu, lam)[0]))
    # climb from a base order in (0, 1] via E_{q+1} = (e^-lam - lam E_q)/q
    steps = math.ceil(nu - 1.0)
    base = nu - steps
    val = float(np.exp(log_gen_exp_integral_low(base, lam)[0]))
    q = base
    for _ in range(steps):
        val = (math.exp(-lam) - lam * val) / q
        q += 1.0
        if val < 0.0:
            val = 0.0  # cancellation floor; true value is below representable noise
    return val


def exp_integral_complex(nu, z):
    """E_nu(z) for complex z with Re z > 0 (power series / continued fraction)."""
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError("exp_integral_complex requires Re z > 0")
    if abs(z) > 4.0:
        tiny = 1e-300
        b = z + nu
        c = 1.0 / tiny
        d = 1.0 / b
        h = d
        for i in range(1, _CF_MAX_ITER):
            a = -i * (nu - 1.0 + i)
            b += 2.0
            d = a * d + b
            d = 1.0 / d if d != 0.0 else 1.0 / tiny
            c = b + a / c
            if c == 0.0:
                c = tiny
            delta = c * d
            h *= delta
            if abs(delta - 1.0) < 1e-15:
                return np.exp(-z) * h
        raise MagnitudeError("complex exponential-integral fraction stalled")
    n_round = round(nu)
    logz = np.log(z)
    if abs(nu - n_round) < 1e-9 and n_round >= 1:
        n = int(n_round)
        psi = -EULER_GAMMA + sum(1.0 / i for i in range(1, n))
        total = ((-z) ** (n - 1) / math.factorial(n - 1)) * (psi - logz)
        term = 1.0 + 0.0j
        for m in range(0, 80):
            if m != n - 1:
                total -= term / (m + 1.0 - n)
            term *= -z / (m + 1.0)
            if abs(term) < 1e-18 * max(1.0, abs(total)):
                break
        return total
    total = _sc.gamma(1.0 - nu) * np.exp((nu - 1.0) * logz)
    term = 1.0 + 0.0j
    for m in range(0, 200):
        total -= term / (m + 1.0 - nu)
        term *= -z / (m + 1.0)
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def exp_scaled_gamma0(t):
    """exp(t) * Gamma(0, t) evaluated in scaled form (no overflow for any t > 0)."""
    if t <= 0.0:
        raise ValueError("exp_scaled_gamma0 requires t > 0")
    if t < 1.0:
        return math.exp(t) * float(_sc.exp1(t))
    return float(_exp_integral_cf_scaled(1.0, t))
