"""Renewal measure and second-order moments of the inverse subordinator.

All joint moments of the first-passage process reduce to convolutions
against the renewal measure dU; with U' delivered by the derivative-based
inverter, the two-time covariance is

    Cov(E(s), E(t)) = int_0^(s^t) (U(s-tau) + U(t-tau)) dU(tau) - U(s)U(t),

where dU = atom_at_zero * delta_0 + U'(tau) dtau for strictly increasing
subordinators, plus exact lattice sums for the driftless Poisson case whose
renewal measure is purely atomic.

Quadrature: the density can be integrably singular at 0 (stable-like
families have U'(tau) ~ tau^(alpha-1)), so the integrals run in a power
substitution tau = m * sigma^p under a nested tanh-sinh rule; point
evaluations of U and U' are memoized per (spec, t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import levy
from .errors import AccuracyError
from .postwidder import invert_postwidder
from .quadrature import TanhSinh

_PROBE_LO = 1e8
_PROBE_HI = 1e9


@dataclass(frozen=True)
class RenewalMeasure:
    """Atom at zero + density of the absolutely continuous part.

    ``lattice`` is set (spacing, weight) for the driftless Poisson family,
    whose renewal measure is a pure point mass train; its density is then
    identically zero.
    """

    atom_at_zero: float
    density: Optional[Callable[[float], float]]
    lattice: Optional[tuple[float, float]]


@dataclass(frozen=True)
class CovarianceResult:
    s: float
    t: float
    cov: float
    var_s: float
    var_t: float
    corr: float
    est_error: float


@lru_cache(maxsize=100_000)
def _point(spec, t, eps):
    return invert_postwidder(spec, t, eps=eps)


def _is_lattice(spec):
    fam = spec.family
    return isinstance(fam, levy.PoissonDrift) and fam.mu == 0.0


def renewal_measure(spec, eps=1e-8):
    """Split dU into its atom at zero and remaining density.

    The atom is the large-argument limit of 1/phi; the numeric probe at
    1e8 (checked against 1e9) guards the structural shortcut that the
    measure mass determines the limit.
    """
    atom = levy.atom_at_zero(spec)
    a_lo = 1.0 / levy.phi_eval(spec, _PROBE_LO)
    a_hi = 1.0 / levy.phi_eval(spec, _PROBE_HI)
    if atom > 0.0 and abs(a_hi - atom) > 1e-6 * atom:
        raise AccuracyError("renewal atom probe disagrees with measure mass",
                            residual=abs(a_hi - atom))
    if atom == 0.0 and not (a_hi <= a_lo or a_hi < 1e-6):
        raise AccuracyError("1/phi does not decay; atom-at-zero detection failed",
                            residual=a_hi)
    if _is_lattice(spec):
        return RenewalMeasure(atom_at_zero=atom, density=lambda tau: 0.0,
                              lattice=(1.0, 1.0 / spec.family.r))

    def density(tau):
        if tau <= 0:
            raise ValueError("renewal density defined for tau > 0")
        return _point(spec, tau, eps).dU

    return RenewalMeasure(atom_at_zero=atom, density=density, lattice=None)


def covariance_poisson_nodrift(s, t, r):
    """Exact covariance of the inverse of a driftless rate-r Poisson process."""
    if s < 0 or t < 0:
        raise ValueError("covariance_poisson_nodrift requires s, t >= 0")
    if r <= 0:
        raise ValueError("covariance_poisson_nodrift requires r > 0")

    def U(x):
        return math.floor(x + 1.0) / r

    total = 0.0
    for k in range(int(math.floor(min(s, t))) + 1):
        total += (U(s - k) + U(t - k)) / r
    return total - U(s) * U(t)


def _power_exponent(spec):
    fam = spec.family
    if isinstance(fam, levy.Stable):
        return max(2.0, 1.0 / fam.alpha)
    if isinstance(fam, levy.TwoStableMix):
        return min(8.0, 1.0 / fam.alpha2)
    if isinstance(fam, levy.PureDrift):
        return 1.0
    return 2.0


def _convolve_with_density(spec, ts_upper, m, eps):
    """integral_0^m  sum_i U(ts_upper[i] - tau) * U'(tau) dtau  plus an error bound.

    Returns (value, quadrature_error, engine_error_bound).
    """
    p = _power_exponent(spec)
    point_eps = max(1e-10, eps * 1e-2)
    worst = 0.0

    def f(sig, one_minus_sig):
        nonlocal worst
        # tau = m * sig^p, with m - tau computed from 1 - sig to keep the
        # upper endpoint accurate
        logsig = np.log1p(-one_minus_sig)
        tau = m * np.exp(p * logsig)
        gap = -np.expm1(p * logsig)  # 1 - sig^p
        out = np.empty_like(sig)
        for i in range(len(sig)):
            est_d = _point(spec, tau[i], point_eps)
            worst = max(worst, est_d.est_error)
            acc = 0.0
            for T in ts_upper:
                x = T - m + m * gap[i] if T == m else T - tau[i]
                est_u = _point(spec, x, point_eps)
                worst = max(worst, est_u.est_error)
                acc += est_u.U
            out[i] = acc * est_d.dU * m * p * math.exp((p - 1.0) * logsig[i])
        return out

    res = TanhSinh().integrate(f, rel_tol=max(eps, 1e-10), abs_tol=eps * 1e-3)
    u_scale = sum(_point(spec, T, point_eps).U for T in ts_upper)
    engine_term = worst * (u_scale + _point(spec, m, point_eps).U * len(ts_upper))
    return res.value, res.est_abs_error, engine_term


def covariance(spec, s, t, eps=1e-6):
    """Two-time covariance, variances and correlation of the inverse process."""
    if s <= 0 or t <= 0:
        raise ValueError("covariance requires s, t > 0")
    if eps <= 0:
        raise ValueError("covariance requires eps > 0")
    if _is_lattice(spec):
        r = spec.family.r
        cov = covariance_poisson_nodrift(s, t, r)
        var_s = covariance_poisson_nodrift(s, s, r)
        var_t = covariance_poisson_nodrift(t, t, r)
        corr = cov / math.sqrt(var_s * var_t)
        return CovarianceResult(s=s, t=t, cov=cov, var_s=var_s, var_t=var_t,
                                corr=corr, est_error=0.0)
    atom = levy.atom_at_zero(spec)
    point_eps = max(1e-10, eps * 1e-2)
    U_s = _point(spec, s, point_eps).U
    U_t = _point(spec, t, point_eps).U

    def raw_cov(a_t, b_t, Ua, Ub):
        m = min(a_t, b_t)
        val, qerr, eerr = _convolve_with_density(spec, (a_t, b_t), m, eps)
        return atom * (Ua + Ub) + val - Ua * Ub, qerr + eerr

    cov, err_c = raw_cov(s, t, U_s, U_t)
    if s == t:
        var_s = var_t = cov
        err_s = err_t = err_c
    else:
        var_s, err_s = raw_cov(s, s, U_s, U_s)
        var_t, err_t = raw_cov(t, t, U_t, U_t)
    err = err_c + err_s + err_t
    for name, v, e in (("var_s", var_s, err_s), ("var_t", var_t, err_t)):
        if v < -(eps + e):
            raise AccuracyError(f"negative {name} beyond tolerance: {v}", residual=-v)
    var_s = max(var_s, 0.0)
    var_t = max(var_t, 0.0)
    if var_s == 0.0 or var_t == 0.0:
        raise AccuracyError("correlation undefined: variance vanishes within tolerance")
    corr = cov / math.sqrt(var_s * var_t)
    if abs(corr) > 1.0:
        err += abs(corr) - 1.0
        corr = math.copysign(1.0, corr)
    return CovarianceResult(s=s, t=t, cov=cov, var_s=var_s, var_t=var_t,
                            corr=corr, est_error=err)


def second_moment(spec, t, eps=1e-6):
    """E E(t)^2 = 2 int_0^t U(t - tau) dU(tau)."""
    if t <= 0:
        raise ValueError("second_moment requires t > 0")
    if _is_lattice(spec):
        r = spec.family.r
        U_t = math.floor(t + 1.0) / r
        return covariance_poisson_nodrift(t, t, r) + U_t * U_t
    point_eps = max(1e-10, eps * 1e-2)
    U_t = _point(spec, t, point_eps).U
    val, _, _ = _convolve_with_density(spec, (t,), t, eps)
    return 2.0 * (levy.atom_at_zero(spec) * U_t + val)


def correlation(spec, s, t, eps=1e-6):
    """corr(E(s), E(t)), clamped to [-1, 1] with the clamp amount reported."""
    return covariance(spec, s, t, eps=eps).corr
