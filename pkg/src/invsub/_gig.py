"""Quadrature kernel for generalized-inverse-Gaussian Levy measures.

The GIG Levy density with delta > 0 is the Laplace transform in x of the
positive kernel

    w(y) = 1 / (pi^2 y (J_nu^2 + Y_nu^2)(delta sqrt(2 y))),   nu = |kappa|,

plus a max(0, kappa)/x term.  Swapping integration orders collapses every
quantity the engines need (high derivatives of the exponent, the exponent
itself at complex points, the density, the mean jump size) to a single
well-behaved integral against w.  After substituting z = delta*sqrt(2Y),
all of them become integrals of smooth positive integrands against the
fixed node family built here, so one cached node set serves every caller.

Node layout: the trapezoid rule under z = exp((pi/2) sinh v), which decays
doubly exponentially at both ends when nu >= NU_SPLIT.  Smaller nu (the
left tail shrinks only like z^(2 nu), or 1/log^2 z at nu = 0) gets a split
rule: a Gauss panel in the variable w = -1/(log(z/2) + gamma_e) on (0, z0]
plus a shifted double-exponential rule on [z0, inf).
"""

from __future__ import annotations

import math
import threading

import numpy as np

from .special import EULER_GAMMA, complex_log1p, log_squared_jy_modulus

NU_SPLIT = 0.1
_Z0 = 0.5
_VMAX = 6.5
_UCAP_LO = -700.0
_UCAP_HI = 350.0
_BASE_LEVEL = 3
_MAX_LEVEL = 7

_cache_lock = threading.Lock()
_kernel_cache: dict[tuple[float, float], "GigKernel"] = {}


def kernel_for(delta, kappa):
    key = (float(delta), float(abs(kappa)))
    with _cache_lock:
        k = _kernel_cache.get(key)
        if k is None:
            k = GigKernel(delta, abs(kappa))
            _kernel_cache[key] = k
    return k


class GigKernel:
    def __init__(self, delta, nu):
        self.delta = float(delta)
        self.nu = float(nu)
        self._levels: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    # -- node construction -------------------------------------------------

    def _build(self, level):
        nu = self.nu
        h = 0.5 / 2 ** (level - _BASE_LEVEL)
        v = np.arange(-_VMAX, _VMAX + h / 2, h)
        u = np.clip((np.pi / 2) * np.sinh(v), _UCAP_LO, _UCAP_HI)
        wfac = h * (np.pi / 2) * np.cosh(v)
        if nu >= NU_SPLIT:
            z = np.exp(u)
            logw = np.log(wfac) - log_squared_jy_modulus(nu, z)
        else:
            z = _Z0 + np.exp(u)
            logw = np.log(wfac) + u - np.log(z) - log_squared_jy_modulus(nu, z)
            # left piece: Gauss rule in w = -1/(log(z/2) + gamma_e) over (0, w0]
            n = 40 * 2 ** (level - _BASE_LEVEL)
            gx, gw = np.polynomial.legendre.leggauss(n)
            w0 = -1.0 / (math.log(_Z0 / 2.0) + EULER_GAMMA)
            wv = 0.5 * w0 * (gx + 1.0)
            zl = 2.0 * np.exp(-EULER_GAMMA - 1.0 / wv)
            lw = np.log(0.5 * w0 * gw) - 2.0 * np.log(wv) - log_squared_jy_modulus(nu, zl)
            z = np.concatenate([zl, z])
            logw = np.concatenate([lw, logw])
        logw += math.log(2.0 / math.pi**2)
        keep = np.isfinite(logw) & (z > 0)
        return z[keep], logw[keep]

    def _nodes(self, level):
        with self._lock:
            got = self._levels.get(level)
            if got is None:
                got = self._build(level)
                self._levels[level] = got
        return got

    def _y_of(self, z):
        # floor keeps gamma = 0 integrands finite where z*z underflows; the
        # kernel weight is doubly-exponentially small there anyway
        with np.errstate(over="ignore"):
            y = z * z / (2.0 * self.delta**2)
        return np.maximum(y, 1e-280)

    def _converge(self, evaluate, rtol):
        """Run ``evaluate(z, logw)`` on successive levels until stable."""
        prev = None
        for level in range(_BASE_LEVEL, _MAX_LEVEL + 1):
            z, logw = self._nodes(level)
            cur = evaluate(z, logw)
            if prev is not None:
                scale = np.maximum(np.abs(cur), 1e-300)
                err = float(np.max(np.abs(cur - prev) / scale))
                if err < rtol:
                    return cur, err
            prev = cur
        return cur, err

    # -- integrals against the kernel ---------------------------------------

    def scaled_deriv_terms(self, sig0, s, jmax, rtol=1e-12):
        """M_j = integral w(y) (s/(sig0+y))^j dy for j = 1..jmax.

        ``sig0`` is lambda + gamma^2/2; with the engine scaling s = k*c the
        ratio s/(sig0+y) stays below 1 and the powers cause no overflow.
        """

        def evaluate(z, logw):
            base = np.exp(logw)
            rho = s / (sig0 + self._y_of(z))
            out = np.empty(jmax)
            acc = base.copy()
            for j in range(jmax):
                acc = acc * rho
                out[j] = acc.sum()
            return out

        return self._converge(evaluate, rtol)

    def log_deriv_tails(self, sig0, jmax, rtol=1e-11):
        """log of integral w(y) (sig0+y)^(-j) dy for j = 1..jmax."""

        def evaluate(z, logw):
            lse = logw - np.log(sig0 + self._y_of(z))
            out = np.empty(jmax)
            mx = lse.max()
            term = np.exp(lse - mx)
            out[0] = mx + np.log(term.sum())
            logstep = -np.log(sig0 + self._y_of(z))
            cur = lse.copy()
            for j in range(1, jmax):
                cur = cur + logstep
                m = cur.max()
                out[j] = m + np.log(np.exp(cur - m).sum())
            return out

        return self._converge(evaluate, rtol)

    def frullani_real(self, s0, lam, rtol=1e-12):
        """integral w(y) log(1 + lam/(s0+y)) dy."""

        def evaluate(z, logw):
            y = self._y_of(z)
            return np.array([np.dot(np.exp(logw), np.log1p(lam / (s0 + y)))])

        val, err = self._converge(evaluate, rtol)
        return float(val[0]), err

    def frullani_complex(self, s0, zs, level=5):
        """integral w(y) Log(1 + z/(s0+y)) dy for an array of complex z."""
        z, logw = self._nodes(level)
        base = np.exp(logw)
        y = self._y_of(z)
        out = np.empty(len(zs), dtype=complex)
        step = max(1, 2**22 // max(len(z), 1))
        for i in range(0, len(zs), step):
            chunk = zs[i:i + step]
            out[i:i + step] = complex_log1p(chunk[:, None] / (s0 + y[None, :])) @ base
        return out

    def density_inner(self, x, rtol=1e-11):
        """integral exp(-x y) w(y) dy (inner integral of the Levy density)."""

        def evaluate(z, logw):
            y = self._y_of(z)
            with np.errstate(over="ignore", under="ignore"):
                expo = logw - x * y
            return np.array([np.exp(np.where(np.isnan(expo), -np.inf, expo)).sum()])

        val, err = self._converge(evaluate, rtol)
        return float(val[0]), err

    def mean_tail(self, s0, rtol=1e-12):
        """integral w(y) / (s0 + y) dy (mean jump size contribution)."""

        def evaluate(z, logw):
            y = self._y_of(z)
            return np.array([np.exp(logw - np.log(s0 + y)).sum()])

        val, err = self._converge(evaluate, rtol)
        return float(val[0]), err
