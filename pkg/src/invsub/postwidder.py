"""Real-axis Laplace inversion by high-order derivatives plus extrapolation.

The transform of the renewal function is 1/(lam*phi(lam)); its inverse at t
is the limit over k of

    U_k(t) = (-1)^(k-1)/(k-1)! * (k/t)^k * d^(k-1)/dlam^(k-1) [1/(lam phi)] (k/t).

Expanding by the Leibniz rule, U_k is a dot product v_k . w_k where w_k
solves a lower-triangular system whose entries are derivatives of phi, and
the limit is accelerated by Lagrange extrapolation in h = 1/k at the node
ladder k_i = 2^(i-1).

Everything here is carried in the scale-free normalization of
:mod:`invsub.series`: with c the rescaling parameter (default 1/t) the
triangular solve becomes the power-series reciprocal of

    a[j] = phi^(j)(k/t) * (-k c)^j / j!,

its solution d satisfies d[i] = v_i w_i (the per-order contributions of the
dot product, all nonnegative), U_k = sum(d), and the density term is read
off the last component.  This is algebraically identical to solving the
c-scaled matrix system by forward substitution with the v-coefficients
assembled in log space, but never forms k^i/i! explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import levy, series
from .errors import MagnitudeError
from .records import RenewalEstimate

MAX_K = 512
MAX_TABLE_ROWS = 10
STOP_ROW = 9


class DiscontinuousRenewalWarning(UserWarning):
    """The renewal function is discontinuous; Post-Widder output is unreliable."""


@dataclass(frozen=True)
class DerivVector:
    """Scaled derivatives of psi = 1/phi at the Post-Widder abscissa.

    ``values[i] = psi^(i)(lambda) (-k c)^i / i!``; the first entry is
    psi(lambda) = 1/phi(lambda) itself.
    """

    lam: float
    k: int
    values: np.ndarray
    scale_c: float


@dataclass(frozen=True)
class UkTerm:
    U: float
    dU: float
    residual: float
    deriv: DerivVector


@dataclass(frozen=True)
class ExtrapolationTable:
    t: float
    k_list: tuple[int, ...]
    h_list: tuple[float, ...]
    u_list: tuple[float, ...]
    du_list: tuple[float, ...]
    p_list: tuple[float, ...]
    pd_list: tuple[float, ...]
    converged: bool
    n_used: int
    est_error: float
    max_residual: float


def u_k(spec, t, k, c=None):
    """Single Post-Widder term (U_k, dU_k) at abscissa k/t with scaling c."""
    if t <= 0:
        raise ValueError("u_k requires t > 0")
    if not 1 <= k <= MAX_K:
        raise ValueError(f"u_k requires 1 <= k <= {MAX_K}")
    if c is None:
        c = 1.0 / t
    if c <= 0:
        raise ValueError("u_k requires c > 0")
    lam = k / t
    ta = levy.scaled_taylor(spec, lam, k, k * c)
    try:
        d = series.reciprocal(ta)
    except MagnitudeError as exc:
        raise MagnitudeError(f"Post-Widder term overflowed at k={k}") from exc
    U = float(d.sum())
    res = series.residual(ta, d)
    # density term: dU_k = d[k-1] * (k/t) * (t c)^(1-k), log-safe for c != 1/t
    tc = t * c
    last = d[k - 1]
    if tc == 1.0:
        dU = last * (k / t)
    elif last == 0.0:
        dU = 0.0
    else:
        logmag = math.log(abs(last)) + math.log(k / t) + (1.0 - k) * math.log(tc)
        if logmag > 709.0:
            raise MagnitudeError(f"density term overflowed at k={k}")
        dU = math.copysign(math.exp(logmag), last)
    return UkTerm(U=U, dU=dU, residual=res, deriv=DerivVector(lam, k, d, c))


def extrapolation_weights(n):
    """Closed-form Lagrange weights at h = 0 for the ladder k_i = 2^(i-1).

    c_i = (-1)^(n-i) 2^(i(i-1)/2) / (prod_{j<i}(2^j-1) prod_{j<=n-i}(2^j-1));
    they sum to 1 (extrapolating a constant returns it).
    """
    if not 1 <= n <= MAX_TABLE_ROWS:
        raise ValueError(f"extrapolation_weights requires 1 <= n <= {MAX_TABLE_ROWS}")
    out = np.empty(n)
    for i in range(1, n + 1):
        num = (-1.0) ** (n - i) * 2.0 ** (i * (i - 1) / 2)
        den = 1.0
        for j in range(1, i):
            den *= 2.0**j - 1.0
        for j in range(1, n - i + 1):
            den *= 2.0**j - 1.0
        out[i - 1] = num / den
    return out


def extrapolation_table(spec, t, eps=1e-6, c=None):
    """Build the U_k ladder and its extrapolants until |P_n - P_{n-1}| < eps.

    Stops at row ``STOP_ROW`` returning the last extrapolant with
    ``converged=False`` when the threshold is not met.  The max Leibniz
    residual of the triangular solves feeds the convergence flag: a solve
    that cannot reproduce its own defining identity to better than eps
    cannot certify the result.
    """
    if t <= 0:
        raise ValueError("extrapolation_table requires t > 0")
    if eps <= 0:
        raise ValueError("extrapolation_table requires eps > 0")
    if spec.family.discontinuous_renewal:
        warnings.warn(
            "renewal function is discontinuous (driftless atomic subordinator); "
            "Post-Widder values can converge to wrong limits",
            DiscontinuousRenewalWarning,
            stacklevel=3,
        )
    ks, hs, us, dus, ps, pds = [], [], [], [], [], []
    max_res = 0.0
    converged = False
    est = math.inf
    # the renewal atom at 0 contributes atom/t to the k = 1 density term and
    # nothing beyond (derivatives kill constants); subtracting it makes the
    # density ladder estimate the absolutely continuous part alone
    atom = levy.atom_at_zero(spec)
    for n in range(1, STOP_ROW + 1):
        k = 2 ** (n - 1)
        term = u_k(spec, t, k, c)
        ks.append(k)
        hs.append(1.0 / k)
        us.append(term.U)
        dus.append(term.dU - atom / t if k == 1 else term.dU)
        max_res = max(max_res, term.residual)
        w = extrapolation_weights(n)
        ps.append(float(np.dot(w, us)))
        pds.append(float(np.dot(w, dus)))
        if n >= 2:
            est = abs(ps[-1] - ps[-2])
            if est < eps:
                converged = True
                break
    if max_res > eps:
        converged = False
    return ExtrapolationTable(
        t=t,
        k_list=tuple(ks),
        h_list=tuple(hs),
        u_list=tuple(us),
        du_list=tuple(dus),
        p_list=tuple(ps),
        pd_list=tuple(pds),
        converged=converged,
        n_used=len(ks),
        est_error=est + max_res,
        max_residual=max_res,
    )


def invert_postwidder(spec, t, eps=1e-6, c=None):
    """Renewal function U(t) and density U'(t) by derivative extrapolation."""
    if t == 0.0:
        return RenewalEstimate(
            t=0.0,
            U=levy.atom_at_zero(spec),
            dU=None,
            method="postwidder",
            est_error=0.0,
            converged=True,
            n_used=0,
        )
    table = extrapolation_table(spec, t, eps=eps, c=c)
    return RenewalEstimate(
        t=t,
        U=table.p_list[-1],
        dU=table.pd_list[-1],
        method="postwidder",
        est_error=table.est_error,
        converged=table.converged,
        n_used=table.n_used,
    )
