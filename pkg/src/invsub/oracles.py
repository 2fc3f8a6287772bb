"""Closed forms and asymptotic regimes used as ground truth.

The exact renewal functions cover the families where the transform inverts
in closed form; asymptotics come from the regular-variation correspondence
between the transform near 0 (resp. infinity) and the function at infinity
(resp. 0), evaluated family by family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sc

from .levy import GIG, ParetoCP, PoissonDrift, PureDrift, Stable, TwoStableMix, UniformStableMix
from .special import EULER_GAMMA, exp_scaled_gamma0, log_bessel_k

T_TO_ZERO = "t_to_zero"
T_TO_INFINITY = "t_to_infinity"


@dataclass(frozen=True)
class AsymptoticRegime:
    regime: str
    label: str


def exact_U(family, t):
    """Closed-form renewal function for the families that admit one."""
    if t <= 0:
        raise ValueError("exact_U requires t > 0")
    if isinstance(family, PureDrift):
        return t / family.mu
    if isinstance(family, PoissonDrift) and family.mu == 0.0:
        return math.floor(t + 1.0) / family.r
    if isinstance(family, Stable):
        return t**family.alpha / _sc.gamma(1.0 + family.alpha)
    if isinstance(family, UniformStableMix):
        return EULER_GAMMA + exp_scaled_gamma0(t) + math.log(t)
    raise ValueError(f"no exact renewal function for {type(family).__name__}")


def exact_dU(family, t):
    """Closed-form renewal density where U is differentiable."""
    if t <= 0:
        raise ValueError("exact_dU requires t > 0")
    if isinstance(family, PureDrift):
        return 1.0 / family.mu
    if isinstance(family, Stable):
        return t ** (family.alpha - 1.0) / _sc.gamma(family.alpha)
    if isinstance(family, UniformStableMix):
        return exp_scaled_gamma0(t)
    raise ValueError(f"no exact renewal density for {type(family).__name__}")


def exact_var_stable(alpha, t):
    """Variance of the inverse stable subordinator at time t."""
    if not 0 < alpha < 1:
        raise ValueError("exact_var_stable requires 0 < alpha < 1")
    if t <= 0:
        raise ValueError("exact_var_stable requires t > 0")
    p = t ** (2.0 * alpha)
    return 2.0 * p / _sc.gamma(1.0 + 2.0 * alpha) - p / _sc.gamma(1.0 + alpha) ** 2


def _pareto_large_t(alpha, t):
    if alpha < 1.0:
        return t**alpha / (-alpha * _sc.gamma(-alpha) * _sc.gamma(1.0 + alpha))
    if alpha == 1.0:
        return t / (1.0 - EULER_GAMMA + math.log(t))
    return (alpha - 1.0) / alpha * t


def _gig_small_t(fam, t):
    if fam.delta == 0.0:
        if t >= 1.0:
            raise ValueError("small-time GIG asymptote needs t < 1")
        return -1.0 / (fam.kappa * math.log(t))
    return math.sqrt(2.0 / (math.pi * fam.delta**2)) * math.sqrt(t)


def _gig_large_t(fam, t):
    d, g, kp = fam.delta, fam.gamma, fam.kappa
    if g > 0.0:
        if d == 0.0:
            mean = 2.0 * kp / (g * g)
        else:
            mean = d * math.exp(log_bessel_k(1.0 + kp, g * d) - log_bessel_k(kp, g * d)) / g
        return t / mean
    if kp < -1.0:
        return 2.0 * (-kp - 1.0) / d**2 * t
    if kp == -1.0:
        # phi ~ (d^2/2)(|log lam| - B) lam with B = 2 gamma_e - 1 + log(d^2/2)
        denom = math.log(t) + 1.0 - 2.0 * EULER_GAMMA + math.log(2.0 / d**2)
        if denom <= 0:
            raise ValueError("large-time GIG(kappa=-1) asymptote needs larger t")
        return 2.0 * t / (d**2 * denom)
    # -1 < kp < 0: power law t^{-kp}
    return (-(2.0 ** -kp) * d ** (2.0 * kp) * _sc.gamma(-kp)
            / (_sc.gamma(kp) * _sc.gamma(1.0 - kp)) * t ** (-kp))


_SUPPORTED = {
    (ParetoCP, T_TO_INFINITY): "pareto_large_t",
    (TwoStableMix, T_TO_ZERO): "two_stable_small_t",
    (TwoStableMix, T_TO_INFINITY): "two_stable_large_t",
    (GIG, T_TO_ZERO): "gig_small_t",
    (GIG, T_TO_INFINITY): "gig_large_t",
}


def asymptotic_regime(family, regime):
    """The (family, regime) tag, or ValueError for unsupported pairs."""
    key = (type(family), regime)
    if key not in _SUPPORTED:
        raise ValueError(f"no asymptotic form for {type(family).__name__} as {regime}")
    return AsymptoticRegime(regime=regime, label=_SUPPORTED[key])


def asymptotic_U(family, t, regime):
    """Evaluate the matching asymptotic expression of the renewal function."""
    if t <= 0:
        raise ValueError("asymptotic_U requires t > 0")
    label = asymptotic_regime(family, regime).label
    if label == "pareto_large_t":
        return _pareto_large_t(family.alpha, t)
    if label == "two_stable_small_t":
        return t**family.alpha1 / (family.c1 * _sc.gamma(1.0 + family.alpha1))
    if label == "two_stable_large_t":
        return t**family.alpha2 / (family.c2 * _sc.gamma(1.0 + family.alpha2))
    if label == "gig_small_t":
        return _gig_small_t(family, t)
    return _gig_large_t(family, t)
