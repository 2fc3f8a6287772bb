"""Renewal functions of inverse Levy subordinators by numerical Laplace inversion.

Given the drift and Levy measure of a nondecreasing Levy process D, this
package computes the mean first-passage time U(t) = E inf{s : D(s) > t},
its density U'(t), and two-time covariances/correlations of the inverse
process, through two independent engines (contour quadrature and
derivative-based extrapolation) plus closed-form and asymptotic oracles
for the built-in families.
"""

from .bromwich import BromwichConfig, invert_bromwich
from .errors import AccuracyError, MagnitudeError
from .levy import (
    GIG,
    AtomKernel,
    Custom,
    ExpTiltedPowerKernel,
    LevyMeasure,
    ParetoCP,
    ParetoKernel,
    PoissonDrift,
    PureDrift,
    Stable,
    StableKernel,
    SubordinatorSpec,
    TwoStableMix,
    UniformStableMix,
    atom_at_zero,
    levy_density,
    make_spec,
    mean_of_D1,
    phi_derivs,
    phi_eval,
    phi_real_imag,
)
from .moments import (
    CovarianceResult,
    RenewalMeasure,
    correlation,
    covariance,
    covariance_poisson_nodrift,
    renewal_measure,
    second_moment,
)
from .oracles import (
    T_TO_INFINITY,
    T_TO_ZERO,
    asymptotic_U,
    exact_U,
    exact_dU,
    exact_var_stable,
)
from .postwidder import (
    DerivVector,
    DiscontinuousRenewalWarning,
    ExtrapolationTable,
    extrapolation_table,
    extrapolation_weights,
    invert_postwidder,
    u_k,
)
from .records import RenewalEstimate
from .special import (
    bessel_jy,
    bessel_k,
    exp_scaled_gamma0,
    gen_exp_integral,
)

__all__ = [
    "AccuracyError",
    "AtomKernel",
    "BromwichConfig",
    "CovarianceResult",
    "Custom",
    "DerivVector",
    "DiscontinuousRenewalWarning",
    "ExpTiltedPowerKernel",
    "ExtrapolationTable",
    "GIG",
    "LevyMeasure",
    "MagnitudeError",
    "ParetoCP",
    "ParetoKernel",
    "PoissonDrift",
    "PureDrift",
    "RenewalEstimate",
    "RenewalMeasure",
    "Stable",
    "StableKernel",
    "SubordinatorSpec",
    "T_TO_INFINITY",
    "T_TO_ZERO",
    "TwoStableMix",
    "UniformStableMix",
    "asymptotic_U",
    "atom_at_zero",
    "bessel_jy",
    "bessel_k",
    "correlation",
    "covariance",
    "covariance_poisson_nodrift",
    "exact_U",
    "exact_dU",
    "exact_var_stable",
    "exp_scaled_gamma0",
    "extrapolation_table",
    "extrapolation_weights",
    "gen_exp_integral",
    "invert_bromwich",
    "invert_postwidder",
    "levy_density",
    "make_spec",
    "mean_of_D1",
    "phi_derivs",
    "phi_eval",
    "phi_real_imag",
    "renewal_measure",
    "second_moment",
    "u_k",
    "version",
]

version = "0.1.0"
