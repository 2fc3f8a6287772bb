"""Truncated power-series (Taylor-mode) arithmetic.

The inversion engines work with *normalized scaled derivative vectors*

    a[j] = f^(j)(x) * s**j / j!

i.e. the Taylor coefficients of ``h -> f(x + s*h)``.  In this normalization
the Leibniz triangular system solved by the Post-Widder method is exactly a
power-series reciprocal, and forward substitution is the coefficient
recurrence below.  Keeping every vector in this form is what makes k = 512
reachable in double precision.
"""

from __future__ import annotations

import numpy as np

from .errors import MagnitudeError


def reciprocal(a):
    """Coefficients of 1/A(h) given coefficients ``a`` of A(h), a[0] != 0.

    This is forward substitution on the lower-triangular Toeplitz system
    ``A * d = e_0``; with a[0] > 0 and a[j] <= 0 for j >= 1 (the shape every
    Levy exponent produces) all outputs are nonnegative and no cancellation
    occurs.
    """
    a = np.asarray(a, dtype=float)
    if a[0] == 0.0:
        raise ZeroDivisionError("reciprocal of a series with zero constant term")
    k = len(a)
    d = np.zeros(k)
    d[0] = 1.0 / a[0]
    for m in range(1, k):
        d[m] = -np.dot(a[1:m + 1], d[m - 1::-1]) / a[0]
    if not np.all(np.isfinite(d)):
        raise MagnitudeError(f"series reciprocal overflowed at order {k}")
    return d


def mul(a, b):
    """Cauchy product truncated to the shorter input's length."""
    k = min(len(a), len(b))
    return np.convolve(a[:k], b[:k])[:k]


def residual(a, d):
    """Max row defect of the triangular solve, relative to row magnitude.

    Rows of the defining identity are ``sum_i a[m-i] d[i] = [m == 0]``;
    the defect is measured against the largest term in each row so the
    result is a backward-error style measure independent of scaling.
    """
    a = np.asarray(a, float)
    d = np.asarray(d, float)
    k = len(a)
    rows = np.convolve(a, d)[:k]
    rows[0] -= 1.0
    mags = np.convolve(np.abs(a), np.abs(d))[:k]
    return float(np.max(np.abs(rows) / np.maximum(mags, 1e-300)))


def binomial_coeffs(alpha, k, xi):
    """Coefficients ``binom(alpha, j) * xi**j`` for j = 0..k-1.

    Evaluates the expansion of ``(1 + xi*h)**alpha`` by the stable ratio
    recurrence; the terms decay like ``j**(-1-alpha)`` for 0 < alpha < 1.
    """
    out = np.empty(k)
    out[0] = 1.0
    term = 1.0
    for j in range(1, k):
        term *= (alpha - (j - 1)) / j * xi
        out[j] = term
    return out
