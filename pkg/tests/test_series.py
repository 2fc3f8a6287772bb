"""Power-series kernel checks."""

import numpy as np
import pytest
from scipy import special as sc

from invsub import series


def test_reciprocal_of_geometric():
    # 1/(1 - x h) = sum (x h)^m
    x = 0.37
    a = np.zeros(12)
    a[0], a[1] = 1.0, -x
    d = series.reciprocal(a)
    np.testing.assert_allclose(d, x ** np.arange(12), rtol=1e-14)


def test_reciprocal_roundtrip():
    rng = np.random.default_rng(7)
    a = rng.uniform(0.5, 1.5, size=20)
    a[1:] = -np.abs(rng.uniform(0, 0.3, size=19))  # exponent-shaped: negative tail
    d = series.reciprocal(a)
    prod = series.mul(a, d)
    want = np.zeros(20)
    want[0] = 1.0
    np.testing.assert_allclose(prod, want, atol=1e-13)


def test_reciprocal_zero_leading_term():
    with pytest.raises(ZeroDivisionError):
        series.reciprocal(np.array([0.0, 1.0]))


def test_residual_measures_defect():
    a = np.array([2.0, -0.5, -0.25])
    d = series.reciprocal(a)
    assert series.residual(a, d) < 1e-15
    d_bad = d.copy()
    d_bad[-1] *= 1.01
    assert series.residual(a, d_bad) > 1e-4


def test_binomial_coeffs_match_scipy():
    alpha, xi, k = 0.6, -0.8, 15
    got = series.binomial_coeffs(alpha, k, xi)
    want = np.array([sc.binom(alpha, j) * xi**j for j in range(k)])
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_binomial_sum_telescopes():
    # (1 + xi)^alpha partial sums converge for |xi| < 1
    alpha, xi = 0.5, 0.4
    coef = series.binomial_coeffs(alpha, 200, xi)
    assert abs(coef.sum() - (1 + xi) ** alpha) < 1e-12
