"""Shared quadrature machinery.

Three tools cover every integral in the package:

* :func:`adaptive` -- bisection-adaptive Gauss-Legendre on a finite interval,
  used for Levy-measure integrals and the Bromwich head interval.
* :func:`semi_infinite` -- the same engine after truncating an infinite upper
  limit where the integrand has decayed below ``PEAK_DROP`` of its peak.
* :class:`TanhSinh` -- nested double-exponential nodes on (0, 1), used for the
  moment convolutions whose integrands carry algebraic endpoint singularities.

All integrand callables must accept numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError

REL_TOL = 1e-10
ABS_TOL = 1e-14
PEAK_DROP = 1e-16

_GL_LO = np.polynomial.legendre.leggauss(15)
_GL_HI = np.polynomial.legendre.leggauss(31)


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral together with an absolute error estimate."""

    value: float
    est_abs_error: float


def _panel_values(f, lo, hi, rule):
    nodes, weights = rule
    mid = 0.5 * (lo + hi)[:, None]
    half = 0.5 * (hi - lo)[:, None]
    x = mid + half * nodes[None, :]
    y = f(x.ravel()).reshape(x.shape)
    return (y * weights[None, :]).sum(axis=1) * half[:, 0]


def adaptive(f, a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL, max_depth=48):
    """Integrate ``f`` over [a, b] by adaptive panel bisection.

    Each panel is accepted when 15- and 31-point Gauss-Legendre estimates
    agree within the per-panel share of the tolerance.  Raises
    :class:`AccuracyError` if the depth limit is hit before convergence.
    """
    if b <= a:
        return QuadResult(0.0, 0.0)
    total = 0.0
    err = 0.0
    lo = np.array([float(a)])
    hi = np.array([float(b)])
    for depth in range(max_depth):
        coarse = _panel_values(f, lo, hi, _GL_LO)
        fine = _panel_values(f, lo, hi, _GL_HI)
        diff = np.abs(fine - coarse)
        scale = max(abs(total + fine.sum()), abs_tol)
        ok = diff <= np.maximum(rel_tol * scale / max(len(lo), 1), abs_tol / max(len(lo), 1))
        total += fine[ok].sum()
        err += diff[ok].sum()
        if ok.all():
            return QuadResult(total, err)
        lo, hi = lo[~ok], hi[~ok]
        mid = 0.5 * (lo + hi)
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        order = np.argsort(lo)
        lo, hi = lo[order], hi[order]
    residual = np.abs(fine - coarse).sum()
    raise AccuracyError(
        f"adaptive quadrature failed to converge on [{a}, {b}]", residual=residual
    )


def semi_infinite(f, a, rel_tol=REL_TOL, abs_tol=ABS_TOL, growth=4.0, max_segments=400):
    """Integrate ``f`` over [a, inf) by geometric segments.

    Segments [b, growth*b] are summed until either a segment's contribution
    is negligible, or consecutive segment ratios have stabilized, in which
    case the remaining tail is completed geometrically (exact for power-law
    decay, where pointwise truncation alone would drop finite mass).
    """
    lo = float(a)
    hi = max(1.0, 2.0 * abs(a), lo * growth)
    first = adaptive(f, lo, hi, rel_tol=rel_tol, abs_tol=abs_tol)
    total, err = first.value, first.est_abs_error
    prev_seg = None
    q_prev = None
    for _ in range(max_segments):
        lo, hi = hi, hi * growth
        seg_res = adaptive(f, lo, hi, rel_tol=rel_tol, abs_tol=abs_tol)
        seg = seg_res.value
        total += seg
        err += seg_res.est_abs_error
        budget = max(abs_tol, rel_tol * abs(total))
        if abs(seg) <= 0.01 * budget:
            return QuadResult(total, err)
        if prev_seg not in (None, 0.0):
            q = seg / prev_seg
            if 0.0 < q < 0.95:
                tail = seg * q / (1.0 - q)
                if abs(tail) <= budget:
                    return QuadResult(total + tail, err + abs(tail))
                if q_prev is not None:
                    drift = abs(q - q_prev) * abs(seg) / (1.0 - q) ** 2
                    if drift <= budget:
                        return QuadResult(total + tail, err + drift)
                q_prev = q
            else:
                q_prev = None
        prev_seg = seg
    raise AccuracyError("semi-infinite integral tail failed to stabilize", residual=abs(seg))


class TanhSinh:
    """Nested tanh-sinh rule on the open interval (0, 1).

    ``level_nodes(L)`` returns only the nodes new at level ``L`` so that an
    adaptive caller reuses all previous integrand evaluations.  Nodes carry
    their distance to the nearest endpoint implicitly: ``x`` is exact near 0
    and ``1 - x`` is returned separately for use near 1.
    """

    H0 = 1.0
    VMAX = 3.4

    def level_nodes(self, level):
        h = self.H0 / 2**level
        if level == 0:
            js = np.arange(-int(self.VMAX / h), int(self.VMAX / h) + 1)
        else:
            jmax = int(self.VMAX / h)
            js = np.arange(-jmax, jmax + 1)
            js = js[js % 2 != 0]
        v = js * h
        s = np.sinh(v) * (np.pi / 2)
        x = 0.5 * (1.0 + np.tanh(s))
        one_minus_x = 0.5 * (1.0 - np.tanh(s))
        w = h * (np.pi / 4) * np.cosh(v) / np.cosh(s) ** 2
        keep = (x > 0.0) & (x < 1.0) & (one_minus_x > 0.0) & (one_minus_x < 1.0) & (w > 0.0)
        return x[keep], one_minus_x[keep], w[keep]

    def integrate(self, f, rel_tol=1e-9, abs_tol=1e-13, max_level=9):
        """Adaptively integrate ``f(x, 1-x) -> array`` over (0, 1)."""
        total = 0.0
        prev = None
        for level in range(max_level + 1):
            x, omx, w = self.level_nodes(level)
            total = total / 2 + np.dot(f(x, omx), w) if level else np.dot(f(x, omx), w)
            if prev is not None:
                change = abs(total - prev)
                if change <= max(rel_tol * abs(total), abs_tol):
                    return QuadResult(total, change)
            prev = total
        return QuadResult(total, abs(total - prev) if prev is not None else np.inf)
