"""Brute-force numerical evaluations of the one-dimensional distances.

These routines exist to certify the closed forms in :mod:`slicedae.kernels`.
They share no algebra with them: each integral statistic is evaluated by
midpoint-rule quadrature of its defining integral, and the supremum statistic
by exhaustive enumeration of the candidate points.  They are slow on purpose;
never call them from training code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .normal import std_normal_cdf, std_normal_pdf, std_normal_quantile
from .kernels import _as_sorted_sample, silverman_bandwidth

# subpanels per graded end cell and per interior cell of the quantile integral
_GRADE_POWER = 4


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution knobs for the midpoint-rule oracles.

    ``panels`` is the total midpoint-cell budget of one integral evaluation
    and ``tail_pad`` the margin added beyond the sample range when an
    integral runs over the whole real line.
    """

    panels: int = 1_000_000
    tail_pad: float = 10.0

    def __post_init__(self):
        if self.panels < 1000:
            raise ValueError("QuadratureSpec: panels must be >= 1000")
        if self.tail_pad <= 0.0:
            raise ValueError("QuadratureSpec: tail_pad must be positive")


def _graded_midpoints(width: float, m: int):
    """Midpoints and widths of m cells of [0, width] crowded toward 0.

    Cell edges follow a power law, so widths shrink polynomially toward the
    singular end.  This tames the endpoint blow-up of the normal quantile.
    Working in an offset-from-zero coordinate keeps the tiny cells exactly
    representable; absolute positions near 1 would all round together.
    """
    edges = width * np.linspace(0.0, 1.0, m + 1) ** _GRADE_POWER
    mids = 0.5 * (edges[:-1] + edges[1:])
    return mids, np.diff(edges)


def w2_numeric(y, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Squared 2-Wasserstein distance to N(0, 1) by quantile quadrature.

    Evaluates ``integral over (0, 1) of (step(t) - Q(t))^2 dt`` where
    ``step`` is the empirical quantile function (value ``y_i`` on the cell
    ``((i-1)/n, i/n)``) and ``Q`` the normal quantile.  Cells are integrated
    one at a time so no midpoint ever straddles a step discontinuity.  The
    two boundary cells get power-graded subpanels to absorb the logarithmic
    divergence of ``Q``; the upper one is evaluated in the reflected
    coordinate s = 1 - t (where Q(1 - s) = -Q(s) by symmetry of the normal)
    so the graded nodes near 1 keep full floating-point resolution.
    """
    y = _as_sorted_sample(y)
    n = y.size
    per_cell = max(spec.panels // n, 64)

    def lower_end(value, width, m):
        mids, widths = _graded_midpoints(width, m)
        q = std_normal_quantile(mids)
        return float(np.dot((value - q) ** 2, widths))

    def upper_end(value, width, m):
        mids, widths = _graded_midpoints(width, m)
        q = std_normal_quantile(mids)
        return float(np.dot((value + q) ** 2, widths))

    total = 0.0
    for i in range(n):
        a, b = i / n, (i + 1) / n
        if n == 1:
            total += lower_end(y[0], 0.5, per_cell // 2)
            total += upper_end(y[0], 0.5, per_cell // 2)
        elif i == 0:
            total += lower_end(y[0], b, per_cell)
        elif i == n - 1:
            total += upper_end(y[i], 1.0 - a, per_cell)
        else:
            mids = a + (b - a) * (np.arange(per_cell) + 0.5) / per_cell
            q = std_normal_quantile(mids)
            total += float(np.sum((y[i] - q) ** 2)) * (b - a) / per_cell
    return total


def cvm_numeric(y, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Squared quantile distance of the cdf-transformed sample to uniform.

    Pushes the sample through the normal cdf and integrates
    ``(step(t) - t)^2`` over (0, 1) by the midpoint rule, with the cell
    grid aligned to the n empirical steps.
    """
    y = _as_sorted_sample(y)
    z = std_normal_cdf(np.atleast_1d(y))
    n = y.size
    per_cell = max(spec.panels // n, 64)
    h = 1.0 / (n * per_cell)
    total = 0.0
    for i in range(n):
        mids = i / n + (np.arange(per_cell) + 0.5) * h
        total += float(np.sum((z[i] - mids) ** 2)) * h
    return total


def cw_numeric(y, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Squared L2 distance of Gaussian-smoothed densities by quadrature.

    Builds the smoothed sample density ``(1/n) sum_i pdf((t - y_i)/s)/s``
    and the smoothed normal density ``pdf(t / sqrt(1 + s^2)) / sqrt(1 + s^2)``
    with ``s = sqrt(gamma)`` from Silverman's rule, then integrates the
    squared difference on the midpoint grid.  The integrand decays like a
    Gaussian, so a finite window padded by ``tail_pad`` suffices and the
    midpoint rule converges fast (all derivatives vanish at the ends).
    """
    y = _as_sorted_sample(y)
    n = y.size
    s = math.sqrt(silverman_bandwidth(n))
    half = float(np.max(np.abs(y))) + spec.tail_pad
    m = spec.panels
    h = 2.0 * half / m
    smear = math.sqrt(1.0 + s * s)
    total = 0.0
    block = max(1, 8_000_000 // max(n, 1))
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        t = -half + (np.arange(lo, hi) + 0.5) * h
        sample_density = np.mean(std_normal_pdf((t[None, :] - y[:, None]) / s), axis=0) / s
        target_density = std_normal_pdf(t / smear) / smear
        total += float(np.sum((sample_density - target_density) ** 2)) * h
    return total


def ks_numeric(y) -> float:
    """Supremum deviation of the empirical cdf from the normal cdf, exactly.

    The empirical cdf is a right-continuous step function, so the supremum
    of the absolute deviation is attained arbitrarily close to a data point
    and equals ``max_i max(i/n - F_i, F_i - (i-1)/n)``.  No quadrature is
    involved; this is exact enumeration.
    """
    y = _as_sorted_sample(y)
    n = y.size
    f = std_normal_cdf(np.atleast_1d(y))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
