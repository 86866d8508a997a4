"""Standard normal special functions shared by all distance kernels.

Everything here is vectorized: scalars in, scalar out; arrays in, array out.
The cdf and quantile wrap scipy's erfc-based routines, which are accurate to
well below 1e-12 absolute error over the whole real line.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / SQRT_2PI


def _maybe_scalar(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


def std_normal_pdf(x):
    """Density of N(0, 1): exp(-x^2/2) / sqrt(2*pi). Rejects non-finite input."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("std_normal_pdf: input must be finite")
    return _maybe_scalar(np.exp(-0.5 * arr * arr) * INV_SQRT_2PI, x)


def std_normal_cdf(x):
    """Distribution function of N(0, 1). Rejects non-finite input."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("std_normal_cdf: input must be finite")
    return _maybe_scalar(special.ndtr(arr), x)


def std_normal_quantile(r):
    """Quantile of N(0, 1) for orders in [0, 1].

    The boundary orders map to infinities: order 0 gives -inf and order 1
    gives +inf.  Orders outside [0, 1] are rejected.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("std_normal_quantile: order must lie in [0, 1]")
    return _maybe_scalar(special.ndtri(arr), r)


def gaussian_pdf_at_zero(mean, variance):
    """Value at 0 of the N(mean, variance) density, variance-parameterized.

    Equals ``exp(-mean^2 / (2 variance)) / sqrt(2 pi variance)``.  The second
    argument is a variance, not a standard deviation; it must be positive.
    """
    m = np.asarray(mean, dtype=float)
    v = np.asarray(variance, dtype=float)
    if np.any(v <= 0.0) or not np.all(np.isfinite(v)):
        raise ValueError("gaussian_pdf_at_zero: variance must be positive and finite")
    out = np.exp(-0.5 * m * m / v) / np.sqrt(2.0 * math.pi * v)
    if np.ndim(mean) == 0 and np.ndim(variance) == 0:
        return float(out)
    return out
