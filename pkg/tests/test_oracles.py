"""The oracles certify the closed forms, so they get their own scrutiny:
analytically known integrals, exact enumeration cases, and convergence
under panel doubling."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from slicedae.normal import std_normal_quantile
from slicedae.oracles import QuadratureSpec, cvm_numeric, cw_numeric, ks_numeric, w2_numeric

FULL = QuadratureSpec()
FAST = QuadratureSpec(panels=10_000)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(panels=999)
    with pytest.raises(ValueError):
        QuadratureSpec(tail_pad=0.0)


def test_w2_numeric_all_zeros_is_one():
    """Transport of a point mass at 0 onto N(0,1) costs E[Z^2] = 1."""
    assert_allclose(w2_numeric(np.zeros(4), FULL), 1.0, atol=1e-6)


def test_w2_numeric_single_point():
    assert_allclose(w2_numeric(np.array([3.0]), FULL), 10.0, atol=1e-6)


def test_cvm_numeric_midpoint_sample_attains_minimum():
    n = 4
    y = std_normal_quantile((2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n))
    assert_allclose(cvm_numeric(y, FULL), 1.0 / (12.0 * n * n), atol=1e-8)


def test_cvm_numeric_far_left_sample():
    """All transformed values near 0 leave the full integral of t^2, 1/3."""
    assert_allclose(cvm_numeric(np.array([-8.0, -8.0, -8.0]), FULL), 1.0 / 3.0, atol=1e-6)


def test_cw_numeric_nonnegative():
    rng = np.random.default_rng(11)
    y = np.sort(rng.normal(size=12))
    assert cw_numeric(y, FAST) >= 0.0


def test_cw_numeric_single_zero_matches_three_term_value():
    gamma = (4.0 / 3.0) ** 0.4
    expected = (
        1.0 / math.sqrt(2.0 * math.pi * 2.0 * gamma)
        + 1.0 / math.sqrt(2.0 * math.pi * (2.0 + 2.0 * gamma))
        - 2.0 / math.sqrt(2.0 * math.pi * (1.0 + 2.0 * gamma))
    )
    assert_allclose(cw_numeric(np.array([0.0]), FULL), expected, rtol=1e-8)


def test_ks_numeric_staircase_sample():
    # F at the first n-1 points hits i/n exactly; the last sits at 1 - 1/(2n)
    n = 5
    y = np.empty(n)
    y[: n - 1] = std_normal_quantile(np.arange(1, n) / n)
    y[n - 1] = std_normal_quantile(1.0 - 1.0 / (2.0 * n))
    assert_allclose(ks_numeric(y), 1.0 / n, atol=1e-12)


def test_ks_numeric_single_zero():
    assert ks_numeric(np.array([0.0])) == 0.5


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_doubling_panels_is_converged(n):
    """Doubling M moves each quadrature oracle by less than the certification
    tolerance, so the resolution is past the accuracy knee."""
    rng = np.random.default_rng(100 + n)
    y = np.sort(rng.normal(loc=0.3, scale=1.2, size=n))
    for oracle in (w2_numeric, cvm_numeric, cw_numeric):
        coarse = oracle(y, QuadratureSpec(panels=100_000))
        fine = oracle(y, QuadratureSpec(panels=200_000))
        assert abs(fine - coarse) <= 1e-6 * max(abs(fine), 1e-9)


def test_oracles_are_deterministic():
    y = np.sort(np.random.default_rng(5).normal(size=6))
    assert w2_numeric(y, FAST) == w2_numeric(y, FAST)
    assert cw_numeric(y, FAST) == cw_numeric(y, FAST)
    assert cvm_numeric(y, FAST) == cvm_numeric(y, FAST)
    assert ks_numeric(y) == ks_numeric(y)
