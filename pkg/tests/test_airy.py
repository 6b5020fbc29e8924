"""Tests for the scalar Airy evaluator and the product integral."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from crosswidth.airy import (
    Y_MAX,
    Y_MIN,
    airy_eval,
    airy_product_integral,
    ci_eval,
)
from crosswidth.errors import RangeError

from _reference import AIRY_DEEP, AIRY_POINTS


def test_reference_values():
    for y, (ai, aip, bi, bip) in AIRY_POINTS.items():
        pair = airy_eval(y)
        assert pair.ai == pytest.approx(ai, rel=1e-12)
        assert pair.ai_deriv == pytest.approx(aip, rel=1e-12)
        assert pair.bi == pytest.approx(bi, rel=1e-12)
        assert pair.bi_deriv == pytest.approx(bip, rel=1e-12)


def test_deep_oscillatory_values():
    for y, (ai, bi) in AIRY_DEEP.items():
        pair = airy_eval(y)
        # the common envelope is |y|^(-1/4); compare against it so the
        # slowly growing phase error is measured fairly
        envelope = abs(y) ** -0.25 / math.sqrt(math.pi)
        assert abs(pair.ai - ai) < 1e-10 * envelope
        assert abs(pair.bi - bi) < 1e-10 * envelope


def test_vectorized_matches_scalar():
    ys = np.array([-500.0, -7.25, -0.3, 0.0, 2.5, 40.0])
    block = airy_eval(ys)
    for k, y in enumerate(ys):
        one = airy_eval(float(y))
        assert block.ai[k] == one.ai
        assert block.bi[k] == one.bi
        assert block.ai_deriv[k] == one.ai_deriv
        assert block.bi_deriv[k] == one.bi_deriv


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-5000.0, max_value=30.0))
def test_wronskian_is_one_over_pi(y):
    pair = airy_eval(y)
    w = pair.ai * pair.bi_deriv - pair.ai_deriv * pair.bi
    assert w == pytest.approx(1.0 / math.pi, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-5000.0, max_value=30.0))
def test_ci_combination(y):
    pair = airy_eval(y)
    ci = ci_eval(y)
    rot = math.sqrt(0.5) * (1.0 + 1.0j)
    assert ci.ci == pytest.approx(rot * pair.ai + rot.conjugate() * pair.bi,
                                  rel=1e-13, abs=1e-300)
    assert ci.ci_star == pytest.approx(ci.ci.conjugate())
    # recover Ai from the pair; on the positive axis Bi dominates, so the
    # bound is relative to the pair's magnitude, not to Ai itself
    recovered = 0.5 * (rot.conjugate() * ci.ci + rot * ci.ci_star)
    scale = abs(ci.ci)
    assert abs(recovered.real - pair.ai) <= 1e-12 * scale
    assert abs(recovered.imag) <= 1e-12 * scale


def test_range_is_enforced():
    airy_eval(Y_MIN)
    airy_eval(Y_MAX)
    with pytest.raises(RangeError):
        airy_eval(Y_MIN - 1.0)
    with pytest.raises(RangeError):
        airy_eval(Y_MAX + 1.0)


def test_product_integral_rejects_degenerate_scales():
    with pytest.raises(RangeError):
        airy_product_integral(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(RangeError):
        airy_product_integral(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(RangeError):
        airy_product_integral(1.3, 1.3, 0.0, 1.0)
    with pytest.raises(RangeError):
        airy_product_integral(-1.3, -1.3, 0.5, 1.0)


def test_product_integral_symmetries():
    value = airy_product_integral(1.1, 0.7, 0.2, -0.3)
    # the defining integral is symmetric under factor exchange
    assert airy_product_integral(0.7, 1.1, -0.3, 0.2) == pytest.approx(value)
    # and invariant under a common shift of both centers
    shifted = airy_product_integral(1.1, 0.7, 0.2 + 5.0, -0.3 + 5.0)
    assert shifted == pytest.approx(value, rel=1e-12)


def test_product_integral_equal_centers():
    # with both centers at zero the argument vanishes and the value is
    # Ai(0) over the unsigned cube root of the scale-cube difference
    for l1, l2 in [(1.0, 2.0), (2.0, 1.0), (-1.0, 2.0), (1.0, -2.0)]:
        value = airy_product_integral(l1, l2, 0.0, 0.0)
        expected = airy_eval(0.0).ai / abs(l2 ** 3 - l1 ** 3) ** (1.0 / 3.0)
        assert value == pytest.approx(expected, rel=1e-12)


def test_product_integral_against_quadrature_mixed_signs():
    # opposite scale signs make the integrand decay in both directions,
    # so plain adaptive quadrature is a fair referee here
    l1, m1, l2, m2 = 1.0, 0.3, -1.2, -0.4

    def integrand(x):
        return airy_eval(l1 * (x - m1)).ai * airy_eval(l2 * (x - m2)).ai

    numeric, err = quad(integrand, -40.0, 40.0, limit=400)
    assert err < 1e-8
    closed = airy_product_integral(l1, l2, m1, m2)
    assert closed == pytest.approx(numeric, rel=1e-8)
