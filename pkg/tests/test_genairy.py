"""Tests for the generalized Airy function A_n."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosswidth.airy import airy_eval
from crosswidth.errors import RangeError
from crosswidth.genairy import (
    METHOD_ASYMP_POS,
    METHOD_QUADRATURE,
    METHOD_ZERO,
    N_MAX,
    cn_const,
    gen_airy,
    gen_airy_zero,
)

from _reference import C_N, GEN_AIRY_ANCHORS, GEN_AIRY_ZERO


def test_order_one_reduces_to_airy():
    for y in np.linspace(-12.0, 14.0, 53):
        result = gen_airy(1, float(y))
        assert result.value == pytest.approx(airy_eval(float(y)).ai,
                                             rel=1e-8, abs=1e-15)


def test_anchor_values():
    for (n, y), expected in GEN_AIRY_ANCHORS.items():
        result = gen_airy(n, y)
        assert result.value == pytest.approx(expected, rel=1e-7), (n, y)


def test_zero_closed_form():
    for n, expected in GEN_AIRY_ZERO.items():
        assert gen_airy_zero(n) == pytest.approx(expected, rel=1e-13)
        forced = gen_airy(n, 0.0, method=METHOD_ZERO)
        assert forced.method == METHOD_ZERO
        assert forced.value == pytest.approx(expected, rel=1e-13)
        # the default quadrature route must land on the same number
        default = gen_airy(n, 0.0)
        assert default.method == METHOD_QUADRATURE
        assert default.value == pytest.approx(expected, rel=1e-12)


def test_cn_constants_are_exact_fractions():
    for n, frac in C_N.items():
        assert cn_const(n) == pytest.approx(float(frac), rel=1e-15)


def test_order_cap():
    with pytest.raises(RangeError):
        gen_airy(0, 1.0)
    with pytest.raises(RangeError):
        gen_airy(N_MAX + 1, 1.0)


def test_method_override_changes_route_not_value():
    # deep positive arguments default to the rotated-ray branch; forcing
    # the real-axis quadrature must agree within its reported error
    default = gen_airy(2, 6.0)
    forced = gen_airy(2, 6.0, method=METHOD_QUADRATURE)
    assert default.method == METHOD_ASYMP_POS
    assert forced.method == METHOD_QUADRATURE
    assert forced.value == pytest.approx(default.value,
                                         abs=2.0 * forced.est_error)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=N_MAX),
       st.floats(min_value=-6.0, max_value=4.0))
def test_values_are_finite_and_deterministic(n, y):
    first = gen_airy(n, y)
    second = gen_airy(n, y)
    assert math.isfinite(first.value)
    assert first.est_error < 1e-6
    assert second.value == first.value
    assert second.method == first.method
