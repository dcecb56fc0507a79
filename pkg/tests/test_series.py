from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from abelmoments.series import LocalSeries, binomial_power, from_profile


def test_product_respects_truncation():
    a = LocalSeries((1, 1, 1, 1), 3)
    b = LocalSeries((1, -1))
    assert (a * b).coeffs == (1, 0, 0, 0)
    assert (a * b).order == 3


def test_polynomial_product_is_exact():
    assert (LocalSeries((1, -1)) * LocalSeries((1, 1))).coeffs == (1, 0, -1)


def test_inverse():
    s = LocalSeries((1, -1))
    assert s.inverse(5).coeffs == (1, 1, 1, 1, 1, 1)
    assert LocalSeries((2, 1), 3).inverse().coeffs[:2] == (Fraction(1, 2), Fraction(-1, 4))


@pytest.mark.parametrize("j, e", [(1, 3), (2, -2), (3, 0), (1, -1)])
def test_binomial_power_matches_repeated_product(j, e):
    base = LocalSeries((1,) + (0,) * (j - 1) + (-1,))
    expected = base ** e if e >= 0 else LocalSeries(base.coeffs, 12).inverse() ** (-e)
    assert binomial_power(j, e, 12) == expected.truncate(12)


def test_from_profile():
    assert from_profile([1, 1, 2, 3], 2).coeffs == (1, 1, 2)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=10))
def test_inverse_roundtrip(tail):
    s = LocalSeries(tuple([1] + tail), len(tail))
    assert (s * s.inverse()).coeffs == (1,) + (0,) * len(tail)
