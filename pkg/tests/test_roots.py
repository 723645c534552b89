import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kovatlas.roots import bisect_increasing, bracket_roots, cauchy_bound, poly_real_roots


def test_cauchy_bound_contains_roots():
    c = [1, -6, 11, -6]
    assert max(abs(r) for r in np.roots(c)) <= cauchy_bound(c)


def test_simple_roots():
    assert poly_real_roots([1, -6, 11, -6]) == pytest.approx([1, 2, 3], abs=1e-12)
    assert poly_real_roots([1, 0, 1]) == []
    assert poly_real_roots([2, -3]) == pytest.approx([1.5])


def test_interval_restriction():
    assert poly_real_roots([1, -6, 11, -6], 1.5, 2.5) == pytest.approx([2])


def test_double_root_reported_once():
    r = poly_real_roots([1, -2, 1])
    assert r == pytest.approx([1.0], abs=1e-7)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5, unique=True))
def test_roots_of_products(rs):
    coeffs = np.poly(rs)
    got = poly_real_roots(coeffs)
    assert got == pytest.approx(sorted(rs), abs=1e-6)


def test_bracket_roots():
    roots = bracket_roots(math.sin, np.linspace(0.5, 10, 50))
    assert roots == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], abs=1e-12)


def test_bisect_increasing_grows_bracket():
    t = bisect_increasing(lambda x: x ** 3 + x, 100.0)
    assert t ** 3 + t == pytest.approx(100.0, rel=1e-14)
    assert bisect_increasing(lambda x: x, -1.0) == 0.0
