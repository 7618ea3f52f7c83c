from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hznlib import checks

phases = st.floats(0.05, 0.95)


@given(st.integers(2, 6), st.floats(0.2, 5.0), st.floats(-2.9, 2.9), phases, phases)
def test_two_term(k, r, th, a, b):
    import cmath
    assert abs(checks.fe2_residual(k, cmath.rect(r, th), a, b)) < 1e-10


@given(st.integers(2, 5), st.floats(0.3, 3.0), st.floats(-2.5, 2.5), phases, phases)
def test_three_and_six_term(k, r, th, a, b):
    import cmath
    x = cmath.rect(r, th)
    f = (a + b) % 1
    if abs(x + 1) < 0.2 or not 0.05 <= f <= 0.95:
        return
    assert abs(checks.fe3_residual(k, x, a, b)) < 1e-10
    assert abs(checks.fe6_residual(k, x, a, b)) < 1e-9


@given(st.integers(0, 5), st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=20),
                                  min_size=11, max_size=11),
       st.fractions(max_denominator=9), st.fractions(max_denominator=9))
def test_dop_exact_kernel(n, cs, x, y):
    if x == y:
        return
    assert checks.dop_poly_exact(n, cs[: 2 * n + 1], x, y) == 0


def test_dop_exact_top_degree():
    # D_1(u^3) = (x - y)^2
    assert checks.dop_poly_exact(1, [0, 0, 0, Fraction(1)], Fraction(3), Fraction(1)) == 4


@pytest.mark.parametrize("name", ["fe2", "cocycle", "binet"])
def test_suite_determinism(name):
    a = checks.run_suite(name, samples=3, seed=7)
    b = checks.run_suite(name, samples=3, seed=7)
    assert a.details == b.details and a.passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        checks.run_suite("nope")
