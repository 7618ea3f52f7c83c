import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hznlib.errors import DegeneratePhase, DomainError
from hznlib.special import (digamma, double_polylog, lerch_psi, li_phase, polylog,
                            polylog_order_deriv_s1)
from hznlib.values import UnitPhase

EG = 0.57721566490153286
L2 = math.log(2.0)


def e(a):
    return cmath.exp(2j * math.pi * a)


@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_polylog_at_zero(k):
    assert polylog(k, 0).value == 0


def test_polylog_minus_one():
    assert abs(polylog(2, -1).value + math.pi ** 2 / 12) < 1e-15


def test_li1_closed_form():
    assert abs(polylog(1, e(0.3)).value + cmath.log(1 - e(0.3))) < 1e-15


@pytest.mark.parametrize("k", [2, 3, 4, 8])
def test_polylog_at_one_is_zeta(k):
    assert abs(polylog(k, 1).value - float(mp.zeta(k))) < 1e-14


@given(st.integers(0, 8), st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_polylog_matches_mpmath(k, r, a):
    z = r * e(a)
    ref = complex(mp.polylog(k, z))
    assert abs(polylog(k, z).value - ref) <= 1e-12 * max(1.0, abs(ref))


@given(st.integers(-6, 6).filter(lambda k: k != 0), st.floats(0.02, 0.98))
def test_li_phase_negative_and_positive_orders(k, a):
    ref = complex(mp.polylog(k, mp.expjpi(2 * a)))
    assert abs(li_phase(k, a) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_order_derivative_at_half():
    # -sum (-1)^n log n / n = (log 2)^2/2 - gamma log 2
    v = polylog_order_deriv_s1(0.5).value
    assert abs(v - (L2 ** 2 / 2 - EG * L2)) < 1e-13


def test_order_derivative_conjugate_symmetry():
    a = polylog_order_deriv_s1(0.25).value
    b = polylog_order_deriv_s1(0.75).value
    assert abs(a - b.conjugate()) < 1e-13


def test_order_derivative_third():
    ref = complex(-mp.nsum(lambda n: mp.expjpi(2 * n / 3) * mp.log(n) / n, [1, mp.inf]))
    assert abs(polylog_order_deriv_s1(1 / 3).value - ref) < 1e-10


def test_double_polylog_zero():
    assert double_polylog(1, 2, 0, e(0.3)).value == 0


def test_double_polylog_alternating():
    # conditionally convergent; the stuffle relation gives ((log 2)^2 - zeta(2)) / 2
    ref = (L2 ** 2 - math.pi ** 2 / 6) / 2
    assert abs(double_polylog(1, 1, -1, -1).value - ref) < 1e-13


def test_double_polylog_against_partial_sums():
    z = e(0.3)
    q = np.arange(1, 200001)
    inner = np.concatenate([[0], np.cumsum(z ** q / q)[:-1]])
    brute = np.cumsum(np.conj(z) ** q / q * inner)[-2000:].mean()
    assert abs(double_polylog(1, 1, z, np.conj(z)).value - brute) < 1e-5


@given(st.integers(1, 3), st.integers(1, 3), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_double_polylog_stuffle(a, b, x, y):
    # Li_a(z1) Li_b(z2) = Li_{a,b}(z1,z2) + Li_{b,a}(z2,z1) + Li_{a+b}(z1 z2)
    if a + b == 2 and min((x + y) % 1, 1 - (x + y) % 1) < 0.02:
        return
    p, q = UnitPhase.of(x), UnitPhase.of(y)
    lhs = li_phase(a, x) * li_phase(b, y)
    rhs = (double_polylog(a, b, p, q).value + double_polylog(b, a, q, p).value
           + li_phase(a + b, x + y))
    assert abs(lhs - rhs) < 1e-11


def test_double_polylog_divergent_rejected():
    with pytest.raises(DomainError):
        double_polylog(1, 1, e(0.3), 1)


@pytest.mark.parametrize("x,ref", [(1, -EG), (0.5, -EG - 2 * L2), (2, 1 - EG)])
def test_digamma_values(x, ref):
    assert abs(digamma(x).value - ref) < 1e-15


@given(st.floats(-5, 5), st.floats(0.1, 5))
def test_digamma_complex_matches_mpmath(re, im):
    z = complex(re, im)
    assert abs(digamma(z).value - complex(mp.digamma(z))) < 1e-12 * max(1, abs(z))


def test_lerch_psi_half():
    assert abs(lerch_psi(0.5, 1).value - L2) < 1e-15


@given(st.floats(0.02, 0.98), st.floats(0.05, 20.0))
def test_lerch_psi_routes_agree(beta, x):
    a = lerch_psi(beta, x).value
    b = lerch_psi(beta, x, "binet").value
    assert abs(a - b) < 1e-10


@given(st.floats(0.05, 0.95), st.floats(-6, 6), st.floats(-3, 3))
def test_lerch_psi_matches_mpmath(beta, re, im):
    x = complex(re, im)
    if abs(im) < 0.05 and re <= 0.05:
        return
    ref = complex(mp.lerchphi(mp.expjpi(2 * beta), 1, x))
    assert abs(lerch_psi(beta, x).value - ref) < 1e-10 * max(1.0, abs(ref))


def test_lerch_psi_errors():
    with pytest.raises(DegeneratePhase):
        lerch_psi(0.0, 1.0)
    with pytest.raises(DomainError):
        lerch_psi(0.3, -2.0)
    with pytest.raises(DomainError):
        lerch_psi(0.3, 1 + 1j, "binet")
