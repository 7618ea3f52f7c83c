import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hznlib.errors import DegenerateArguments, DomainError
from hznlib.hzn import (cocycle_psi, dop, herglotz_F, higher_herglotz_plain, hzn_asymptotic,
                        hzn_deriv, hzn_eval, hzn_family, novikov_rho, period_residuals, taylor_a)
from hznlib.special import li_phase
from hznlib.values import TwistPair

L2 = math.log(2.0)
phases = st.floats(0.05, 0.95)


def F(k, x, a, b, route="series"):
    return hzn_eval(k, x, TwistPair.of(a, b), route=route).value.value


def test_weight_two_at_one_half_half():
    # integral of log(1+t)/(1+t) on [0,1] combined with the Li_2(-1) term
    assert abs(F(2, 1.0, 0.5, 0.5) - (L2 ** 2 / 2 - math.pi ** 2 / 12)) < 1e-14


def test_routes_agree_example():
    a = F(3, 2 + 0.5j, 0.3, 0.7)
    b = F(3, 2 + 0.5j, 0.3, 0.7, route="integral")
    assert abs(a - b) < 1e-10


@given(st.integers(1, 6), st.floats(0.3, 4.0), st.floats(-2.0, 2.0), phases, phases)
def test_routes_agree(k, re, im, a, b):
    x = complex(re, im)
    assert abs(F(k, x, a, b) - F(k, x, a, b, "integral")) < 1e-9


def test_brute_force_double_series():
    k, x, a, b = 3, 1.3, 0.2, 0.35
    ref = mp.nsum(lambda p: mp.expjpi(2 * a * p) / p ** (k - 1)
                  * mp.lerchphi(mp.expjpi(2 * b), 1, p * x), [1, mp.inf])
    assert abs(F(k, x, a, b) - complex(ref)) < 1e-12


def test_novikov_link():
    x, t = 1.4, TwistPair.of(0.3, 0.6)
    rho = novikov_rho(x, t).value
    assert abs(F(2, x, 0.3, 0.6) - (-rho + li_phase(2, 0.3) / x)) < 1e-12


def test_deriv_zeroth():
    v = hzn_deriv(4, 0, 1.7, TwistPair.of(0.25, 0.4)).value
    assert abs(v - F(4, 1.7, 0.25, 0.4)) < 1e-12


def test_deriv_finite_difference():
    h = 1e-5
    fd = (F(4, 1.7 + h, 0.25, 0.4) - F(4, 1.7 - h, 0.25, 0.4)) / (2 * h)
    assert abs(hzn_deriv(4, 1, 1.7, TwistPair.of(0.25, 0.4)).value - fd) < 1e-7


@pytest.mark.parametrize("i", [2, 3, 5])
def test_higher_derivatives_by_differences(i):
    t = TwistPair.of(0.3, 0.45)
    h = 1e-3
    lo = hzn_deriv(6, i - 1, 2.0 - h, t).value
    hi = hzn_deriv(6, i - 1, 2.0 + h, t).value
    assert abs(hzn_deriv(6, i, 2.0, t).value - (hi - lo) / (2 * h)) < 1e-5


def test_eval_rejects_cut():
    with pytest.raises(DomainError):
        hzn_eval(2, -1.0, TwistPair.of(0.3, 0.2))


def test_taylor_a_small_orders():
    z = cmath.exp(2j * math.pi * 0.3)
    assert abs(taylor_a(0.3, 0).value - 1 / (1 - z)) < 1e-15
    assert abs(taylor_a(0.5, 1).value - 0.25) < 1e-15


def test_taylor_a_fit():
    b = 0.3
    z = cmath.exp(2j * math.pi * b)
    t = np.linspace(-0.05, 0.05, 41)
    g = 1 / (1 - np.exp(-t) * z)
    c = np.polynomial.polynomial.polyfit(t, g, 8)
    assert abs(taylor_a(b, 3).value - 6 * c[3]) < 1e-6


def test_asymptotic_example():
    t = TwistPair.of(0.2, 0.6)
    assert abs(hzn_asymptotic(3, 50.0, t, 6).value - F(3, 50.0, 0.2, 0.6)) < 1e-10


@given(st.integers(2, 5), phases, phases, st.floats(1.0, 2.0))
def test_small_x_expansion(k, a, b, c):
    # the expansion is asymptotic; its floor is about exp(-2 pi |a~| / x)
    x = 2 * math.pi * min(a, 1 - a) / (40.0 * c)
    v = hzn_asymptotic(k, x, TwistPair.of(a, b), 10).value
    assert abs(v - F(k, x, a, b)) < 1e-6 * max(1.0, abs(v))


def test_herglotz_F_at_one():
    g, g1 = float(mp.euler), float(mp.stieltjes(1))
    assert abs(herglotz_F(1).value - (-g * g / 2 - math.pi ** 2 / 12 - g1)) < 1e-13


def test_herglotz_F_brute_force():
    x = 0.7
    ref = mp.nsum(lambda n: (mp.digamma(n * x) - mp.log(n * x)) / n, [1, mp.inf])
    assert abs(herglotz_F(x).value - complex(ref)) < 1e-10


def test_higher_plain_k3_closed_form():
    # sum psi(n)/n^2 = zeta(3) - gamma zeta(2)
    ref = float(mp.zeta(3) - mp.euler * mp.zeta(2))
    assert abs(higher_herglotz_plain(3, 1).value - ref) < 1e-13


def test_higher_plain_k4_brute():
    from scipy import special as sc
    from scipy.integrate import quad
    N = 10 ** 6
    n = np.arange(1, N + 1.0)
    f = lambda t: (math.log(2 * t) - 1 / (4 * t)) / t ** 3
    ref = math.fsum(sc.digamma(2 * n) / n ** 3) + quad(f, N, np.inf)[0] - f(N) / 2
    assert abs(higher_herglotz_plain(4, 2).value - ref) < 1e-10


def test_higher_plain_rejects_small_k():
    with pytest.raises(DomainError):
        higher_herglotz_plain(2, 1.0)


def _poly(coeffs):
    def f(i, u):
        return sum(c * math.perm(j, i) * complex(u) ** (j - i) for j, c in enumerate(coeffs) if j >= i)
    return f


def test_dop_order_zero():
    f = _poly([0, 0, 1])
    assert abs(dop(0, f, 3.0, 1.0).value - 8.0) < 1e-15


def test_dop_cube():
    assert abs(dop(1, _poly([0, 0, 0, 1]), 3.0, 1.0).value - 4.0) < 1e-14


@given(st.integers(0, 4), st.floats(-3, 3), st.floats(-3, 3), st.lists(st.floats(-5, 5), min_size=9, max_size=9))
def test_dop_kills_low_degree(n, x, y, cs):
    if abs(x - y) < 0.1:
        return
    cs = cs[: 2 * n + 1]
    v = dop(n, _poly(cs), x, y).value
    scale = sum(abs(c) for c in cs) * max(1.0, abs(x), abs(y)) ** (2 * n) * 4 ** n / abs(x - y) ** n
    assert abs(v) <= 1e-13 * max(scale, 1.0)


@given(st.integers(1, 3), st.floats(0.2, 5.0))
def test_dop_top_monomial(k, x):
    # D_{k-1}(u^{2k-1}) = (x - y)^k
    y = x / 3
    v = dop(k - 1, _poly([0] * (2 * k - 1) + [1]), x, y).value
    assert abs(v - (x - y) ** k) < 1e-11 * max(1.0, abs(x - y) ** k)


def test_dop_degenerate():
    with pytest.raises(DegenerateArguments):
        dop(1, _poly([1]), 1.0, 1.0)


@settings(max_examples=8)
@given(st.sampled_from([4, 6]), phases, phases, st.floats(0.5, 3.0), st.floats(0.3, 3.0))
def test_dop_methods_agree(k, a, b, x, y):
    if abs(x - y) < 0.1:
        return
    fam = hzn_family(k, TwistPair.of(a, b))
    n = k // 2 - 1
    assert abs(dop(n, fam, x, y).value - dop(n, fam, x, y, method="integral").value) < 1e-9


@given(st.sampled_from([4, 6]), phases, phases, st.floats(0.3, 3.0))
def test_cocycle_routes_agree(w, a, b, x):
    t = TwistPair.of(a, b)
    assert abs(cocycle_psi(w, t, x).value - cocycle_psi(w, t, x, route="derivative").value) < 1e-9


def test_cocycle_odd_in_x():
    t = TwistPair.of(0.2, 0.7)
    assert abs(cocycle_psi(4, t, -1.3).value + cocycle_psi(4, t, 1.3).value) < 1e-15


def test_period_relations_half_integral():
    r1, r2 = period_residuals(4, TwistPair.of(0.5, 0.5), 1.7)
    assert abs(r1.value) < 1e-8 and abs(r2.value) < 1e-8
