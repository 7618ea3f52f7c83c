import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hznlib.errors import DegeneratePhase
from hznlib.numerics import (QuadratureRule, SeriesConfig, compensated_sum, gauss_legendre,
                             quad_halfline, quad_panel, sum_phased)


def test_gauss_legendre_integrates_polynomials_exactly():
    r = gauss_legendre(12)
    for d in range(24):
        assert np.dot(r.w, r.x ** d) == pytest.approx(1 / (d + 1), rel=1e-14)


def test_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule(((0.5, -1.0),))
    with pytest.raises(ValueError):
        QuadratureRule(((0.5, 1.0),), kind="bogus")


@pytest.mark.parametrize("kw", [{"abs_tol": 0.0}, {"max_terms": 3}, {"parts_depth": 9}])
def test_series_config_validation(kw):
    with pytest.raises(ValueError):
        SeriesConfig(**kw)


def test_series_config_env(monkeypatch):
    monkeypatch.setenv("HZN_TOL", "1e-9")
    monkeypatch.setenv("HZN_MAX_TERMS", "5000")
    c = SeriesConfig.from_env()
    assert c.abs_tol == 1e-9 and c.max_terms == 5000


@pytest.mark.parametrize("a,b,exact", [
    (0.0, 1.0, math.e - 1),
    (0.0, math.pi, 2.0),
])
def test_quad_panel_real(a, b, exact):
    f = np.exp if exact == math.e - 1 else np.sin
    assert abs(quad_panel(f, a, b).value - exact) < 1e-13


def test_quad_panel_complex_path():
    # int_0^{1+i} z^2 dz
    v = quad_panel(lambda z: z ** 2, 0, 1 + 1j).value
    assert abs(v - (1 + 1j) ** 3 / 3) < 1e-14


def test_quad_halfline_gamma():
    v = quad_halfline(lambda t: t ** 3 * np.exp(-t), 1.0).value
    assert abs(v - 6.0) < 1e-12


@given(st.floats(0.05, 0.95))
def test_sum_phased_log(beta):
    # sum_{q>=0} z^q/(q+1) = -log(1-z)/z
    z = cmath.exp(2j * math.pi * beta)
    v = sum_phased(lambda q: 1.0 / (q + 1.0), beta).value
    assert abs(v + cmath.log(1 - z) / z) < 1e-11


def test_sum_phased_integral_phase_rejected():
    with pytest.raises(DegeneratePhase):
        sum_phased(lambda q: 1.0 / (q + 1.0), 0.0)


def test_compensated_sum_cancellation():
    vals = [1e16, 1.0, -1e16, 1.0]
    assert compensated_sum(vals) == 2.0
