import math

import pytest
from hypothesis import given, strategies as st

from hznlib.errors import NonRationalInput, NotFundamentalDiscriminant, NotReduced
from hznlib.quadfield import (IndefForm, QuadIrr, field_report, forms_of, fundamental_unit,
                              in_set_S, is_fundamental_discriminant, minus_cf, narrow_classes,
                              red_set, reduced_numbers, wide_red_sets)
from hznlib.values import TwistPair


@pytest.mark.parametrize("D,a,b,norm", [
    (5, 1, 1, -1), (8, 2, 1, -1), (12, 4, 1, 1), (13, 3, 1, -1), (17, 8, 2, -1), (21, 5, 1, 1),
])
def test_fundamental_units(D, a, b, norm):
    fd = fundamental_unit(D)
    assert (fd.eps_a, fd.eps_b, fd.norm_eps) == (a, b, norm)
    assert (a * a - b * b * D) // 4 == norm


# narrow class numbers of small real quadratic fields
@pytest.mark.parametrize("D,hplus", [
    (5, 1), (8, 1), (12, 2), (13, 1), (17, 1), (21, 2), (24, 2), (40, 2), (60, 4), (65, 2), (85, 2),
])
def test_narrow_class_numbers(D, hplus):
    assert len(narrow_classes(fundamental_unit(D))) == hplus


@pytest.mark.parametrize("D", [1, 4, 9, 15, 20, 45])
def test_non_fundamental_rejected(D):
    with pytest.raises((NotFundamentalDiscriminant, ValueError)):
        fundamental_unit(D)


def test_d12_red_sets():
    c0, c1 = narrow_classes(fundamental_unit(12))
    assert [w.pretty() for w in c0.reds] == ["2+sqrt(3)"]
    assert sorted(w.pretty() for w in c1.reds) == ["(3+sqrt(3))/2", "(3+sqrt(3))/3"]
    assert c0.digits == (4,) and c1.digits == (2, 3)


def test_d12_wide_sets():
    fd = fundamental_unit(12)
    c0 = narrow_classes(fd)[0]
    rw, rws = wide_red_sets(fd, c0)
    assert [x.pretty() for x in rw] == ["1+sqrt(3)"]
    assert [x.pretty() for x in rws] == ["(1+sqrt(3))/2"]
    assert all(x.is_wide_reduced() for x in rw + rws)


@pytest.mark.parametrize("D", [5, 8, 12, 13, 17, 21, 60, 105])
def test_cycles_are_purely_periodic_and_partition(D):
    fd = fundamental_unit(D)
    cycles = narrow_classes(fd)
    seen = []
    for c in cycles:
        assert all(w.is_reduced() for w in c.reds)
        w = c.reds[0]
        digits = []
        for _ in range(c.length):
            b, w = w.minus_step()
            digits.append(b)
        assert w == c.reds[0]
        assert tuple(digits) in {c.digits[i:] + c.digits[:i] for i in range(c.length)}
        seen.extend(c.reds)
    assert sorted(seen, key=lambda q: (q.P, q.Q)) == sorted(reduced_numbers(D), key=lambda q: (q.P, q.Q))
    assert len(set(seen)) == len(seen)


def test_minus_cf_rejects_unreduced():
    with pytest.raises(NotReduced):
        minus_cf(QuadIrr(0, 1, 12))


def test_forms_have_unit_discriminant():
    fd = fundamental_unit(21)
    for c in narrow_classes(fd):
        for f in forms_of(red_set(c, fd)):
            assert f.discriminant == pytest.approx(1.0, abs=1e-12)
            assert f(1, -f.w) == pytest.approx(0.0, abs=1e-12)


def test_form_validation():
    with pytest.raises(NotReduced):
        IndefForm(0.5, 0.2)


def test_in_set_S():
    fd = fundamental_unit(12)   # N(eps - 1) = -2
    assert in_set_S(TwistPair.of("1/2", "1/2"), fd)
    assert in_set_S(TwistPair.of(0, "1/2"), fd)
    assert not in_set_S(TwistPair.of("1/4", "3/4"), fd)
    with pytest.raises(NonRationalInput):
        in_set_S(TwistPair.of(0.3562, -0.4052), fd)


@given(st.integers(2, 300))
def test_reduction_exact_random(D):
    if not is_fundamental_discriminant(D):
        return
    fd = fundamental_unit(D)
    e = fd.epsilon
    assert abs(e * e - fd.eps_a * e + fd.norm_eps) < 1e-9 * e * e
    for c in narrow_classes(fd):
        for w in c.reds:
            assert w.value > 1 > w.conj > 0


def test_field_report_shape():
    r = field_report(12)
    assert r["class_count"] == 2
    assert r["classes"][0]["red"][0]["text"] == "2+sqrt(3)"
