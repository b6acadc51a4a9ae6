"""Extremal family construction and its exact identities."""

import math

import pytest
from gmpy2 import mpq

from harmzeros.extremal import (ExtremalSpec, build_P, build_extremal_pair,
                                build_f, check_leading_form,
                                default_parameter, half_degree_conjecture,
                                lll_bound, verify_recurrence,
                                wilmshurst_bound)
from harmzeros.rational import QQi


def test_spec_validation():
    with pytest.raises(ValueError):
        ExtremalSpec(5, 5, QQi(mpq(1, 10)))
    with pytest.raises(ValueError):
        ExtremalSpec(5, 0, QQi(mpq(1, 10)))
    with pytest.raises(ValueError):
        ExtremalSpec(5, 2, QQi(0))


def test_default_parameter_is_small_and_seeded():
    a = default_parameter(7)
    assert a == default_parameter(7)
    assert a.re == mpq(1, 10)
    assert a.im != 0 and abs(a.im) <= mpq(1, 100000)


def test_build_P_coefficients():
    # P_{n,ell} = sum_{k<ell} C(n-ell+k, k) a^k z^(ell-1-k)
    a = QQi(mpq(1, 10), mpq(1, 1000))
    P = build_P(ExtremalSpec(9, 3, a))
    assert P.degree == 2
    assert P.coeff(2) == QQi(1)
    assert P.coeff(1) == QQi(7) * a
    assert P.coeff(0) == QQi(28) * a * a


def test_build_f_monic_with_root_at_a():
    a = QQi(mpq(1, 10), mpq(-3, 1000))
    spec = ExtremalSpec(8, 3, a)
    f = build_f(spec)
    assert f.degree == 8
    assert f.coeff(8) == QQi(1)
    assert f.eval_exact(a) == QQi(0)


def test_pair_degrees():
    for n, ell in ((7, 1), (9, 3), (12, 6), (20, 19)):
        pair = build_extremal_pair(ExtremalSpec(n, ell, default_parameter(1)))
        assert pair.n == n
        assert pair.m == n - ell


def test_recurrence_identity_small():
    a = QQi(mpq(1, 10), mpq(1, 500))
    for n in range(3, 9):
        for ell in range(1, n):
            assert verify_recurrence(n, ell, a)


def test_leading_form():
    for n, ell in ((7, 2), (10, 5), (13, 12)):
        assert check_leading_form(ExtremalSpec(n, ell, default_parameter(3)))


def test_bounds():
    assert wilmshurst_bound(10, 6) == 58
    assert lll_bound(10, 6) == 118
    assert half_degree_conjecture(12) == 72
    with pytest.raises(ValueError):
        lll_bound(5, 5)
    with pytest.raises(ValueError):
        half_degree_conjecture(7)


def test_p_q_sum_and_difference_structure():
    # p + q = 2 z^n exactly; p - q = 2 f
    spec = ExtremalSpec(10, 4, default_parameter(2))
    pair = build_extremal_pair(spec)
    s = pair.p + pair.q
    assert s.degree == 10
    assert s.coeff(10) == QQi(2)
    assert all(not s.coeff(k) for k in range(10))
    assert (pair.p - pair.q) == build_f(spec) * QQi(2)
