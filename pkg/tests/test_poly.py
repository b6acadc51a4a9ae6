"""Polynomial core and exact rational arithmetic."""

import math

import numpy as np
import pytest
from gmpy2 import mpq

from harmzeros.poly import (BivariatePoly, ComplexPoly, HarmonicPair,
                            RealSystem, jacobian, realify, taylor_shift)
from harmzeros.rational import (QQi, abs_lb, abs_ub, decimal_string,
                                inv_abs_ub, root_ub, sqrt_lb, sqrt_ub,
                                to_rational)


def test_to_rational_float_is_exact_binary():
    assert to_rational(0.5) == mpq(1, 2)
    assert to_rational(0.1) == mpq(3602879701896397, 2 ** 55)


def test_qqi_arithmetic():
    a = QQi(mpq(1, 2), mpq(1, 3))
    b = QQi(2, -1)
    assert (a * b).re == mpq(4, 3)
    assert (a * b).im == mpq(1, 6)
    assert (a / a) == QQi(1)
    assert a.conj().im == -a.im
    assert (a ** 3) == a * a * a


def test_sqrt_bounds_bracket():
    for q in (mpq(2), mpq(1, 3), mpq(10 ** 20), mpq(1, 10 ** 20)):
        lo, hi = sqrt_lb(q), sqrt_ub(q)
        assert lo * lo <= q <= hi * hi
        assert hi - lo < hi / 10 ** 14


def test_abs_bounds():
    z = QQi(3, 4)
    assert abs_lb(z) <= 5 <= abs_ub(z)
    assert abs_ub(QQi(mpq(-7, 3), 0)) == mpq(7, 3)


def test_root_ub():
    u = root_ub(mpq(8), 3)
    assert u ** 3 >= 8
    assert u < mpq(20001, 10000)
    assert root_ub(mpq(5, 9), 1) == mpq(5, 9)


def test_inv_abs_ub_extreme_magnitudes():
    for z in (QQi(3, 4), QQi(mpq(1, 10 ** 40), 0), QQi(0, mpq(10 ** 50))):
        u = inv_abs_ub(z)
        # u >= 1/|z|  <=>  u^2 * |z|^2 >= 1
        assert u * u * z.abs2() >= 1


def test_decimal_string_truncates():
    assert decimal_string(mpq(1, 3), 5) == "0.33333"
    assert decimal_string(mpq(-5, 2)) == "-2.5"
    assert decimal_string(mpq(7)) == "7"


def test_complex_poly_eval_and_derivative():
    p = ComplexPoly([1, 0, QQi(0, 1)])  # 1 + i z^2
    assert p.degree == 2
    assert p.eval_exact(QQi(2)) == QQi(1, 4)
    assert p.derivative().coeffs == ComplexPoly([0, QQi(0, 2)]).coeffs
    assert p.eval(1 + 1j) == pytest.approx(1 + (1 + 1j) ** 2 * 1j)


def test_complex_poly_shift_is_taylor():
    p = ComplexPoly([QQi(1), QQi(-3), QQi(0, 2), QQi(5)])
    z0 = QQi(mpq(2, 3), mpq(-1, 7))
    s = p.shift(z0)
    y = QQi(mpq(1, 11), mpq(2, 5))
    assert s.eval_exact(y) == p.eval_exact(z0 + y)


def test_poly_ring_ops():
    a = ComplexPoly([1, 2])
    b = ComplexPoly([-1, 0, 3])
    assert (a * b).degree == 3
    assert (a + b - a) == b
    assert (a ** 2) == a * a


def test_harmonic_pair_validates_degrees():
    with pytest.raises(ValueError):
        HarmonicPair(ComplexPoly([1, 1]), ComplexPoly([0, 0, 1]))
    with pytest.raises(ValueError):
        HarmonicPair(ComplexPoly([]), ComplexPoly([1]))


def test_realify_splits_real_imag():
    # F = z^2 + conj(z): f1 = x^2 - y^2 + x, f2 = 2xy - y
    pair = HarmonicPair(ComplexPoly([0, 0, 1]), ComplexPoly([0, 1]))
    S = realify(pair)
    assert S.f1.coeffs == BivariatePoly({(2, 0): 1, (0, 2): -1, (1, 0): 1}).coeffs
    assert S.f2.coeffs == BivariatePoly({(1, 1): 2, (0, 1): -1}).coeffs
    assert S.pair is pair


def test_realify_agrees_with_float_eval():
    rng = np.random.default_rng(3)
    p = ComplexPoly([complex(a, b) for a, b in rng.standard_normal((5, 2))])
    q = ComplexPoly([complex(a, b) for a, b in rng.standard_normal((3, 2))])
    F = HarmonicPair(p, q)
    S = realify(F)
    for _ in range(10):
        x, y = rng.standard_normal(2)
        val = F.eval(complex(x, y))
        assert S.f1.eval(x, y) == pytest.approx(val.real, abs=1e-12)
        assert S.f2.eval(x, y) == pytest.approx(val.imag, abs=1e-12)


def test_bivariate_shift_exact():
    f = BivariatePoly({(2, 1): QQi(3), (0, 2): QQi(-1, 1), (1, 0): QQi(mpq(1, 2))})
    vx, vy = QQi(mpq(1, 3), 1), QQi(-2, mpq(2, 7))
    g = f.shift(vx, vy)
    tx, ty = QQi(mpq(3, 5)), QQi(0, mpq(1, 9))
    assert g.eval_exact(tx, ty) == f.eval_exact(vx + tx, vy + ty)


def test_jacobian_exact_and_float_match():
    pair = HarmonicPair(ComplexPoly([0, 0, 0, 1]), ComplexPoly([1, 2]))
    S = realify(pair)
    xe, ye = QQi(mpq(1, 4)), QQi(mpq(-2, 3))
    Je = jacobian(S, (xe, ye))
    Jf = jacobian(S, (0.25, complex(-2 / 3)))
    for i in range(2):
        for j in range(2):
            assert complex(Je[i][j].to_complex()) == pytest.approx(
                complex(Jf[i, j]), abs=1e-12)


def test_taylor_shift_system():
    pair = HarmonicPair(ComplexPoly([0, 1, 1]), ComplexPoly([2]))
    S = realify(pair)
    T = taylor_shift(S, (QQi(1), QQi(-1)))
    assert T.f1.eval_exact(QQi(0), QQi(0)) == S.f1.eval_exact(QQi(1), QQi(-1))
    assert T.f2.eval_exact(QQi(mpq(1, 2)), QQi(2)) == \
        S.f2.eval_exact(QQi(mpq(3, 2)), QQi(1))
