"""Exact Gaussian-rational arithmetic and certified root bounds.

Everything the certifier asserts is phrased over arbitrary-precision
rationals (gmpy2.mpq).  Floats entering this layer are converted through
their exact binary value, so a "rationalized" float carries no extra error
term.  Square roots and k-th roots are irrational in general; the bound
helpers below return rationals that are *verified* upper or lower bounds,
never approximations.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq, mpz, isqrt, iroot

Rational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(x) -> mpq:
    """Convert int/float/Fraction/str/mpq to an exact rational.

    Floats map to their exact binary value.
    """
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, float):
        return mpq(x)  # exact binary expansion
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to rational")


def _cdiv(a, b):
    """Ceiling division for mpz (b > 0)."""
    return -((-a) // b)


def round_up(q: mpq, bits: int = 96) -> mpq:
    """Dyadic rational >= q with roughly `bits` significant bits (q >= 0)."""
    if q < 0:
        raise ValueError("round_up expects a nonnegative rational")
    if q == 0:
        return _ZERO
    num, den = q.numerator, q.denominator
    shift = bits - (num.bit_length() - den.bit_length())
    if shift >= 0:
        return mpq(_cdiv(num << shift, den), mpz(1) << shift)
    return mpq(_cdiv(num, den << (-shift)) << (-shift))


def round_down(q: mpq, bits: int = 96) -> mpq:
    """Dyadic rational <= q with roughly `bits` significant bits (q >= 0)."""
    if q < 0:
        raise ValueError("round_down expects a nonnegative rational")
    if q == 0:
        return _ZERO
    num, den = q.numerator, q.denominator
    shift = bits - (num.bit_length() - den.bit_length())
    if shift >= 0:
        return mpq((num << shift) // den, mpz(1) << shift)
    return mpq((num // (den << (-shift))) << (-shift))


def sqrt_ub(q: mpq, bits: int = 96) -> mpq:
    """Rational u with u*u >= q (q >= 0); exact when q is a perfect square
    of a dyadic-friendly value, conservative otherwise."""
    if q < 0:
        raise ValueError("sqrt_ub expects a nonnegative rational")
    if q == 0:
        return _ZERO
    q2 = round_up(q, 2 * bits + 2)
    num, den = q2.numerator, q2.denominator
    t = bits
    m = _cdiv(num << (2 * t), den)
    u = isqrt(m)
    if u * u < m:
        u += 1
    return mpq(u, mpz(1) << t)


def sqrt_lb(q: mpq, bits: int = 96) -> mpq:
    """Rational u >= 0 with u*u <= q."""
    if q < 0:
        raise ValueError("sqrt_lb expects a nonnegative rational")
    if q == 0:
        return _ZERO
    q2 = round_down(q, 2 * bits + 2)
    num, den = q2.numerator, q2.denominator
    t = bits
    m = (num << (2 * t)) // den
    return mpq(isqrt(m), mpz(1) << t)


def root_ub(q: mpq, k: int, bits: int = 64) -> mpq:
    """Rational u with u**k >= q (q >= 0, k >= 1).  Exact for k == 1."""
    if k < 1:
        raise ValueError("root order must be >= 1")
    if q < 0:
        raise ValueError("root_ub expects a nonnegative rational")
    if k == 1 or q == 0:
        return q
    q2 = round_up(q, 2 * bits)
    num, den = q2.numerator, q2.denominator
    t = bits
    m = _cdiv(num << (k * t), den)
    u, exact = iroot(m, k)
    if not exact:
        u += 1
    return mpq(u, mpz(1) << t)


def decimal_string(q: mpq, digits: int = 30) -> str:
    """Decimal string of q truncated (toward zero) to `digits` fraction digits."""
    num, den = q.numerator, q.denominator
    sign = "-" if num < 0 else ""
    num = abs(num)
    ip, rem = divmod(num, den)
    frac = (rem * 10**digits) // den
    s = str(frac).rjust(digits, "0").rstrip("0")
    if s:
        return f"{sign}{ip}.{s}"
    return f"{sign}{ip}"


class QQi:
    """Gaussian rational re + im*i with exact mpq components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_rational(re)
        self.im = to_rational(im)

    @staticmethod
    def _make(re: mpq, im: mpq) -> "QQi":
        z = QQi.__new__(QQi)
        z.re = re
        z.im = im
        return z

    @classmethod
    def from_complex(cls, z: complex) -> "QQi":
        return cls._make(mpq(z.real), mpq(z.imag))

    def __add__(self, other):
        other = _coerce(other)
        return QQi._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return QQi._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return QQi._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        d2 = other.re * other.re + other.im * other.im
        if d2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b, c, d = self.re, self.im, other.re, other.im
        return QQi._make((a * c + b * d) / d2, (b * c - a * d) / d2)

    def __neg__(self):
        return QQi._make(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return QQi._make(_ONE, _ZERO) / self ** (-k)
        out = QQi._make(_ONE, _ZERO)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (QQi, int, float, Fraction, type(_ZERO))):
            other = _coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> "QQi":
        return QQi._make(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


QQI_ZERO = QQi(0, 0)
QQI_ONE = QQi(1, 0)


def _coerce(x) -> QQi:
    if isinstance(x, QQi):
        return x
    if isinstance(x, complex):
        return QQi.from_complex(x)
    return QQi._make(to_rational(x), _ZERO)


def abs_ub(z: QQi, bits: int = 96) -> mpq:
    """Certified rational upper bound on |z|; exact for real or imaginary z."""
    if z.im == 0:
        return abs(z.re)
    if z.re == 0:
        return abs(z.im)
    return sqrt_ub(z.abs2(), bits)


def abs_lb(z: QQi, bits: int = 96) -> mpq:
    """Certified rational lower bound on |z|; exact for real or imaginary z."""
    if z.im == 0:
        return abs(z.re)
    if z.re == 0:
        return abs(z.im)
    return sqrt_lb(z.abs2(), bits)


def inv_abs_ub(z: QQi, bits: int = 96) -> mpq:
    """Certified rational upper bound on 1/|z| for z != 0.

    Normalizes |z|^2 by an even power of two first, so the bound keeps full
    relative precision at any magnitude (sqrt_lb alone underflows to zero
    below 2^-2*bits).
    """
    q = z.abs2()
    if q == 0:
        raise ZeroDivisionError("inv_abs_ub of zero")
    e = q.numerator.bit_length() - q.denominator.bit_length()
    e -= e & 1
    s = q / mpq(mpz(1) << e) if e >= 0 else q * (mpz(1) << (-e))
    lb = sqrt_lb(s, bits)  # s in [1/2, 4): full precision
    half = e // 2
    scale = mpq(1, mpz(1) << half) if half >= 0 else mpq(mpz(1) << (-half))
    return (1 / lb) * scale
