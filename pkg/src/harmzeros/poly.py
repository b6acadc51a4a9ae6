"""Polynomial core: univariate complex polynomials, harmonic pairs, and the
exact realification into a bivariate real system.

Every polynomial carries exact Gaussian-rational coefficients as the source
of truth plus a cached double-precision shadow used by the path tracker.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np
from gmpy2 import mpq

from .rational import QQi, QQI_ZERO, to_rational, _coerce

__all__ = [
    "ComplexPoly",
    "HarmonicPair",
    "BivariatePoly",
    "RealSystem",
    "eval_poly",
    "harmonic_eval",
    "realify",
    "jacobian",
    "taylor_shift",
]


class ComplexPoly:
    """Univariate polynomial sum coeffs[k] * z**k, lowest degree first."""

    __slots__ = ("coeffs", "_float")

    def __init__(self, coeffs: Iterable):
        cs = [c if isinstance(c, QQi) else _coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._float = None

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports degree 0."""
        return max(len(self.coeffs) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> QQi:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return QQI_ZERO

    @property
    def float_coeffs(self) -> np.ndarray:
        if self._float is None:
            if self.coeffs:
                self._float = np.array([c.to_complex() for c in self.coeffs],
                                       dtype=np.complex128)
            else:
                self._float = np.zeros(1, dtype=np.complex128)
        return self._float

    def eval(self, z: complex) -> complex:
        """Horner evaluation in float arithmetic."""
        acc = 0j
        for c in self.float_coeffs[::-1]:
            acc = acc * z + c
        return acc

    def eval_exact(self, z: QQi) -> QQi:
        acc = QQI_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def conjugate(self) -> "ComplexPoly":
        return ComplexPoly([c.conj() for c in self.coeffs])

    def shift(self, z0: QQi) -> "ComplexPoly":
        """Exact Taylor shift: returns s with s(y) = self(z0 + y)."""
        n = len(self.coeffs)
        work = list(self.coeffs)
        out = []
        for _ in range(n):
            # synthetic division of work by (y - z0); remainder is next coeff
            acc = QQI_ZERO
            for k in range(len(work) - 1, -1, -1):
                acc = acc * z0 + work[k]
                work[k] = acc
            out.append(work[0])
            work = work[1:]
        return ComplexPoly(out)

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return ComplexPoly(out)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-other)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            if self.is_zero() or other.is_zero():
                return ComplexPoly([])
            out = [QQI_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return ComplexPoly(out)
        s = _coerce(other)
        return ComplexPoly([c * s for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ComplexPoly":
        if k < 0:
            raise ValueError("negative power")
        out = ComplexPoly([QQi(1)])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, ComplexPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ComplexPoly({[str(c.re) + ('+' + str(c.im) + 'i' if c.im else '') for c in self.coeffs]})"


def eval_poly(poly: ComplexPoly, z: complex) -> complex:
    return poly.eval(z)


class HarmonicPair:
    """The pair (p, q) defining the harmonic function p(z) + conj(q(z))."""

    __slots__ = ("p", "q", "n", "m")

    def __init__(self, p: ComplexPoly, q: ComplexPoly):
        if p.is_zero():
            raise ValueError("p must be nonzero")
        n, m = p.degree, q.degree
        if n < 1:
            raise ValueError("deg p must be >= 1")
        if n < m:
            raise ValueError(f"requires deg p >= deg q, got {n} < {m}")
        self.p, self.q, self.n, self.m = p, q, n, m

    def eval(self, z: complex) -> complex:
        return self.p.eval(z) + self.q.eval(z).conjugate()

    def __repr__(self):
        return f"HarmonicPair(n={self.n}, m={self.m})"


def harmonic_eval(F: HarmonicPair, z: complex) -> complex:
    return F.eval(z)


class BivariatePoly:
    """Sparse bivariate polynomial, coeffs[(i, j)] -> coefficient of x^i y^j.

    Coefficients are Gaussian rationals; realified systems have purely real
    ones, Taylor shifts at complex points produce genuinely complex ones.
    """

    __slots__ = ("coeffs", "_dense", "_dx", "_dy")

    def __init__(self, coeffs: dict):
        self.coeffs = {k: (v if isinstance(v, QQi) else _coerce(v))
                       for k, v in coeffs.items()
                       if (v if isinstance(v, QQi) else _coerce(v))}
        self._dense = None
        self._dx = None
        self._dy = None

    @property
    def total_degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(i + j for i, j in self.coeffs)

    def coeff(self, i: int, j: int) -> QQi:
        return self.coeffs.get((i, j), QQI_ZERO)

    def eval_exact(self, x: QQi, y: QQi) -> QQi:
        d = self.total_degree
        xp = [QQi(1)]
        yp = [QQi(1)]
        for _ in range(d):
            xp.append(xp[-1] * x)
            yp.append(yp[-1] * y)
        acc = QQI_ZERO
        for (i, j), c in self.coeffs.items():
            acc = acc + c * xp[i] * yp[j]
        return acc

    @property
    def dense(self) -> np.ndarray:
        if self._dense is None:
            d = self.total_degree
            m = np.zeros((d + 1, d + 1), dtype=np.complex128)
            for (i, j), c in self.coeffs.items():
                m[i, j] = c.to_complex()
            self._dense = m
        return self._dense

    def eval(self, x, y):
        """Float evaluation; x, y may be complex scalars or ndarrays."""
        m = self.dense
        acc = 0.0
        for i in range(m.shape[0] - 1, -1, -1):
            row = 0.0
            for j in range(m.shape[1] - 1, -1, -1):
                row = row * y + m[i, j]
            acc = acc * x + row
        return acc

    def diff(self, var: int) -> "BivariatePoly":
        out = {}
        for (i, j), c in self.coeffs.items():
            if var == 0 and i > 0:
                out[(i - 1, j)] = c * i
            elif var == 1 and j > 0:
                out[(i, j - 1)] = c * j
        return BivariatePoly(out)

    def diff_cached(self, var: int) -> "BivariatePoly":
        if var == 0:
            if self._dx is None:
                self._dx = self.diff(0)
            return self._dx
        if self._dy is None:
            self._dy = self.diff(1)
        return self._dy

    def shift(self, vx: QQi, vy: QQi) -> "BivariatePoly":
        """Exact Taylor shift: result(t, u) = self(vx + t, vy + u)."""
        # organize as univariate in x with y-poly coefficients, shift in x,
        # then shift each resulting coefficient poly in y
        dx = max((i for i, _ in self.coeffs), default=0)
        cols = [dict() for _ in range(dx + 1)]
        for (i, j), c in self.coeffs.items():
            cols[i][j] = c
        cols = _shift_rows(cols, vx)
        dy = max((j for col in cols for j in col), default=0)
        out = {}
        for i, col in enumerate(cols):
            row = [col.get(j, QQI_ZERO) for j in range(dy + 1)]
            shifted = _shift_list(row, vy)
            for j, c in enumerate(shifted):
                if c:
                    out[(i, j)] = c
        return BivariatePoly(out)

    def scale_add(self, s: QQi, other: "BivariatePoly", t: QQi) -> "BivariatePoly":
        """s*self + t*other."""
        out = {}
        for (i, j), c in self.coeffs.items():
            out[(i, j)] = s * c
        for (i, j), c in other.coeffs.items():
            out[(i, j)] = out.get((i, j), QQI_ZERO) + t * c
        return BivariatePoly(out)

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"BivariatePoly({len(self.coeffs)} terms, deg {self.total_degree})"


def _shift_list(row, v):
    """Taylor shift of a list of QQi coefficients by scalar v."""
    work = list(row)
    out = []
    for _ in range(len(work)):
        acc = QQI_ZERO
        for k in range(len(work) - 1, -1, -1):
            acc = acc * v + work[k]
            work[k] = acc
        out.append(work[0])
        work = work[1:]
    return out


def _shift_rows(cols, v):
    """Taylor shift in the outer variable for coefficient dicts."""
    work = [dict(c) for c in cols]
    out = []
    for _ in range(len(work)):
        acc = {}
        for k in range(len(work) - 1, -1, -1):
            nxt = {j: c * v for j, c in acc.items()}
            for j, c in work[k].items():
                nxt[j] = nxt.get(j, QQI_ZERO) + c
            acc = {j: c for j, c in nxt.items() if c}
            work[k] = acc
        out.append(work[0])
        work = work[1:]
    return out


class RealSystem:
    """The realified pair (Re F, Im F) as bivariate polynomials in (x, y).

    `pair` keeps the harmonic provenance when the system came from realify;
    the tracker and certifier use it for fast structured evaluation.  It is
    never required for correctness.
    """

    __slots__ = ("f1", "f2", "n", "pair")

    def __init__(self, f1: BivariatePoly, f2: BivariatePoly, n: int,
                 pair: Optional[HarmonicPair] = None):
        self.f1, self.f2, self.n, self.pair = f1, f2, n, pair

    def components(self):
        return (self.f1, self.f2)

    def __repr__(self):
        return f"RealSystem(n={self.n}, pair={'yes' if self.pair else 'no'})"


def realify(F: HarmonicPair) -> RealSystem:
    """Exact expansion of F(x + iy) into (f1, f2) with f1 + i f2 = F.

    Obtained by binomially expanding (x + iy)^k over the rationals.
    """
    acc: dict = {}

    def _accumulate(poly: ComplexPoly, sign_i: int):
        # adds sum_k c_k (x + sign_i*iy)^k to acc
        for k, c in enumerate(poly.coeffs):
            if not c:
                continue
            for j in range(k + 1):
                # (i*sign_i)^j cycles 1, i, -1, -i (times sign pattern)
                b = QQi(math.comb(k, j))
                r = j % 4
                if r == 0:
                    w = b
                elif r == 1:
                    w = QQi(0, sign_i) * b
                elif r == 2:
                    w = -b
                else:
                    w = QQi(0, -sign_i) * b
                key = (k - j, j)
                acc[key] = acc.get(key, QQI_ZERO) + c * w

    _accumulate(F.p, 1)
    _accumulate(F.q.conjugate(), -1)

    f1 = BivariatePoly({k: QQi(v.re) for k, v in acc.items() if v.re})
    f2 = BivariatePoly({k: QQi(v.im) for k, v in acc.items() if v.im})
    return RealSystem(f1, f2, F.n, pair=F)


def jacobian(S: RealSystem, v):
    """2x2 Jacobian of (f1, f2) at v = (x, y).

    Exact (nested tuples of QQi) when the coordinates are QQi, float numpy
    matrix otherwise.
    """
    x, y = v
    if isinstance(x, QQi):
        return (
            (S.f1.diff_cached(0).eval_exact(x, y), S.f1.diff_cached(1).eval_exact(x, y)),
            (S.f2.diff_cached(0).eval_exact(x, y), S.f2.diff_cached(1).eval_exact(x, y)),
        )
    x = complex(x)
    y = complex(y)
    return np.array([
        [S.f1.diff_cached(0).eval(x, y), S.f1.diff_cached(1).eval(x, y)],
        [S.f2.diff_cached(0).eval(x, y), S.f2.diff_cached(1).eval(x, y)],
    ], dtype=np.complex128)


def taylor_shift(S: RealSystem, v) -> RealSystem:
    """Exact shifted system T with T(y) = S(v + y)."""
    x, y = v
    x = x if isinstance(x, QQi) else _coerce(x)
    y = y if isinstance(y, QQi) else _coerce(y)
    return RealSystem(S.f1.shift(x, y), S.f2.shift(x, y), S.n, pair=None)
