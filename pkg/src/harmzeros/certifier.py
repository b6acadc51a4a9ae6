"""Smale alpha-theory certification in exact rational arithmetic.

Each tracked endpoint is rationalized through its exact binary value and
tested with alpha = beta * gamma against the rational threshold
157671/1000000 < (13 - 3*sqrt(17))/4.  Certified points are then proved
pairwise distinct (max-norm separation > 2(beta1 + beta2)) and their
realness decided: a real system maps approximate zeros to approximate
zeros under conjugation, so the associated zero is real exactly when the
point sits within 1/(20*gamma) of its own conjugate, and provably nonreal
when the separation exceeds 4*beta.

Systems with harmonic-pair provenance are bounded through exact univariate
Taylor shifts of p and q in the variables (z, w) = (x + iy, x - iy); the
rows there are constant invertible combinations of (f1, f2), which leaves
the Newton operator h = DS(x)^-1 S(x + y) unchanged, and the change of
displacement variables is absorbed into the degree-k coefficient bounds.
Generic systems fall back to the bivariate Taylor shift.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq, mpz

from .poly import ComplexPoly, RealSystem, jacobian, taylor_shift
from .rational import (QQi, QQI_ZERO, abs_lb, abs_ub, decimal_string,
                       inv_abs_ub, root_ub)
from .tracker import (PathStatus, SingularJacobianError, newton_refine,
                      solve_system)

__all__ = [
    "ALPHA_THRESHOLD",
    "Certificate",
    "CertifiedCount",
    "Realness",
    "alpha_test",
    "beta",
    "certificates_json",
    "certified_count",
    "certify_distinct",
    "certify_real",
    "gamma_bound",
]

# strict rational under-approximation of alpha_0 = (13 - 3*sqrt(17))/4
# = 0.1576707807...; note 157671/1000000 slightly EXCEEDS alpha_0, so the
# commonly quoted 6-digit truncation is rounded down one more digit here
ALPHA_THRESHOLD = mpq(15767, 100000)
# realness needs the tighter alpha < 3/100 so that the basin argument
# covers both the point and its conjugate
REAL_ALPHA = mpq(3, 100)

_I = QQi(0, 1)
_HALF = QQi(mpq(1, 2))
_MINUS_HALF_I = QQi(0, mpq(-1, 2))


class Realness(enum.Enum):
    Real = "real"
    NonReal = "nonreal"
    Unknown = "unknown"


@dataclass
class Certificate:
    point: Tuple[QQi, QQi]
    alpha_ub: mpq
    beta_ub: mpq
    gamma_ub: mpq
    is_approx_zero: bool
    realness: Realness = Realness.Unknown
    singular: bool = False


@dataclass
class CertifiedCount:
    total_distinct: int
    real_count: int
    nonreal_pairs: int
    complete: bool


def _rationalize(v) -> Tuple[QQi, QQi]:
    out = []
    for c in v:
        if isinstance(c, QQi):
            out.append(c)
        else:
            out.append(QQi.from_complex(complex(c)))
    return (out[0], out[1])


def _solve2(J, r1: QQi, r2: QQi) -> Tuple[QQi, QQi]:
    (a, b), (c, d) = J
    det = a * d - b * c
    if not det:
        raise SingularJacobianError("exactly singular Jacobian")
    return ((r1 * d - r2 * b) / det, (a * r2 - c * r1) / det)


# ---------------------------------------------------------------------------
# structured bounds for systems with harmonic-pair provenance


class _PairShift:
    """Exact Taylor data of the (z, w)-frame rows at one point.

    Row 1 is p(z) + conj_q(w), row 2 is q(z) + conj_p(w); `za[k]` etc. are
    the degree-k Taylor coefficients of the z-part and w-part of each row.
    """

    __slots__ = ("za", "zb", "wa", "wb", "degree")

    def __init__(self, S: RealSystem, x: QQi, y: QQi):
        pair = S.pair
        z0 = x + _I * y
        w0 = x - _I * y
        n = pair.p.degree
        self.degree = n

        def padded(poly: ComplexPoly, at: QQi):
            cs = list(poly.shift(at).coeffs)
            return cs + [QQI_ZERO] * (n + 1 - len(cs))

        self.za = padded(pair.p, z0)
        self.zb = padded(pair.q, z0)
        self.wa = padded(pair.q.conjugate(), w0)
        self.wb = padded(pair.p.conjugate(), w0)

    def value(self) -> Tuple[QQi, QQi]:
        return (self.za[0] + self.wa[0], self.zb[0] + self.wb[0])

    def jac(self):
        return ((self.za[1], self.wa[1]), (self.zb[1], self.wb[1]))


def _pair_beta(ps: _PairShift) -> mpq:
    f1, f2 = ps.value()
    n1, n2 = _solve2(ps.jac(), f1, f2)
    # (z, w) Newton step back to (x, y) coordinates
    sx = (n1 + n2) * _HALF
    sy = (n1 - n2) * _MINUS_HALF_I
    return max(abs_ub(sx), abs_ub(sy))


def _pair_gamma(ps: _PairShift) -> mpq:
    (a, b), (c, d) = ps.jac()
    det = a * d - b * c
    if not det:
        raise SingularJacobianError("exactly singular Jacobian")
    inv_det = inv_abs_ub(det)
    # |re| + |im| is a cheap valid upper bound on |.|; the numerators of
    # J^-1 applied to the coefficient columns avoid exact division entirely
    def mag(z: QQi) -> mpq:
        return abs(z.re) + abs(z.im)

    best = mpq(0)
    two_k = mpz(4)
    for k in range(2, ps.degree + 1):
        zk1, zk2, wk1, wk2 = ps.za[k], ps.zb[k], ps.wa[k], ps.wb[k]
        nz1 = zk1 * d - zk2 * b
        nz2 = a * zk2 - c * zk1
        nw1 = wk1 * d - wk2 * b
        nw2 = a * wk2 - c * wk1
        # substituting (u', v') = (u + iv, u - iv) multiplies the degree-k
        # coefficient sum by at most 2^k
        bk = two_k * inv_det * max(mag(nz1) + mag(nw1), mag(nz2) + mag(nw2))
        if bk:
            best = max(best, root_ub(bk, k - 1))
        two_k <<= 1
    return best


# ---------------------------------------------------------------------------
# generic dense bounds via the bivariate Taylor shift


def _generic_h(S: RealSystem, x: QQi, y: QQi):
    T = taylor_shift(S, (x, y))
    g1, g2 = T.f1, T.f2
    J = ((g1.coeff(1, 0), g1.coeff(0, 1)), (g2.coeff(1, 0), g2.coeff(0, 1)))
    return g1, g2, J


def _generic_beta(S: RealSystem, x: QQi, y: QQi) -> mpq:
    g1, g2, J = _generic_h(S, x, y)
    n1, n2 = _solve2(J, g1.coeff(0, 0), g2.coeff(0, 0))
    return max(abs_ub(n1), abs_ub(n2))


def _generic_gamma(S: RealSystem, x: QQi, y: QQi) -> mpq:
    g1, g2, J = _generic_h(S, x, y)
    (a, b), (c, d) = J
    det = a * d - b * c
    if not det:
        raise SingularJacobianError("exactly singular Jacobian")
    sums: dict = {}
    for poly, row in ((g1, 0), (g2, 1)):
        for (i, j), coeff in poly.coeffs.items():
            k = i + j
            if k < 2:
                continue
            h1 = (coeff * d if row == 0 else -coeff * b) / det
            h2 = (-coeff * c if row == 0 else coeff * a) / det
            s1, s2 = sums.get(k, (mpq(0), mpq(0)))
            sums[k] = (s1 + abs_ub(h1), s2 + abs_ub(h2))
    best = mpq(0)
    for k, (s1, s2) in sums.items():
        bk = max(s1, s2)
        if bk:
            best = max(best, root_ub(bk, k - 1))
    return best


# ---------------------------------------------------------------------------
# public operations


def beta(S: RealSystem, v) -> mpq:
    """Exact upper bound on the max-norm of the Newton step at v."""
    x, y = _rationalize(v)
    if S.pair is not None:
        return _pair_beta(_PairShift(S, x, y))
    return _generic_beta(S, x, y)


def gamma_bound(S: RealSystem, v) -> mpq:
    """Rational upper bound for Smale's gamma at v (max-norm)."""
    x, y = _rationalize(v)
    if S.pair is not None:
        return _pair_gamma(_PairShift(S, x, y))
    return _generic_gamma(S, x, y)


def alpha_test(S: RealSystem, v) -> Certificate:
    """alpha = beta * gamma bound; certified iff alpha < 157671/1000000."""
    x, y = _rationalize(v)
    try:
        if S.pair is not None:
            ps = _PairShift(S, x, y)
            b = _pair_beta(ps)
            g = _pair_gamma(ps)
        else:
            b = _generic_beta(S, x, y)
            g = _generic_gamma(S, x, y)
    except SingularJacobianError:
        z = mpq(0)
        return Certificate((x, y), z, z, z, False, Realness.Unknown,
                           singular=True)
    a = b * g
    return Certificate((x, y), a, b, g, a < ALPHA_THRESHOLD)


def certify_distinct(c1: Certificate, c2: Certificate) -> bool:
    """True iff the associated zeros are provably distinct."""
    sep = mpq(0)
    for u, w in zip(c1.point, c2.point):
        sep = max(sep, abs_lb(u - w))
    return sep > 2 * (c1.beta_ub + c2.beta_ub)


def certify_real(S: RealSystem, c: Certificate) -> Realness:
    """Decide whether the zero associated with a certified point is real.

    conj(x) is an approximate zero of the real system with the same beta
    and gamma; if both points lie in one quadratic-convergence basin their
    zeros coincide, hence the zero equals its own conjugate.
    """
    if not c.is_approx_zero:
        return Realness.Unknown
    x, y = c.point
    sep = 2 * max(abs(x.im), abs(y.im))  # exact max-norm of x - conj(x)
    if sep == 0:
        # exactly real coordinates: x = conj(x), so the associated zero is
        # its own conjugate by uniqueness within the convergence basin
        return Realness.Real
    if c.alpha_ub < REAL_ALPHA and sep * (20 * c.gamma_ub) < 1:
        return Realness.Real
    if sep > 4 * c.beta_ub:
        return Realness.NonReal
    return Realness.Unknown


# ---------------------------------------------------------------------------
# refinement and the counting loop


_DYADIC_BITS = 320


def _dyadic(q: mpq) -> mpq:
    scaled = q * (mpz(1) << _DYADIC_BITS)
    return mpq(int(scaled.numerator // scaled.denominator), mpz(1) << _DYADIC_BITS)


def _exact_newton_step(S: RealSystem, x: QQi, y: QQi) -> Tuple[QQi, QQi]:
    """One exact Newton step, rounded to dyadic coordinates so repeated
    steps keep bounded bit size (the 2^-320 rounding is far below every
    certified radius)."""
    if S.pair is not None:
        pair = S.pair
        z0 = x + _I * y
        w0 = x - _I * y
        pz = pair.p.eval_exact(z0)
        qz = pair.q.eval_exact(z0)
        qbw = pair.q.conjugate().eval_exact(w0)
        pbw = pair.p.conjugate().eval_exact(w0)
        dpz = pair.p.derivative().eval_exact(z0)
        dqz = pair.q.derivative().eval_exact(z0)
        dqbw = pair.q.conjugate().derivative().eval_exact(w0)
        dpbw = pair.p.conjugate().derivative().eval_exact(w0)
        n1, n2 = _solve2(((dpz, dqbw), (dqz, dpbw)),
                         pz + qbw, qz + pbw)
        sx = (n1 + n2) * _HALF
        sy = (n1 - n2) * _MINUS_HALF_I
    else:
        J = jacobian(S, (x, y))
        sx, sy = _solve2(J, S.f1.eval_exact(x, y), S.f2.eval_exact(x, y))
    nx, ny = x - sx, y - sy
    return (QQi._make(_dyadic(nx.re), _dyadic(nx.im)),
            QQi._make(_dyadic(ny.re), _dyadic(ny.im)))


def _refine(S: RealSystem, pt: Tuple[QQi, QQi], round_no: int) -> Tuple[QQi, QQi]:
    # float Newton first (cheap); exact dyadic Newton once the float
    # iteration has hit its precision floor
    if round_no < 2:
        try:
            v = newton_refine(S, (pt[0].to_complex(), pt[1].to_complex()), 64)
            return _rationalize(v)
        except SingularJacobianError:
            pass
    # exact steps are frame-independent and immune to the catastrophic
    # cancellation that stalls float Newton near high-order clusters;
    # iterate through the slow (k-1)/k linear phase of a multiplicity-k
    # cluster until the quadratic basin is reached
    cur = pt
    for _ in range(64):
        nxt = _exact_newton_step(S, cur[0], cur[1])
        move = max(abs((nxt[0] - cur[0]).to_complex()),
                   abs((nxt[1] - cur[1]).to_complex()))
        scale = max(1.0, abs(nxt[0].to_complex()), abs(nxt[1].to_complex()))
        cur = nxt
        if move < 1e-40 * scale:
            break
    return cur


def certified_count(S: RealSystem, endpoints: Sequence,
                    max_rounds: int = 10) -> Tuple[CertifiedCount, List[Certificate]]:
    """Certify a full endpoint list and produce the zero count of S.

    complete = every endpoint certified, all pairs distinct, all realness
    decided; on completeness total_distinct equals len(endpoints) and
    real_count + 2*nonreal_pairs accounts for every certified zero.
    """
    pts = [_rationalize(e) for e in endpoints]
    certs: List[Optional[Certificate]] = [None] * len(pts)

    def evaluate(i):
        c = alpha_test(S, pts[i])
        if c.is_approx_zero:
            c.realness = certify_real(S, c)
        certs[i] = c

    for i in range(len(pts)):
        evaluate(i)

    def live_failures():
        # pairs that refined to the same coordinates are the same zero
        # reached twice; no amount of refinement separates them, so they
        # are handled by the duplicate collapse below, not by retries
        return {p for p in _distinctness_failures(certs)
                if pts[p[0]] != pts[p[1]]}

    bad_pairs: set = set()
    for round_no in range(max_rounds):
        todo = {i for i, c in enumerate(certs)
                if not c.is_approx_zero or c.realness is Realness.Unknown}
        if not todo:
            bad_pairs = live_failures()
            if not bad_pairs:
                break
            todo = {i for pair in bad_pairs for i in pair}
        for i in todo:
            pts[i] = _refine(S, pts[i], round_no)
            evaluate(i)
    else:
        bad_pairs = live_failures()

    # collapse endpoints whose refined coordinates coincide exactly: two
    # paths landed on one zero (one of the raw endpoints only looked
    # converged through the float backward-error floor), so the count of
    # distinct zeros is short and the run is incomplete
    reps = {}
    for i, c in enumerate(certs):
        if c.is_approx_zero:
            reps.setdefault(pts[i], i)
    certified = [certs[i] for i in sorted(reps.values())]
    decided = all(c.realness is not Realness.Unknown for c in certified)
    real_count = sum(1 for c in certified if c.realness is Realness.Real)
    nonreal = sum(1 for c in certified if c.realness is Realness.NonReal)
    complete = (len(certified) == len(pts) == S.n * S.n and decided
                and not bad_pairs and nonreal % 2 == 0)
    return (CertifiedCount(len(certified), real_count, nonreal // 2, complete),
            certs)


def solve_and_count(S: RealSystem, opts,
                    attempts: int = 3):
    """Track all paths and certify the count, re-solving the whole system
    with a fresh seed when certification discovers the endpoint list was
    defective (e.g. two paths produced the same zero, which float residuals
    cannot detect near the backward-error floor).

    Returns (CertifiedCount, certificates, path results).
    """
    from dataclasses import replace

    best = None
    for k in range(attempts):
        o = opts if k == 0 else \
            replace(opts, seed=(opts.seed + k * 0x9E3779B9) % (1 << 63))
        results = solve_system(S, o)
        endpoints = [r.endpoint for r in results
                     if r.status is PathStatus.Converged]
        cc, certs = certified_count(S, endpoints)
        if best is None or cc.total_distinct > best[0].total_distinct:
            best = (cc, certs, results)
        if cc.complete:
            break
    return best


def _distinctness_failures(certs) -> set:
    ok = [(i, c) for i, c in enumerate(certs)
          if c is not None and c.is_approx_zero]
    bad = set()
    for a in range(len(ok)):
        for b in range(a + 1, len(ok)):
            if not certify_distinct(ok[a][1], ok[b][1]):
                bad.add((ok[a][0], ok[b][0]))
    return bad


def certificates_json(certs: Sequence[Certificate]) -> str:
    """JSON dump: decimal strings truncated to 30 digits."""
    out = []
    for c in certs:
        x, y = c.point
        out.append({
            "point": [[decimal_string(x.re), decimal_string(x.im)],
                      [decimal_string(y.re), decimal_string(y.im)]],
            "alpha": decimal_string(c.alpha_ub),
            "beta": decimal_string(c.beta_ub),
            "gamma": decimal_string(c.gamma_ub),
            "real": c.realness is Realness.Real,
        })
    return json.dumps(out, indent=1)
