"""Homotopy continuation for the realified harmonic system.

Builds the total-degree start system (u1^n - r1, u2^n - r2), multiplies it
by a random unit-modulus constant, and tracks all n^2 paths from t = 1 to
t = 0 with an adaptive fourth-order predictor / Newton corrector.  All paths
of one system are advanced in lockstep as numpy arrays; per-path arithmetic
is elementwise, so results are independent of how paths are batched.

Systems that carry their harmonic provenance are tracked in the linearly
equivalent (z, w) = (x + iy, x - iy) frame (see _PairEval), which is far
better conditioned in floats; endpoints are reported in (x, y).

Residuals are backward-error scaled: |f_i| is divided by the coefficient
magnitude sum at the point's coordinate radii, so tolerances remain
meaningful for badly scaled inputs (e.g. binomially weighted ensembles).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .poly import HarmonicPair, RealSystem

__all__ = [
    "PathStatus",
    "TrackOptions",
    "PathResult",
    "StartSystem",
    "Homotopy",
    "SingularJacobianError",
    "total_degree_start",
    "make_homotopy",
    "track_path",
    "solve_system",
    "newton_refine",
]

DIVERGENCE_CUTOFF = 1e10
# below this t the step size follows t down geometrically instead of aiming
# straight at t=0
T_ENDGAME = 1e-2


class PathStatus(enum.Enum):
    Converged = "converged"
    MaxSteps = "max_steps"
    StepUnderflow = "step_underflow"
    Diverged = "diverged"


class SingularJacobianError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TrackOptions:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_newton_iters: int = 3
    tracking_tolerance: float = 1e-8
    final_tolerance: float = 1e-12
    max_steps: int = 10000
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.min_step < self.initial_step <= 0.1):
            raise ValueError("requires 0 < min_step < initial_step <= 0.1")
        if self.tracking_tolerance <= 0 or self.final_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class PathResult:
    endpoint: Tuple[complex, complex]
    status: PathStatus
    residual: float
    steps_taken: int
    path_index: int


def _cpow(v: np.ndarray, n: int) -> np.ndarray:
    """v**n by binary exponentiation (multiplications only, deterministic)."""
    out = np.ones_like(v)
    base = v.copy()
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def _mag(z: np.ndarray) -> np.ndarray:
    """Cheap deterministic |z| upper bound: |Re| + |Im|."""
    return np.abs(z.real) + np.abs(z.imag)


class _PairEval:
    """Evaluates the zero set through its harmonic provenance, in (z, w).

    Under z = x + iy, w = x - iy the zeros of the realified pair (f1, f2)
    in C^2 correspond linearly and bijectively to the solutions of
        e1 = p(z) + conj_q(w) = 0
        e2 = q(z) + conj_p(w) = 0
    (conj_* evaluates the coefficient-conjugated polynomial).  This frame is
    tracked instead of (x, y) because float conditioning depends on how the
    two equations are combined, and two combinations cover the hard cases:

    mode "pq" uses (e1, e2) directly: e1 is dominated by z-terms and e2 by
    w-terms, so the Jacobian stays numerically invertible at zeros with very
    unbalanced |z|, |w| (common when m << n).

    mode "sd" uses the half-sum/half-difference rows s = p + q, d = p - q:
        A = s(z) + conj_s(w),   B = d(z) - conj_d(w)
    which is the robust combination when p ~ +-q (the extremal family has
    s = 2 z^n exactly), where e1 and e2 are parallel to working precision.

    Both modes are constant invertible row-combinations of the same raw
    system, so a homotopy built in one mode has exactly the same solution
    paths as in the other; only the float roundoff differs.  Each evaluation
    costs two stacked univariate Horner passes with derivative.
    """

    frame = "zw"

    def __init__(self, pair: HarmonicPair, mode: str = "pq"):
        n = pair.n
        cp = np.zeros(n + 1, dtype=np.complex128)
        cq = np.zeros(n + 1, dtype=np.complex128)
        cp[: len(pair.p.float_coeffs)] = pair.p.float_coeffs
        cq[: len(pair.q.float_coeffs)] = pair.q.float_coeffs
        self.mode = mode
        # raw_norm scales the start system so that both modes realize the
        # same underlying homotopy (target rows / raw_norm, start rows O(1))
        self.raw_norm = max(float(np.abs(cp).max()), float(np.abs(cq).max()),
                            1e-300)
        if mode == "pq":
            self.rows_z = np.stack([cp, cq])             # p(z), q(z)
            self.rows_w = np.conj(np.stack([cq, cp]))    # conj_q(w), conj_p(w)
        elif mode == "sd":
            s, d = cp + cq, cp - cq
            self.rows_z = np.stack([s, d])               # s(z), d(z)
            self.rows_w = np.stack([np.conj(s), -np.conj(d)])
        else:
            raise ValueError("mode must be 'pq' or 'sd'")
        self.abs_z = np.abs(self.rows_z)
        self.abs_w = np.abs(self.rows_w)
        self.n = n
        self.component_norms = (
            max(float(self.abs_z[0].max()), float(self.abs_w[0].max()), 1e-300),
            max(float(self.abs_z[1].max()), float(self.abs_w[1].max()), 1e-300),
        )

    def mix_start(self, gz, gw, dgz, dgw):
        """Start-system rows and Jacobian entries in this mode's combination."""
        if self.mode == "pq":
            z0 = np.zeros_like(gz)
            return gz * self.raw_norm, gw * self.raw_norm, \
                dgz * self.raw_norm, z0, z0, dgw * self.raw_norm
        c = self.raw_norm
        return (gz + gw) * c, (gz - gw) * c, dgz * c, dgw * c, dgz * c, -dgw * c

    def start_scales(self, r1, r2):
        c = self.raw_norm
        if self.mode == "pq":
            return (_cpow(r1, self.n) + 1.0) * c, (_cpow(r2, self.n) + 1.0) * c
        gs = (_cpow(r1, self.n) + _cpow(r2, self.n) + 2.0) * c
        return gs, gs

    @staticmethod
    def _horner_vd(coeffs: np.ndarray, z: np.ndarray):
        """(values, derivatives) of the stacked polynomials at z."""
        val = np.zeros((coeffs.shape[0], z.shape[0]), dtype=np.complex128)
        der = np.zeros_like(val)
        for k in range(coeffs.shape[1] - 1, -1, -1):
            der = der * z + val
            val = val * z + coeffs[:, k, None]
        return val, der

    def value_and_jac(self, u1, u2):
        vz, dz = self._horner_vd(self.rows_z, u1)
        vw, dw = self._horner_vd(self.rows_w, u2)
        e1 = vz[0] + vw[0]
        e2 = vz[1] + vw[1]
        return e1, e2, dz[0], dw[0], dz[1], dw[1]

    def value(self, u1, u2):
        vz, _ = self._horner_vd(self.rows_z, u1)
        vw, _ = self._horner_vd(self.rows_w, u2)
        return vz[0] + vw[0], vz[1] + vw[1]

    def scales(self, u1, u2):
        r1 = _mag(u1)
        r2 = _mag(u2)
        az = np.zeros((2,) + np.shape(u1))
        aw = np.zeros_like(az)
        for k in range(self.abs_z.shape[1] - 1, -1, -1):
            az = az * r1 + self.abs_z[:, k, None]
            aw = aw * r2 + self.abs_w[:, k, None]
        s = az + aw
        return np.maximum(s[0], 1e-300), np.maximum(s[1], 1e-300)


class _DenseEval:
    """Fallback evaluator from the dense bivariate coefficient matrices."""

    frame = "xy"

    def __init__(self, S: RealSystem):
        d = max(S.f1.total_degree, S.f2.total_degree, S.n)
        self.n = S.n

        def mat(poly):
            m = np.zeros((d + 1, d + 1), dtype=np.complex128)
            for (i, j), c in poly.coeffs.items():
                m[i, j] = c.to_complex()
            return m

        self.c1, self.c2 = mat(S.f1), mat(S.f2)
        self.d1x, self.d1y = _dmat(self.c1, 0), _dmat(self.c1, 1)
        self.d2x, self.d2y = _dmat(self.c2, 0), _dmat(self.c2, 1)
        deg = np.add.outer(np.arange(d + 1), np.arange(d + 1))
        self.abs1 = np.array([np.abs(self.c1)[deg == k].sum() for k in range(2 * d + 1)])
        self.abs2 = np.array([np.abs(self.c2)[deg == k].sum() for k in range(2 * d + 1)])
        self.component_norms = (max(float(np.abs(self.c1).max()), 1e-300),
                                max(float(np.abs(self.c2).max()), 1e-300))

    def mix_start(self, gz, gw, dgz, dgw):
        c1, c2 = self.component_norms
        z0 = np.zeros_like(gz)
        return gz * c1, gw * c2, dgz * c1, z0, z0, dgw * c2

    def start_scales(self, r1, r2):
        gs = _cpow(np.maximum(r1, r2), self.n) + 1.0
        c1, c2 = self.component_norms
        return gs * c1, gs * c2

    @staticmethod
    def _ev(m, x, y):
        acc = np.zeros_like(x)
        for i in range(m.shape[0] - 1, -1, -1):
            row = np.zeros_like(y)
            for j in range(m.shape[1] - 1, -1, -1):
                row = row * y + m[i, j]
            acc = acc * x + row
        return acc

    def value(self, v1, v2):
        return self._ev(self.c1, v1, v2), self._ev(self.c2, v1, v2)

    def value_and_jac(self, v1, v2):
        f1, f2 = self.value(v1, v2)
        return (f1, f2,
                self._ev(self.d1x, v1, v2), self._ev(self.d1y, v1, v2),
                self._ev(self.d2x, v1, v2), self._ev(self.d2y, v1, v2))

    def scales(self, v1, v2):
        r = np.maximum(_mag(v1), _mag(v2))
        s1 = np.zeros_like(r)
        s2 = np.zeros_like(r)
        for k in range(len(self.abs1) - 1, -1, -1):
            s1 = s1 * r + self.abs1[k]
            s2 = s2 * r + self.abs2[k]
        return np.maximum(s1, 1e-300), np.maximum(s2, 1e-300)


def _dmat(m, var):
    out = np.zeros_like(m)
    if var == 0:
        for i in range(1, m.shape[0]):
            out[i - 1, :] = i * m[i, :]
    else:
        for j in range(1, m.shape[1]):
            out[:, j - 1] = j * m[:, j]
    return out


def _evaluator(S: RealSystem):
    if S.pair is not None:
        return _PairEval(S.pair)
    return _DenseEval(S)


def _to_frame(frame: str, pt: Tuple[complex, complex]) -> Tuple[complex, complex]:
    """(x, y) -> tracked coordinates."""
    if frame == "zw":
        return pt[0] + 1j * pt[1], pt[0] - 1j * pt[1]
    return pt


def _from_frame(frame: str, u1, u2):
    """Tracked coordinates -> (x, y)."""
    if frame == "zw":
        return 0.5 * (u1 + u2), -0.5j * (u1 - u2)
    return u1, u2


@dataclass(frozen=True)
class StartSystem:
    """g = (v1^n - r1, v2^n - r2) with |r1| = |r2| = 1."""
    n: int
    r1: complex
    r2: complex

    def value(self, v1, v2):
        return _cpow(v1, self.n) - self.r1, _cpow(v2, self.n) - self.r2

    def jac_diag(self, v1, v2):
        n = self.n
        return n * _cpow(v1, n - 1), n * _cpow(v2, n - 1)

    def points(self) -> List[Tuple[complex, complex]]:
        n = self.n
        a1 = (np.angle(self.r1) + 2.0 * np.pi * np.arange(n)) / n
        a2 = (np.angle(self.r2) + 2.0 * np.pi * np.arange(n)) / n
        roots1 = np.cos(a1) + 1j * np.sin(a1)
        roots2 = np.cos(a2) + 1j * np.sin(a2)
        return [(complex(z1), complex(z2)) for z1 in roots1 for z2 in roots2]


class Homotopy:
    """H(v, t) = gamma * t * start(v) + (1 - t) * target(v).

    Both sides are expressed in the evaluator's row combination and each row
    is normalized by its coefficient norm, so the blend with the O(1) start
    system stays balanced in t (Kostlan coefficients reach ~1e4 otherwise)
    and the underlying raw homotopy -- hence the set of solution paths -- is
    identical across evaluator modes.
    """

    def __init__(self, target: RealSystem, start: StartSystem, gamma: complex,
                 mode: Optional[str] = None):
        self.target = target
        self.start = start
        self.gamma = gamma
        self.degrees = (target.n, target.n)
        if mode is not None and target.pair is not None:
            self.ev = _PairEval(target.pair, mode)
        else:
            self.ev = _evaluator(target)
        c1, c2 = self.ev.component_norms
        self.inv1, self.inv2 = 1.0 / c1, 1.0 / c2

    def _start_rows(self, v1, v2):
        gz, gw = self.start.value(v1, v2)
        dgz, dgw = self.start.jac_diag(v1, v2)
        return self.ev.mix_start(gz, gw, dgz, dgw)

    def h_all(self, v1, v2, t):
        """H, its Jacobian entries, and dH/dt at (v, t)."""
        f1, f2, j11, j12, j21, j22 = self.ev.value_and_jac(v1, v2)
        g1, g2, b11, b12, b21, b22 = self._start_rows(v1, v2)
        gt = self.gamma * t
        omt = 1.0 - t
        h1 = (gt * g1 + omt * f1) * self.inv1
        h2 = (gt * g2 + omt * f2) * self.inv2
        a11 = (gt * b11 + omt * j11) * self.inv1
        a12 = (gt * b12 + omt * j12) * self.inv1
        a21 = (gt * b21 + omt * j21) * self.inv2
        a22 = (gt * b22 + omt * j22) * self.inv2
        ht1 = (self.gamma * g1 - f1) * self.inv1
        ht2 = (self.gamma * g2 - f2) * self.inv2
        return h1, h2, a11, a12, a21, a22, ht1, ht2

    def h_value(self, v1, v2, t):
        f1, f2 = self.ev.value(v1, v2)
        g1, g2, _, _, _, _ = self._start_rows(v1, v2)
        gt = self.gamma * t
        omt = 1.0 - t
        return (gt * g1 + omt * f1) * self.inv1, (gt * g2 + omt * f2) * self.inv2

    def h_scales(self, v1, v2, t):
        s1, s2 = self.ev.scales(v1, v2)
        gs1, gs2 = self.ev.start_scales(_mag(v1), _mag(v2))
        return ((t * gs1 + (1.0 - t) * s1) * self.inv1,
                (t * gs2 + (1.0 - t) * s2) * self.inv2)


def _unit_circle(rng: np.random.Generator) -> complex:
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return complex(np.cos(theta), np.sin(theta))


def total_degree_start(n: int, seed: int):
    """Start system with seeded random unit-circle constants and its n^2 roots."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
    start = StartSystem(n, _unit_circle(rng), _unit_circle(rng))
    return start, start.points()


def make_homotopy(target: RealSystem, seed: int):
    """Homotopy to the total-degree start system; gamma seeded on the unit circle."""
    start, points = total_degree_start(target.n, seed)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(2,)))
    gamma = _unit_circle(rng)
    return Homotopy(target, start, gamma), points


def _solve2(a11, a12, a21, a22, b1, b2):
    det = a11 * a22 - a12 * a21
    with np.errstate(divide="ignore", invalid="ignore"):
        x1 = (b1 * a22 - b2 * a12) / det
        x2 = (a11 * b2 - a21 * b1) / det
    return x1, x2


def track_many(h: Homotopy, starts: Sequence[Tuple[complex, complex]],
               opts: TrackOptions,
               path_indices: Optional[Sequence[int]] = None,
               anchors: Sequence[Tuple[complex, complex]] = ()) -> List[PathResult]:
    """Track a batch of paths in lockstep.  Output order follows `starts`.

    `anchors` are fixed points (e.g. endpoints already found by other paths)
    included in the nearest-neighbour distances that gate the exit to t=0.
    """
    # diverging paths deliberately run into inf/nan and are culled by the
    # finiteness checks; keep numpy quiet about it
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _track_many(h, starts, opts, path_indices, anchors)


def _track_many(h, starts, opts, path_indices, anchors):
    N = len(starts)
    if path_indices is None:
        path_indices = list(range(N))
    anc1 = np.array([a[0] for a in anchors], dtype=np.complex128)
    anc2 = np.array([a[1] for a in anchors], dtype=np.complex128)
    v1 = np.array([s[0] for s in starts], dtype=np.complex128)
    v2 = np.array([s[1] for s in starts], dtype=np.complex128)
    t = np.ones(N)
    dt = np.full(N, opts.initial_step)
    succ = np.zeros(N, dtype=np.int64)
    steps = np.zeros(N, dtype=np.int64)
    # 0 active, 1 at t=0 (awaiting polish), 2 underflow, 3 max steps, 4 diverged
    state = np.zeros(N, dtype=np.int8)

    def rhs(p1, p2, tt):
        _, _, a11, a12, a21, a22, ht1, ht2 = h.h_all(p1, p2, tt)
        k1, k2 = _solve2(a11, a12, a21, a22, ht1, ht2)
        return -k1, -k2

    while True:
        act = np.flatnonzero(state == 0)
        if act.size == 0:
            break
        a1, a2, at = v1[act], v2[act], t[act]
        # distance to the nearest other path, used to decide when a path may
        # safely leave the homotopy for the t=0 polish (clustered targets)
        w1 = np.concatenate([v1, anc1])
        w2 = np.concatenate([v2, anc2])
        D = _mag(a1[:, None] - w1[None, :]) + _mag(a2[:, None] - w2[None, :])
        D[np.arange(act.size), act] = np.inf
        D = np.where(np.isfinite(D), D, np.inf)
        nnd = D.min(axis=1)
        # below t=0.01 approach t=0 geometrically: paths into tight clusters
        # only reach their basins at very small t
        dte = np.where(at >= T_ENDGAME,
                       np.minimum(dt[act], at),
                       np.minimum(dt[act], 0.5 * at))
        dlt = -dte
        # fourth-order predictor on the Davidenko ODE
        k11, k12 = rhs(a1, a2, at)
        k21, k22 = rhs(a1 + 0.5 * dlt * k11, a2 + 0.5 * dlt * k12, at + 0.5 * dlt)
        k31, k32 = rhs(a1 + 0.5 * dlt * k21, a2 + 0.5 * dlt * k22, at + 0.5 * dlt)
        k41, k42 = rhs(a1 + dlt * k31, a2 + dlt * k32, at + dlt)
        p1 = a1 + (dlt / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        p2 = a2 + (dlt / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
        tn = at - dte
        pred_disp = np.maximum(_mag(p1 - a1), _mag(p2 - a2))
        # Newton correction at the new t
        corr = np.zeros_like(pred_disp)
        for _ in range(opts.max_newton_iters):
            h1, h2, a11, a12, a21, a22, _, _ = h.h_all(p1, p2, tn)
            d1, d2 = _solve2(a11, a12, a21, a22, h1, h2)
            corr = corr + np.maximum(_mag(d1), _mag(d2))
            p1 = p1 - d1
            p2 = p2 - d2
        h1, h2 = h.h_value(p1, p2, tn)
        s1, s2 = h.h_scales(p1, p2, tn)
        res = np.maximum(_mag(h1) / s1, _mag(h2) / s2)
        finite = np.isfinite(p1) & np.isfinite(p2)
        # path-jumping guard: the correction must stay small relative to the
        # predictor step, otherwise the step landed in another path's basin
        # corrections sized well below the nearest-neighbour gap cannot jump
        # basins, so they are always admissible
        guard = np.maximum(0.05 * nnd,
                           np.maximum(0.5 * pred_disp,
                                      1e-8 * (1.0 + np.maximum(_mag(a1),
                                                               _mag(a2)))))
        move = np.maximum(_mag(p1 - a1), _mag(p2 - a2))
        # a jump straight to t=0 is only allowed when the whole move is small
        # against the nearest neighbour, otherwise basins of clustered zeros mix
        safe_end = move <= 0.4 * nnd
        ok = (res <= opts.tracking_tolerance) & finite & (corr <= guard) \
            & (safe_end | (tn > 0.0))

        gidx = act
        okg = gidx[ok]
        v1[okg] = p1[ok]
        v2[okg] = p2[ok]
        t[okg] = tn[ok]
        succ[okg] += 1
        grow = okg[succ[okg] >= 5]
        dt[grow] = np.minimum(dt[grow] * 1.25, min(0.1, 2.0 * opts.initial_step))
        succ[grow] = 0
        bad = gidx[~ok]
        dt[bad] = dt[bad] * 0.5
        succ[bad] = 0
        steps[gidx] += 1

        # release to the t=0 polish: either t hit 0 exactly, or the path has
        # settled (movement per halving of t is negligible next to the gap to
        # the nearest other path), or t has underflowed to nothing
        settle = np.zeros(N, dtype=bool)
        # the movement test is only meaningful when the step spanned a full
        # halving of t; a tiny dt after rejections makes any path look settled
        floor = 1e-14 * (1.0 + np.maximum(_mag(p1), _mag(p2)))
        settle[okg] = (tn[ok] < T_ENDGAME) & (dte[ok] >= 0.499 * at[ok]) & \
            (move[ok] <= np.maximum(1e-2 * nnd[ok], floor[ok]))
        done_now = okg[(t[okg] <= 0.0) | settle[okg]]
        state[done_now] = 1
        # t (or dt) exhausted double precision: hand whatever we have to the
        # t=0 polish rather than spinning on denormals
        stuck = gidx[(state[gidx] == 0) & (t[gidx] < 1e-280)]
        state[stuck] = 1
        big = gidx[np.maximum(_mag(v1[gidx]), _mag(v2[gidx])) > DIVERGENCE_CUTOFF]
        state[big] = 4
        under = bad[dt[bad] < opts.min_step * np.minimum(1.0, t[bad])]
        state[under] = 2
        over = gidx[(steps[gidx] >= opts.max_steps) & (state[gidx] == 0)]
        state[over] = 3

    # Newton polish at t = 0
    done = np.flatnonzero(state == 1)
    resid = np.full(N, np.inf)
    if done.size:
        p1, p2 = v1[done], v2[done]
        ev = h.ev
        for _ in range(20):
            f1, f2, a11, a12, a21, a22 = ev.value_and_jac(p1, p2)
            s1, s2 = ev.scales(p1, p2)
            res = np.maximum(_mag(f1) / s1, _mag(f2) / s2)
            # polish to the attainable floor, not just final_tolerance:
            # endpoints sharing a zero must coincide far below the 1e-9
            # duplicate-detection threshold in _unresolved
            if np.all(res <= 1e-15):
                break
            d1, d2 = _solve2(a11, a12, a21, a22, f1, f2)
            move = res > 1e-15
            upd1 = np.where(move & np.isfinite(d1), d1, 0.0)
            upd2 = np.where(move & np.isfinite(d2), d2, 0.0)
            p1 = p1 - upd1
            p2 = p2 - upd2
        f1, f2 = ev.value(p1, p2)
        s1, s2 = ev.scales(p1, p2)
        res = np.maximum(_mag(f1) / s1, _mag(f2) / s2)
        v1[done], v2[done] = p1, p2
        resid[done] = res

    x1, x2 = _from_frame(h.ev.frame, v1, v2)
    results = []
    for k in range(N):
        if state[k] == 1 and resid[k] <= opts.final_tolerance and \
                np.isfinite(v1[k]) and np.isfinite(v2[k]):
            st = PathStatus.Converged
        elif state[k] == 4:
            st = PathStatus.Diverged
        elif state[k] == 2:
            st = PathStatus.StepUnderflow
        else:
            st = PathStatus.MaxSteps
        results.append(PathResult(
            endpoint=(complex(x1[k]), complex(x2[k])),
            status=st,
            residual=float(resid[k]) if np.isfinite(resid[k]) else float("inf"),
            steps_taken=int(steps[k]),
            path_index=path_indices[k],
        ))
    return results


def track_path(h: Homotopy, start: Tuple[complex, complex],
               opts: TrackOptions) -> PathResult:
    return track_many(h, [start], opts)[0]


def _retry_options(opts: TrackOptions, attempt: int) -> TrackOptions:
    return replace(
        opts,
        initial_step=max(opts.initial_step * 0.25 ** attempt, opts.min_step * 10),
        tracking_tolerance=opts.tracking_tolerance * 0.1 ** attempt,
    )


def _unresolved(results: List[PathResult]) -> List[int]:
    """Indices of failed paths plus all-but-one of any duplicate endpoint.

    For a generic gamma the n^2 paths land bijectively on the n^2 zeros, so a
    repeated endpoint means a path jumped onto a neighbour and must be redone.
    """
    bad = {r.path_index for r in results
           if r.status is not PathStatus.Converged}
    conv = [r for r in results if r.status is PathStatus.Converged]
    for i, r in enumerate(conv):
        x, y = r.endpoint
        for o in conv[i + 1:]:
            if abs(x - o.endpoint[0]) + abs(y - o.endpoint[1]) < 1e-9:
                # either of the two may be the path that jumped
                bad.add(r.path_index)
                bad.add(o.path_index)
    return sorted(bad)


def solve_system(target: RealSystem, opts: TrackOptions) -> List[PathResult]:
    """Track all n^2 paths; never drops a path.

    Failed or duplicated paths are first retried under the same homotopy with
    smaller steps and tighter tolerance (the gamma-indexed path->zero
    bijection must be preserved, so per-path retries may not change gamma).
    If that still leaves gaps, the whole system is re-solved once with a
    fresh seeded gamma.
    """
    h, starts = make_homotopy(target, opts.seed)
    results = track_many(h, starts, opts)
    if target.pair is not None:
        # retry in the other row combination first: the two evaluator modes
        # fail on disjoint kinds of zeros (see _PairEval); path-jumping
        # duplicates sometimes survive mild tightening in every frame, so
        # the tail of the schedule cuts the step much harder
        schedule = [("sd", 0), ("sd", 1), ("pq", 1),
                    (None, 2), ("sd", 2), ("pq", 2), (None, 3)]
    else:
        schedule = [(None, 1), (None, 2), (None, 3)]
    for mode, tighten in schedule:
        failed = _unresolved(results)
        if not failed:
            return results
        h2 = Homotopy(target, h.start, h.gamma, mode=mode) if mode else h
        opts2 = _retry_options(opts, tighten) if tighten else opts
        keep = set(failed)
        anchors = [_to_frame(h2.ev.frame, r.endpoint) for r in results
                   if r.status is PathStatus.Converged
                   and r.path_index not in keep]
        redo = track_many(h2, [starts[i] for i in failed], opts2,
                          path_indices=failed, anchors=anchors)
        for r in redo:
            if r.status is PathStatus.Converged or \
                    results[r.path_index].status is not PathStatus.Converged:
                results[r.path_index] = r
    if _unresolved(results):
        seed2 = (opts.seed * 0x9E3779B97F4A7C15 + 1) % (1 << 63)
        h3, starts3 = make_homotopy(target, seed2)
        alt = track_many(h3, starts3, replace(opts, seed=seed2))
        if len(_unresolved(alt)) < len(_unresolved(results)):
            results = alt
    return results


def newton_refine(target: RealSystem, v: Tuple[complex, complex],
                  iters: int) -> Tuple[complex, complex]:
    """`iters` plain Newton steps on the target system in float arithmetic."""
    ev = _evaluator(target)
    u = _to_frame(ev.frame, (complex(v[0]), complex(v[1])))
    p1 = np.array([u[0]], dtype=np.complex128)
    p2 = np.array([u[1]], dtype=np.complex128)
    for _ in range(iters):
        f1, f2, a11, a12, a21, a22 = ev.value_and_jac(p1, p2)
        det = a11 * a22 - a12 * a21
        if det[0] == 0 or not np.isfinite(det[0]):
            raise SingularJacobianError("singular Jacobian in Newton refinement")
        d1, d2 = _solve2(a11, a12, a21, a22, f1, f2)
        if not (np.isfinite(d1[0]) and np.isfinite(d2[0])):
            raise SingularJacobianError("non-finite Newton step")
        p1 = p1 - d1
        p2 = p2 - d2
        scale = max(1.0, abs(p1[0]), abs(p2[0]))
        if max(abs(d1[0]), abs(d2[0])) < 1e-17 * scale:
            break  # double-precision floor
    x1, x2 = _from_frame(ev.frame, p1, p2)
    return (complex(x1[0]), complex(x2[0]))
