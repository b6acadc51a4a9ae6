"""Random harmonic polynomial ensembles and seeded Monte Carlo statistics.

Two models: the Kostlan / Li-Wei pair (p of degree n, q of degree m, both
with sqrt(binom) coefficient weights of their own degree) and the truncated
variant where q keeps the degree-n weights sqrt(binom(n, k)) but stops at
k = m.  Every trial runs the full certified pipeline; only complete
certifications enter the statistics, failures are counted and reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .certifier import solve_and_count
from .poly import ComplexPoly, HarmonicPair, realify
from .tracker import TrackOptions

__all__ = [
    "EnsembleStats",
    "Model",
    "ModelSpec",
    "QuadraticFit",
    "fit_quadratic",
    "histogram_csv",
    "run_trials",
    "sample_kostlan",
    "sample_truncated",
    "stats_csv",
    "STATS_CSV_HEADER",
]


class Model(enum.Enum):
    Kostlan = "kostlan"
    TruncatedKostlan = "truncated"


@dataclass(frozen=True)
class ModelSpec:
    model: Model
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.m <= self.n:
            raise ValueError("requires n >= m >= 0")


@dataclass
class EnsembleStats:
    trials_requested: int
    trials_succeeded: int
    failures: int
    mean: float
    std_dev: float
    std_err: float
    variance: float
    seed: int
    counts_histogram: Dict[int, int] = field(default_factory=dict)


@dataclass
class QuadraticFit:
    a2: float
    a1: float
    a0: float
    r_squared: float


_SQRT_BINOM_CACHE: Dict[Tuple[int, int], float] = {}


def _sqrt_binom(n: int, k: int) -> float:
    """sqrt(binom(n, k)) rounded once to its nearest double (a 53-bit
    rational), cached so every trial uses the identical exact weight."""
    key = (n, k)
    w = _SQRT_BINOM_CACHE.get(key)
    if w is None:
        w = math.sqrt(math.comb(n, k))
        _SQRT_BINOM_CACHE[key] = w
    return w


def _gaussian_coeffs(rng: np.random.Generator, count: int) -> np.ndarray:
    # standard complex Gaussian: Re and Im each N(0, 1/2)
    g = rng.standard_normal(2 * count) * math.sqrt(0.5)
    return g[:count] + 1j * g[count:]


def sample_kostlan(spec: ModelSpec, rng: np.random.Generator) -> HarmonicPair:
    n, m = spec.n, spec.m
    a = _gaussian_coeffs(rng, n + 1)
    b = _gaussian_coeffs(rng, m + 1)
    p = ComplexPoly([complex(a[k]) * _sqrt_binom(n, k) for k in range(n + 1)])
    q = ComplexPoly([complex(b[k]) * _sqrt_binom(m, k) for k in range(m + 1)])
    return HarmonicPair(p, q)


def sample_truncated(spec: ModelSpec, rng: np.random.Generator) -> HarmonicPair:
    n, m = spec.n, spec.m
    a = _gaussian_coeffs(rng, n + 1)
    b = _gaussian_coeffs(rng, m + 1)
    p = ComplexPoly([complex(a[k]) * _sqrt_binom(n, k) for k in range(n + 1)])
    # truncated i.i.d. copy of p: degree-n weights, cut at m
    q = ComplexPoly([complex(b[k]) * _sqrt_binom(n, k) for k in range(m + 1)])
    return HarmonicPair(p, q)


def sample(spec: ModelSpec, rng: np.random.Generator) -> HarmonicPair:
    if spec.model is Model.Kostlan:
        return sample_kostlan(spec, rng)
    return sample_truncated(spec, rng)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """The per-trial stream; its derivation from (seed, index) is part of
    the reproducibility contract."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


# float residual floor for well-scaled degree-30 systems sits near 1e-11;
# the exact certifier, not this filter, decides correctness
_TRIAL_OPTIONS = TrackOptions(final_tolerance=1e-10)


def count_zeros(pair: HarmonicPair):
    """One pipeline pass: solve, certify, return (CertifiedCount, certs)."""
    S = realify(pair)
    cc, certs, _ = solve_and_count(S, _TRIAL_OPTIONS)
    return cc, certs


def run_trials(spec: ModelSpec, trials: int, seed: int) -> EnsembleStats:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    counts: List[int] = []
    failures = 0
    histogram: Dict[int, int] = {}
    for i in range(trials):
        pair = sample(spec, trial_rng(seed, i))
        cc, _ = count_zeros(pair)
        if cc.complete:
            counts.append(cc.real_count)
            histogram[cc.real_count] = histogram.get(cc.real_count, 0) + 1
        else:
            failures += 1
            if failures * 100 > trials:
                raise RuntimeError(
                    f"ensemble aborted: {failures} incomplete certifications "
                    f"in {i + 1}/{trials} trials (> 1%)")
    arr = np.array(counts, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return EnsembleStats(
        trials_requested=trials,
        trials_succeeded=len(counts),
        failures=failures,
        mean=mean,
        std_dev=std,
        std_err=std / math.sqrt(len(arr)) if len(arr) else 0.0,
        variance=std * std,
        seed=seed,
        counts_histogram=dict(sorted(histogram.items())),
    )


def fit_quadratic(points: Sequence[Tuple[int, float]]) -> QuadraticFit:
    """Ordinary least squares of variance against {n^2, n, 1}."""
    if len({n for n, _ in points}) < 3:
        raise ValueError("need at least 3 distinct n values")
    ns = np.array([n for n, _ in points], dtype=float)
    vs = np.array([v for _, v in points], dtype=float)
    A = np.stack([ns * ns, ns, np.ones_like(ns)], axis=1)
    coef, _, rank, _ = np.linalg.lstsq(A, vs, rcond=None)
    if rank < 3:
        raise ValueError("singular design matrix")
    resid = vs - A @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(((vs - vs.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return QuadraticFit(float(coef[0]), float(coef[1]), float(coef[2]), r2)


STATS_CSV_HEADER = "model,n,m,trials,failures,mean,std,stderr,seed"


def stats_csv(spec: ModelSpec, stats: EnsembleStats) -> str:
    return (f"{spec.model.value},{spec.n},{spec.m},{stats.trials_requested},"
            f"{stats.failures},{stats.mean:.6f},{stats.std_dev:.6f},"
            f"{stats.std_err:.6f},{stats.seed}")


def histogram_csv(stats: EnsembleStats) -> str:
    lines = ["count,frequency"]
    for count, freq in stats.counts_histogram.items():
        lines.append(f"{count},{freq}")
    return "\n".join(lines)
