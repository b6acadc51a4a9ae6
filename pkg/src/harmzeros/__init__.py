"""Certified counting of zeros of harmonic polynomials.

Pipeline: exact polynomial core -> homotopy continuation tracker ->
exact-rational alpha-theory certifier -> random ensembles and CLI tables.
"""

from .rational import QQi, to_rational
from .poly import (ComplexPoly, HarmonicPair, BivariatePoly, RealSystem,
                   eval_poly, harmonic_eval, realify, jacobian, taylor_shift)
from .tracker import (PathStatus, PathResult, TrackOptions, solve_system,
                      track_path, newton_refine)
from .certifier import (Certificate, CertifiedCount, Realness, alpha_test,
                        beta, gamma_bound, certified_count, solve_and_count, certify_distinct,
                        certify_real)
from .ensembles import (Model, ModelSpec, EnsembleStats, QuadraticFit,
                        run_trials, sample_kostlan, sample_truncated,
                        fit_quadratic)
from .extremal import (ExtremalSpec, build_extremal_pair, default_parameter,
                       wilmshurst_bound, lll_bound)

__all__ = [
    "QQi", "to_rational",
    "ComplexPoly", "HarmonicPair", "BivariatePoly", "RealSystem",
    "eval_poly", "harmonic_eval", "realify", "jacobian", "taylor_shift",
    "PathStatus", "PathResult", "TrackOptions", "solve_system",
    "track_path", "newton_refine",
    "Certificate", "CertifiedCount", "Realness", "alpha_test", "beta",
    "gamma_bound", "certified_count", "solve_and_count", "certify_distinct", "certify_real",
    "Model", "ModelSpec", "EnsembleStats", "QuadraticFit", "run_trials",
    "sample_kostlan", "sample_truncated", "fit_quadratic",
    "ExtremalSpec", "build_extremal_pair", "default_parameter",
    "wilmshurst_bound", "lll_bound",
]

__version__ = "0.1.0"
