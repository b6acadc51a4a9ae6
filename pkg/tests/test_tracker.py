"""Homotopy continuation tracker."""

import numpy as np
import pytest

from harmzeros.extremal import ExtremalSpec, build_extremal_pair, default_parameter
from harmzeros.poly import ComplexPoly, HarmonicPair, realify
from harmzeros.tracker import (PathStatus, SingularJacobianError,
                               TrackOptions, make_homotopy, newton_refine,
                               solve_system, total_degree_start, track_many)


def _pair(p_coeffs, q_coeffs):
    return realify(HarmonicPair(ComplexPoly(p_coeffs), ComplexPoly(q_coeffs)))


def test_options_validation():
    with pytest.raises(ValueError):
        TrackOptions(initial_step=0.5)
    with pytest.raises(ValueError):
        TrackOptions(min_step=0.2, initial_step=0.1)
    opts = TrackOptions()
    assert opts.initial_step == 0.05
    assert opts.min_step == 1e-7
    assert opts.tracking_tolerance == 1e-8
    assert opts.final_tolerance == 1e-12
    assert opts.max_newton_iters == 3
    assert opts.max_steps == 10000


def test_start_system_roots():
    start, points = total_degree_start(3, seed=0)
    assert len(points) == 9
    u1 = np.array([p[0] for p in points])
    u2 = np.array([p[1] for p in points])
    v1, v2 = start.value(u1, u2)
    assert np.all(np.abs(v1) < 1e-13) and np.all(np.abs(v2) < 1e-13)


def test_solve_z2_minus_conj_z():
    # p = z^2, q = z: zeros of z^2 - conj(z)... use q = -z so F = z^2 - conj z
    S = _pair([0, 0, 1], [0, -1])
    results = solve_system(S, TrackOptions())
    assert len(results) == 4
    assert all(r.status is PathStatus.Converged for r in results)
    # analytic: z = 0, 1, exp(±2πi/3) — all real zeros of F
    expected = {0j, 1 + 0j, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)}
    for r in results:
        x, y = r.endpoint
        z = complex(x) + 1j * complex(y)
        assert min(abs(z - e) for e in expected) < 1e-8


def test_residuals_meet_final_tolerance():
    S = _pair([1, 0, 0.5, 1], [0.3, -1])
    opts = TrackOptions()
    for r in solve_system(S, opts):
        assert r.status is PathStatus.Converged
        assert r.residual <= opts.final_tolerance


def test_path_indices_complete():
    S = _pair([0, 1j, 2, 1], [1, 1])
    results = solve_system(S, TrackOptions())
    assert sorted(r.path_index for r in results) == list(range(9))


def test_endpoints_distinct_generic():
    rng = np.random.default_rng(12)
    p = ComplexPoly([complex(a, b) for a, b in rng.standard_normal((6, 2))])
    q = ComplexPoly([complex(a, b) for a, b in rng.standard_normal((4, 2))])
    S = realify(HarmonicPair(p, q))
    results = solve_system(S, TrackOptions())
    assert all(r.status is PathStatus.Converged for r in results)
    eps = [r.endpoint for r in results]
    for i in range(len(eps)):
        for j in range(i + 1, len(eps)):
            d = abs(eps[i][0] - eps[j][0]) + abs(eps[i][1] - eps[j][1])
            assert d > 1e-8


def test_extremal_cluster_tracking():
    # tight clusters with separations ~1e-4; all 81 paths must converge to
    # 81 distinct endpoints
    spec = ExtremalSpec(9, 3, default_parameter(777))
    S = realify(build_extremal_pair(spec))
    results = solve_system(S, TrackOptions())
    assert all(r.status is PathStatus.Converged for r in results)
    eps = [r.endpoint for r in results]
    mind = min(abs(a[0] - b[0]) + abs(a[1] - b[1])
               for i, a in enumerate(eps) for b in eps[i + 1:])
    assert mind > 1e-6


def test_determinism():
    S = _pair([0.5, 1j, 1], [0.25, 1])
    r1 = solve_system(S, TrackOptions(seed=5))
    r2 = solve_system(S, TrackOptions(seed=5))
    assert [(r.endpoint, r.status) for r in r1] == \
        [(r.endpoint, r.status) for r in r2]


def test_newton_refine_contracts():
    S = _pair([0, 0, 1], [0, -1])
    v = (1.0 + 1e-4, 1e-4)  # near the zero (1, 0)
    refined = newton_refine(S, v, 8)
    assert abs(refined[0] - 1) < 1e-12
    assert abs(refined[1]) < 1e-12


def test_newton_refine_singular_raises():
    # dF = 0 at the origin for p = z^2, q = z^2 (rows are parallel there)
    S = _pair([0, 0, 1], [0, 0, 1])
    with pytest.raises(SingularJacobianError):
        newton_refine(S, (0.0, 0.0), 3)


def test_gamma_is_seeded_unit_modulus():
    S = _pair([0, 1], [0.5])
    h1, _ = make_homotopy(S, seed=1)
    h2, _ = make_homotopy(S, seed=1)
    h3, _ = make_homotopy(S, seed=2)
    assert h1.gamma == h2.gamma
    assert h1.gamma != h3.gamma
    assert abs(abs(h1.gamma) - 1) < 1e-14


def test_track_many_anchor_and_partial_indices():
    S = _pair([0, 0, 1], [0, -1])
    h, starts = make_homotopy(S, seed=0)
    sub = track_many(h, starts[1:3], TrackOptions(), path_indices=[1, 2])
    assert [r.path_index for r in sub] == [1, 2]
    assert all(r.status is PathStatus.Converged for r in sub)
