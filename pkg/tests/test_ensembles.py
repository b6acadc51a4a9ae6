"""Random ensembles: sampling laws, trial running, statistics."""

import math

import numpy as np
import pytest

from harmzeros.ensembles import (Model, ModelSpec, fit_quadratic,
                                 histogram_csv, run_trials, sample_kostlan,
                                 sample_truncated, stats_csv, trial_rng)


def test_modelspec_validation():
    with pytest.raises(ValueError):
        ModelSpec(Model.Kostlan, 5, 6)
    with pytest.raises(ValueError):
        ModelSpec(Model.Kostlan, 0, 0)


def test_sampling_deterministic():
    spec = ModelSpec(Model.Kostlan, 7, 3)
    a = sample_kostlan(spec, trial_rng(11, 4))
    b = sample_kostlan(spec, trial_rng(11, 4))
    c = sample_kostlan(spec, trial_rng(11, 5))
    assert a.p.coeffs == b.p.coeffs and a.q.coeffs == b.q.coeffs
    assert a.p.coeffs != c.p.coeffs


def test_truncated_equals_kostlan_at_m_eq_n():
    k = sample_kostlan(ModelSpec(Model.Kostlan, 6, 6), trial_rng(3, 0))
    t = sample_truncated(ModelSpec(Model.TruncatedKostlan, 6, 6), trial_rng(3, 0))
    assert k.p.coeffs == t.p.coeffs
    assert k.q.coeffs == t.q.coeffs


def test_truncated_weight_ratio():
    # same draw, weights differ by sqrt(binom(n,k)/binom(m,k))
    n, m = 8, 3
    k = sample_kostlan(ModelSpec(Model.Kostlan, n, m), trial_rng(9, 1))
    t = sample_truncated(ModelSpec(Model.TruncatedKostlan, n, m), trial_rng(9, 1))
    for j in range(m + 1):
        ratio = t.q.float_coeffs[j] / k.q.float_coeffs[j]
        want = math.sqrt(math.comb(n, j) / math.comb(m, j))
        assert abs(ratio - want) < 1e-12


def test_degrees_m_zero():
    pair = sample_kostlan(ModelSpec(Model.Kostlan, 4, 0), trial_rng(5, 0))
    assert pair.n == 4 and pair.m == 0
    assert len(pair.q.coeffs) == 1


def test_coefficient_law():
    # empirical variance of coefficient k of p divided by the weight -> 1
    spec = ModelSpec(Model.Kostlan, 6, 0)
    vals = []
    for i in range(4000):
        pair = sample_kostlan(spec, trial_rng(123, i))
        vals.append(complex(pair.p.float_coeffs[3]) / math.sqrt(math.comb(6, 3)))
    v = np.var(np.array(vals))  # E|a|^2 = 1 for standard complex Gaussian
    assert abs(v - 1.0) < 0.05


def test_run_trials_statistics_and_histogram():
    spec = ModelSpec(Model.Kostlan, 5, 2)
    st = run_trials(spec, 25, seed=42)
    assert st.trials_requested == 25
    assert st.trials_succeeded + st.failures == 25
    assert st.failures == 0
    assert st.variance == pytest.approx(st.std_dev ** 2)
    assert sum(st.counts_histogram.values()) == st.trials_succeeded
    for count in st.counts_histogram:
        assert count >= spec.n
        assert count % 2 == spec.n % 2
    # determinism, bit for bit
    st2 = run_trials(spec, 25, seed=42)
    assert st == st2


def test_fit_quadratic_exact():
    fit = fit_quadratic([(10, 2 * 100 + 3), (20, 2 * 400 + 3), (30, 2 * 900 + 3)])
    assert fit.a2 == pytest.approx(2.0, abs=1e-9)
    assert fit.a1 == pytest.approx(0.0, abs=1e-9)
    assert fit.a0 == pytest.approx(3.0, abs=1e-7)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_quadratic_rejects_degenerate():
    with pytest.raises(ValueError):
        fit_quadratic([(10, 1.0), (10, 2.0)])
    with pytest.raises(ValueError):
        fit_quadratic([(10, 1.0), (10, 2.0), (10, 3.0)])


def test_csv_formats():
    spec = ModelSpec(Model.TruncatedKostlan, 4, 2)
    st = run_trials(spec, 5, seed=1)
    row = stats_csv(spec, st)
    assert row.startswith("truncated,4,2,5,0,")
    assert len(row.split(",")) == 9
    hist = histogram_csv(st)
    assert hist.splitlines()[0] == "count,frequency"
    total = sum(int(line.split(",")[1]) for line in hist.splitlines()[1:])
    assert total == st.trials_succeeded
