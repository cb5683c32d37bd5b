"""Exact distributions, Monte Carlo streams, and the normality test."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st
from scipy.special import ndtri

import pentachain.distribution as distribution
from pentachain import (
    MOMENT_INDICES,
    IndexKind,
    NormalityResult,
    SampleStats,
    Standardization,
    exact_distribution,
    expected_index,
    ks_statistic,
    monte_carlo,
    normality_test,
    sample_values,
    samples_csv,
    variance_index,
)

from helpers import enumeration_moments


def test_two_atom_law():
    d = exact_distribution(IndexKind.GUTMAN, 3, Fraction(1, 2))
    assert d.support == ((1694, Fraction(1, 2)), (1838, Fraction(1, 2)))
    assert d.mean == 1766 and d.variance == 5184
    d = exact_distribution(IndexKind.KF_PLUS, 3, Fraction(1, 2))
    assert d.support == ((1194, Fraction(1, 2)), (1242, Fraction(1, 2)))
    assert d.variance == 576


def test_deterministic_atoms():
    for n, value in ((1, 60), (2, 529)):
        d = exact_distribution(IndexKind.GUTMAN, n, Fraction(1, 3))
        assert d.support == ((value, 1),)
        assert d.mean == value and d.variance == 0


@pytest.mark.parametrize("index", MOMENT_INDICES)
def test_distribution_moments_match_closed_forms(index):
    for n in (4, 6):
        for p in (Fraction(1, 5), Fraction(1, 2)):
            d = exact_distribution(index, n, p)
            assert d.mean == expected_index(index, n, p)
            assert d.variance == variance_index(index, n, p)


@given(
    st.integers(1, 8),
    st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(5, 7)]),
    st.sampled_from(list(IndexKind)),
)
@settings(max_examples=30, deadline=None)
def test_distribution_invariants(n, p, index):
    d = exact_distribution(index, n, p)
    values = [v for v, _ in d.support]
    probs = [q for _, q in d.support]
    assert values == sorted(values)
    assert len(set(values)) == len(values)
    assert all(q > 0 for q in probs)
    assert sum(probs) == 1


def test_float_p1_is_exactified():
    # float input converts through its binary expansion; probabilities still
    # sum to exactly 1
    d = exact_distribution(IndexKind.SCHULTZ, 6, 0.3)
    assert sum(q for _, q in d.support) == 1
    assert d.p1 == Fraction(0.3)


def test_bulk_path_matches_enumeration(monkeypatch):
    small = exact_distribution(IndexKind.GUTMAN, 7, Fraction(2, 5))
    monkeypatch.setattr(distribution, "_BULK_ENUM_LIMIT", 1)
    bulk = exact_distribution(IndexKind.GUTMAN, 7, Fraction(2, 5))
    assert bulk == small


def test_bulk_path_reaches_past_the_enumeration_cap():
    # 2^28 realizations, yet the weight-count dynamic program stays small
    d = exact_distribution(IndexKind.KF_PLUS, 30, Fraction(1, 2), cap=40)
    assert d.mean == expected_index(IndexKind.KF_PLUS, 30, Fraction(1, 2))
    assert d.variance == variance_index(IndexKind.KF_PLUS, 30, Fraction(1, 2))


def test_distribution_validation():
    with pytest.raises(ValueError):
        exact_distribution(IndexKind.GUTMAN, 0, Fraction(1, 2))
    with pytest.raises(ValueError):
        exact_distribution(IndexKind.GUTMAN, 23, Fraction(1, 2))
    with pytest.raises(ValueError):
        exact_distribution(IndexKind.GUTMAN, 3, Fraction(3, 2))


def test_distribution_csv():
    lines = exact_distribution(IndexKind.KF_STAR, 3, Fraction(1, 2)).to_csv().splitlines()
    assert lines[0] == "value,probability"
    assert lines[1] == "6586/5,1/2"
    assert lines[2] == "6874/5,1/2"


def test_sample_stats_merge_matches_two_pass():
    rng = np.random.default_rng(3)
    values = rng.normal(5.0, 2.0, size=1001)
    whole = SampleStats.from_values(IndexKind.GUTMAN, values, seed=0)
    parts = [
        SampleStats.from_values(IndexKind.GUTMAN, chunk, seed=0)
        for chunk in np.array_split(values, 7)
    ]
    merged = parts[0]
    for part in parts[1:]:
        merged = merged.merge(part)
    assert merged.count == whole.count == 1001
    assert math.isclose(merged.mean, whole.mean, rel_tol=1e-12)
    assert math.isclose(merged.m2, whole.m2, rel_tol=1e-9)
    assert merged.min == whole.min and merged.max == whole.max


def test_sample_stats_guards():
    a = SampleStats.from_values(IndexKind.GUTMAN, [1.0, 2.0], seed=0)
    with pytest.raises(ValueError):
        a.merge(SampleStats.from_values(IndexKind.SCHULTZ, [1.0], seed=0))
    with pytest.raises(ValueError):
        a.merge(SampleStats.from_values(IndexKind.GUTMAN, [1.0], seed=9))
    single = SampleStats.from_values(IndexKind.GUTMAN, [4.0], seed=0)
    assert single.variance == 0.0
    assert a.variance == 0.5


def test_monte_carlo_deterministic_and_worker_invariant():
    runs = [
        monte_carlo(MOMENT_INDICES, 20, Fraction(1, 2), 3000, 99, workers=w)
        for w in (1, 1, 2)
    ]
    assert runs[0] == runs[1] == runs[2]
    stats = runs[0][IndexKind.GUTMAN]
    assert stats.count == 3000 and stats.seed == 99


def test_monte_carlo_matches_exact_law():
    # n = 2 is deterministic: every draw is the single atom
    stats = monte_carlo((IndexKind.GUTMAN,), 2, Fraction(1, 2), 500, 1)[
        IndexKind.GUTMAN
    ]
    assert stats.mean == 529.0 and stats.variance == 0.0
    assert stats.min == stats.max == 529.0


def test_monte_carlo_near_closed_forms():
    m = 20000
    stats = monte_carlo(MOMENT_INDICES, 10, Fraction(1, 2), m, 7)
    for index in MOMENT_INDICES:
        mean = expected_index(index, 10, 0.5)
        var = variance_index(index, 10, 0.5)
        se = math.sqrt(var / m)
        assert abs(stats[index].mean - mean) < 4 * se
        assert abs(stats[index].variance - var) < 0.10 * var


def test_sample_values_consistent_with_stats():
    values = sample_values(IndexKind.SCHULTZ, 12, Fraction(1, 2), 5000, 31)
    assert values.shape == (5000,)
    again = sample_values(IndexKind.SCHULTZ, 12, Fraction(1, 2), 5000, 31)
    assert np.array_equal(values, again)
    stats = monte_carlo((IndexKind.SCHULTZ,), 12, Fraction(1, 2), 5000, 31)[
        IndexKind.SCHULTZ
    ]
    direct = SampleStats.from_values(IndexKind.SCHULTZ, values, seed=31)
    assert math.isclose(stats.mean, direct.mean, rel_tol=1e-12)
    assert math.isclose(stats.m2, direct.m2, rel_tol=1e-9)
    assert stats.min == direct.min and stats.max == direct.max


def test_samples_csv():
    lines = samples_csv(np.array([1.5, 2.0])).splitlines()
    assert lines[0] == "sampleIndex,value"
    assert lines[1] == "0,1.5"
    assert len(lines) == 3


def test_ks_statistic_hand_values():
    assert ks_statistic([0.0]) == 0.5
    # quantile grid z_i = Phi^{-1}((i - 1/2) / m) realizes the minimum 1/(2m)
    m = 1000
    grid = ndtri((np.arange(1, m + 1) - 0.5) / m)
    assert math.isclose(ks_statistic(grid), 0.5 / m, rel_tol=1e-9)


def test_normality_refusals():
    with pytest.raises(ValueError):
        normality_test(IndexKind.GUTMAN, 2, 0.5, 100, 0)
    with pytest.raises(ValueError):
        normality_test(IndexKind.GUTMAN, 10, 0.0, 100, 0)
    with pytest.raises(ValueError):
        normality_test(IndexKind.GUTMAN, 10, 1.0, 100, 0)


def test_normality_far_from_normal_at_small_n():
    # two-atom law: the standardized sample is +-1, KS stays near Phi(-1)
    result = normality_test(IndexKind.GUTMAN, 3, 0.5, 2000, 5)
    assert result.ks_statistic > 0.25
    assert not result.passes(0.01)


def test_normality_close_to_normal_at_large_n():
    result = normality_test(IndexKind.GUTMAN, 100, 0.5, 4000, 5)
    assert result.passes(0.01) and result.passes(0.05)


def test_standardizations_agree_at_scale():
    closed = normality_test(IndexKind.KF_PLUS, 100, 0.5, 100000, 42)
    sampled = normality_test(
        IndexKind.KF_PLUS, 100, 0.5, 100000, 42, Standardization.SAMPLE
    )
    assert abs(closed.ks_statistic - sampled.ks_statistic) < 0.005
    # drawn moments sit on the closed forms at this sample size
    values = sample_values(IndexKind.KF_PLUS, 100, 0.5, 100000, 42)
    center = expected_index(IndexKind.KF_PLUS, 100, 0.5)
    scale = math.sqrt(variance_index(IndexKind.KF_PLUS, 100, 0.5))
    standardized = (values - center) / scale
    assert abs(standardized.mean()) < 0.02
    assert abs(standardized.var(ddof=1) - 1.0) < 0.03


def test_normality_result_thresholds():
    result = NormalityResult(
        index=IndexKind.GUTMAN,
        n=100,
        p1=0.5,
        sample_count=10000,
        ks_statistic=0.01,
        standardization=Standardization.CLOSED_FORM,
        seed=0,
    )
    assert math.isclose(result.threshold(0.01), 1.628 / 100.0)
    assert math.isclose(result.threshold(0.05), 1.358 / 100.0)
    assert result.passes(0.01) and result.passes(0.05)
    with pytest.raises(ValueError):
        result.threshold(0.10)
    payload = result.to_json()
    assert '"ks_statistic": 0.01' in payload and '"thresholds"' in payload
