"""Benford conformance statistics: digit counts, CDF deviation, KS tests."""

import math

import numpy as np
import pytest

from benford_chains.chains import ChainLink, ChainSpec
from benford_chains.conformance import (
    KS_ONE_SAMPLE_COEFF,
    KS_TWO_SAMPLE_COEFF,
    ConformanceReport,
    DigitStats,
    audit_dataset,
    benford_cdf,
    benford_digit_prob,
    digit_stats,
    two_sample_ks,
)
from benford_chains.families import get_family
from benford_chains.montecarlo import make_rng, sample_batch

SEED = 20260814


def chain(*families, base=10):
    return ChainSpec(base, tuple(ChainLink(f, 1) for f in families))


def test_decision_coefficients_pinned():
    assert KS_ONE_SAMPLE_COEFF == 1.63
    assert KS_TWO_SAMPLE_COEFF == 1.628


def test_benford_cdf_values():
    assert benford_cdf(1.0) == 0.0
    assert benford_cdf(10.0) == 1.0
    assert benford_cdf(2.0) == math.log10(2.0)
    assert benford_cdf(1.5, base=2) == pytest.approx(math.log(1.5) / math.log(2.0), rel=1e-15)
    for bad in (0.5, 10.5):
        with pytest.raises(ValueError):
            benford_cdf(bad)
    with pytest.raises(ValueError):
        benford_cdf(1.5, base=1)


def test_benford_digit_prob_values_and_domain():
    assert benford_digit_prob(1) == math.log10(2.0)
    assert benford_digit_prob(9) == pytest.approx(math.log10(10.0 / 9.0), rel=1e-15)
    assert benford_digit_prob(1, base=2) == 1.0
    for bad in (0, 10, -1, True, 1.0):
        with pytest.raises(ValueError):
            benford_digit_prob(bad)


def test_benford_digit_probs_sum_to_exactly_one():
    for base in (2, 10, 16):
        probs = [benford_digit_prob(d, base) for d in range(1, base)]
        assert math.fsum(probs) == 1.0, base


def test_digit_stats_counts():
    st = digit_stats([1.0, 10.0, 100.0])
    assert st.count == 3
    assert st.digit_counts == (3, 0, 0, 0, 0, 0, 0, 0, 0)

    st = digit_stats([1.5, 2.5, 95.0])
    assert st.digit_counts == (1, 1, 0, 0, 0, 0, 0, 0, 1)


def test_digit_stats_grid_and_cdf():
    st = digit_stats([1.5, 2.5, 95.0], grid_size=100)
    grid = np.asarray(st.mantissa_grid)
    assert len(grid) == 101
    assert grid[0] == 1.0
    assert grid[-1] == 10.0
    assert np.all(np.diff(grid) > 0)
    cdf = np.asarray(st.empirical_cdf)
    assert cdf[0] == 0.0  # no mantissa at or below 1.0 in this sample
    assert cdf[-1] == 1.0
    assert np.all(np.diff(cdf) >= 0)
    # between mantissa 2.5 and 9.5 the CDF sits at 2/3
    mid = (grid > 2.5) & (grid < 9.5)
    assert np.all(np.abs(cdf[mid] - 2.0 / 3.0) < 1e-15)


def test_digit_stats_rejects_bad_input():
    with pytest.raises(ValueError):
        digit_stats([])
    with pytest.raises(ValueError):
        digit_stats([[1.0, 2.0]])
    with pytest.raises(ValueError, match=r"values\[1\]"):
        digit_stats([1.0, -2.0, 3.0])
    with pytest.raises(ValueError, match=r"values\[0\]"):
        digit_stats([math.nan, 1.0])
    with pytest.raises(ValueError):
        digit_stats([1.0], grid_size=1)


def test_digit_stats_invariant():
    with pytest.raises(ValueError):
        DigitStats(base=10, count=2, digit_counts=(1, 0, 0, 0, 0, 0, 0, 0, 0),
                   mantissa_grid=(1.0, 10.0), empirical_cdf=(0.0, 1.0))


def test_benford_family_sample_conforms():
    rng = make_rng(SEED, stream=602)
    values = get_family("benford", 10).sample_unit_batch(rng, 100_000)
    report = audit_dataset(values, 10)
    assert report.conforms
    assert report.sup_deviation < report.ks_critical == 1.63 / math.sqrt(100_000)
    assert report.skipped == 0


def test_benford_headed_chain_conforms():
    # one benford link pins the digit law of the whole chain
    ch = chain("benford", "uniform", "exponential", "uniform")
    batch = sample_batch(ch, 100_000, SEED, stream=601)
    report = audit_dataset(batch.values, 10)
    assert report.conforms


def test_audit_skips_dirty_entries():
    rng = make_rng(SEED, stream=605)
    clean = get_family("benford", 10).sample_unit_batch(rng, 5_000)
    dirty = np.concatenate([clean, [np.nan, np.inf, -np.inf, 0.0, -3.5]])
    report = audit_dataset(dirty, 10)
    assert report.skipped == 5
    assert report.stats.count == 5_000
    with pytest.raises(ValueError):
        audit_dataset([0.0, -1.0, np.nan], 10)


def test_audit_scale_invariance():
    rng = make_rng(SEED, stream=600)
    values = get_family("benford", 10).sample_unit_batch(rng, 100_000)
    base_report = audit_dataset(values, 10)

    # powers of the base leave digits untouched
    shifted = audit_dataset(values * 1e3, 10)
    assert shifted.stats.digit_counts == base_report.stats.digit_counts
    assert abs(shifted.sup_deviation - base_report.sup_deviation) <= 1e-12

    # an arbitrary factor only rotates the mantissas; for conforming data
    # the deviation moves by at most a grid cell or so
    for c in (2.7, math.pi):
        rotated = audit_dataset(values * c, 10)
        assert abs(rotated.sup_deviation - base_report.sup_deviation) < 2.0 / 1000.0


def test_point_mass_fails_audit():
    report = audit_dataset([10.0**k for k in range(-5, 6)] * 100, 10)
    assert not report.conforms
    assert report.stats.digit_counts[0] == report.stats.count
    assert report.sup_deviation > 0.9


def test_raw_uniform_fails_audit_with_expected_digit_skew():
    # Unif(0,1) is not Benford: P(digit 1) = 1/9, not log10(2)
    rng = make_rng(SEED, stream=610)
    values = rng.random(100_000)
    report = audit_dataset(values, 10)
    assert not report.conforms
    n = report.stats.count
    freq1 = report.stats.digit_counts[0] / n
    sigma = math.sqrt((1.0 / 9.0) * (8.0 / 9.0) / n)
    assert abs(freq1 - 1.0 / 9.0) <= 3.0 * sigma
    assert report.chi_square > 100.0


def test_bound_context_gates_consistency():
    rng = make_rng(SEED, stream=606)
    good = get_family("benford", 10).sample_unit_batch(rng, 100_000)
    r = audit_dataset(good, 10, bound_context=0.004)
    assert r.bound_context == 0.004
    assert r.bound_consistent is True

    skewed = rng.random(100_000)
    r2 = audit_dataset(skewed, 10, bound_context=0.001)
    assert r2.bound_consistent is False

    r3 = audit_dataset(good, 10)
    assert r3.bound_context is None
    assert r3.bound_consistent is None


def test_report_json_dict_fields():
    report = audit_dataset([1.5, 2.5, 9.5, 4.0], 10, bound_context=0.5)
    d = report.to_json_dict()
    assert list(d.keys()) == [
        "count", "skipped", "base", "digit_frequencies", "benford_frequencies",
        "sup_deviation", "chi_square", "ks_critical", "conforms",
        "bound_context", "bound_consistent",
    ]
    assert d["count"] == 4
    assert len(d["digit_frequencies"]) == 9
    assert math.fsum(d["digit_frequencies"]) == pytest.approx(1.0, abs=1e-15)
    assert d["benford_frequencies"][0] == math.log10(2.0)
    assert isinstance(report, ConformanceReport)


def test_two_sample_ks_edges():
    same = np.arange(1.0, 100.0)
    stat, reject = two_sample_ks(same, same)
    assert stat == 0.0
    assert not reject

    stat, reject = two_sample_ks(np.full(200, 1.0), np.full(200, 2.0))
    assert stat == 1.0
    assert reject

    with pytest.raises(ValueError):
        two_sample_ks([], [1.0])


def test_two_sample_ks_calibration():
    g = np.random.default_rng(SEED)
    rejections = 0
    for _ in range(20):
        stat, reject = two_sample_ks(g.random(5_000), g.random(5_000))
        rejections += int(reject)
    assert rejections <= 2


def test_two_sample_ks_detects_shift():
    g = np.random.default_rng(SEED + 1)
    a = g.random(5_000)
    b = g.random(5_000) ** 1.15
    stat, reject = two_sample_ks(a, b)
    assert reject
