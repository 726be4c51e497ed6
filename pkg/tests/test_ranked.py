import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from srakit import IntervalSample, RankedSequence, build_sra, ecdf, normalize_to_mean
from srakit.exceptions import EmptyInput, InvalidInterval, SRAError
from srakit.ranked import ecdf_values

positive_floats = st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False)
samples = st.lists(positive_floats, min_size=1, max_size=200)


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1.0, 3.0, 2.0], [3.0, 2.0, 1.0]),
        ([5.0], [5.0]),
        ([2.0, 2.0, 7.0], [7.0, 2.0, 2.0]),
    ],
)
def test_build_sra_examples(values, expected):
    assert build_sra(values).values.tolist() == expected


def test_build_sra_ties_keep_input_order():
    sra = build_sra([2.0, 2.0, 7.0, 2.0])
    assert sra.order.tolist() == [2, 0, 1, 3]


def test_build_sra_accepts_interval_sample():
    sample = IntervalSample([0.5, 0.25], source="x")
    assert build_sra(sample).values.tolist() == [0.5, 0.25]


def test_empty_sample_rejected():
    with pytest.raises(EmptyInput):
        build_sra([])


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_non_positive_or_non_finite_rejected(bad):
    with pytest.raises(InvalidInterval) as info:
        IntervalSample([1.0, bad])
    assert info.value.index == 1


def test_ranked_sequence_must_be_non_increasing():
    with pytest.raises(SRAError):
        RankedSequence([1.0, 2.0])


def test_sample_values_are_read_only():
    sample = IntervalSample([1.0, 2.0])
    with pytest.raises(ValueError):
        sample.values[0] = 3.0


def test_ecdf_examples():
    pts = ecdf(build_sra([9, 7, 4, 2]))
    assert [p.cdf for p in pts] == [1.0, 0.75, 0.5, 0.25]
    assert [p.rank for p in pts] == [1, 2, 3, 4]
    assert [p.value for p in pts] == [9.0, 7.0, 4.0, 2.0]
    assert [p.cdf for p in ecdf(build_sra([3.3]))] == [1.0]
    vals = ecdf_values(build_sra(np.arange(1.0, 1001.0)))
    assert vals[-1] == 0.001


def test_ecdf_exact_mode_matches_rational_oracle():
    for n_total in (1, 2, 3, 7, 64):
        pts = ecdf(build_sra(np.arange(1.0, n_total + 1)), exact=True)
        assert [p.cdf for p in pts] == oracles.plotting_positions(n_total)


def test_ecdf_strictly_decreasing_and_bounds(exp_sample):
    cdf = ecdf_values(build_sra(exp_sample))
    assert cdf[0] == 1.0
    assert cdf[-1] == 1 / len(exp_sample)
    assert np.all(np.diff(cdf) < 0)


@pytest.mark.parametrize(
    "values, expected",
    [([2.0, 4.0], [2 / 3, 4 / 3]), ([5.0], [1.0])],
)
def test_normalize_to_mean_examples(values, expected):
    np.testing.assert_allclose(normalize_to_mean(values).values, expected, rtol=1e-15)


@given(samples)
def test_noninvasive(values):
    sra = build_sra(values)
    assert np.array_equal(np.sort(sra.values), np.sort(np.asarray(values)))
    assert np.all(np.diff(sra.values) <= 0)


@given(samples)
def test_idempotent(values):
    once = build_sra(values)
    twice = build_sra(once)
    assert np.array_equal(once.values, twice.values)


@given(st.integers(min_value=1, max_value=64))
def test_rank_identity_exact(n_total):
    pts = ecdf(build_sra(np.linspace(1.0, 2.0, n_total)), exact=True)
    for p in pts:
        assert p.cdf == Fraction(n_total + 1 - p.rank, n_total)


@given(st.lists(st.floats(min_value=1e-100, max_value=1e100), min_size=1, max_size=100))
def test_normalized_mean_is_one(values):
    out = normalize_to_mean(values)
    assert abs(out.values.mean() - 1.0) < 1e-12


def test_ecdf_converges_to_exponential_cdf():
    rng = np.random.default_rng(2024)

    def max_gap(n):
        x = rng.exponential(1.0, n)
        sra = build_sra(x)
        return np.max(np.abs((1 - np.exp(-sra.values)) - ecdf_values(sra)))

    small = np.median([max_gap(100) for _ in range(50)])
    large = np.median([max_gap(10_000) for _ in range(50)])
    assert large < small
