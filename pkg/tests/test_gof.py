"""KS statistics and Pearson correlation against brute-force oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from volratio.errors import DataQualityError
from volratio.gof import ks_one_sample, ks_two_sample, pearson

PEARSON_DERIVED = 0.981980506061966  # sqrt(27/28), hand-computed for {1,2,3},{1,2,4}


def brute_force_one_sample(data, cdf) -> float:
    """O(n^2)-style direct evaluation of both one-sided gaps at each point."""
    x = np.sort(np.asarray(data, dtype=float))
    n = x.size
    d = 0.0
    for i, xi in enumerate(x):
        below = np.sum(x <= xi) / n
        at_or_above = np.sum(x < xi) / n
        f = float(cdf(np.array([xi]))[0])
        d = max(d, below - f, f - at_or_above)
    return d


def brute_force_two_sample(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = 0.0
    for t in np.concatenate([a, b]):
        fa = np.sum(a <= t) / a.size
        fb = np.sum(b <= t) / b.size
        d = max(d, abs(fa - fb))
    return d


def brute_force_pearson(x, y) -> float:
    """Pairwise-difference identity, independent of the moment formula."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    num = 0.0
    sxx = 0.0
    syy = 0.0
    for i in range(x.size):
        for j in range(i + 1, x.size):
            num += (x[i] - x[j]) * (y[i] - y[j])
            sxx += (x[i] - x[j]) ** 2
            syy += (y[i] - y[j]) ** 2
    return num / np.sqrt(sxx * syy)


class TestOneSampleKS:
    def test_equioscillating_sample(self):
        # Against the uniform CDF, the sample {(i-0.5)/n} leaves gaps of
        # exactly 0.5/n on both sides.
        n = 20
        data = (np.arange(1, n + 1) - 0.5) / n
        stat = ks_one_sample(data, lambda v: np.clip(v, 0.0, 1.0))
        assert stat.d == pytest.approx(0.5 / n, abs=1e-15)
        assert stat.n == n

    def test_single_point_at_median(self):
        stat = ks_one_sample([0.5], lambda v: np.clip(v, 0.0, 1.0))
        assert stat.d == pytest.approx(0.5, abs=1e-15)

    def test_ties_handled_exactly(self):
        data = [0.2, 0.2, 0.2, 0.8]
        cdf = lambda v: np.clip(v, 0.0, 1.0)
        assert ks_one_sample(data, cdf).d == pytest.approx(
            brute_force_one_sample(data, cdf), abs=1e-15
        )

    def test_matches_brute_force_on_random_instances(self):
        rng = np.random.default_rng(61)
        cdf = lambda v: np.clip(v, 0.0, 1.0)
        for _ in range(100):
            n = rng.integers(1, 50)
            data = np.round(rng.uniform(0, 1, n), 2)  # rounding forces ties
            assert ks_one_sample(data, cdf).d == pytest.approx(
                brute_force_one_sample(data, cdf), abs=1e-12
            )

    def test_invariant_under_increasing_transform(self):
        # Map x -> 1/x: order reverses, and the model CDF maps to the
        # complementary CDF of the reciprocal.
        rng = np.random.default_rng(62)
        data = rng.lognormal(0.0, 0.5, 500)
        from volratio import distributions as d

        spec = d.make_spec("lognormal", 0.0, 0.5)
        direct = ks_one_sample(data, lambda v: d.cdf(spec, v))
        inv_cdf = lambda v: 1.0 - np.asarray(d.cdf(spec, 1.0 / np.asarray(v)))
        transformed = ks_one_sample(1.0 / data, inv_cdf)
        assert transformed.d == pytest.approx(direct.d, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ks_one_sample([], lambda v: v)


class TestTwoSampleKS:
    def test_identical_vectors(self):
        a = [0.3, 1.2, 5.0, 2.2]
        assert ks_two_sample(a, a).d == 0.0

    def test_disjoint_supports(self):
        assert ks_two_sample([1, 2, 3], [10, 11]).d == 1.0

    def test_interleaved_hand_case(self):
        stat = ks_two_sample([1.0, 2.0], [1.5])
        assert stat.d == pytest.approx(0.5, abs=1e-15)
        assert stat.n == (2, 1)

    @given(
        st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=40),
        st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=40),
    )
    @settings(max_examples=200, deadline=None)
    def test_symmetry_exact(self, a, b):
        assert ks_two_sample(a, b).d == ks_two_sample(b, a).d

    def test_matches_brute_force_on_random_instances(self):
        rng = np.random.default_rng(63)
        for _ in range(100):
            n1, n2 = rng.integers(1, 50, 2)
            a = np.round(rng.normal(0, 1, n1), 1)
            b = np.round(rng.normal(0.3, 1.2, n2), 1)
            assert ks_two_sample(a, b).d == pytest.approx(
                brute_force_two_sample(a, b), abs=1e-12
            )

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ks_two_sample([], [1.0])


class TestPearson:
    def test_perfect_correlation(self):
        x = [0.5, 1.5, 9.0, -2.0]
        assert pearson(x, x) == 1.0

    def test_perfect_anticorrelation(self):
        x = np.array([0.5, 1.5, 9.0, -2.0])
        assert pearson(x, -x) == -1.0

    def test_hand_computed_value(self):
        assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(PEARSON_DERIVED, abs=1e-12)

    def test_matches_brute_force_on_random_instances(self):
        rng = np.random.default_rng(64)
        for _ in range(100):
            n = rng.integers(2, 50)
            x = rng.normal(0, 2, n)
            y = x * rng.uniform(-1, 1) + rng.normal(0, 1, n)
            if np.ptp(x) == 0 or np.ptp(y) == 0:
                continue
            assert pearson(x, y) == pytest.approx(brute_force_pearson(x, y), abs=1e-12)

    def test_affine_invariance(self):
        rng = np.random.default_rng(65)
        x = rng.normal(0, 1, 300)
        y = 0.6 * x + rng.normal(0, 0.8, 300)
        base = pearson(x, y)
        assert pearson(3.7 * x + 11.0, y) == pytest.approx(base, abs=1e-12)
        assert pearson(x, 0.004 * y - 2.5) == pytest.approx(base, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            pearson([1], [2])
        with pytest.raises(DataQualityError):
            pearson([1, 1, 1], [1, 2, 3])
