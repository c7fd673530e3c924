import itertools
import json
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from sylowmeet.errors import CutoffExceeded
from sylowmeet.estimator import (
    EstimateReport,
    Pmf,
    bias_bound,
    estimate_trivial,
    exhaustive_summary,
    expected_non_a,
    poisson_rate_constant,
    poisson_reference,
    tv_distance,
    w_histogram,
    w_pmf_empirical,
    w_pmf_exact,
    w_pmf_exhaustive,
    wilson_interval,
)
from sylowmeet.forest import build_forest
from sylowmeet.intersect import Matching, common_matching_rank, intersection_p_exact
from sylowmeet.perm import Permutation, parity
from sylowmeet.sampling import block_rng, block_sizes, sample_x_columns

E_HALF = math.exp(-0.5)


def w_law_brute(n):
    m = Matching.from_forest(build_forest(n))
    counts = Counter(
        common_matching_rank(m, Permutation(p)) for p in itertools.permutations(range(1, n + 1))
    )
    total = math.factorial(n)
    return {k: Fraction(c, total) for k, c in counts.items()}


def within(freq, p, N, k=5):
    return abs(freq - p) <= k * math.sqrt(p * (1 - p) / N)


class TestWExact:
    def test_n4(self):
        assert w_pmf_exact(4).probabilities == {0: Fraction(2, 3), 2: Fraction(1, 3)}

    def test_n6(self):
        assert w_pmf_exact(6)[0] == Fraction(8, 15) == 1 - Fraction(3, 5) + Fraction(1, 5) - Fraction(1, 15)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_brute_force(self, n):
        assert w_pmf_exact(n).probabilities == w_law_brute(n)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_vectorized_exhaustive(self, n):
        assert w_pmf_exhaustive(n).probabilities == w_law_brute(n)

    @pytest.mark.parametrize("n", [1, 2, 9, 10, 31, 100, 257])
    def test_normalized(self, n):
        pmf = w_pmf_exact(n)
        assert pmf.total() == 1
        assert set(pmf.probabilities) <= set(range(n // 2 + 1))
        assert all(p > 0 for p in pmf.probabilities.values())

    def test_rate(self):
        vals = [n * abs(float(w_pmf_exact(n)[0]) - E_HALF) for n in (10, 20, 40, 80, 160, 320, 640)]
        assert max(vals) < 0.32
        assert vals == sorted(vals, reverse=True)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            w_pmf_exact(0)
        with pytest.raises(ValueError):
            w_pmf_exact(4001)


class TestPoisson:
    def test_mass(self):
        assert poisson_reference()[0] == pytest.approx(0.606531, abs=1e-6)
        assert poisson_reference().total() == pytest.approx(1, abs=1e-15)

    def test_tv_self(self):
        p = w_pmf_exact(12)
        assert tv_distance(p, p) == 0

    def test_tv_fixture(self):
        assert tv_distance(w_pmf_exact(10), poisson_reference()) == pytest.approx(0.03246295591491509, abs=1e-12)

    def test_tv_tail(self):
        p = Pmf({0: 1.0}, exact=False)
        q = Pmf({0: 0.5}, exact=False)  # half its mass unlisted
        assert tv_distance(p, q) == pytest.approx(0.5)

    def test_tv_decreases(self):
        q = poisson_reference()
        tvs = [tv_distance(w_pmf_exact(n), q) for n in (10, 40, 160)]
        assert tvs == sorted(tvs, reverse=True)


class TestWEmpirical:
    def test_n2(self):
        assert w_pmf_empirical(2, 5000, 1).probabilities == {1: 1.0}

    def test_n4(self):
        N = 200_000
        pmf = w_pmf_empirical(4, N, 3)
        assert set(pmf.probabilities) == {0, 2}
        assert within(pmf[0], 2 / 3, N)

    def test_seeded(self):
        assert w_pmf_empirical(30, 10_000, 5) == w_pmf_empirical(30, 10_000, 5)
        assert w_pmf_empirical(30, 10_000, 5) != w_pmf_empirical(30, 10_000, 6)

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_unbiased(self, n):
        N = 1_000_000
        hist = w_histogram(n, N, seed=100 + n)
        for k, p in w_pmf_exact(n).probabilities.items():
            assert within(hist[k] / N, float(p), N)


class TestSampling:
    def test_block_layout(self):
        assert block_sizes(10_000, 4096) == [4096, 4096, 1808]
        assert block_sizes(4096, 4096) == [4096]

    def test_streams_differ(self):
        a = block_rng(7, 0).integers(0, 2**62, 4)
        b = block_rng(7, 1).integers(0, 2**62, 4)
        assert not np.array_equal(a, b)
        assert np.array_equal(a, block_rng(7, 0).integers(0, 2**62, 4))

    def test_columns_are_permutations(self):
        xs = sample_x_columns(13, 500, block_rng(1, 0))
        assert (np.sort(xs, axis=0) == np.arange(13)[:, None]).all()

    def test_alternating_space(self):
        xs = sample_x_columns(9, 700, block_rng(2, 0), "alternating")
        assert xs.shape == (9, 700)
        assert all(parity(Permutation.from_zero_based(c)) == "even" for c in xs.T)

    def test_uniform_s3_columns(self):
        N = 120_000
        xs = sample_x_columns(3, N, block_rng(3, 5))
        keys = xs[0] * 9 + xs[1] * 3 + xs[2]
        counts = Counter(keys.tolist())
        assert len(counts) == 6
        assert all(within(c / N, 1 / 6, N) for c in counts.values())


class TestEstimate:
    def test_n4_exhaustive_zero(self):
        r = estimate_trivial(4, backend="exact", exhaustive=True)
        assert r.estimate == 0 and r.samples == 24

    def test_n8_exhaustive_fast(self):
        r = estimate_trivial(8, exhaustive=True)
        assert r.estimate == w_pmf_exact(8)[0]
        r = estimate_trivial(8, mode="alternating", exhaustive=True)
        assert r.estimate == w_pmf_exact(8)[0] + w_pmf_exact(8)[1]

    def test_report_fields(self):
        r = estimate_trivial(50, 5000, seed=1)
        d = json.loads(r.to_json())
        for key in ("n", "mode", "backend", "samples", "successes", "estimate", "ci_low",
                    "ci_high", "seed", "reference_value", "abs_error"):
            assert key in d
        assert d["estimate"] == f"{r.successes}/5000" or Fraction(d["estimate"]) == r.estimate
        assert r.ci_low <= r.estimate <= r.ci_high
        assert d["reference_value"] == pytest.approx(0.606531, abs=1e-6)

    def test_alternating_reference(self):
        r = estimate_trivial(50, 5000, seed=1, mode="alternating")
        assert r.reference_value == pytest.approx(0.909796, abs=1e-6)

    def test_workers_invariant(self):
        a = estimate_trivial(60, 20_000, seed=9, workers=1)
        b = estimate_trivial(60, 20_000, seed=9, workers=3)
        assert a.to_json() == b.to_json()

    def test_exact_backend_sampled(self):
        a = estimate_trivial(8, 3000, seed=4, backend="exact", mode="alternating")
        b = estimate_trivial(8, 3000, seed=4, backend="exact", mode="alternating", workers=2)
        assert a == b
        full = exhaustive_summary(8).pr_even_part_trivial
        assert within(float(a.estimate), float(full), 3000)

    def test_exact_backend_matches_single_x(self):
        f = build_forest(6)
        xs = sample_x_columns(6, 50, block_rng(12, 0)).T
        trivial = sum(len(intersection_p_exact(f, Permutation.from_zero_based(x)).full_intersection) == 1 for x in xs)
        assert estimate_trivial(6, 50, seed=12, backend="exact").successes == trivial

    def test_alternating_x_space(self):
        r = estimate_trivial(8, exhaustive=True, x_space="alternating")
        assert r.samples == 20160
        N = 100_000
        s = estimate_trivial(8, N, seed=3, x_space="alternating")
        assert within(float(s.estimate), float(r.estimate), N)

    def test_errors(self):
        with pytest.raises(ValueError):
            estimate_trivial(10, 0, seed=1)
        with pytest.raises(ValueError):
            estimate_trivial(10, 10)
        with pytest.raises(CutoffExceeded):
            estimate_trivial(17, 10, seed=1, backend="exact")
        with pytest.raises(CutoffExceeded):
            estimate_trivial(10, backend="exact", exhaustive=True)
        with pytest.raises(ValueError):
            estimate_trivial(10, 10, seed=1, mode="dihedral")


class TestWilson:
    def test_contains_estimate(self):
        for s, n in [(0, 10), (10, 10), (3, 7), (500, 1000)]:
            lo, hi = wilson_interval(s, n)
            assert 0 <= lo <= s / n <= hi <= 1

    def test_coverage(self):
        target = float(w_pmf_exact(100)[0])
        hits = 0
        for rep in range(200):
            r = estimate_trivial(100, 10_000, seed=rep)
            hits += r.ci_low <= target <= r.ci_high
        assert hits >= 180


class TestExpectation:
    def test_n4(self):
        assert expected_non_a(4) == Fraction(8, 3)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
    def test_brute_force_mean(self, n):
        f = build_forest(n)
        mate = Matching.from_forest(f).mate
        total = 0
        for images in itertools.permutations(range(1, n + 1)):
            full = intersection_p_exact(f, Permutation(images)).full_intersection
            total += sum(1 for g in full if any(g(j) not in (j, mate.get(j, j)) for j in range(1, n + 1)))
        assert expected_non_a(n) == Fraction(total, math.factorial(n))

    def test_n8_exhaustive(self):
        summary = exhaustive_summary(8)
        assert summary.mean_non_a == expected_non_a(8) == Fraction(1376, 315)
        # Markov consistency and exact-vs-fast gap
        assert summary.pr_not_a_part <= expected_non_a(8)
        assert abs(summary.pr_trivial - summary.pr_w0) <= expected_non_a(8)
        assert summary.pr_trivial == 0
        assert summary.pr_w0 == Fraction(4, 7)

    def test_decay(self):
        vals = {n: n * expected_non_a(n) for n in (8, 16, 32, 64)}
        assert all(v <= vals[8] for v in vals.values())

    def test_bias_bound(self):
        assert bias_bound(8) == pytest.approx(float(Fraction(1376, 315)))
        assert bias_bound(1000) == pytest.approx(8 * 1376 / 315 / 1000)

    def test_guard(self):
        from sylowmeet.errors import GuardExceeded
        with pytest.raises(GuardExceeded):
            expected_non_a(128)


def test_poisson_rate_constant():
    c = poisson_rate_constant([10, 20, 40])
    assert 0.3 < c < 0.31
