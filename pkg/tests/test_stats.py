import math
import random
import warnings

import pytest
import scipy.special
import scipy.stats

from maskbench.stats import (
    PairedOutcomeTable,
    UndefinedTestError,
    benjamini_hochberg,
    chi2_sf,
    mcnemar,
    normal_sf,
    odds_ratio,
    regularized_gamma_q,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)


class TestTable:
    def test_total(self):
        assert PairedOutcomeTable(1, 2, 3, 4).n == 10

    @pytest.mark.parametrize("cells", [(-1, 0, 0, 0), (0, -2, 0, 0), (0, 0, 0, -1)])
    def test_negative_counts_rejected(self, cells):
        with pytest.raises(ValueError):
            PairedOutcomeTable(*cells)


class TestGammaAndSf:
    @pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 2.5, 5.0, 10.0])
    @pytest.mark.parametrize("x", [0.0, 0.25, 1.0, 2.5, 4.05, 9.0, 20.0, 40.0])
    def test_regularized_gamma_q_matches_scipy(self, a, x):
        want = float(scipy.special.gammaincc(a, x))
        assert regularized_gamma_q(a, x) == pytest.approx(want, rel=1e-10, abs=1e-14)

    def test_regularized_gamma_q_domain(self):
        with pytest.raises(ValueError):
            regularized_gamma_q(0.0, 1.0)
        with pytest.raises(ValueError):
            regularized_gamma_q(1.0, -0.5)

    @pytest.mark.parametrize("df", [1, 2, 3, 5, 10])
    @pytest.mark.parametrize("x", [0.0, 0.1, 1.0, 4.05, 10.0, 25.0, 80.0])
    def test_chi2_sf_matches_scipy(self, df, x):
        want = float(scipy.stats.chi2.sf(x, df))
        assert chi2_sf(x, df) == pytest.approx(want, rel=1e-9, abs=1e-15)

    @pytest.mark.parametrize("z", [-4.0, -1.0, 0.0, 0.5, 1.96, 3.0, 8.0])
    def test_normal_sf_matches_scipy(self, z):
        want = float(scipy.stats.norm.sf(z))
        assert normal_sf(z) == pytest.approx(want, rel=1e-12, abs=1e-300)


class TestMcnemar:
    def test_worked_example(self):
        stat, p = mcnemar(PairedOutcomeTable(40, 15, 5, 40))
        assert stat == pytest.approx(4.05, abs=1e-12)
        assert p == pytest.approx(float(scipy.stats.chi2.sf(4.05, 1)), abs=1e-12)

    def test_symmetric_in_discordant_cells(self):
        t1 = mcnemar(PairedOutcomeTable(0, 15, 5, 0))
        t2 = mcnemar(PairedOutcomeTable(0, 5, 15, 0))
        assert t1 == t2

    def test_equal_discordance_is_not_significant(self):
        stat, p = mcnemar(PairedOutcomeTable(3, 7, 7, 3))
        # continuity correction: (|0| - 1)^2 / 14
        assert stat == pytest.approx(1.0 / 14.0, abs=1e-15)
        assert p > 0.5

    def test_no_discordance_is_undefined(self):
        with pytest.raises(UndefinedTestError):
            mcnemar(PairedOutcomeTable(10, 0, 0, 10))

    def test_concordant_cells_are_irrelevant(self):
        assert mcnemar(PairedOutcomeTable(0, 12, 3, 0)) == mcnemar(
            PairedOutcomeTable(99, 12, 3, 1)
        )


class TestOddsRatio:
    def test_plain_ratio(self):
        res = odds_ratio(PairedOutcomeTable(0, 10, 5, 0))
        assert res.value == 2.0
        assert res.haldane_corrected is False

    def test_haldane_zero_denominator(self):
        res = odds_ratio(PairedOutcomeTable(0, 10, 0, 0))
        assert res.value == pytest.approx(10.5 / 0.5)
        assert res.haldane_corrected is True

    def test_haldane_zero_numerator(self):
        res = odds_ratio(PairedOutcomeTable(0, 0, 4, 0))
        assert res.value == pytest.approx(0.5 / 4.5)
        assert res.haldane_corrected is True

    def test_haldane_both_zero(self):
        res = odds_ratio(PairedOutcomeTable(5, 0, 0, 5))
        assert res.value == 1.0
        assert res.haldane_corrected is True


class TestBenjaminiHochberg:
    def test_matches_scipy_on_random_vectors(self):
        rnd = random.Random(5150)
        for _ in range(200):
            m = rnd.randrange(1, 40)
            ps = [rnd.random() for _ in range(m)]
            if rnd.random() < 0.5 and m > 2:
                ps[rnd.randrange(m)] = ps[rnd.randrange(m)]  # inject ties
            want = scipy.stats.false_discovery_control(ps, method="bh")
            got = benjamini_hochberg(ps)
            for g, w in zip(got, want):
                assert g == pytest.approx(float(w), abs=1e-12)

    def test_endpoints_and_ties(self):
        got = benjamini_hochberg([0.0, 1.0, 0.5, 0.5])
        want = scipy.stats.false_discovery_control([0.0, 1.0, 0.5, 0.5], method="bh")
        for g, w in zip(got, want):
            assert g == pytest.approx(float(w), abs=1e-12)

    def test_monotone_and_at_least_raw(self):
        rnd = random.Random(7)
        for _ in range(50):
            ps = [rnd.random() for _ in range(rnd.randrange(2, 30))]
            adj = benjamini_hochberg(ps)
            assert all(0.0 <= q <= 1.0 for q in adj)
            assert all(q >= p - 1e-15 for q, p in zip(adj, ps))
            pairs = sorted(zip(ps, adj))
            for (p1, q1), (p2, q2) in zip(pairs, pairs[1:]):
                assert q1 <= q2 + 1e-15
                if p1 == p2:
                    assert q1 == q2

    def test_order_preserved_under_permutation(self):
        rnd = random.Random(11)
        ps = [rnd.random() for _ in range(25)]
        base = benjamini_hochberg(ps)
        perm = list(range(25))
        rnd.shuffle(perm)
        shuffled = benjamini_hochberg([ps[i] for i in perm])
        for slot, src in enumerate(perm):
            assert shuffled[slot] == pytest.approx(base[src], abs=1e-15)

    def test_single_and_empty(self):
        assert benjamini_hochberg([0.037]) == [0.037]
        assert benjamini_hochberg([]) == []

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
    def test_invalid_p_rejected(self, bad):
        with pytest.raises(ValueError):
            benjamini_hochberg([0.5, bad])


class TestSignedRank:
    def test_hand_worked_example(self):
        diffs = [3, -1, 2, 4, 5]
        with pytest.warns(UserWarning, match="signed-rank"):
            stat, p = wilcoxon_signed_rank(diffs)
        # |d| ranks 3,1,2,4,5 -> W+ = 14, W- = 1
        assert stat == 1.0
        res = scipy.stats.wilcoxon(
            diffs, zero_method="wilcox", correction=True, method="approx"
        )
        assert p == pytest.approx(float(res.pvalue), abs=1e-12)

    def test_zeros_are_dropped(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with_zeros = wilcoxon_signed_rank([0, 3, -1, 2, 0, 4, 5])
            without = wilcoxon_signed_rank([3, -1, 2, 4, 5])
        assert with_zeros == without

    def test_all_zero_is_undefined(self):
        with pytest.raises(UndefinedTestError):
            wilcoxon_signed_rank([0, 0, 0])

    def test_no_warning_for_large_samples(self):
        diffs = [(-1) ** i * (i + 1) * 0.5 for i in range(25)]
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            wilcoxon_signed_rank(diffs)

    def test_random_cases_match_scipy(self):
        rnd = random.Random(314)
        checked = 0
        while checked < 120:
            n = rnd.randrange(21, 45)
            diffs = [rnd.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]) for _ in range(n)]
            got_stat, got_p = wilcoxon_signed_rank(diffs)
            res = scipy.stats.wilcoxon(
                diffs, zero_method="wilcox", correction=True, method="approx"
            )
            assert got_stat == pytest.approx(float(res.statistic), abs=1e-9)
            assert got_p == pytest.approx(float(res.pvalue), abs=1e-10)
            checked += 1


class TestRankSum:
    def test_hand_worked_example(self):
        with pytest.warns(UserWarning, match="rank-sum"):
            stat, p = wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])
        assert stat == 0.0  # complete separation: U1 = 0
        res = scipy.stats.mannwhitneyu(
            [1, 2, 3], [4, 5, 6], use_continuity=True, method="asymptotic"
        )
        assert p == pytest.approx(float(res.pvalue), abs=1e-12)

    def test_empty_sample_is_undefined(self):
        with pytest.raises(UndefinedTestError):
            wilcoxon_rank_sum([], [1.0])
        with pytest.raises(UndefinedTestError):
            wilcoxon_rank_sum([1.0], [])

    def test_symmetry_in_sample_order(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert wilcoxon_rank_sum([1, 5, 7], [2, 2, 9]) == wilcoxon_rank_sum(
                [2, 2, 9], [1, 5, 7]
            )

    def test_random_cases_match_scipy(self):
        rnd = random.Random(2718)
        checked = 0
        while checked < 120:
            n1 = rnd.randrange(21, 40)
            n2 = rnd.randrange(21, 40)
            xs = [rnd.randrange(0, 12) for _ in range(n1)]
            ys = [rnd.randrange(0, 12) for _ in range(n2)]
            got_stat, got_p = wilcoxon_rank_sum(xs, ys)
            # the continuity conventions only disagree when the statistic
            # sits within half a unit of its mean; skip that sliver
            if abs(got_stat - n1 * n2 / 2.0) <= 0.5:
                continue
            res = scipy.stats.mannwhitneyu(
                xs, ys, use_continuity=True, method="asymptotic"
            )
            u1 = float(res.statistic)
            assert got_stat == pytest.approx(min(u1, n1 * n2 - u1), abs=1e-9)
            assert got_p == pytest.approx(float(res.pvalue), abs=1e-10)
            checked += 1

    def test_tied_data_matches_scipy(self):
        xs = [3] * 12 + [1] * 10
        ys = [3] * 9 + [5] * 14
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            got_stat, got_p = wilcoxon_rank_sum(xs, ys)
        res = scipy.stats.mannwhitneyu(xs, ys, use_continuity=True, method="asymptotic")
        u1 = float(res.statistic)
        assert got_stat == pytest.approx(min(u1, len(xs) * len(ys) - u1), abs=1e-9)
        assert got_p == pytest.approx(float(res.pvalue), abs=1e-10)
