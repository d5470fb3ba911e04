import itertools
from fractions import Fraction

import pytest
from scipy.stats import binom

from hqc_rmrs.error_model import (
    WeightPmf,
    binomial_pmf,
    decimal_string,
    format_log2,
    log2_frac,
    model_report,
    p_star,
    p_tilde,
)


def p_tilde_exhaustive(n, w, w_r):
    """Oracle: average z_0 over every ordered pair of supports."""
    ones = 0
    total = 0
    for xs in itertools.combinations(range(n), w):
        xset = set(xs)
        for rs in itertools.combinations(range(n), w_r):
            # z_0 = parity of #{i : x_i = 1 and r_{-i} = 1}
            hits = sum(1 for i in xs if (-i) % n in rs)
            ones += hits & 1
            total += 1
    return Fraction(ones, total)


class TestPTilde:
    def test_exhaustive_oracle_all_small_cases(self):
        for n in range(1, 9):
            for w in range(0, n + 1):
                for w_r in range(0, n + 1):
                    assert p_tilde(n, w, w_r) == p_tilde_exhaustive(n, w, w_r), (n, w, w_r)

    def test_single_collision_pair(self):
        for n in (2, 5, 23869):
            assert p_tilde(n, 1, 1) == Fraction(1, n)

    def test_hand_enumeration_n3(self):
        assert p_tilde(3, 2, 2) == Fraction(2, 3)

    def test_symmetry(self):
        for n, w, wr in ((11, 3, 5), (20533, 67, 77), (97, 10, 4)):
            assert p_tilde(n, w, wr) == p_tilde(n, wr, w)

    def test_zero_weight(self):
        assert p_tilde(10, 0, 4) == 0

    def test_invalid_weights(self):
        with pytest.raises(ValueError):
            p_tilde(5, 6, 1)
        with pytest.raises(ValueError):
            p_tilde(5, 1, -1)


class TestPStar:
    def test_reference_values_to_four_decimals(self):
        cases = [
            ((23869, 67, 77, 77), "0.2918"),
            ((20533, 67, 77, 77), "0.3196"),
            ((38923, 101, 117, 117), "0.3535"),
            ((59957, 133, 153, 153), "0.3728"),
        ]
        for args, expected in cases:
            value = p_star(*args)
            assert f"{float(value):.4f}" == expected

    def test_degenerate_no_extra_noise(self):
        pt = p_tilde(101, 5, 7)
        assert p_star(101, 5, 7, 0) == 2 * pt * (1 - pt)

    def test_pure_bernoulli_noise(self):
        # w = w_r = 0 leaves only the weight-w_e vector
        assert p_star(50, 0, 0, 13) == Fraction(13, 50)

    def test_invalid(self):
        with pytest.raises(ValueError):
            p_star(10, 3, 3, 11)


class TestWeightPmf:
    def test_mass_sums_to_one_exactly(self):
        for n, p in ((1, Fraction(1, 3)), (17, Fraction(2, 7)), (40, Fraction(123, 1000))):
            total = sum(binomial_pmf(n, p, d) for d in range(n + 1))
            assert total == 1

    def test_mass_matches_scipy(self):
        pmf = WeightPmf(300, Fraction(29, 100))
        for d in (0, 50, 87, 150, 300):
            assert float(pmf.mass(d)) == pytest.approx(binom.pmf(d, 300, 0.29), rel=1e-9)

    def test_tail_exact_vs_series(self):
        pmf = WeightPmf(200, Fraction(3196, 10000))
        for t in (0, 50, 64, 80, 120, 199, 200):
            exact = pmf.tail_gt_exact(t)
            series = pmf.tail_gt(t)
            if exact:
                assert abs(float(series) / float(exact) - 1) < 1e-30
            else:
                assert series == 0

    def test_quantile_convention_hand_case(self):
        # Binomial(3, 1/2): P(W>t) = 7/8, 4/8, 1/8, 0
        pmf = WeightPmf(3, Fraction(1, 2))
        assert pmf.upper_quantile(Fraction(1, 8)) == 2
        assert pmf.upper_quantile(Fraction(1, 2)) == 1
        assert pmf.upper_quantile(Fraction(3, 8)) == 2
        assert pmf.upper_quantile(0) == 3
        assert pmf.upper_quantile(1) == 0

    def test_reference_binomial_quantiles(self):
        # simulation set I: truncated length 23746
        pmf1 = WeightPmf(23746, p_star(23869, 67, 77, 77))
        assert abs(pmf1.upper_quantile(Fraction(1, 1000)) - 7147) <= 2
        assert abs(pmf1.upper_quantile(Fraction(1, 10000)) - 7191) <= 2
        # simulation set II: truncated length 20480
        pmf2 = WeightPmf(20480, p_star(20533, 67, 77, 77))
        assert abs(pmf2.upper_quantile(Fraction(1, 1000)) - 6753) <= 2
        assert abs(pmf2.upper_quantile(Fraction(1, 10000)) - 6796) <= 2

    def test_quantiles_match_scipy_oracle(self):
        n, p = 20480, p_star(20533, 67, 77, 77)
        pmf = WeightPmf(n, p)
        for q in (1e-3, 1e-4, 1e-5, 1e-6):
            t = pmf.upper_quantile(Fraction(q).limit_denominator(10**9))
            # smallest t with sf(t) <= q, float oracle
            t0 = int(binom.isf(q, n, float(p)))
            while binom.sf(t0, n, float(p)) > q:
                t0 += 1
            while t0 > 0 and binom.sf(t0 - 1, n, float(p)) <= q:
                t0 -= 1
            assert t == t0

    def test_tail_monotone_in_p(self):
        n, t = 500, 180
        tails = [WeightPmf(n, Fraction(k, 100)).tail_gt(t) for k in (20, 25, 30, 35)]
        assert all(a < b for a, b in zip(tails, tails[1:]))

    def test_quantile_monotone_in_p(self):
        qs = [WeightPmf(1000, Fraction(k, 100)).upper_quantile(Fraction(1, 1000))
              for k in (10, 20, 30, 40)]
        assert qs == sorted(qs)

    def test_mean_and_rows(self):
        pmf = WeightPmf(256, p_star(20533, 67, 77, 77))
        assert float(pmf.mean()) == pytest.approx(81.826, abs=0.01)
        rows = pmf.pmf_rows()
        total = sum(v for _, v in rows)
        assert total == pytest.approx(1.0, abs=1e-6)


class TestShiftInvariance:
    def test_per_coordinate_frequencies_flat(self):
        # the analytic parameter is coordinate-independent, so measured
        # per-coordinate frequencies of the error vector must be flat
        # (chi-square over coordinates at desk scale)
        from scipy.stats import chi2

        from hqc_rmrs import prng
        from hqc_rmrs.ring import sample_fixed_weight, support_mul

        n, w, w_r, w_e, trials = 211, 8, 9, 5, 30_000
        ps = float(p_star(n, w, w_r, w_e))
        sec = prng.stream(77, prng.DOMAIN_SECRET)
        enc = prng.stream(77, prng.DOMAIN_ENCRYPT)
        counts = [0] * n
        for _ in range(trials):
            x = sample_fixed_weight(n, w, sec)
            y = sample_fixed_weight(n, w, sec)
            r1 = sample_fixed_weight(n, w_r, enc)
            r2 = sample_fixed_weight(n, w_r, enc)
            e = sample_fixed_weight(n, w_e, enc)
            err = support_mul(x, r2) + support_mul(r1, y) + e.to_ring()
            for i in err.support():
                counts[i] += 1
        expected = trials * ps
        stat = sum((c - expected) ** 2 for c in counts) / (expected * (1 - ps))
        # statistic is ~ chi-square with n degrees of freedom
        assert stat < chi2.ppf(1 - 1e-6, df=n)
        assert stat > chi2.ppf(1e-6, df=n)


class TestReporting:
    def test_log2_frac_exact_powers(self):
        assert log2_frac(Fraction(1, 2**100)) == -100.0
        assert log2_frac(Fraction(1, 1)) == 0.0

    def test_log2_deep_tail_no_underflow(self):
        # a value near 2^-1500 is far below float range
        assert log2_frac(Fraction(3, 2**1500)) == pytest.approx(-1498.415, abs=1e-3)

    def test_format_log2_round_half_even(self):
        assert format_log2(Fraction(1, 2**100)) == "-100.00"
        assert format_log2(Fraction(1, 2**3), decimals=1) == "-3.0"

    def test_decimal_string(self):
        assert decimal_string(Fraction(1, 8), 10) == "0.125"
        assert decimal_string(Fraction(1, 3), 5).startswith("0.3333")

    def test_model_report_shape(self):
        rep = model_report(211, 8, 9, 5, length=200,
                           tail_masses=(Fraction(1, 100),))
        assert rep["n"] == 211 and rep["length"] == 200
        assert rep["p_star"].startswith("0.")
        assert len(rep["log2_tails"]) == 1
        entry = rep["log2_tails"][0]
        assert entry["quantile"] > 0
        assert entry["log2_tail_at_quantile"] < 0

    def test_log2_rejects_zero(self):
        with pytest.raises(ValueError):
            log2_frac(Fraction(0))
