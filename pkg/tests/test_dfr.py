from fractions import Fraction

import pytest

from hqc_rmrs.dfr import (
    concat_dfr,
    end_to_end_dfr,
    end_to_end_report,
    parse_probability,
    quantize_up,
    rm_dfr_improved,
    rm_dfr_simple,
)
from hqc_rmrs.error_model import log2_frac
from hqc_rmrs.params import get_params

# (printed transition probability, inner distance, simple, improved)
REFERENCE_BOUNDS = [
    ("0.3196", 128, -7.84, -8.03),
    ("0.3535", 256, -11.81, -12.12),
    ("0.3728", 384, -13.90, -14.20),
]


class TestInnerBounds:
    def test_reference_cells(self):
        for ptxt, d_i, simple, improved in REFERENCE_BOUNDS:
            got_s = log2_frac(rm_dfr_simple(ptxt, d_i))
            got_i = log2_frac(rm_dfr_improved(ptxt, d_i))
            assert abs(got_s - simple) <= 0.02, (ptxt, d_i)
            assert abs(got_i - improved) <= 0.02, (ptxt, d_i)

    def test_improved_below_simple_in_operating_regime(self):
        # the pairwise-tie term carries a C(255,2) factor, so the sharpened
        # bound only wins while the failure rate is genuinely small; the
        # grid covers every shipped operating point with margin
        grid = {64: 25, 128: 33, 256: 38, 384: 38}
        for d_i, kmax in grid.items():
            for k in range(2, kmax + 1, 3):
                p = Fraction(k, 100)
                assert rm_dfr_improved(p, d_i) < rm_dfr_simple(p, d_i), (k, d_i)
        for ptxt, d_i, _, _ in REFERENCE_BOUNDS:
            p = Fraction(ptxt)
            assert rm_dfr_improved(p, d_i) < rm_dfr_simple(p, d_i)

    def test_monotone_in_p(self):
        for d_i in (64, 128):
            vals_s = [rm_dfr_simple(Fraction(k, 100), d_i) for k in range(5, 50, 5)]
            vals_i = [rm_dfr_improved(Fraction(k, 100), d_i) for k in range(5, 50, 5)]
            assert vals_s == sorted(vals_s)
            assert vals_i == sorted(vals_i)

    def test_odd_distance_rejected(self):
        with pytest.raises(ValueError):
            rm_dfr_simple("0.3", 127)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            rm_dfr_simple(0.3196, 128)


class TestConcatDfr:
    def test_zero_inner_rate(self):
        assert concat_dfr(80, 24, Fraction(0)) == 0

    def test_hand_summation(self):
        # n_e=3, delta_e=1, p=1/2: C(3,2)/8 + C(3,3)/8 = 1/2
        assert concat_dfr(3, 1, Fraction(1, 2)) == Fraction(1, 2)

    def test_monotone_in_inner_rate(self):
        vals = [concat_dfr(80, 24, Fraction(k, 1000)) for k in (1, 5, 20, 100, 400)]
        assert vals == sorted(vals)

    def test_saturates_above_one(self):
        assert concat_dfr(10, 2, Fraction(3, 2)) == 1

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            concat_dfr(10, 10, Fraction(1, 2))


class TestEndToEnd:
    def test_proposed_sets_clear_security_targets(self):
        for name, target in (("hqc-rmrs-128", -128),
                             ("hqc-rmrs-192", -192),
                             ("hqc-rmrs-256", -256)):
            dfr = end_to_end_dfr(get_params(name), bound="improved")
            assert log2_frac(dfr) < target, name

    def test_simple_bound_also_available(self):
        dfr_s = end_to_end_dfr(get_params("hqc-rmrs-192"), bound="simple")
        dfr_i = end_to_end_dfr(get_params("hqc-rmrs-192"), bound="improved")
        assert dfr_i < dfr_s

    def test_report_fields(self):
        rep = end_to_end_report(get_params("hqc-rmrs-128"))
        assert rep["params_id"] == "hqc-rmrs-128"
        assert rep["p_star"].startswith("0.3196")
        assert rep["dfr_log2"] < -128
        assert rep["dfr_log2_simple"] >= rep["dfr_log2"]

    def test_unknown_bound(self):
        with pytest.raises(ValueError):
            end_to_end_dfr(get_params("hqc-rmrs-128"), bound="best")


class TestQuantize:
    def test_rounds_up_within_resolution(self):
        p = Fraction(1, 3)
        q = quantize_up(p, 64)
        assert q >= p
        assert q - p < Fraction(1, 2**64)

    def test_dyadic_fixed_point(self):
        p = Fraction(5, 8)
        assert quantize_up(p, 10) == p

    def test_parse_probability(self):
        assert parse_probability("0.3196") == Fraction(3196, 10000)
        assert parse_probability(Fraction(1, 3)) == Fraction(1, 3)
        with pytest.raises(ValueError):
            parse_probability("1.5")
        with pytest.raises(TypeError):
            parse_probability(0.25)
