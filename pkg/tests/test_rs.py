import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hqc_rmrs import prng
from hqc_rmrs.rs import (
    FIELD_POLY,
    DecodeFailure,
    RsCode,
    gf_inv,
    gf_mul,
    gf_pow,
    rs_decode,
    rs_encode,
    syndromes,
)

SHIPPED = [RsCode(80), RsCode(76), RsCode(78)]


def gf_mul_longdivision(a: int, b: int) -> int:
    """Oracle: carry-less product then long division by the field polynomial."""
    prod = 0
    for i in range(8):
        if (b >> i) & 1:
            prod ^= a << i
    for deg in range(prod.bit_length() - 1, 7, -1):
        if (prod >> deg) & 1:
            prod ^= FIELD_POLY << (deg - 8)
    return prod


def corrupt(cw: bytes, nerrors: int, rng) -> bytes:
    out = bytearray(cw)
    pos = rng.choice(len(cw), nerrors, replace=False)
    for p in pos:
        out[p] ^= int(rng.integers(1, 256))
    return bytes(out)


class TestField:
    def test_multiplicative_identity(self):
        for a in range(256):
            assert gf_mul(a, 1) == a

    def test_documented_example(self):
        assert gf_mul(0x02, 0x80) == 0x1D
        assert gf_mul_longdivision(0x02, 0x80) == 0x1D

    def test_matches_long_division_oracle(self):
        rng = prng.stream(3, 0)
        for _ in range(2000):
            a, b = (int(x) for x in rng.integers(0, 256, 2))
            assert gf_mul(a, b) == gf_mul_longdivision(a, b)

    def test_generator_has_order_255(self):
        x, seen = 1, set()
        for _ in range(255):
            x = gf_mul(x, 0x02)
            seen.add(x)
        assert x == 1 and len(seen) == 255

    def test_inverse(self):
        for a in range(1, 256):
            assert gf_mul(a, gf_inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            gf_inv(0)

    def test_pow(self):
        assert gf_pow(0x02, 0) == 1
        assert gf_pow(0, 0) == 1
        assert gf_pow(0, 5) == 0
        assert gf_pow(0x02, 255) == 1

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_field_axioms(self, a, b, c):
        assert gf_mul(a, b) == gf_mul(b, a)
        assert gf_mul(gf_mul(a, b), c) == gf_mul(a, gf_mul(b, c))
        assert gf_mul(a, b ^ c) == gf_mul(a, b) ^ gf_mul(a, c)


class TestCodeShape:
    def test_shipped_codes_are_mds(self):
        for code, d in zip(SHIPPED, (49, 45, 47)):
            assert code.d_e == code.n_e - code.k_e + 1 == d
            assert code.d_e == 2 * code.delta_e + 1

    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            RsCode(32)
        with pytest.raises(ValueError):
            RsCode(256)
        with pytest.raises(ValueError):
            RsCode(77)  # odd parity count


class TestEncode:
    def test_zero_message(self):
        for code in SHIPPED:
            assert rs_encode(bytes(code.k_e), code) == bytes(code.n_e)

    def test_systematic(self):
        rng = prng.stream(5, 0)
        for code in SHIPPED:
            msg = rng.bytes(code.k_e)
            assert rs_encode(msg, code)[code.n_e - code.k_e:] == msg

    def test_codewords_have_zero_syndromes(self):
        rng = prng.stream(7, 0)
        for code in SHIPPED:
            for _ in range(20):
                cw = rs_encode(rng.bytes(code.k_e), code)
                assert not syndromes(np.frombuffer(cw, dtype=np.uint8), code).any()

    def test_random_codewords_differ_in_d_e_symbols(self):
        code = RsCode(80)
        rng = prng.stream(9, 0)
        for _ in range(200):
            a = rs_encode(rng.bytes(32), code)
            b = rs_encode(rng.bytes(32), code)
            if a == b:
                continue
            diff = sum(x != y for x, y in zip(a, b))
            assert diff >= 49

    def test_linearity(self):
        code = RsCode(76)
        rng = prng.stream(11, 0)
        m1, m2 = rng.bytes(32), rng.bytes(32)
        lhs = rs_encode(bytes(a ^ b for a, b in zip(m1, m2)), code)
        rhs = bytes(a ^ b for a, b in zip(rs_encode(m1, code), rs_encode(m2, code)))
        assert lhs == rhs

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError):
            rs_encode(bytes(31), RsCode(80))


class TestDecode:
    def test_zero_errors(self):
        rng = prng.stream(13, 0)
        for code in SHIPPED:
            msg = rng.bytes(32)
            assert rs_decode(rs_encode(msg, code), code) == msg

    def test_full_radius_80_32_49(self):
        code = RsCode(80)
        rng = prng.stream(15, 0)
        for _ in range(300):
            msg = rng.bytes(32)
            word = corrupt(rs_encode(msg, code), 24, rng)
            assert rs_decode(word, code) == msg

    def test_full_radius_76_32_45(self):
        code = RsCode(76)
        rng = prng.stream(17, 0)
        for _ in range(300):
            msg = rng.bytes(32)
            word = corrupt(rs_encode(msg, code), 22, rng)
            assert rs_decode(word, code) == msg

    def test_all_weights_up_to_radius(self):
        code = RsCode(78)
        rng = prng.stream(19, 0)
        for werr in range(code.delta_e + 1):
            msg = rng.bytes(32)
            word = corrupt(rs_encode(msg, code), werr, rng)
            assert rs_decode(word, code) == msg

    def test_beyond_radius_is_failure_event(self):
        # weight delta_e + 6 can never return the transmitted message:
        # either DecodeFailure or a different codeword's message
        code = RsCode(80)
        rng = prng.stream(21, 0)
        outcomes = set()
        for _ in range(200):
            msg = rng.bytes(32)
            word = corrupt(rs_encode(msg, code), 30, rng)
            try:
                got = rs_decode(word, code)
                assert got != msg
                outcomes.add("miscorrect")
            except DecodeFailure:
                outcomes.add("failure")
        assert "failure" in outcomes

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError):
            rs_decode(bytes(79), RsCode(80))
