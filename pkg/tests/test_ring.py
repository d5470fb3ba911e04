import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hqc_rmrs import prng
from hqc_rmrs.ring import (
    RingElement,
    SparseSupport,
    cyclic_mul,
    cyclic_mul_sparse,
    rot_matrix,
    sample_fixed_weight,
    sample_uniform,
    support_mul,
    validate_primitive_prime,
)


def naive_cyclic_mul(u: RingElement, v: RingElement) -> RingElement:
    """Independent oracle: double-loop convolution straight from the
    definition w_k = sum_{i+j=k mod n} u_i v_j."""
    n = u.n
    out = [0] * n
    for i in range(n):
        if not u.bit(i):
            continue
        for j in range(n):
            if v.bit(j):
                out[(i + j) % n] ^= 1
    return RingElement.from_bits(out)


def random_element(n, rng, weight=None):
    if weight is None:
        return sample_uniform(n, rng)
    return sample_fixed_weight(n, weight, rng).to_ring()


class TestCyclicMul:
    def test_multiplicative_identity(self):
        rng = prng.stream(7, 0)
        for n in (1, 2, 17, 64, 257):
            v = sample_uniform(n, rng)
            assert cyclic_mul(RingElement.one(n), v) == v

    def test_spec_example_n7(self):
        u = RingElement.from_support(7, [0, 1, 3])
        v = RingElement.from_support(7, [1, 2])
        got = cyclic_mul(u, v)
        assert got == naive_cyclic_mul(u, v)
        assert got.support() == [1, 3, 4, 5]

    def test_wraparound_x_times_x4(self):
        u = RingElement.from_support(5, [1])
        v = RingElement.from_support(5, [4])
        assert cyclic_mul(u, v).support() == [0]

    def test_matches_naive_oracle(self):
        rng = prng.stream(11, 0)
        for n in (1, 2, 3, 8, 31, 64, 65, 200, 1024, 2048):
            u = sample_uniform(n, rng)
            v = sample_uniform(n, rng)
            assert cyclic_mul(u, v) == naive_cyclic_mul(u, v)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cyclic_mul(RingElement.one(5), RingElement.one(6))

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_commutative(self, data):
        n = data.draw(st.integers(1, 2048))
        a = data.draw(st.integers(0, (1 << n) - 1))
        b = data.draw(st.integers(0, (1 << n) - 1))
        u, v = RingElement(n, a), RingElement(n, b)
        assert cyclic_mul(u, v) == cyclic_mul(v, u)

    def test_weight_bound(self):
        rng = prng.stream(13, 0)
        for _ in range(50):
            n = int(rng.integers(2, 300))
            wu = int(rng.integers(0, n + 1))
            wv = int(rng.integers(0, n + 1))
            u = random_element(n, rng, wu)
            v = random_element(n, rng, wv)
            assert cyclic_mul(u, v).weight <= min(n, wu * wv)

    def test_sparse_and_dense_paths_identical(self):
        rng = prng.stream(17, 0)
        for _ in range(30):
            n = int(rng.integers(2, 500))
            w1 = int(rng.integers(0, min(n, 20) + 1))
            w2 = int(rng.integers(0, min(n, 20) + 1))
            s1 = sample_fixed_weight(n, w1, rng)
            s2 = sample_fixed_weight(n, w2, rng)
            dense = cyclic_mul(s1.to_ring(), s2.to_ring())
            assert cyclic_mul_sparse(s1, s2.to_ring()) == dense
            assert support_mul(s1, s2) == dense


class TestRotMatrix:
    def test_identity_element(self):
        assert np.array_equal(rot_matrix(RingElement.one(4)), np.eye(4, dtype=np.uint8))

    def test_spec_example_n3(self):
        m = rot_matrix(RingElement.from_support(3, [1]))
        assert m.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]

    def test_rot_product_identity(self):
        # u x rot(v)^T == u*v up to n = 64
        rng = prng.stream(19, 0)
        for n in (1, 2, 5, 8, 16, 33, 64):
            for _ in range(10):
                u = sample_uniform(n, rng)
                v = sample_uniform(n, rng)
                prod = (u.to_bits().astype(int) @ rot_matrix(v).T.astype(int)) % 2
                assert RingElement.from_bits(prod) == cyclic_mul(u, v)


class TestSampling:
    def test_weight_zero_and_full(self):
        rng = prng.stream(23, 0)
        assert sample_fixed_weight(10, 0, rng).indices == ()
        assert sample_fixed_weight(10, 10, rng).indices == tuple(range(10))

    def test_overweight_rejected(self):
        rng = prng.stream(23, 0)
        with pytest.raises(ValueError):
            sample_fixed_weight(5, 6, rng)

    def test_deterministic_given_stream_state(self):
        a = sample_fixed_weight(1000, 50, prng.stream(3, 4))
        b = sample_fixed_weight(1000, 50, prng.stream(3, 4))
        assert a == b

    def test_per_coordinate_frequency_uniform(self):
        # statistical oracle: 1e5 draws at (n, w) = (23869, 67); every
        # coordinate frequency within 5 standard errors of w/n
        n, w, trials = 23869, 67, 100_000
        rng = prng.stream(20250607, 0)
        counts = np.zeros(n, dtype=np.int64)
        for _ in range(trials):
            counts[list(sample_fixed_weight(n, w, rng).indices)] += 1
        p = w / n
        se = np.sqrt(trials * p * (1 - p))
        assert np.abs(counts - trials * p).max() < 5 * se

    def test_uniform_dense_masks_slack(self):
        rng = prng.stream(29, 0)
        for n in (3, 9, 64, 100):
            v = sample_uniform(n, rng)
            assert 0 <= v.value < (1 << n)


class TestPrimitivePrime:
    def test_composite(self):
        assert validate_primitive_prime(4) is False

    def test_prime_with_small_order(self):
        # ord_2(7) = 3 != 6
        assert validate_primitive_prime(7) is False

    def test_shipped_parameter_lengths(self):
        for n in (20533, 38923, 59957, 23869):
            assert validate_primitive_prime(n) is True

    def test_small_cases(self):
        assert validate_primitive_prime(2) is False
        assert validate_primitive_prime(3) is True
        assert validate_primitive_prime(5) is True
        assert validate_primitive_prime(11) is True
        assert validate_primitive_prime(17) is False  # ord_2 = 8

    def test_matches_order_oracle(self):
        def oracle(n):
            if n < 3 or any(n % d == 0 for d in range(2, n)):
                return False
            o, v = 1, 2 % n
            while v != 1:
                v = v * 2 % n
                o += 1
            return o == n - 1

        for n in range(2, 600):
            assert validate_primitive_prime(n) == oracle(n), n


class TestSerialization:
    def test_round_trip(self):
        rng = prng.stream(31, 0)
        for n in (1, 7, 8, 9, 64, 100, 20533):
            v = sample_uniform(n, rng)
            assert RingElement.from_bytes(v.to_bytes()) == v

    def test_exact_layout(self):
        # n = 12, bits {0, 3, 8}: header 0c 00 00 00, payload 09 01
        v = RingElement.from_support(12, [0, 3, 8])
        assert v.to_bytes() == bytes([12, 0, 0, 0, 0x09, 0x01])

    def test_bad_input_rejected(self):
        with pytest.raises(ValueError):
            RingElement.from_bytes(bytes([8, 0, 0, 0]))  # missing payload
        with pytest.raises(ValueError):
            # slack bit set beyond n=4
            RingElement.from_bytes(bytes([4, 0, 0, 0, 0xF1]))


class TestRingElement:
    def test_bit_and_support_agree(self):
        v = RingElement.from_support(9, [0, 2, 8])
        assert [v.bit(i) for i in range(9)] == [1, 0, 1, 0, 0, 0, 0, 0, 1]
        assert v.support() == [0, 2, 8]
        assert v.weight == 3

    def test_add_is_xor(self):
        a = RingElement.from_support(6, [0, 1])
        b = RingElement.from_support(6, [1, 2])
        assert (a + b).support() == [0, 2]
        assert (a - b) == (a + b)

    def test_bits_round_trip(self):
        bits = [1, 0, 1, 1, 0, 0, 0, 1, 1]
        assert RingElement.from_bits(bits).to_bits().tolist() == bits

    def test_value_range_checked(self):
        with pytest.raises(ValueError):
            RingElement(4, 16)
        with pytest.raises(ValueError):
            SparseSupport(4, (1, 1))
        with pytest.raises(ValueError):
            SparseSupport(4, (2, 4))
