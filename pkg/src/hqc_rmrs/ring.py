"""Arithmetic in R = F2[X]/(X^n - 1).

Ring elements are dense bit vectors packed little-endian into a Python
integer: bit i of ``value`` is the coefficient of X^i.  Sparse elements
carry their support (sorted index list) instead; every product in the
scheme has at least one sparse operand, so products are evaluated as
shift-and-XOR over the sparser support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RingElement:
    """Element of F2[X]/(X^n - 1) as a packed bit vector."""

    n: int
    value: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("ring length must be positive")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError("value has bits outside [0, n)")

    @classmethod
    def zero(cls, n: int) -> "RingElement":
        return cls(n, 0)

    @classmethod
    def one(cls, n: int) -> "RingElement":
        return cls(n, 1)

    @classmethod
    def from_support(cls, n: int, indices) -> "RingElement":
        v = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for n={n}")
            v |= 1 << i
        return cls(n, v)

    @classmethod
    def from_bits(cls, bits) -> "RingElement":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        packed = np.packbits(arr, bitorder="little").tobytes()
        return cls(len(arr), int.from_bytes(packed, "little"))

    def to_bits(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n]

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def support(self) -> list[int]:
        out = []
        v = self.value
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def __add__(self, other: "RingElement") -> "RingElement":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return RingElement(self.n, self.value ^ other.value)

    # subtraction over F2 is addition
    __sub__ = __add__

    def to_bytes(self) -> bytes:
        """4-byte little-endian length header, then ceil(n/8) packed bytes."""
        return self.n.to_bytes(4, "little") + self.value.to_bytes((self.n + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, data: bytes) -> "RingElement":
        if len(data) < 4:
            raise ValueError("truncated ring element")
        n = int.from_bytes(data[:4], "little")
        nbytes = (n + 7) // 8
        if len(data) != 4 + nbytes:
            raise ValueError(f"expected {4 + nbytes} bytes for n={n}, got {len(data)}")
        value = int.from_bytes(data[4:], "little")
        if value >> n:
            raise ValueError("slack bits beyond n are not zero")
        return cls(n, value)


@dataclass(frozen=True)
class SparseSupport:
    """Sorted support of a fixed-weight ring element."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.indices, self.indices[1:]):
            if a >= b:
                raise ValueError("indices must be strictly increasing")
        if self.indices and not (0 <= self.indices[0] and self.indices[-1] < self.n):
            raise ValueError("index out of range")

    @property
    def weight(self) -> int:
        return len(self.indices)

    def to_ring(self) -> RingElement:
        return RingElement.from_support(self.n, self.indices)


def cyclic_mul(u: RingElement, v: RingElement) -> RingElement:
    """Product in R; w_k = XOR of u_i v_j over i + j = k (mod n).

    Cost is one shift-XOR per set bit of the lighter operand.
    """
    if u.n != v.n:
        raise ValueError("length mismatch")
    if u.weight > v.weight:
        u, v = v, u
    return RingElement(u.n, _shift_product(u.support(), v.value, u.n))


def cyclic_mul_sparse(s: SparseSupport, v: RingElement) -> RingElement:
    """Sparse-by-dense product; bit-identical to cyclic_mul on s.to_ring()."""
    if s.n != v.n:
        raise ValueError("length mismatch")
    return RingElement(s.n, _shift_product(s.indices, v.value, s.n))


def _shift_product(indices, value: int, n: int) -> int:
    acc = 0
    for i in indices:
        acc ^= value << i
    # max shift is < n, so a single fold reduces mod X^n - 1
    return (acc ^ (acc >> n)) & ((1 << n) - 1)


def support_mul(a: SparseSupport, b: SparseSupport) -> RingElement:
    """Sparse-by-sparse product by index-sum parity accumulation (cost w_a*w_b)."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    n = a.n
    if not a.indices or not b.indices:
        return RingElement.zero(n)
    sums = (np.asarray(a.indices, dtype=np.int64)[:, None]
            + np.asarray(b.indices, dtype=np.int64)[None, :]) % n
    parity = np.bincount(sums.ravel(), minlength=n).astype(np.uint8) & 1
    return RingElement.from_bits(parity)


def rot_matrix(v: RingElement) -> np.ndarray:
    """Circulant matrix with column i equal to v * X^i.  Test support only;
    O(n^2) memory, never used on a production path."""
    n = v.n
    bits = v.to_bits()
    m = np.empty((n, n), dtype=np.uint8)
    for i in range(n):
        m[:, i] = np.roll(bits, i)
    return m


def sample_fixed_weight(n: int, w: int, rng: np.random.Generator) -> SparseSupport:
    """Uniform weight-w support via a partial Fisher-Yates shuffle.

    Draws exactly w generator words; the virtual candidate pool [0, n) is
    kept as a sparse overlay so no O(n) array is materialized.
    """
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} out of range for n={n}")
    if w == 0:
        return SparseSupport(n, ())
    draws = rng.integers(np.arange(w), n)
    pool: dict[int, int] = {}
    picked = []
    for i, j in enumerate(draws):
        j = int(j)
        picked.append(pool.get(j, j))
        pool[j] = pool.get(i, i)
    picked.sort()
    return SparseSupport(n, tuple(picked))


def sample_uniform(n: int, rng: np.random.Generator) -> RingElement:
    """Uniform dense ring element from ceil(n/8) generator bytes."""
    raw = rng.bytes((n + 7) // 8)
    return RingElement(n, int.from_bytes(raw, "little") & ((1 << n) - 1))


def validate_primitive_prime(n: int) -> bool:
    """True iff n is prime and 2 generates the multiplicative group mod n,
    i.e. (X^n - 1)/(X - 1) is irreducible over F2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2 or not _is_prime(n):
        return False
    # multiplicative order of 2 mod n must be exactly n - 1: it always
    # divides n - 1, so it suffices that no proper divisor works
    for q in _prime_factors(n - 1):
        if pow(2, (n - 1) // q, n) == 1:
            return False
    return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
